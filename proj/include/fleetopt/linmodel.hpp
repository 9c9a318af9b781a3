#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fleetopt/model.hpp"

namespace fleetopt {

struct Violation {
  std::string tag;
  Rational lhs;
  Sense sense = Sense::Le;
  Rational rhs;
};

std::string to_string(const Violation& v);

struct CheckResult {
  bool feasible = true;
  std::vector<Violation> violations;
  std::optional<Rational> objective;
};

/// Exact evaluation of every row. values[k] belongs to model.variables()[k].
CheckResult check_assignment(const LinearModel& model, std::span<const std::uint8_t> values);

/// Throws std::invalid_argument when a model variable has no value.
CheckResult check_assignment(const LinearModel& model, const std::map<VariableKey, int>& values);

std::vector<std::uint8_t> to_dense(const LinearModel& model, const std::map<VariableKey, int>& values);
std::map<VariableKey, int> to_sparse(const LinearModel& model, std::span<const std::uint8_t> values);

/// CPLEX-style LP text. Row names are the constraint tags; a model without
/// an objective is written with a zero objective.
std::string export_lp(const LinearModel& model);

/// Fixed-field MPS with BV bounds. Names are limited to 8 characters there,
/// so rows are written as R0000001... and columns as C0000001...; the
/// mapping to tags and variable names is listed in leading comment lines.
std::string export_mps(const LinearModel& model, std::string_view name = "FLEETOPT");

class LpParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads the subset of the LP format that export_lp writes.
LinearModel parse_lp(std::string_view text);

}  // namespace fleetopt
