#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fleetopt/dataset.hpp"
#include "fleetopt/fleet.hpp"
#include "fleetopt/model.hpp"

namespace fleetopt {

enum class CompileMode { Sat, MaxSat };

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Buildability and test constraints for n vehicles, plus either the
/// coverage equalities (Sat) or the car-count bounds with the weighted
/// coverage objective (MaxSat). Declares exactly n * (f + o + q) variables.
LinearModel compile(const Dataset& d, std::size_t vehicles, CompileMode mode);

/// Big-M constraints for one implication rule on one vehicle. Disjunctive
/// left sides are handled by contrapositive (|-right sides) or by splitting
/// into one rule per disjunct; split rows get "_d<r>" appended to the tag.
std::vector<LinearConstraint> compile_rule(const ImplicationRule& rule, std::uint32_t vehicle,
                                           const std::string& tag);

/// Rows linking p(vehicle, test) to the test's feature requirements.
std::vector<LinearConstraint> compile_test(const TestRequirement& test, std::uint32_t vehicle);

/// As compile_test, with an arbitrary expression standing in for p.
std::vector<LinearConstraint> compile_test_with(const TestRequirement& test, std::uint32_t vehicle,
                                                const LinearExpr& usage, const std::string& tag_prefix);

/// Single-type, forbidden-feature, group and rule rows for one vehicle.
void add_buildability(LinearModel& model, const Dataset& d, std::uint32_t vehicle);

std::vector<VariableKey> vehicle_variables(const Dataset& d, std::uint32_t vehicle, bool with_tests);

/// Row count implied by the construction: per vehicle one single-type row,
/// sum |F_j|, |groups|, one row per rule (M for split rules) and the test
/// rows; plus one coverage row per test.
std::size_t expected_constraint_count(const Dataset& d, std::size_t vehicles);

/// Reads vehicles and the test assignment out of a solved compile() model.
/// Throws std::invalid_argument if a model variable is missing.
FleetSolution decode(const LinearModel& model, const std::map<VariableKey, int>& assignment, const Dataset& d);
FleetSolution decode(const LinearModel& model, std::span<const std::uint8_t> values, const Dataset& d);

/// Inverse of decode for a fleet and test assignment over compile(d, |fleet|, mode).
std::vector<std::uint8_t> encode(const LinearModel& model, const FleetSolution& fleet);

}  // namespace fleetopt
