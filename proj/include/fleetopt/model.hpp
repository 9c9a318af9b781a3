#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fleetopt/rational.hpp"

namespace fleetopt {

/// b(i,j): vehicle i has feature j. t(i,j): vehicle i is of type j.
/// p(i,j): vehicle i is used for test j. pd(i,j,d): ... on day d (1-based).
enum class VarKind : std::uint8_t { B, T, P, PD };

struct VariableKey {
  VarKind kind = VarKind::B;
  std::uint32_t vehicle = 0;
  std::uint32_t second = 0;
  std::uint32_t day = 0;

  static VariableKey b(std::uint32_t i, std::uint32_t j) { return {VarKind::B, i, j, 0}; }
  static VariableKey t(std::uint32_t i, std::uint32_t j) { return {VarKind::T, i, j, 0}; }
  static VariableKey p(std::uint32_t i, std::uint32_t j) { return {VarKind::P, i, j, 0}; }
  static VariableKey pd(std::uint32_t i, std::uint32_t j, std::uint32_t d) { return {VarKind::PD, i, j, d}; }

  // Canonical order: B block, then T, then P/PD; lexicographic inside.
  friend constexpr auto operator<=>(const VariableKey&, const VariableKey&) = default;
};

/// "b_3_17", "t_3_2", "p_3_41", "pd_3_41_6".
std::string variable_name(const VariableKey& key);
std::optional<VariableKey> parse_variable_name(std::string_view name);

struct LinearTerm {
  Rational coefficient;
  VariableKey variable;

  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

enum class Sense { Le, Eq, Ge };

const char* sense_symbol(Sense s);

struct LinearConstraint {
  std::vector<LinearTerm> terms;  // sorted by variable, no zeros, no repeats
  Sense sense = Sense::Le;
  Rational rhs{0};
  std::string tag;
};

enum class ObjectiveSense { Maximize, Minimize };

struct Objective {
  ObjectiveSense sense = ObjectiveSense::Maximize;
  std::vector<LinearTerm> terms;
};

/// Affine expression used while building constraints.
class LinearExpr {
 public:
  LinearExpr() = default;
  LinearExpr(Rational constant) : constant_(constant) {}  // NOLINT: implicit for arithmetic
  LinearExpr(std::int64_t constant) : constant_(constant) {}  // NOLINT

  static LinearExpr var(const VariableKey& key, Rational coefficient = 1);

  LinearExpr& operator+=(const LinearExpr& other);
  LinearExpr& operator-=(const LinearExpr& other);
  LinearExpr& operator*=(Rational factor);

  friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
  friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
  friend LinearExpr operator*(Rational k, LinearExpr a) { return a *= k; }

  const std::map<VariableKey, Rational>& coefficients() const { return coefficients_; }
  Rational constant() const { return constant_; }

 private:
  std::map<VariableKey, Rational> coefficients_;
  Rational constant_{0};
};

/// Moves everything to the canonical "sum(terms) sense rhs" form.
LinearConstraint make_constraint(const LinearExpr& lhs, Sense sense, const LinearExpr& rhs, std::string tag);

/// A 0-1 linear model. Every variable used by a constraint or the objective
/// must have been declared first.
class LinearModel {
 public:
  /// Declares variables; the stored order is canonical regardless of call order.
  void add_variables(const std::vector<VariableKey>& keys);
  void add_constraint(LinearConstraint c);
  void set_objective(Objective objective);

  const std::vector<VariableKey>& variables() const { return variables_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  const std::optional<Objective>& objective() const { return objective_; }

  std::optional<std::size_t> index_of(const VariableKey& key) const;
  bool has_variable(const VariableKey& key) const { return index_of(key).has_value(); }

 private:
  std::vector<VariableKey> variables_;
  std::map<VariableKey, std::size_t> index_;
  std::vector<LinearConstraint> constraints_;
  std::optional<Objective> objective_;
};

}  // namespace fleetopt
