#include "fleetopt/model.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace fleetopt {

std::string variable_name(const VariableKey& key) {
  auto n = [](std::uint32_t v) { return std::to_string(v); };
  switch (key.kind) {
    case VarKind::B: return "b_" + n(key.vehicle) + "_" + n(key.second);
    case VarKind::T: return "t_" + n(key.vehicle) + "_" + n(key.second);
    case VarKind::P: return "p_" + n(key.vehicle) + "_" + n(key.second);
    case VarKind::PD: return "pd_" + n(key.vehicle) + "_" + n(key.second) + "_" + n(key.day);
  }
  return {};
}

std::optional<VariableKey> parse_variable_name(std::string_view name) {
  auto underscore = name.find('_');
  if (underscore == std::string_view::npos) return std::nullopt;
  std::string_view prefix = name.substr(0, underscore);
  std::vector<std::uint32_t> idx;
  std::string_view rest = name.substr(underscore + 1);
  while (true) {
    auto next = rest.find('_');
    std::string_view part = rest.substr(0, next);
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) return std::nullopt;
    idx.push_back(v);
    if (next == std::string_view::npos) break;
    rest = rest.substr(next + 1);
  }
  if (prefix == "b" && idx.size() == 2) return VariableKey::b(idx[0], idx[1]);
  if (prefix == "t" && idx.size() == 2) return VariableKey::t(idx[0], idx[1]);
  if (prefix == "p" && idx.size() == 2) return VariableKey::p(idx[0], idx[1]);
  if (prefix == "pd" && idx.size() == 3) return VariableKey::pd(idx[0], idx[1], idx[2]);
  return std::nullopt;
}

const char* sense_symbol(Sense s) {
  switch (s) {
    case Sense::Le: return "<=";
    case Sense::Eq: return "=";
    case Sense::Ge: return ">=";
  }
  return "?";
}

LinearExpr LinearExpr::var(const VariableKey& key, Rational coefficient) {
  LinearExpr e;
  if (coefficient != 0) e.coefficients_[key] = coefficient;
  return e;
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
  for (const auto& [k, c] : other.coefficients_) {
    auto& slot = coefficients_[k];
    slot += c;
    if (slot == 0) coefficients_.erase(k);
  }
  constant_ += other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& other) {
  for (const auto& [k, c] : other.coefficients_) {
    auto& slot = coefficients_[k];
    slot -= c;
    if (slot == 0) coefficients_.erase(k);
  }
  constant_ -= other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator*=(Rational factor) {
  if (factor == 0) {
    coefficients_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [k, c] : coefficients_) c *= factor;
  constant_ *= factor;
  return *this;
}

LinearConstraint make_constraint(const LinearExpr& lhs, Sense sense, const LinearExpr& rhs, std::string tag) {
  LinearExpr diff = lhs - rhs;
  LinearConstraint c;
  c.sense = sense;
  c.rhs = -diff.constant();
  c.tag = std::move(tag);
  for (const auto& [k, coef] : diff.coefficients()) c.terms.push_back({coef, k});
  return c;
}

void LinearModel::add_variables(const std::vector<VariableKey>& keys) {
  std::vector<VariableKey> merged = variables_;
  merged.insert(merged.end(), keys.begin(), keys.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  variables_ = std::move(merged);
  index_.clear();
  for (std::size_t k = 0; k < variables_.size(); ++k) index_.emplace(variables_[k], k);
}

void LinearModel::add_constraint(LinearConstraint c) {
  for (const auto& t : c.terms)
    if (!index_.count(t.variable))
      throw std::invalid_argument("constraint '" + c.tag + "' uses undeclared variable " + variable_name(t.variable));
  constraints_.push_back(std::move(c));
}

void LinearModel::set_objective(Objective objective) {
  for (const auto& t : objective.terms)
    if (!index_.count(t.variable))
      throw std::invalid_argument("objective uses undeclared variable " + variable_name(t.variable));
  objective_ = std::move(objective);
}

std::optional<std::size_t> LinearModel::index_of(const VariableKey& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace fleetopt
