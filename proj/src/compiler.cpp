#include "fleetopt/compiler.hpp"

#include <algorithm>

#include "fleetopt/linmodel.hpp"

namespace fleetopt {

namespace {

std::uint32_t u32(std::size_t v) { return static_cast<std::uint32_t>(v); }

LinearExpr b(std::uint32_t i, FeatureId k) { return LinearExpr::var(VariableKey::b(i, u32(k.value))); }

// S = (1 - t) + (M - sum of positive b) + sum of negated b
LinearExpr slack(const std::optional<TypeId>& type, const std::vector<Literal>& lhs, std::uint32_t i) {
  LinearExpr s;
  if (type) s += LinearExpr(1) - LinearExpr::var(VariableKey::t(i, u32(type->value)));
  for (const auto& lit : lhs) {
    if (lit.negated) s += b(i, lit.feature);
    else s += LinearExpr(1) - b(i, lit.feature);
  }
  return s;
}

bool all_positive(const std::vector<Literal>& lits) {
  return std::none_of(lits.begin(), lits.end(), [](const Literal& l) { return l.negated; });
}

bool all_negated(const std::vector<Literal>& lits) {
  return std::all_of(lits.begin(), lits.end(), [](const Literal& l) { return l.negated; });
}

LinearExpr literal_sum(const std::vector<Literal>& lits, std::uint32_t i) {
  LinearExpr e;
  for (const auto& lit : lits) e += b(i, lit.feature);
  return e;
}

LinearConstraint conjunctive(const std::optional<TypeId>& type, const std::vector<Literal>& lhs,
                             const std::vector<Literal>& rhs, Connective rc, std::uint32_t i,
                             const std::string& tag, const std::string& label) {
  const std::int64_t n = static_cast<std::int64_t>(rhs.size());
  LinearExpr s = slack(type, lhs, i);
  LinearExpr sum = literal_sum(rhs, i);
  bool disjunctive = rc == Connective::Or;
  if (all_positive(rhs)) {
    if (disjunctive) return make_constraint(LinearExpr(1) - sum, Sense::Le, s, tag);
    return make_constraint(LinearExpr(n) - sum, Sense::Le, Rational(n) * s, tag);
  }
  if (all_negated(rhs)) {
    if (disjunctive) return make_constraint(sum - LinearExpr(n - 1), Sense::Le, s, tag);
    return make_constraint(sum, Sense::Le, Rational(n) * s, tag);
  }
  throw CompileError("rule '" + tag + "' has unsupported class " + label);
}

std::vector<Literal> negate(std::vector<Literal> lits) {
  for (auto& l : lits) l.negated = !l.negated;
  return lits;
}

bool is_split(const ImplicationRule& rule) {
  return rule.lhs_connective == Connective::Or && rule.rhs_connective != Connective::Or;
}

std::string suffix(std::uint32_t i) { return "_v" + std::to_string(i); }

}  // namespace

std::vector<LinearConstraint> compile_rule(const ImplicationRule& rule, std::uint32_t vehicle,
                                           const std::string& tag) {
  if (rule.rhs_literals.empty()) throw CompileError("rule '" + tag + "' has an empty right side");
  if (rule.lhs_connective != Connective::Or)
    return {conjunctive(rule.rule_type, rule.lhs_literals, rule.rhs_literals, rule.rhs_connective, vehicle, tag,
                        rule.class_label)};

  if (!all_positive(rule.lhs_literals))
    throw CompileError("rule '" + tag + "' has unsupported class " + rule.class_label);

  if (rule.rhs_connective == Connective::Or) {
    // a | b => c | d  is  !c & !d => !a & !b
    if (!all_positive(rule.rhs_literals) && !all_negated(rule.rhs_literals))
      throw CompileError("rule '" + tag + "' has unsupported class " + rule.class_label);
    return {conjunctive(rule.rule_type, negate(rule.rhs_literals), negate(rule.lhs_literals), Connective::And, vehicle,
                        tag, rule.class_label)};
  }

  std::vector<LinearConstraint> out;
  for (std::size_t r = 0; r < rule.lhs_literals.size(); ++r)
    out.push_back(conjunctive(rule.rule_type, {rule.lhs_literals[r]}, rule.rhs_literals, rule.rhs_connective, vehicle,
                              tag + "_d" + std::to_string(r), rule.class_label));
  return out;
}

std::vector<LinearConstraint> compile_test_with(const TestRequirement& test, std::uint32_t vehicle,
                                                const LinearExpr& usage, const std::string& tag_prefix) {
  std::vector<LinearConstraint> out;
  const std::string v = suffix(vehicle);
  for (auto k : test.required_present)
    out.push_back(make_constraint(usage - b(vehicle, k), Sense::Le, 0,
                                  tag_prefix + "_present" + v + "_f" + std::to_string(k.value)));
  for (auto k : test.required_absent)
    out.push_back(make_constraint(usage + b(vehicle, k), Sense::Le, 1,
                                  tag_prefix + "_absent" + v + "_f" + std::to_string(k.value)));
  if (!test.required_any_of.empty()) {
    LinearExpr any;
    for (auto k : test.required_any_of) any += b(vehicle, k);
    out.push_back(make_constraint(usage - any, Sense::Le, 0, tag_prefix + "_anyof" + v));
  }
  return out;
}

std::vector<LinearConstraint> compile_test(const TestRequirement& test, std::uint32_t vehicle) {
  return compile_test_with(test, vehicle, LinearExpr::var(VariableKey::p(vehicle, u32(test.id))),
                           "test" + std::to_string(test.id));
}

void add_buildability(LinearModel& model, const Dataset& d, std::uint32_t i) {
  const std::string v = suffix(i);
  LinearExpr types;
  for (std::size_t j = 0; j < d.type_count(); ++j) types += LinearExpr::var(VariableKey::t(i, u32(j)));
  model.add_constraint(make_constraint(types, Sense::Eq, 1, "single_type" + v));

  for (std::size_t j = 0; j < d.type_count(); ++j)
    for (auto k : d.forbidden_per_type[j])
      model.add_constraint(make_constraint(LinearExpr::var(VariableKey::t(i, u32(j))) + b(i, k), Sense::Le, 1,
                                           "forbidden" + v + "_t" + std::to_string(j) + "_f" +
                                               std::to_string(k.value)));

  for (std::size_t g = 0; g < d.groups.size(); ++g) {
    LinearExpr sum;
    for (auto k : d.groups[g].members) sum += b(i, k);
    model.add_constraint(make_constraint(sum, Sense::Le, 1, "group" + v + "_g" + std::to_string(g)));
  }

  for (std::size_t r = 0; r < d.rules.size(); ++r)
    for (auto& c : compile_rule(d.rules[r], i, "rule" + std::to_string(r) + v)) model.add_constraint(std::move(c));
}

std::vector<VariableKey> vehicle_variables(const Dataset& d, std::uint32_t i, bool with_tests) {
  std::vector<VariableKey> keys;
  for (std::size_t j = 0; j < d.feature_count(); ++j) keys.push_back(VariableKey::b(i, u32(j)));
  for (std::size_t j = 0; j < d.type_count(); ++j) keys.push_back(VariableKey::t(i, u32(j)));
  if (with_tests)
    for (std::size_t j = 0; j < d.test_count(); ++j) keys.push_back(VariableKey::p(i, u32(j)));
  return keys;
}

LinearModel compile(const Dataset& d, std::size_t vehicles, CompileMode mode) {
  if (vehicles == 0) throw CompileError("vehicle count must be at least 1");
  LinearModel model;
  std::vector<VariableKey> keys;
  for (std::size_t i = 0; i < vehicles; ++i) {
    auto block = vehicle_variables(d, u32(i), true);
    keys.insert(keys.end(), block.begin(), block.end());
  }
  model.add_variables(keys);

  for (std::size_t i = 0; i < vehicles; ++i) {
    add_buildability(model, d, u32(i));
    for (const auto& t : d.tests)
      for (auto& c : compile_test(t, u32(i))) model.add_constraint(std::move(c));
  }

  Objective objective{ObjectiveSense::Maximize, {}};
  for (const auto& t : d.tests) {
    LinearExpr used;
    for (std::size_t i = 0; i < vehicles; ++i) used += LinearExpr::var(VariableKey::p(u32(i), u32(t.id)));
    const std::string j = std::to_string(t.id);
    if (mode == CompileMode::Sat) {
      model.add_constraint(make_constraint(used, Sense::Eq, t.cars_needed, "cover_test" + j));
    } else {
      model.add_constraint(make_constraint(used, Sense::Le, t.cars_needed, "kbound_test" + j));
      if (t.weight != 0)
        for (std::size_t i = 0; i < vehicles; ++i)
          objective.terms.push_back({t.weight, VariableKey::p(u32(i), u32(t.id))});
    }
  }
  if (mode == CompileMode::MaxSat) {
    std::sort(objective.terms.begin(), objective.terms.end(),
              [](const LinearTerm& a, const LinearTerm& b) { return a.variable < b.variable; });
    model.set_objective(std::move(objective));
  }
  return model;
}

std::size_t expected_constraint_count(const Dataset& d, std::size_t vehicles) {
  std::size_t per_vehicle = 1 + d.groups.size();
  for (const auto& f : d.forbidden_per_type) per_vehicle += f.size();
  for (const auto& r : d.rules) per_vehicle += is_split(r) ? r.lhs_literals.size() : 1;
  for (const auto& t : d.tests)
    per_vehicle += t.required_present.size() + t.required_absent.size() + (t.required_any_of.empty() ? 0 : 1);
  return vehicles * per_vehicle + d.test_count();
}

FleetSolution decode(const LinearModel& model, std::span<const std::uint8_t> values, const Dataset& d) {
  FleetSolution out;
  auto value = [&](const VariableKey& k) {
    auto idx = model.index_of(k);
    return idx && values[*idx] != 0;
  };
  std::size_t vehicles = 0;
  for (const auto& k : model.variables()) vehicles = std::max<std::size_t>(vehicles, k.vehicle + 1);
  for (std::size_t i = 0; i < vehicles; ++i) {
    VehicleConfig v{TypeId{0}, std::vector<bool>(d.feature_count(), false)};
    for (std::size_t j = 0; j < d.type_count(); ++j)
      if (value(VariableKey::t(u32(i), u32(j)))) {
        v.type = TypeId{j};
        break;
      }
    for (std::size_t j = 0; j < d.feature_count(); ++j) v.features[j] = value(VariableKey::b(u32(i), u32(j)));
    out.vehicles.push_back(std::move(v));
  }
  for (const auto& k : model.variables())
    if (k.kind == VarKind::P && value(k)) out.assignment[k.second].push_back(k.vehicle);

  auto check = check_assignment(model, values);
  out.feasible = check.feasible;
  for (const auto& viol : check.violations) out.violations.push_back(to_string(viol));
  return out;
}

FleetSolution decode(const LinearModel& model, const std::map<VariableKey, int>& assignment, const Dataset& d) {
  auto dense = to_dense(model, assignment);
  return decode(model, dense, d);
}

std::vector<std::uint8_t> encode(const LinearModel& model, const FleetSolution& fleet) {
  std::vector<std::uint8_t> values(model.variables().size(), 0);
  auto set = [&](const VariableKey& k) {
    auto idx = model.index_of(k);
    if (!idx) throw std::invalid_argument("fleet does not fit the model: no variable " + variable_name(k));
    values[*idx] = 1;
  };
  for (std::size_t i = 0; i < fleet.vehicles.size(); ++i) {
    const auto& v = fleet.vehicles[i];
    set(VariableKey::t(u32(i), u32(v.type.value)));
    for (std::size_t j = 0; j < v.features.size(); ++j)
      if (v.features[j]) set(VariableKey::b(u32(i), u32(j)));
  }
  for (const auto& [test, users] : fleet.assignment)
    for (auto i : users) set(VariableKey::p(u32(i), u32(test)));
  return values;
}

}  // namespace fleetopt
