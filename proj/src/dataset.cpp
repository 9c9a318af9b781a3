#include "fleetopt/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace fleetopt {

namespace {

char negation_char(std::span<const Literal> lits) {
  std::size_t negated = std::count_if(lits.begin(), lits.end(), [](const Literal& l) { return l.negated; });
  if (negated == 0) return '0';
  if (negated == lits.size()) return '1';
  return 'm';
}

char connective_char(std::size_t size, Connective c) {
  if (size == 1 || c == Connective::Single) return '1';
  return c == Connective::And ? '&' : '|';
}

bool literal_true(const Literal& l, const std::vector<bool>& features) {
  return features[l.feature.value] != l.negated;
}

bool side_holds(std::span<const Literal> lits, Connective c, const std::vector<bool>& features) {
  if (c == Connective::Or)
    return std::any_of(lits.begin(), lits.end(), [&](const Literal& l) { return literal_true(l, features); });
  return std::all_of(lits.begin(), lits.end(), [&](const Literal& l) { return literal_true(l, features); });
}

bool sorted_unique(const std::vector<FeatureId>& v) {
  return std::adjacent_find(v.begin(), v.end(), [](FeatureId a, FeatureId b) { return !(a < b); }) == v.end();
}

void fail(const std::string& msg) { throw ValidationError(msg); }

void check_names(const std::vector<std::string>& names, const char* what) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) fail(std::string("empty ") + what + " name");
    if (!std::all_of(n.begin(), n.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '.'; }))
      fail(std::string("invalid ") + what + " name '" + n + "'");
    if (!seen.insert(n).second) fail(std::string("duplicate ") + what + " name '" + n + "'");
  }
}

}  // namespace

std::string classify_rule(std::span<const Literal> lhs, Connective lhs_connective,
                          std::span<const Literal> rhs, Connective rhs_connective) {
  std::string label(4, ' ');
  label[0] = negation_char(lhs);
  label[1] = lhs.empty() ? '&' : connective_char(lhs.size(), lhs_connective);
  label[2] = negation_char(rhs);
  label[3] = connective_char(rhs.size(), rhs_connective);
  return label;
}

ImplicationRule ImplicationRule::make(std::optional<TypeId> type, std::vector<Literal> lhs,
                                      Connective lhs_connective, std::vector<Literal> rhs,
                                      Connective rhs_connective) {
  ImplicationRule r;
  r.rule_type = type;
  if (lhs.size() == 1) lhs_connective = Connective::Single;
  if (lhs.empty()) lhs_connective = Connective::And;
  if (rhs.size() == 1) rhs_connective = Connective::Single;
  r.lhs_literals = std::move(lhs);
  r.lhs_connective = lhs_connective;
  r.rhs_literals = std::move(rhs);
  r.rhs_connective = rhs_connective;
  r.class_label = classify_rule(r.lhs_literals, r.lhs_connective, r.rhs_literals, r.rhs_connective);
  return r;
}

void validate_schedule(const Dataset& d, const ScheduleSpec& s) {
  if (s.horizon_days < 1) fail("schedule horizon must be at least 1 day");
  if (s.daily_capacity < 0) fail("schedule capacity must be non-negative");
  std::vector<std::vector<bool>> copies(d.tests.size());
  for (std::size_t j = 0; j < d.tests.size(); ++j) copies[j].assign(d.tests[j].cars_needed, false);
  for (const auto& e : s.expanded_tests) {
    if (e.origin >= d.tests.size()) fail("scheduled test " + std::to_string(e.origin) + " out of range");
    if (e.copy >= copies[e.origin].size() || copies[e.origin][e.copy])
      fail("expanded copy " + std::to_string(e.origin) + "." + std::to_string(e.copy) +
           " does not match the test's car count");
    copies[e.origin][e.copy] = true;
    if (e.window_start < 1 || e.window_start > e.window_end || e.window_end > s.horizon_days)
      fail("window of test " + std::to_string(e.origin) + "." + std::to_string(e.copy) + " outside [1, " +
           std::to_string(s.horizon_days) + "]");
    if (e.group < 1) fail("group id must be at least 1");
  }
  for (std::size_t j = 0; j < copies.size(); ++j)
    for (bool present : copies[j])
      if (!present) fail("test " + std::to_string(j) + " is missing expanded copies");
  for (const auto& set : s.distinct_vehicle_sets)
    for (std::size_t e : set)
      if (e >= s.expanded_tests.size()) fail("distinct-vehicle set references unknown expanded test");
}

void validate(const Dataset& d) {
  const std::size_t f = d.feature_count();
  const std::size_t o = d.type_count();
  check_names(d.feature_names, "feature");
  check_names(d.type_names, "type");
  if (d.forbidden_per_type.size() != o) fail("forbidden sets must be given for every type");

  auto check_feature = [&](FeatureId id, const std::string& where) {
    if (id.value >= f) fail("feature index " + std::to_string(id.value) + " out of range in " + where);
  };

  for (std::size_t t = 0; t < o; ++t) {
    for (FeatureId id : d.forbidden_per_type[t]) check_feature(id, "forbidden set");
    if (!sorted_unique(d.forbidden_per_type[t])) fail("forbidden set of type " + d.type_names[t] + " not canonical");
  }

  for (const auto& g : d.groups) {
    if (g.members.size() < 2) fail("feature group with fewer than 2 members");
    for (FeatureId id : g.members) check_feature(id, "group");
    if (!sorted_unique(g.members)) fail("group members not canonical");
  }

  for (std::size_t k = 0; k < d.rules.size(); ++k) {
    const auto& r = d.rules[k];
    const std::string where = "rule " + std::to_string(k);
    if (r.rule_type && r.rule_type->value >= o) fail("type out of range in " + where);
    for (const auto& l : r.lhs_literals) check_feature(l.feature, where);
    for (const auto& l : r.rhs_literals) check_feature(l.feature, where);
    if (r.rhs_literals.empty()) fail(where + " has an empty right side");
    if (r.lhs_literals.empty() && !r.rule_type) fail(where + " has an empty left side and no type");
    if ((r.lhs_literals.size() > 1) == (r.lhs_connective == Connective::Single) && !r.lhs_literals.empty())
      fail(where + " left connective does not match its literal count");
    if ((r.rhs_literals.size() > 1) == (r.rhs_connective == Connective::Single))
      fail(where + " right connective does not match its literal count");
    if (r.lhs_connective == Connective::Or &&
        std::any_of(r.lhs_literals.begin(), r.lhs_literals.end(), [](const Literal& l) { return l.negated; }))
      fail(where + " has a disjunctive left side with negated literals");
    if (r.class_label != classify_rule(r.lhs_literals, r.lhs_connective, r.rhs_literals, r.rhs_connective))
      fail(where + " class label '" + r.class_label + "' does not match its literals");
  }

  for (std::size_t j = 0; j < d.tests.size(); ++j) {
    const auto& t = d.tests[j];
    const std::string where = "test " + std::to_string(j);
    if (t.id != j) fail(where + " has id " + std::to_string(t.id));
    if (t.cars_needed < 1) fail(where + " needs at least one car");
    if (t.weight < 0) fail(where + " has a negative weight");
    std::set<std::size_t> seen;
    for (const auto* list : {&t.required_present, &t.required_absent, &t.required_any_of}) {
      if (!sorted_unique(*list)) fail(where + " feature lists not canonical");
      for (FeatureId id : *list) {
        check_feature(id, where);
        if (!seen.insert(id.value).second) fail(where + " feature lists are not disjoint");
      }
    }
  }

  if (d.schedule) validate_schedule(d, *d.schedule);
}

bool rule_holds(const ImplicationRule& rule, const VehicleConfig& v) {
  if (rule.rule_type && *rule.rule_type != v.type) return true;
  if (!side_holds(rule.lhs_literals, rule.lhs_connective, v.features)) return true;
  return side_holds(rule.rhs_literals, rule.rhs_connective, v.features);
}

bool is_buildable(const Dataset& d, const VehicleConfig& v) {
  if (v.type.value >= d.type_count() || v.features.size() != d.feature_count()) return false;
  for (FeatureId k : d.forbidden_per_type[v.type.value])
    if (v.features[k.value]) return false;
  for (const auto& g : d.groups) {
    int count = 0;
    for (FeatureId k : g.members) count += v.features[k.value] ? 1 : 0;
    if (count > 1) return false;
  }
  return std::all_of(d.rules.begin(), d.rules.end(), [&](const ImplicationRule& r) { return rule_holds(r, v); });
}

bool meets_test(const TestRequirement& t, const std::vector<bool>& features) {
  for (FeatureId k : t.required_present)
    if (!features[k.value]) return false;
  for (FeatureId k : t.required_absent)
    if (features[k.value]) return false;
  if (t.required_any_of.empty()) return true;
  return std::any_of(t.required_any_of.begin(), t.required_any_of.end(),
                     [&](FeatureId k) { return features[k.value]; });
}

std::string describe_rule(const Dataset& d, const ImplicationRule& rule) {
  std::ostringstream os;
  os << (rule.rule_type ? d.type_names[rule.rule_type->value] : std::string("*")) << ":";
  auto side = [&](const std::vector<Literal>& lits, Connective c) {
    for (std::size_t k = 0; k < lits.size(); ++k) {
      if (k > 0) os << (c == Connective::Or ? " |" : " &");
      os << ' ' << (lits[k].negated ? "!" : "") << d.feature_names[lits[k].feature.value];
    }
  };
  side(rule.lhs_literals, rule.lhs_connective);
  os << " ->";
  side(rule.rhs_literals, rule.rhs_connective);
  return os.str();
}

}  // namespace fleetopt
