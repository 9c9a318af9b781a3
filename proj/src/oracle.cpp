#include "fleetopt/oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace fleetopt::oracle {

namespace {

bool literal(const Literal& l, const std::vector<bool>& features) {
  bool v = features[l.feature.value];
  return l.negated ? !v : v;
}

bool side(const std::vector<Literal>& lits, Connective c, const std::vector<bool>& features) {
  if (c == Connective::Or) {
    for (const auto& l : lits)
      if (literal(l, features)) return true;
    return false;
  }
  for (const auto& l : lits)
    if (!literal(l, features)) return false;
  return true;
}

std::uint64_t signature(const Dataset& d, const std::vector<bool>& features) {
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < d.tests.size(); ++j)
    if (meets(d.tests[j], features)) s |= std::uint64_t{1} << j;
  return s;
}

// Signatures of legal configurations that no other signature strictly contains.
std::vector<std::uint64_t> maximal_signatures(const Dataset& d) {
  if (d.tests.size() > 63) throw LimitExceeded("too many tests for the oracle");
  std::set<std::uint64_t> all;
  for (const auto& c : enumerate_configs(d)) all.insert(signature(d, c.features));
  std::vector<std::uint64_t> out;
  for (auto s : all) {
    bool dominated = false;
    for (auto t : all)
      if (t != s && (s & t) == s) dominated = true;
    if (!dominated) out.push_back(s);
  }
  return out;
}

std::uint64_t multisets(std::uint64_t kinds, std::uint64_t n) {
  // C(kinds + n - 1, n), saturating
  if (kinds == 0) return n == 0 ? 1 : 0;
  long double c = 1;
  for (std::uint64_t k = 1; k <= n; ++k) c = c * static_cast<long double>(kinds - 1 + k) / static_cast<long double>(k);
  return c > 1e18L ? UINT64_MAX : static_cast<std::uint64_t>(c + 0.5L);
}

constexpr std::uint64_t kFleetLimit = 10'000'000;

// Calls visit(counts) for every multiset of n signatures; counts[j] is the
// number of chosen vehicles meeting test j. Stops when visit returns true.
bool for_each_fleet(const Dataset& d, const std::vector<std::uint64_t>& sigs, std::size_t n,
                    const std::function<bool(const std::vector<std::int64_t>&)>& visit) {
  if (multisets(sigs.size(), n) > kFleetLimit) throw LimitExceeded("too many fleets for the oracle");
  std::vector<std::int64_t> counts(d.tests.size(), 0);
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t left) {
    if (left == 0) return visit(counts);
    for (std::size_t s = from; s < sigs.size(); ++s) {
      for (std::size_t j = 0; j < counts.size(); ++j)
        if (sigs[s] >> j & 1) ++counts[j];
      bool done = rec(s, left - 1);
      for (std::size_t j = 0; j < counts.size(); ++j)
        if (sigs[s] >> j & 1) --counts[j];
      if (done) return true;
    }
    return false;
  };
  return rec(0, n);
}

}  // namespace

bool meets(const TestRequirement& t, const std::vector<bool>& features) {
  for (auto k : t.required_present)
    if (!features[k.value]) return false;
  for (auto k : t.required_absent)
    if (features[k.value]) return false;
  if (t.required_any_of.empty()) return true;
  for (auto k : t.required_any_of)
    if (features[k.value]) return true;
  return false;
}

bool buildable(const Dataset& d, const VehicleConfig& v) {
  const std::size_t type = v.type.value;
  if (type >= d.type_count() || v.features.size() != d.feature_count()) return false;
  for (auto k : d.forbidden_per_type[type])
    if (v.features[k.value]) return false;
  for (const auto& g : d.groups) {
    int n = 0;
    for (auto k : g.members) n += v.features[k.value] ? 1 : 0;
    if (n > 1) return false;
  }
  for (const auto& r : d.rules) {
    if (r.rule_type && r.rule_type->value != type) continue;
    if (side(r.lhs_literals, r.lhs_connective, v.features) && !side(r.rhs_literals, r.rhs_connective, v.features))
      return false;
  }
  return true;
}

bool vehicle_satisfies(const Dataset& d, const std::vector<bool>& types, const std::vector<bool>& features,
                       const std::vector<bool>& uses) {
  std::size_t chosen = 0, count = 0;
  for (std::size_t j = 0; j < types.size(); ++j)
    if (types[j]) {
      chosen = j;
      ++count;
    }
  if (count != 1) return false;
  if (!buildable(d, VehicleConfig{TypeId{chosen}, features})) return false;
  for (std::size_t j = 0; j < uses.size(); ++j)
    if (uses[j] && !meets(d.tests[j], features)) return false;
  return true;
}

std::vector<VehicleConfig> enumerate_configs(const Dataset& d) {
  const std::size_t f = d.feature_count();
  if (f > 22 || (d.type_count() << f) > (std::size_t{1} << 22))
    throw LimitExceeded("instance too large for configuration enumeration");
  std::vector<VehicleConfig> out;
  for (std::size_t type = 0; type < d.type_count(); ++type)
    for (std::size_t mask = 0; mask < (std::size_t{1} << f); ++mask) {
      VehicleConfig v{TypeId{type}, std::vector<bool>(f)};
      for (std::size_t k = 0; k < f; ++k) v.features[k] = (mask >> k & 1) != 0;
      if (buildable(d, v)) out.push_back(std::move(v));
    }
  return out;
}

Rational max_coverage(const Dataset& d, std::size_t n) {
  if (n == 0) return 0;
  auto sigs = maximal_signatures(d);
  Rational best{0};
  for_each_fleet(d, sigs, n, [&](const std::vector<std::int64_t>& counts) {
    Rational total{0};
    for (std::size_t j = 0; j < counts.size(); ++j)
      total += d.tests[j].weight * std::min(counts[j], d.tests[j].cars_needed);
    best = std::max(best, total);
    return false;
  });
  return best;
}

std::optional<std::size_t> min_fleet(const Dataset& d, std::size_t n_cap) {
  auto sigs = maximal_signatures(d);
  for (std::size_t n = 0; n <= n_cap; ++n) {
    bool found = for_each_fleet(d, sigs, n, [&](const std::vector<std::int64_t>& counts) {
      for (std::size_t j = 0; j < counts.size(); ++j)
        if (counts[j] < d.tests[j].cars_needed) return false;
      return true;
    });
    if (found) return n;
  }
  return std::nullopt;
}

std::optional<DecodedSchedule> schedule_feasible(const Dataset& d, const ScheduleSpec& spec, std::size_t n) {
  auto configs = enumerate_configs(d);
  const std::size_t q = spec.expanded_tests.size();
  const std::size_t slots = n * static_cast<std::size_t>(spec.horizon_days);
  long double space = 1;
  for (std::size_t i = 0; i < n; ++i) space *= static_cast<long double>(configs.size());
  for (std::size_t e = 0; e < q; ++e) space *= static_cast<long double>(slots);
  if (space > static_cast<long double>(kFleetLimit)) throw LimitExceeded("schedule search space too large");

  std::vector<std::size_t> pick(n, 0);
  std::function<std::optional<DecodedSchedule>(std::size_t)> fleets = [&](std::size_t i) -> std::optional<DecodedSchedule> {
    if (i < n) {
      for (std::size_t c = 0; c < configs.size(); ++c) {
        pick[i] = c;
        if (auto r = fleets(i + 1)) return r;
      }
      return std::nullopt;
    }
    DecodedSchedule candidate;
    for (auto c : pick) candidate.vehicles.push_back(configs[c]);
    std::function<bool(std::size_t)> place = [&](std::size_t e) {
      if (e == q) return check_schedule(d, spec, candidate.schedule, candidate.vehicles).valid;
      for (std::size_t s = 0; s < slots; ++s) {
        candidate.schedule.entries.push_back({s / static_cast<std::size_t>(spec.horizon_days), e,
                                              static_cast<int>(s % static_cast<std::size_t>(spec.horizon_days)) + 1});
        if (place(e + 1)) return true;
        candidate.schedule.entries.pop_back();
      }
      return false;
    };
    if (place(0)) return candidate;
    return std::nullopt;
  };
  return fleets(0);
}

}  // namespace fleetopt::oracle
