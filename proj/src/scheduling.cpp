#include "fleetopt/scheduling.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fleetopt/compiler.hpp"

namespace fleetopt {

const char* to_string(ScheduleRule r) {
  switch (r) {
    case ScheduleRule::ExactlyOnce: return "exactly_once";
    case ScheduleRule::Window: return "window";
    case ScheduleRule::Capacity: return "capacity";
    case ScheduleRule::OncePerDay: return "once_per_day";
    case ScheduleRule::Order: return "order";
    case ScheduleRule::Crash: return "crash";
    case ScheduleRule::DistinctVehicles: return "distinct_vehicles";
    case ScheduleRule::Requirement: return "requirement";
    case ScheduleRule::Buildability: return "buildability";
  }
  return "unknown";
}

namespace {

std::uint32_t u32(std::size_t v) { return static_cast<std::uint32_t>(v); }

LinearExpr pd(std::size_t i, std::size_t e, int day) {
  return LinearExpr::var(VariableKey::pd(u32(i), u32(e), u32(day)));
}

std::string label(const ScheduleSpec& spec, std::size_t e) {
  const auto& x = spec.expanded_tests[e];
  return std::to_string(x.origin) + "." + std::to_string(x.copy);
}

}  // namespace

LinearModel compile_schedule(const Dataset& d, const ScheduleSpec& spec, std::size_t vehicles) {
  if (vehicles == 0) throw CompileError("vehicle count must be at least 1");
  try {
    validate_schedule(d, spec);
  } catch (const ValidationError& e) {
    throw CompileError(e.what());
  }
  const int days = spec.horizon_days;
  const std::size_t q = spec.expanded_tests.size();

  LinearModel model;
  std::vector<VariableKey> keys;
  for (std::size_t i = 0; i < vehicles; ++i) {
    auto block = vehicle_variables(d, u32(i), false);
    keys.insert(keys.end(), block.begin(), block.end());
    for (std::size_t e = 0; e < q; ++e)
      for (int day = 1; day <= days; ++day) keys.push_back(VariableKey::pd(u32(i), u32(e), u32(day)));
  }
  model.add_variables(keys);

  for (std::size_t i = 0; i < vehicles; ++i) {
    add_buildability(model, d, u32(i));
    for (std::size_t e = 0; e < q; ++e) {
      LinearExpr used;
      for (int day = 1; day <= days; ++day) used += pd(i, e, day);
      const auto& test = d.tests[spec.expanded_tests[e].origin];
      for (auto& c : compile_test_with(test, u32(i), used, "sched_e" + std::to_string(e)))
        model.add_constraint(std::move(c));
    }
  }

  for (std::size_t e = 0; e < q; ++e) {
    LinearExpr once, when;
    for (std::size_t i = 0; i < vehicles; ++i)
      for (int day = 1; day <= days; ++day) {
        once += pd(i, e, day);
        when += Rational(day) * pd(i, e, day);
      }
    const std::string tag = "_e" + std::to_string(e);
    model.add_constraint(make_constraint(once, Sense::Eq, 1, "once" + tag));
    model.add_constraint(make_constraint(when, Sense::Ge, spec.expanded_tests[e].window_start, "window_start" + tag));
    model.add_constraint(make_constraint(when, Sense::Le, spec.expanded_tests[e].window_end, "window_end" + tag));
  }

  for (std::size_t s = 0; s < spec.distinct_vehicle_sets.size(); ++s)
    for (std::size_t i = 0; i < vehicles; ++i) {
      LinearExpr sum;
      for (auto e : spec.distinct_vehicle_sets[s])
        for (int day = 1; day <= days; ++day) sum += pd(i, e, day);
      model.add_constraint(make_constraint(sum, spec.distinct_vehicle_relaxed ? Sense::Le : Sense::Eq, 1,
                                           "distinct_s" + std::to_string(s) + "_v" + std::to_string(i)));
    }

  for (int day = 1; day <= days; ++day) {
    LinearExpr sum;
    for (std::size_t i = 0; i < vehicles; ++i)
      for (std::size_t e = 0; e < q; ++e) sum += pd(i, e, day);
    model.add_constraint(make_constraint(sum, Sense::Le, spec.daily_capacity, "capacity_d" + std::to_string(day)));
  }

  for (std::size_t i = 0; i < vehicles; ++i)
    for (int day = 1; day <= days; ++day) {
      LinearExpr sum;
      for (std::size_t e = 0; e < q; ++e) sum += pd(i, e, day);
      model.add_constraint(
          make_constraint(sum, Sense::Le, 1, "daily_v" + std::to_string(i) + "_d" + std::to_string(day)));
    }

  // A higher group goes first: no e' on day d with e on a later day d' when g_e > g_e'.
  for (std::size_t i = 0; i < vehicles; ++i)
    for (std::size_t e = 0; e < q; ++e)
      for (std::size_t e2 = 0; e2 < q; ++e2) {
        if (spec.expanded_tests[e].group <= spec.expanded_tests[e2].group) continue;
        for (int d1 = 1; d1 <= days; ++d1)
          for (int d2 = d1 + 1; d2 <= days; ++d2)
            model.add_constraint(make_constraint(pd(i, e2, d1) + pd(i, e, d2), Sense::Le, 1,
                                                 "order_v" + std::to_string(i) + "_e" + std::to_string(e) + "_e" +
                                                     std::to_string(e2) + "_d" + std::to_string(d1) + "_d" +
                                                     std::to_string(d2)));
      }

  for (std::size_t i = 0; i < vehicles; ++i) {
    LinearExpr sum;
    bool any = false;
    for (std::size_t e = 0; e < q; ++e)
      if (spec.expanded_tests[e].group == 1) {
        any = true;
        for (int day = 1; day <= days; ++day) sum += pd(i, e, day);
      }
    if (any) model.add_constraint(make_constraint(sum, Sense::Le, 1, "crash_v" + std::to_string(i)));
  }
  return model;
}

ScheduleCheck check_schedule(const Dataset& d, const ScheduleSpec& spec, const Schedule& sched,
                             const std::vector<VehicleConfig>& fleet) {
  ScheduleCheck out;
  auto fail = [&](ScheduleRule r, std::string msg) {
    out.valid = false;
    out.violations.push_back({r, std::move(msg)});
  };
  const std::size_t q = spec.expanded_tests.size();

  for (std::size_t i = 0; i < fleet.size(); ++i)
    if (!is_buildable(d, fleet[i])) fail(ScheduleRule::Buildability, "vehicle " + std::to_string(i) + " is not buildable");

  std::vector<ScheduleEntry> entries;
  for (const auto& en : sched.entries) {
    if (en.vehicle >= fleet.size() || en.expanded >= q) {
      fail(ScheduleRule::Requirement, "entry refers to an unknown vehicle or test");
      continue;
    }
    if (en.day < 1 || en.day > spec.horizon_days) {
      fail(ScheduleRule::Window, "test " + label(spec, en.expanded) + " on day " + std::to_string(en.day) +
                                     " outside the horizon");
      continue;
    }
    entries.push_back(en);
  }

  std::vector<std::size_t> count(q, 0);
  for (const auto& en : entries) ++count[en.expanded];
  for (std::size_t e = 0; e < q; ++e)
    if (count[e] != 1)
      fail(ScheduleRule::ExactlyOnce,
           "test " + label(spec, e) + " is scheduled " + std::to_string(count[e]) + " times");

  for (const auto& en : entries) {
    const auto& x = spec.expanded_tests[en.expanded];
    if (en.day < x.window_start || en.day > x.window_end)
      fail(ScheduleRule::Window, "test " + label(spec, en.expanded) + " on day " + std::to_string(en.day) +
                                     " outside [" + std::to_string(x.window_start) + ", " +
                                     std::to_string(x.window_end) + "]");
    if (!meets_test(d.tests[x.origin], fleet[en.vehicle].features))
      fail(ScheduleRule::Requirement,
           "vehicle " + std::to_string(en.vehicle) + " does not meet test " + label(spec, en.expanded));
  }

  std::map<int, std::size_t> per_day;
  std::map<std::pair<std::size_t, int>, std::size_t> per_vehicle_day;
  for (const auto& en : entries) {
    ++per_day[en.day];
    ++per_vehicle_day[{en.vehicle, en.day}];
  }
  for (const auto& [day, n] : per_day)
    if (n > static_cast<std::size_t>(spec.daily_capacity))
      fail(ScheduleRule::Capacity, std::to_string(n) + " tests on day " + std::to_string(day));
  for (const auto& [key, n] : per_vehicle_day)
    if (n > 1)
      fail(ScheduleRule::OncePerDay, "vehicle " + std::to_string(key.first) + " is tested " + std::to_string(n) +
                                         " times on day " + std::to_string(key.second));

  for (const auto& a : entries)
    for (const auto& b : entries) {
      if (a.vehicle != b.vehicle) continue;
      int ga = spec.expanded_tests[a.expanded].group, gb = spec.expanded_tests[b.expanded].group;
      if (ga > gb && a.day > b.day)
        fail(ScheduleRule::Order, "vehicle " + std::to_string(a.vehicle) + ": test " + label(spec, a.expanded) +
                                      " (group " + std::to_string(ga) + ") after test " + label(spec, b.expanded) +
                                      " (group " + std::to_string(gb) + ")");
    }

  std::vector<std::size_t> crashes(fleet.size(), 0);
  for (const auto& en : entries)
    if (spec.expanded_tests[en.expanded].group == 1) ++crashes[en.vehicle];
  for (std::size_t i = 0; i < fleet.size(); ++i)
    if (crashes[i] > 1)
      fail(ScheduleRule::Crash, "vehicle " + std::to_string(i) + " has " + std::to_string(crashes[i]) + " crash tests");

  for (std::size_t s = 0; s < spec.distinct_vehicle_sets.size(); ++s) {
    const auto& set = spec.distinct_vehicle_sets[s];
    for (std::size_t i = 0; i < fleet.size(); ++i) {
      std::size_t n = 0;
      for (const auto& en : entries)
        if (en.vehicle == i && std::find(set.begin(), set.end(), en.expanded) != set.end()) ++n;
      bool ok = spec.distinct_vehicle_relaxed ? n <= 1 : n == 1;
      if (!ok)
        fail(ScheduleRule::DistinctVehicles, "vehicle " + std::to_string(i) + " is used " + std::to_string(n) +
                                                 " times in distinct set " + std::to_string(s));
    }
  }
  return out;
}

std::optional<DecodedSchedule> decode_schedule(const LinearModel& model, std::span<const std::uint8_t> values,
                                               const Dataset& d, const ScheduleSpec&) {
  std::size_t vehicles = 0;
  for (const auto& k : model.variables()) vehicles = std::max<std::size_t>(vehicles, k.vehicle + 1);
  DecodedSchedule out;
  for (std::size_t i = 0; i < vehicles; ++i) {
    VehicleConfig v{TypeId{0}, std::vector<bool>(d.feature_count(), false)};
    std::size_t types = 0;
    for (std::size_t j = 0; j < d.type_count(); ++j)
      if (values[*model.index_of(VariableKey::t(u32(i), u32(j)))]) {
        v.type = TypeId{j};
        ++types;
      }
    if (types != 1) return std::nullopt;
    for (std::size_t j = 0; j < d.feature_count(); ++j) v.features[j] = values[*model.index_of(VariableKey::b(u32(i), u32(j)))] != 0;
    out.vehicles.push_back(std::move(v));
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto& key = model.variables()[k];
    if (key.kind == VarKind::PD && values[k])
      out.schedule.entries.push_back({key.vehicle, key.second, static_cast<int>(key.day)});
  }
  return out;
}

std::vector<std::uint8_t> encode_schedule(const LinearModel& model, const std::vector<VehicleConfig>& vehicles,
                                          const Schedule& sched) {
  std::vector<std::uint8_t> values(model.variables().size(), 0);
  auto set = [&](const VariableKey& k) {
    auto idx = model.index_of(k);
    if (!idx) throw std::invalid_argument("schedule does not fit the model: no variable " + variable_name(k));
    values[*idx] = 1;
  };
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    set(VariableKey::t(u32(i), u32(vehicles[i].type.value)));
    for (std::size_t j = 0; j < vehicles[i].features.size(); ++j)
      if (vehicles[i].features[j]) set(VariableKey::b(u32(i), u32(j)));
  }
  for (const auto& en : sched.entries) set(VariableKey::pd(u32(en.vehicle), u32(en.expanded), u32(en.day)));
  return values;
}

std::string schedule_csv(const ScheduleSpec& spec, const Schedule& sched) {
  std::ostringstream os;
  os << "vehicle,test,copy,day\n";
  auto entries = sched.entries;
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.day, a.vehicle, a.expanded) < std::tie(b.day, b.vehicle, b.expanded);
  });
  for (const auto& en : entries) {
    const auto& x = spec.expanded_tests.at(en.expanded);
    os << en.vehicle << ',' << x.origin << ',' << x.copy << ',' << en.day << '\n';
  }
  return os.str();
}

Schedule parse_schedule_csv(std::string_view text, const ScheduleSpec& spec) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t e = 0; e < spec.expanded_tests.size(); ++e)
    index[{spec.expanded_tests[e].origin, spec.expanded_tests[e].copy}] = e;
  Schedule out;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line.rfind("vehicle", 0) == 0) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<long> values;
    while (std::getline(ls, field, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stol(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw std::invalid_argument("schedule line " + std::to_string(lineno) + ": bad number '" + field + "'");
      }
    }
    if (values.size() != 4 || values[0] < 0 || values[1] < 0 || values[2] < 0)
      throw std::invalid_argument("schedule line " + std::to_string(lineno) + ": expected vehicle,test,copy,day");
    auto it = index.find({static_cast<std::size_t>(values[1]), static_cast<std::size_t>(values[2])});
    if (it == index.end())
      throw std::invalid_argument("schedule line " + std::to_string(lineno) + ": unknown test copy");
    out.entries.push_back({static_cast<std::size_t>(values[0]), it->second, static_cast<int>(values[3])});
  }
  return out;
}

}  // namespace fleetopt
