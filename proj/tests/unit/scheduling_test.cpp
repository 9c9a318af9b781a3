#include "doctest.h"

#include "../support/brute.hpp"
#include "common.hpp"
#include "fleetopt/compiler.hpp"
#include "fleetopt/oracle.hpp"
#include "fleetopt/scheduling.hpp"
#include "fleetopt/solver.hpp"

using namespace fleetopt;
using namespace fleetopt::testing;
using std::chrono::milliseconds;

namespace {

// One copy per car of every test, whole horizon, group 2 (not a crash test).
ScheduleSpec plain_spec(const Dataset& d, int days, int capacity) {
  ScheduleSpec s;
  s.horizon_days = days;
  s.daily_capacity = capacity;
  for (const auto& t : d.tests)
    for (std::int64_t c = 0; c < t.cars_needed; ++c)
      s.expanded_tests.push_back({t.id, static_cast<std::size_t>(c), 1, days, 2});
  return s;
}

std::optional<DecodedSchedule> solve(const Dataset& d, const ScheduleSpec& s, std::size_t n) {
  auto m = compile_schedule(d, s, n);
  auto r = solve_exact({&m, milliseconds(10000), 0, SolveTarget::FindFeasible});
  if (!r.assignment) return std::nullopt;
  return decode_schedule(m, *r.assignment, d, s);
}

bool has_rule(const ScheduleCheck& c, ScheduleRule r) {
  for (const auto& v : c.violations)
    if (v.rule == r) return true;
  return false;
}

}  // namespace

TEST_SUITE("scheduling") {
  TEST_CASE("one vehicle, two tests, one per day") {
    Dataset d = blank(2, 1);
    make_test(d, ids({0}));
    make_test(d, ids({1}));
    auto s = plain_spec(d, 2, 1);
    auto got = solve(d, s, 1);
    REQUIRE(got.has_value());
    CHECK(check_schedule(d, s, got->schedule, got->vehicles).valid);
    REQUIRE(got->schedule.entries.size() == 2);
    CHECK(got->schedule.entries[0].day != got->schedule.entries[1].day);
    CHECK(oracle::schedule_feasible(d, s, 1).has_value());

    auto one_day = plain_spec(d, 1, 2);
    CHECK_FALSE(solve(d, one_day, 1).has_value());
    CHECK_FALSE(oracle::schedule_feasible(d, one_day, 1).has_value());
  }

  TEST_CASE("higher group goes first") {
    Dataset d = blank(1, 1);
    make_test(d, ids({0}));
    make_test(d, ids({0}));
    auto s = plain_spec(d, 2, 1);
    s.expanded_tests[0].group = 1;
    s.expanded_tests[1].group = 2;
    auto got = solve(d, s, 1);
    REQUIRE(got.has_value());
    int day_g1 = 0, day_g2 = 0;
    for (const auto& en : got->schedule.entries) (en.expanded == 0 ? day_g1 : day_g2) = en.day;
    CHECK(day_g2 < day_g1);

    Schedule wrong{{{0, 0, 1}, {0, 1, 2}}};
    auto c = check_schedule(d, s, wrong, got->vehicles);
    CHECK_FALSE(c.valid);
    CHECK(has_rule(c, ScheduleRule::Order));
  }

  TEST_CASE("variable count") {
    Dataset d = blank(3, 2);
    make_test(d, ids({0}), {}, {}, 2);
    make_test(d, ids({1}));
    auto s = plain_spec(d, 3, 2);
    for (std::size_t n : {1, 2, 3}) {
      auto m = compile_schedule(d, s, n);
      CHECK(schedule_counts_hold(d, s, n, m));
      CHECK(m.variables().size() == n * 5 + n * 3 * 3);
    }
  }

  TEST_CASE("checker catches each rule") {
    Dataset d = blank(2, 1);
    make_test(d, ids({0}));
    make_test(d, ids({0}));
    auto s = plain_spec(d, 2, 1);
    std::vector<VehicleConfig> two{{TypeId{0}, bits(2, 1)}, {TypeId{0}, bits(2, 1)}};

    CHECK(check_schedule(d, s, Schedule{{{0, 0, 1}, {1, 1, 2}}}, two).valid);
    CHECK(has_rule(check_schedule(d, s, Schedule{{{0, 0, 1}}}, two), ScheduleRule::ExactlyOnce));
    CHECK(has_rule(check_schedule(d, s, Schedule{{{0, 0, 1}, {1, 1, 3}}}, two), ScheduleRule::Window));
    CHECK(has_rule(check_schedule(d, s, Schedule{{{0, 0, 1}, {1, 1, 1}}}, two), ScheduleRule::Capacity));

    auto roomy = s;
    roomy.daily_capacity = 2;
    auto same = check_schedule(d, roomy, Schedule{{{0, 0, 1}, {0, 1, 1}}}, two);
    REQUIRE_FALSE(same.valid);
    CHECK(same.violations.size() == 1);
    CHECK(same.violations[0].rule == ScheduleRule::OncePerDay);

    std::vector<VehicleConfig> bare{{TypeId{0}, bits(2, 0)}, {TypeId{0}, bits(2, 1)}};
    CHECK(has_rule(check_schedule(d, s, Schedule{{{0, 0, 1}, {1, 1, 2}}}, bare), ScheduleRule::Requirement));

    auto crash = s;
    crash.expanded_tests[0].group = crash.expanded_tests[1].group = 1;
    auto both = check_schedule(d, crash, Schedule{{{0, 0, 1}, {0, 1, 2}}}, two);
    REQUIRE_FALSE(both.valid);
    CHECK(both.violations.size() == 1);
    CHECK(both.violations[0].rule == ScheduleRule::Crash);

    auto narrow = s;
    narrow.expanded_tests[1].window_start = 2;
    CHECK(has_rule(check_schedule(d, narrow, Schedule{{{0, 0, 2}, {1, 1, 1}}}, two), ScheduleRule::Window));
  }

  TEST_CASE("empty fleet and schedule") {
    Dataset d = blank(1, 1);
    ScheduleSpec s;
    s.horizon_days = 2;
    CHECK(check_schedule(d, s, Schedule{}, {}).valid);
  }

  TEST_CASE("distinct vehicle sets") {
    Dataset d = blank(1, 1);
    make_test(d, ids({0}), {}, {}, 2);
    auto s = plain_spec(d, 2, 2);
    s.distinct_vehicle_sets = {{0, 1}};
    std::vector<VehicleConfig> two{{TypeId{0}, bits(1, 1)}, {TypeId{0}, bits(1, 1)}};

    auto shared = check_schedule(d, s, Schedule{{{0, 0, 1}, {0, 1, 2}}}, two);
    CHECK(has_rule(shared, ScheduleRule::DistinctVehicles));
    CHECK(check_schedule(d, s, Schedule{{{0, 0, 1}, {1, 1, 1}}}, two).valid);

    // Strict form needs every vehicle in the set exactly once.
    std::vector<VehicleConfig> three = two;
    three.push_back(two[0]);
    CHECK(has_rule(check_schedule(d, s, Schedule{{{0, 0, 1}, {1, 1, 1}}}, three), ScheduleRule::DistinctVehicles));
    CHECK_FALSE(solve(d, s, 3).has_value());
    s.distinct_vehicle_relaxed = true;
    CHECK(check_schedule(d, s, Schedule{{{0, 0, 1}, {1, 1, 1}}}, three).valid);
    CHECK(solve(d, s, 3).has_value());
  }

  TEST_CASE("model agrees with the checker") {
    Dataset d = blank(2, 1);
    d.rules.push_back(ImplicationRule::make(std::nullopt, {pos(0)}, Connective::Single, {neg(1)}, Connective::Single));
    make_test(d, ids({0}));
    make_test(d, {}, ids({0}));
    auto s = plain_spec(d, 2, 1);
    s.expanded_tests[0].group = 1;
    auto a = schedule_agreement(d, s, 2);
    CHECK(a.mismatches == 0);
    CHECK(a.feasible > 0);
    CHECK(a.assignments == (1ull << (2 * 3 + 2 * 2 * 2)));
  }

  TEST_CASE("solved schedules pass the checker") {
    for (int days = 1; days <= 3; ++days) {
      Dataset d = blank(3, 2);
      d.forbidden_per_type[1] = ids({2});
      make_test(d, ids({0}));
      make_test(d, ids({2}), ids({1}));
      make_test(d, {}, {}, ids({1, 2}));
      auto s = plain_spec(d, days, 2);
      s.expanded_tests[2].group = 1;
      for (std::size_t n = 1; n <= 3; ++n) {
        auto got = solve(d, s, n);
        auto ref = oracle::schedule_feasible(d, s, n);
        CAPTURE(days);
        CAPTURE(n);
        CHECK(got.has_value() == ref.has_value());
        if (got) CHECK(check_schedule(d, s, got->schedule, got->vehicles).valid);
      }
    }
  }

  TEST_CASE("encode and decode") {
    Dataset d = blank(2, 1);
    make_test(d, ids({0}));
    make_test(d, ids({1}));
    auto s = plain_spec(d, 2, 1);
    auto got = solve(d, s, 2);
    REQUIRE(got.has_value());
    auto m = compile_schedule(d, s, 2);
    auto x = encode_schedule(m, got->vehicles, got->schedule);
    CHECK(check_assignment(m, x).feasible);
    auto back = decode_schedule(m, x, d, s);
    REQUIRE(back.has_value());
    CHECK(back->vehicles == got->vehicles);
    std::vector<std::uint8_t> zeros(m.variables().size(), 0);
    CHECK_FALSE(decode_schedule(m, zeros, d, s).has_value());
  }

  TEST_CASE("csv round trip") {
    Dataset d = blank(1, 1);
    make_test(d, ids({0}), {}, {}, 2);
    make_test(d, ids({0}));
    auto s = plain_spec(d, 3, 3);
    Schedule sched{{{1, 2, 3}, {0, 0, 1}, {2, 1, 1}}};
    auto csv = schedule_csv(s, sched);
    CHECK(csv == "vehicle,test,copy,day\n0,0,0,1\n2,0,1,1\n1,1,0,3\n");
    auto back = parse_schedule_csv(csv, s);
    auto a = back.entries, b = sched.entries;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    CHECK_THROWS_AS(parse_schedule_csv("0,5,0,1\n", s), std::invalid_argument);
    CHECK_THROWS_AS(parse_schedule_csv("0,x,0,1\n", s), std::invalid_argument);
    CHECK_THROWS_AS(parse_schedule_csv("0,0,0\n", s), std::invalid_argument);
  }

  TEST_CASE("bad specs do not compile") {
    Dataset d = blank(1, 1);
    make_test(d, ids({0}), {}, {}, 2);
    auto s = plain_spec(d, 2, 1);
    CHECK_THROWS_AS(compile_schedule(d, s, 0), CompileError);
    auto late = s;
    late.expanded_tests[0].window_end = 3;
    CHECK_THROWS_AS(compile_schedule(d, late, 1), CompileError);
    auto missing = s;
    missing.expanded_tests.pop_back();
    CHECK_THROWS_AS(compile_schedule(d, missing, 1), CompileError);
    auto twice = s;
    twice.expanded_tests[1].copy = 0;
    CHECK_THROWS_AS(compile_schedule(d, twice, 1), CompileError);
    auto dangling = s;
    dangling.distinct_vehicle_sets = {{0, 7}};
    CHECK_THROWS_AS(compile_schedule(d, dangling, 1), CompileError);
  }
}
