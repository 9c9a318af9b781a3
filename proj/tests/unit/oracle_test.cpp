#include "doctest.h"

#include <set>

#include "../support/brute.hpp"
#include "common.hpp"
#include "fleetopt/compiler.hpp"
#include "fleetopt/greedy.hpp"
#include "fleetopt/oracle.hpp"
#include "fleetopt/simplify.hpp"
#include "fleetopt/synthetic.hpp"

using namespace fleetopt;
using namespace fleetopt::testing;

TEST_SUITE("oracle") {
  TEST_CASE("configuration counts") {
    Dataset d = blank(2, 1);
    CHECK(oracle::enumerate_configs(d).size() == 4);
    d.groups.push_back({ids({0, 1})});
    CHECK(oracle::enumerate_configs(d).size() == 3);
    d.forbidden_per_type[0] = ids({1});
    CHECK(oracle::enumerate_configs(d).size() == 2);
    Dataset two = blank(2, 2);
    two.rules.push_back(ImplicationRule::make(TypeId{1}, {pos(0)}, Connective::Single, {pos(1)}, Connective::Single));
    CHECK(oracle::enumerate_configs(two).size() == 7);
  }

  TEST_CASE("minimum fleets") {
    Dataset one = blank(2, 1);
    make_test(one, ids({0}));
    CHECK(oracle::min_fleet(one, 4) == 1u);

    Dataset split = blank(2, 1);
    make_test(split, ids({0}));
    make_test(split, {}, ids({0}));
    CHECK(oracle::min_fleet(split, 4) == 2u);
    CHECK_FALSE(oracle::min_fleet(split, 1).has_value());

    Dataset none = blank(1, 1);
    none.forbidden_per_type[0] = ids({0});
    make_test(none, ids({0}));
    CHECK_FALSE(oracle::min_fleet(none, 5).has_value());

    Dataset empty = blank(1, 1);
    CHECK(oracle::min_fleet(empty, 3) == 0u);
  }

  TEST_CASE("pinned seeded instance") {
    auto d = simplify(generate_synthetic({.features = 6, .types = 2, .tests = 5, .seed = 3}));
    CHECK(oracle::min_fleet(d, 6) == 4u);
  }

  TEST_CASE("coverage bounds") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      auto d = generate_synthetic({.features = 4, .types = 2, .tests = 3, .rules = 4, .seed = seed});
      CHECK(oracle::max_coverage(d, 0) == 0);
      Rational total{0};
      for (const auto& t : d.tests) total += t.weight * t.cars_needed;
      auto units = static_cast<std::size_t>(required_units(d));
      auto n = oracle::min_fleet(d, units);
      CAPTURE(seed);
      // Generated tests are always coverable.
      REQUIRE(n.has_value());
      CHECK(oracle::max_coverage(d, *n) == total);
      CHECK(oracle::max_coverage(d, units) == total);
      if (*n > 0) CHECK(oracle::max_coverage(d, *n - 1) < total);
      for (std::size_t k = 0; k < units; ++k) CHECK(oracle::max_coverage(d, k) <= oracle::max_coverage(d, k + 1));
    }
  }

  TEST_CASE("weights count per car") {
    Dataset d = blank(1, 1);
    make_test(d, ids({0}), {}, {}, 3);
    make_test(d, {}, ids({0}));
    d.tests[0].weight = Rational(5, 2);
    d.tests[1].weight = Rational(4);
    CHECK(oracle::max_coverage(d, 1) == 4);
    CHECK(oracle::max_coverage(d, 2) == Rational(13, 2));
    CHECK(oracle::max_coverage(d, 4) == Rational(23, 2));
  }

  TEST_CASE("configurations equal the single-vehicle model's feasible set") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto d = generate_synthetic({.features = 4, .types = 1 + seed % 3, .tests = 0, .rules = 6, .groups = seed % 2,
                                   .seed = seed});
      auto m = compile(d, 1, CompileMode::Sat);
      std::set<std::pair<std::size_t, std::vector<bool>>> from_model, from_oracle;
      for_each_assignment(m, [&](const std::vector<std::uint8_t>& x, std::size_t, bool ok) {
        if (!ok) return;
        auto v = decode(m, x, d).vehicles.at(0);
        from_model.insert({v.type.value, v.features});
      });
      for (const auto& v : oracle::enumerate_configs(d)) from_oracle.insert({v.type.value, v.features});
      CAPTURE(seed);
      CHECK(from_model == from_oracle);
    }
  }

  TEST_CASE("vehicle satisfies") {
    Dataset d = blank(2, 2);
    d.forbidden_per_type[1] = ids({0});
    make_test(d, ids({0}));
    CHECK(oracle::vehicle_satisfies(d, {true, false}, {true, false}, {true}));
    CHECK_FALSE(oracle::vehicle_satisfies(d, {false, true}, {true, false}, {false}));
    CHECK_FALSE(oracle::vehicle_satisfies(d, {true, true}, {true, false}, {false}));
    CHECK_FALSE(oracle::vehicle_satisfies(d, {false, false}, {false, false}, {false}));
    CHECK_FALSE(oracle::vehicle_satisfies(d, {true, false}, {false, false}, {true}));
    CHECK(oracle::vehicle_satisfies(d, {false, true}, {false, true}, {false}));
  }

  TEST_CASE("limits") {
    Dataset wide = blank(23, 1);
    CHECK_THROWS_AS(oracle::enumerate_configs(wide), oracle::LimitExceeded);
    // 16 pairwise exclusive tests give 16 incomparable signatures.
    Dataset many = blank(16, 1);
    for (std::size_t j = 0; j < 16; ++j) {
      std::vector<FeatureId> others;
      for (std::size_t k = 0; k < 16; ++k)
        if (k != j) others.push_back(FeatureId(k));
      make_test(many, ids({j}), others);
    }
    CHECK(oracle::max_coverage(many, 2) == 2);
    CHECK_THROWS_AS(oracle::max_coverage(many, 16), oracle::LimitExceeded);
    CHECK_THROWS_AS(oracle::min_fleet(many, 16), oracle::LimitExceeded);
  }
}
