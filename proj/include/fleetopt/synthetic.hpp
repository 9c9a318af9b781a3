#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fleetopt/dataset.hpp"

namespace fleetopt {

struct SyntheticParams {
  std::size_t features = 5;
  std::size_t types = 2;
  std::size_t tests = 3;
  std::size_t rules = 4;
  std::size_t groups = 1;
  std::uint64_t seed = 1;
  /// Legal configurations sampled before rules are drawn; 0 picks a default.
  std::size_t anchors = 0;
  /// Probability that a test needs two cars instead of one.
  double two_car_probability = 0.15;
};

/// Deterministic random instance. A pool of legal configurations is sampled
/// first; every rule is checked to hold on all of them and every test is
/// derived from one of them, so each test is satisfiable. The rule count may
/// fall short of params.rules on tiny instances where few rules survive.
Dataset generate_synthetic(const SyntheticParams& params);

/// All rule class labels the compiler supports.
const std::vector<std::string>& supported_rule_classes();

namespace detail {

/// Portable integer draw in [0, n); std distributions are implementation-defined.
inline std::size_t draw(std::mt19937_64& rng, std::size_t n) { return n == 0 ? 0 : rng() % n; }

template <class V>
void shuffle(V& v, std::mt19937_64& rng) {
  for (std::size_t k = v.size(); k > 1; --k) std::swap(v[k - 1], v[draw(rng, k)]);
}

inline bool chance(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

}  // namespace detail

}  // namespace fleetopt
