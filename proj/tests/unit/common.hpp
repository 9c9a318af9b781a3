#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fleetopt/dataset.hpp"

namespace fleetopt::testing {

inline Dataset blank(std::size_t features, std::size_t types) {
  Dataset d;
  for (std::size_t k = 0; k < features; ++k) d.feature_names.push_back("F" + std::to_string(k));
  for (std::size_t k = 0; k < types; ++k) d.type_names.push_back("T" + std::to_string(k));
  d.forbidden_per_type.assign(types, {});
  return d;
}

inline Literal pos(std::size_t k) { return {FeatureId(k), false}; }
inline Literal neg(std::size_t k) { return {FeatureId(k), true}; }

inline std::vector<FeatureId> ids(std::initializer_list<std::size_t> ks) {
  std::vector<FeatureId> out;
  for (auto k : ks) out.push_back(FeatureId(k));
  return out;
}

inline TestRequirement make_test(Dataset& d, std::vector<FeatureId> present, std::vector<FeatureId> absent = {},
                                 std::vector<FeatureId> any_of = {}, std::int64_t cars = 1) {
  TestRequirement t;
  t.id = d.tests.size();
  t.required_present = std::move(present);
  t.required_absent = std::move(absent);
  t.required_any_of = std::move(any_of);
  t.cars_needed = cars;
  d.tests.push_back(t);
  return t;
}

inline std::vector<bool> bits(std::size_t width, std::size_t mask) {
  std::vector<bool> out(width);
  for (std::size_t k = 0; k < width; ++k) out[k] = (mask >> k & 1) != 0;
  return out;
}

}  // namespace fleetopt::testing
