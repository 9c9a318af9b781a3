#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fleetopt/dataset.hpp"
#include "fleetopt/scheduling.hpp"

// Brute-force reference answers for tiny instances. Rule and test semantics
// are evaluated here on their own, without the dataset or compiler code.
namespace fleetopt::oracle {

class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool buildable(const Dataset& d, const VehicleConfig& v);
bool meets(const TestRequirement& t, const std::vector<bool>& features);

/// One vehicle of a raw 0-1 assignment: exactly one type, buildable for that
/// type, and every test it is used for is met.
bool vehicle_satisfies(const Dataset& d, const std::vector<bool>& types, const std::vector<bool>& features,
                       const std::vector<bool>& uses);

/// Every legal (type, feature set), types outer, feature bitmask inner.
/// Requires o * 2^f <= 2^22.
std::vector<VehicleConfig> enumerate_configs(const Dataset& d);

/// max over fleets of size n of sum_j w_j * min(k_j, vehicles meeting j).
Rational max_coverage(const Dataset& d, std::size_t n);

/// Smallest fleet meeting every k_j, or nothing if more than n_cap are needed.
std::optional<std::size_t> min_fleet(const Dataset& d, std::size_t n_cap);

/// Some fleet of n vehicles with a schedule passing every scheduling condition.
std::optional<DecodedSchedule> schedule_feasible(const Dataset& d, const ScheduleSpec& spec, std::size_t n);

}  // namespace fleetopt::oracle
