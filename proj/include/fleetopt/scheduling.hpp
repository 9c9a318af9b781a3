#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fleetopt/dataset.hpp"
#include "fleetopt/model.hpp"

namespace fleetopt {

struct ScheduleEntry {
  std::size_t vehicle = 0;
  std::size_t expanded = 0;  // index into ScheduleSpec::expanded_tests
  int day = 1;

  friend auto operator<=>(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct Schedule {
  std::vector<ScheduleEntry> entries;
};

enum class ScheduleRule {
  ExactlyOnce,
  Window,
  Capacity,
  OncePerDay,
  Order,
  Crash,
  DistinctVehicles,
  Requirement,
  Buildability,
};

const char* to_string(ScheduleRule r);

struct ScheduleViolation {
  ScheduleRule rule;
  std::string message;
};

struct ScheduleCheck {
  bool valid = true;
  std::vector<ScheduleViolation> violations;
};

/// Day-indexed model over b, t and pd(i, e, d) with e an expanded test and d
/// in 1..D. Declares n * (f + o) + n * |expanded| * D variables.
LinearModel compile_schedule(const Dataset& d, const ScheduleSpec& spec, std::size_t vehicles);

/// Checks every scheduling condition directly on the entries and the vehicles.
ScheduleCheck check_schedule(const Dataset& d, const ScheduleSpec& spec, const Schedule& sched,
                             const std::vector<VehicleConfig>& fleet);

struct DecodedSchedule {
  std::vector<VehicleConfig> vehicles;
  Schedule schedule;
};

/// Reads vehicles and entries from model values. Empty when some vehicle
/// does not have exactly one type, since no configuration can be read then.
std::optional<DecodedSchedule> decode_schedule(const LinearModel& model, std::span<const std::uint8_t> values,
                                               const Dataset& d, const ScheduleSpec& spec);

std::vector<std::uint8_t> encode_schedule(const LinearModel& model, const std::vector<VehicleConfig>& vehicles,
                                          const Schedule& sched);

/// "vehicle,test,copy,day" with the origin test id and copy index.
std::string schedule_csv(const ScheduleSpec& spec, const Schedule& sched);
Schedule parse_schedule_csv(std::string_view text, const ScheduleSpec& spec);

}  // namespace fleetopt
