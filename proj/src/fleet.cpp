#include "fleetopt/fleet.hpp"

namespace fleetopt {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimeoutNoSolution: return "timeout_no_solution";
  }
  return "unknown";
}

}  // namespace fleetopt
