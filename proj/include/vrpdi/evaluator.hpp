#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vrpdi/genotype.hpp"
#include "vrpdi/instance.hpp"
#include "vrpdi/interception.hpp"

namespace vrpdi {

enum class Actor { Truck, Drone };

// Carried marks the drone riding on its truck between sorties.
enum class LegPurpose { Delivery, Interception, ReturnToDepot, Carried };

struct Leg {
  Actor actor = Actor::Truck;
  Point2 from;
  Point2 to;
  double depart = 0.0;
  double arrive = 0.0;
  LegPurpose purpose = LegPurpose::Delivery;
  int node = -1;  // destination node id, -1 for interception points
};

struct PairSchedule {
  std::vector<Leg> truck_legs;
  std::vector<Leg> drone_legs;
  std::vector<InterceptionResult> rendezvous;
  double completion = 0.0;
  double truck_distance = 0.0;
  double drone_distance = 0.0;
};

struct Schedule {
  std::vector<PairSchedule> pairs;
  double system_time = 0.0;
  double truck_distance = 0.0;  // trucks only
  double drone_distance = 0.0;  // flown legs only
};

// Totals without the per-leg trace; identical to the matching Schedule fields.
struct Evaluation {
  double system_time = 0.0;
  double truck_distance = 0.0;
  double drone_distance = 0.0;
};

// Simulates every truck-drone pair from the depot. Each Truck gene is a drive
// and delivery (taking the truck delivery time). A Drone gene launches the
// drone from the truck's latest stop (or the depot) once the truck is ready to
// leave; the truck heads for the next Truck gene (or the depot) and the pair
// rejoins through resolve_rendezvous. A pair completes when both vehicles are
// back at the depot; system_time is the latest pair completion.
//
// Throws InfeasibleError on consecutive Drone genes or on a drone delivery leg
// longer than the instance's max drone distance.
Schedule decode(const Genotype& genotype, const Instance& instance, const DistanceMatrix& distances);
Schedule decode(const Genotype& genotype, const Instance& instance);

Evaluation evaluate(const Genotype& genotype, const Instance& instance, const DistanceMatrix& distances);

inline double objective(const Schedule& schedule) { return schedule.system_time; }

enum class ViolationKind { VisitOnce, InvalidNode, SegmentBounds, Capacity, ConsecutiveDrone, DroneRange };

struct Violation {
  ViolationKind kind;
  std::size_t index = 0;  // gene index, node id (VisitOnce) or segment index
  std::string message;
};

std::string to_string(ViolationKind kind);

// Empty iff the genotype is a feasible solution of `instance`.
std::vector<Violation> check_feasibility(const Genotype& genotype, const Instance& instance);

// Percentage by which the VRPDi time improves on the VRP time, relative to the VRPDi time.
double improvement(double vrp_time, double vrpdi_time);

void to_json(nlohmann::json& j, const Schedule& schedule);

}  // namespace vrpdi
