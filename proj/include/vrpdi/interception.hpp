#pragma once

#include <optional>

#include "vrpdi/geometry.hpp"

namespace vrpdi {

// Absolute tolerance applied to time comparisons.
inline constexpr double kTimeTolerance = 1e-9;

// Snapshot of a truck moving with constant velocity (zero when parked).
struct TruckState {
  Point2 position;
  Vector2 velocity;
  double state_time = 0.0;
};

enum class RendezvousKind { EnRouteIntercept, MeetAtNode };

struct InterceptionResult {
  RendezvousKind kind = RendezvousKind::MeetAtNode;
  Point2 point;
  double time = 0.0;  // absolute time at which truck and drone are joined
  double truck_wait = 0.0;
  double drone_wait = 0.0;
};

// Earliest t >= 0 with |truck.position + truck.velocity * t - drone_pos| = drone_speed * t,
// or nullopt when the drone can never reach the truck on its current heading.
std::optional<double> interception_time(Point2 drone_pos, const TruckState& truck, double drone_speed);

// Truck position after `elapsed` time on its current heading.
Point2 interception_point(const TruckState& truck, double elapsed);

// Chooses between catching the truck on its way to `next_node` and meeting it
// at `next_node`. `truck` must describe the truck at `drone_free_time`; a truck
// that already reached `next_node` is passed with zero velocity.
//
// The en-route option is only taken when the meeting point lies on the
// remaining segment and is reached strictly earlier than the meeting at the
// node. A drone already hovering over `next_node` waits there.
InterceptionResult resolve_rendezvous(Point2 drone_pos, double drone_free_time, const TruckState& truck,
                                      Point2 next_node, double drone_speed);

}  // namespace vrpdi
