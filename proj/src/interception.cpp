#include "vrpdi/interception.hpp"

#include <algorithm>
#include <cmath>

namespace vrpdi {

namespace {

// Double-double values (hi + lo) built from error-free transforms, used to
// keep the quadratic coefficients exact when the two speeds nearly cancel.
struct DD {
  double hi = 0.0;
  double lo = 0.0;
  double value() const { return hi + lo; }
};

DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

DD add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return two_sum(s.hi, s.lo);
}

DD mul(DD a, DD b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return two_sum(p.hi, p.lo);
}

DD neg(DD a) { return {-a.hi, -a.lo}; }

DD dot_dd(Vector2 u, Vector2 v) { return add(two_prod(u.x, v.x), two_prod(u.y, v.y)); }

struct DDVector {
  DD x;
  DD y;
};

}  // namespace

std::optional<double> interception_time(Point2 drone_pos, const TruckState& truck, double drone_speed) {
  // |p + v t| = s t  <=>  (|v|^2 - s^2) t^2 + 2 (p.v) t + |p|^2 = 0, p = truck - drone.
  const Vector2 p = truck.position - drone_pos;
  const Vector2 v = truck.velocity;
  const double vv = dot(v, v);
  const double ss = drone_speed * drone_speed;
  const DD a_dd = add(dot_dd(v, v), neg(two_prod(drone_speed, drone_speed)));
  // exact coordinate differences
  const DDVector pe{two_sum(truck.position.x, -drone_pos.x), two_sum(truck.position.y, -drone_pos.y)};
  const DD half_b = add(mul(pe.x, DD{v.x, 0.0}), mul(pe.y, DD{v.y, 0.0}));
  const DD c_dd = add(mul(pe.x, pe.x), mul(pe.y, pe.y));
  const double a = a_dd.value();
  const double b = 2.0 * half_b.value();
  const double c = c_dd.value();

  if (c == 0.0) return 0.0;

  // Newton polish on the double-double residual.
  auto polish = [&](double t) {
    for (int it = 0; it < 4; ++it) {
      const DD tt = two_prod(t, t);
      const DD q = add(add(mul(a_dd, tt), mul(add(half_b, half_b), DD{t, 0.0})), c_dd);
      const double slope = 2.0 * a * t + b;
      if (slope == 0.0) break;
      const double step = q.value() / slope;
      if (!std::isfinite(step) || std::abs(step) > 0.5 * std::abs(t) + 1e-300) break;
      t -= step;
      if (std::abs(step) <= 1e-17 * std::abs(t)) break;
    }
    return t;
  };

  if (std::abs(a) <= 1e-12 * std::max(vv, ss)) {
    // Equal speeds: the quadratic term (nearly) vanishes.
    if (b < 0.0) return std::max(0.0, polish(-c / b));
    return std::nullopt;
  }

  // b^2 - 4ac = 4 (half_b^2 - a c)
  const double disc = 4.0 * add(mul(half_b, half_b), neg(mul(a_dd, c_dd))).value();
  if (disc < 0.0) return std::nullopt;

  // Stable pair of roots; q != 0 because c > 0.
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  const double r1 = q / a;
  const double r2 = c / q;
  const double lo = std::min(r1, r2);
  const double hi = std::max(r1, r2);
  if (lo >= 0.0) return polish(lo);
  if (hi >= 0.0) return std::max(0.0, polish(hi));
  return std::nullopt;
}

Point2 interception_point(const TruckState& truck, double elapsed) {
  return truck.position + truck.velocity * elapsed;
}

InterceptionResult resolve_rendezvous(Point2 drone_pos, double drone_free_time, const TruckState& truck,
                                      Point2 next_node, double drone_speed) {
  const double truck_speed = norm(truck.velocity);
  const double remaining = euclidean_distance(truck.position, next_node);
  const double truck_travel = truck_speed > 0.0 ? remaining / truck_speed : 0.0;
  const double truck_arrival = drone_free_time + truck_travel;
  const double drone_to_node = euclidean_distance(drone_pos, next_node);
  const double drone_arrival = drone_free_time + drone_to_node / drone_speed;

  InterceptionResult at_node;
  at_node.kind = RendezvousKind::MeetAtNode;
  at_node.point = next_node;
  at_node.time = std::max(truck_arrival, drone_arrival);
  at_node.truck_wait = std::max(0.0, drone_arrival - truck_arrival);
  at_node.drone_wait = std::max(0.0, truck_arrival - drone_arrival);

  if (truck_speed == 0.0 || drone_to_node <= kTimeTolerance) return at_node;

  const auto t = interception_time(drone_pos, truck, drone_speed);
  if (!t || *t > truck_travel + kTimeTolerance) return at_node;

  const double meet = drone_free_time + *t;
  if (meet >= at_node.time - kTimeTolerance) return at_node;

  InterceptionResult en_route;
  en_route.kind = RendezvousKind::EnRouteIntercept;
  en_route.point = interception_point(truck, std::min(*t, truck_travel));
  en_route.time = meet;
  return en_route;
}

}  // namespace vrpdi
