#pragma once

// Independent reference computations used by the unit tests and the
// acceptance runner. Nothing here calls into the closed-form kinematics or
// the decoder; everything is recomputed numerically.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "vrpdi/genotype.hpp"
#include "vrpdi/geometry.hpp"
#include "vrpdi/instance.hpp"

namespace oracle {

using vrpdi::Point2;

inline double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Golden-section minimum of a convex function on [lo, hi].
template <class T = double>
T argmin_convex(const std::function<T(T)>& f, T lo, T hi) {
  const T phi = T(0.6180339887498948482045868343656381L);
  T a = lo, b = hi;
  T c = b - phi * (b - a), d = a + phi * (b - a);
  T fc = f(c), fd = f(d);
  for (int it = 0; it < 400 && b - a > T(1e-30L) * (b < T(1) ? T(1) : b); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  const T m = (a + b) / T(2);
  // endpoints can win for monotone functions
  T best = m, fbest = f(m);
  if (f(lo) <= fbest) best = lo, fbest = f(lo);
  if (f(hi) < fbest) best = hi;
  return best;
}

// Root of f on [lo, hi] with f(lo) > 0 >= f(hi); the left-most crossing when f is convex.
template <class T = double>
T bisect(const std::function<T(T)>& f, T lo, T hi) {
  for (int it = 0; it < 400; ++it) {
    const T mid = lo + (hi - lo) / T(2);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > T(0) ? lo : hi) = mid;
  }
  return hi;
}

struct InterceptCase {
  Point2 drone;
  Point2 truck;
  Point2 velocity;
  double drone_speed;
};

// Earliest t >= 0 with |truck + velocity t - drone| = v_d t found by bracketing
// and bisection on f(t) = |p(t) - c| - v_d t, evaluated in quad precision.
// `ambiguous` is set for near-tangent cases where a numerical search cannot
// decide existence.
inline std::optional<double> intercept_time(const InterceptCase& c, bool* ambiguous = nullptr) {
  using R = __float128;
  auto root = [](R v) {
    if (v <= 0) return R(0);
    R x = std::sqrt(static_cast<double>(v));
    for (int i = 0; i < 3; ++i) x = (x + v / x) / 2;
    return x;
  };
  const std::function<R(R)> f = [&](R t) {
    const R px = R(c.truck.x) + R(c.velocity.x) * t - R(c.drone.x);
    const R py = R(c.truck.y) + R(c.velocity.y) * t - R(c.drone.y);
    return root(px * px + py * py) - R(c.drone_speed) * t;
  };
  auto abs_r = [](R v) { return v < 0 ? -v : v; };
  if (ambiguous) *ambiguous = false;
  if (f(0) <= 0) return 0.0;
  R hi = 1;
  while (f(hi) > 0 && f(2 * hi) < f(hi) && hi < R(1e12)) hi *= 2;
  R root_hi;
  if (f(hi) <= 0) {
    root_hi = hi;
  } else {
    const R m = argmin_convex<R>(f, R(0), 2 * hi);
    const R fm = f(m);
    const R scale = R(dist(c.truck, c.drone)) + 1;
    if (ambiguous && abs_r(fm) < R(1e-7) * scale) *ambiguous = true;
    if (fm > 0) return std::nullopt;
    root_hi = m;
  }
  return static_cast<double>(bisect<R>(f, R(0), root_hi));
}

inline InterceptCase random_intercept_case(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.0, 1000.0);
  std::uniform_real_distribution<double> speed(0.1, 10.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  const double vt = speed(rng);
  const double a = angle(rng);
  // one case in eight moves at exactly the drone speed or sits parked
  const int kind = static_cast<int>(rng() % 8);
  InterceptCase c{{pos(rng), pos(rng)}, {pos(rng), pos(rng)}, {vt * std::cos(a), vt * std::sin(a)}, speed(rng)};
  if (kind == 0) c.drone_speed = vt;
  if (kind == 1) c.velocity = {0.0, 0.0};
  return c;
}

struct DecodeTotals {
  double system_time = 0.0;
  double truck_distance = 0.0;
  double drone_distance = 0.0;
};

// Step-by-step simulation of one genotype: the truck timeline is advanced
// leg by leg and each drone sortie finds the earliest moment it can reach the
// truck by numerical search over the truck's piecewise-linear path.
inline DecodeTotals simulate(const vrpdi::Genotype& g, const vrpdi::Instance& inst) {
  const double vt = inst.truck_speed(), vd = inst.drone_speed();
  const double omega = inst.truck_delivery_time(), sigma = inst.drone_delivery_time();
  auto pos = [&](int id) { return inst.node(id).pos; };
  DecodeTotals total;
  for (std::size_t k = 0; k < g.segment_count(); ++k) {
    const auto seg = g.segment(k);
    if (seg.empty()) continue;
    int at = 0;
    double t = 0.0;  // truck ready to leave `at`
    double completion = 0.0;
    for (std::size_t i = 0; i < seg.size(); ++i) {
      const vrpdi::Gene& gene = seg[i];
      if (gene.delivery == vrpdi::Delivery::Truck) {
        total.truck_distance += dist(pos(at), pos(gene.node));
        t += dist(pos(at), pos(gene.node)) / vt + omega;
        at = gene.node;
        continue;
      }
      const Point2 launch = pos(at);
      const Point2 target = pos(gene.node);
      const bool trailing = i + 1 == seg.size();
      const int next = trailing ? 0 : seg[i + 1].node;
      const double out = dist(launch, target);
      const double free = t + out / vd + sigma;
      const double leg = dist(launch, pos(next));
      const double arr = t + leg / vt;
      total.truck_distance += leg;
      total.drone_distance += out;

      auto truck_at = [&](double tau) {
        if (leg == 0.0 || tau >= arr) return pos(next);
        const double s = (tau - t) / (arr - t);
        return Point2{launch.x + (pos(next).x - launch.x) * s, launch.y + (pos(next).y - launch.y) * s};
      };
      const std::function<double(double)> gap = [&](double tau) {
        return dist(truck_at(tau), target) - vd * (tau - free);
      };

      double meet;
      Point2 where;
      if (free < arr && gap(free) <= 0.0) {
        meet = free;
        where = truck_at(free);
      } else if (free < arr && gap(arr) <= 0.0) {
        meet = bisect(gap, free, arr);
        where = truck_at(meet);
      } else if (free < arr) {
        const double m = argmin_convex(gap, free, arr);
        if (gap(m) <= 0.0) {
          meet = bisect(gap, free, m);
          where = truck_at(meet);
        } else {
          meet = std::max(arr, free + dist(target, pos(next)) / vd);
          where = pos(next);
        }
      } else {
        meet = std::max(arr, free + dist(target, pos(next)) / vd);
        where = pos(next);
      }
      total.drone_distance += dist(target, where);

      if (trailing) {
        completion = std::max(arr, meet);
        at = -1;
      } else {
        t = std::max(arr + omega, meet);
        at = next;
        ++i;  // the truck gene was served on this leg
      }
    }
    if (at >= 0) {
      total.truck_distance += dist(pos(at), pos(0));
      completion = t + dist(pos(at), pos(0)) / vt;
    }
    total.system_time = std::max(total.system_time, completion);
  }
  return total;
}

// Small random instance with node 0 as depot.
inline vrpdi::Instance random_instance(std::mt19937_64& rng, int customers, double extent = 100.0) {
  std::uniform_real_distribution<double> coord(0.0, extent);
  std::uniform_real_distribution<double> speed(0.5, 3.0);
  std::vector<vrpdi::Node> nodes;
  for (int i = 0; i <= customers; ++i) nodes.push_back({i, {coord(rng), coord(rng)}, i == 0 ? 0 : 1});
  vrpdi::Instance::Params p;
  p.truck_speed = speed(rng);
  p.drone_speed = speed(rng);
  p.truck_delivery_time = rng() % 2 ? 0.0 : std::uniform_real_distribution<double>(0.0, 5.0)(rng);
  p.drone_delivery_time = rng() % 2 ? 0.0 : std::uniform_real_distribution<double>(0.0, 5.0)(rng);
  return vrpdi::Instance("random", nodes, p);
}

// Random genotype over arbitrary (possibly empty) segments without adjacent drones.
inline vrpdi::Genotype random_genotype(std::mt19937_64& rng, int customers, int pairs) {
  std::vector<int> order(static_cast<std::size_t>(customers));
  for (int i = 0; i < customers; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  vrpdi::Genotype g;
  g.bounds.push_back(0);
  std::vector<std::size_t> cuts;
  for (int p = 1; p < pairs; ++p) cuts.push_back(rng() % (static_cast<std::size_t>(customers) + 1));
  std::sort(cuts.begin(), cuts.end());
  for (auto c : cuts) g.bounds.push_back(c);
  g.bounds.push_back(static_cast<std::size_t>(customers));
  for (std::size_t k = 0; k + 1 < g.bounds.size(); ++k) {
    bool prev_drone = false;
    for (std::size_t i = g.bounds[k]; i < g.bounds[k + 1]; ++i) {
      const bool drone = !prev_drone && rng() % 2;
      g.genes.push_back({order[i], drone ? vrpdi::Delivery::Drone : vrpdi::Delivery::Truck});
      prev_drone = drone;
    }
  }
  return g;
}

}  // namespace oracle
