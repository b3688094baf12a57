#include "vrpdi/evaluator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vrpdi/errors.hpp"

namespace vrpdi {

namespace {

constexpr int kDepot = 0;

// Distance slack when comparing a drone leg with the range limit.
constexpr double kRangeTolerance = 1e-9;

template <bool Record>
PairSchedule simulate_pair(std::span<const Gene> genes, std::size_t offset, const Instance& instance,
                           const DistanceMatrix& dist) {
  PairSchedule pair;
  if (genes.empty()) return pair;

  const double vt = instance.truck_speed();
  const double vd = instance.drone_speed();
  const double omega = instance.truck_delivery_time();
  const double sigma = instance.drone_delivery_time();
  const auto& max_range = instance.max_drone_distance();
  auto pos = [&](int id) { return instance.node(id).pos; };

  int truck_node = kDepot;
  double ready = 0.0;  // truck free to leave truck_node

  // Where and when the drone last boarded the truck.
  Point2 boarded_at = pos(kDepot);
  double boarded_time = 0.0;
  bool drone_flew = false;

  std::size_t i = 0;
  const std::size_t m = genes.size();
  while (i < m) {
    const Gene& gene = genes[i];
    if (gene.delivery == Delivery::Truck) {
      const double d = dist(truck_node, gene.node);
      const double arrive = ready + d / vt;
      if constexpr (Record) {
        pair.truck_legs.push_back(
            {Actor::Truck, pos(truck_node), pos(gene.node), ready, arrive, LegPurpose::Delivery, gene.node});
      }
      pair.truck_distance += d;
      ready = arrive + omega;
      truck_node = gene.node;
      ++i;
      continue;
    }

    if (i + 1 < m && genes[i + 1].delivery == Delivery::Drone)
      throw InfeasibleError(offset + i + 1, "consecutive drone deliveries");

    const int launch = truck_node;
    const int target = gene.node;
    const double out_leg = dist(launch, target);
    if (max_range && out_leg > *max_range + kRangeTolerance) {
      throw InfeasibleError(offset + i, fmt::format("drone leg {} -> {} of {} exceeds max drone distance {}",
                                                    launch, target, out_leg, *max_range));
    }
    const double delivered = ready + out_leg / vd;
    const double drone_free = delivered + sigma;

    const bool to_depot = i + 1 == m;
    const int next = to_depot ? kDepot : genes[i + 1].node;
    const double seg = dist(truck_node, next);
    const double truck_arrive = ready + seg / vt;

    TruckState truck;
    truck.state_time = drone_free;
    if (drone_free >= truck_arrive || seg == 0.0) {
      truck.position = pos(next);
    } else {
      const Vector2 heading = (pos(next) - pos(truck_node)) * (1.0 / seg);
      truck.velocity = heading * vt;
      truck.position = pos(truck_node) + heading * ((drone_free - ready) * vt);
    }
    const InterceptionResult meet = resolve_rendezvous(pos(target), drone_free, truck, pos(next), vd);
    const double back_leg = euclidean_distance(pos(target), meet.point);

    if constexpr (Record) {
      if (!(boarded_at == pos(launch)) || boarded_time < ready)
        pair.drone_legs.push_back(
            {Actor::Drone, boarded_at, pos(launch), boarded_time, ready, LegPurpose::Carried, launch});
      pair.drone_legs.push_back(
          {Actor::Drone, pos(launch), pos(target), ready, delivered, LegPurpose::Delivery, target});
      pair.drone_legs.push_back({Actor::Drone, pos(target), meet.point, drone_free, drone_free + back_leg / vd,
                                 LegPurpose::Interception,
                                 meet.kind == RendezvousKind::MeetAtNode ? next : -1});
      pair.rendezvous.push_back(meet);
      if (seg > 0.0 || next != truck_node) {
        pair.truck_legs.push_back({Actor::Truck, pos(truck_node), pos(next), ready, truck_arrive,
                                   to_depot ? LegPurpose::ReturnToDepot : LegPurpose::Delivery, next});
      }
    }
    pair.drone_distance += out_leg + back_leg;
    pair.truck_distance += seg;
    boarded_at = meet.point;
    boarded_time = meet.time;
    drone_flew = true;

    if (to_depot) {
      pair.completion = std::max(truck_arrive, meet.time);
      if constexpr (Record) {
        if (meet.kind == RendezvousKind::EnRouteIntercept) {
          pair.drone_legs.push_back(
              {Actor::Drone, meet.point, pos(kDepot), meet.time, truck_arrive, LegPurpose::Carried, kDepot});
        }
      }
      return pair;
    }

    // The truck delivers at `next`; a drone meeting it there may hold it up.
    ready = truck_arrive + omega;
    if (meet.kind == RendezvousKind::MeetAtNode) ready = std::max(ready, meet.time);
    truck_node = next;
    i += 2;
  }

  const double back = dist(truck_node, kDepot);
  const double arrive = ready + back / vt;
  if constexpr (Record) {
    pair.truck_legs.push_back(
        {Actor::Truck, pos(truck_node), pos(kDepot), ready, arrive, LegPurpose::ReturnToDepot, kDepot});
    if (drone_flew)
      pair.drone_legs.push_back(
          {Actor::Drone, boarded_at, pos(kDepot), boarded_time, arrive, LegPurpose::Carried, kDepot});
  }
  pair.truck_distance += back;
  pair.completion = arrive;
  return pair;
}

template <bool Record>
Schedule simulate(const Genotype& genotype, const Instance& instance, const DistanceMatrix& distances) {
  if (genotype.bounds.size() < 2 || genotype.bounds.front() != 0 || genotype.bounds.back() != genotype.size())
    throw ValidationError("genotype segment bounds do not partition the genes");
  for (const Gene& g : genotype.genes) {
    if (g.node <= 0 || g.node > instance.customer_count())
      throw ValidationError(fmt::format("gene refers to invalid customer {}", g.node));
  }
  Schedule schedule;
  if constexpr (Record) schedule.pairs.reserve(genotype.segment_count());
  for (std::size_t k = 0; k < genotype.segment_count(); ++k) {
    if (genotype.bounds[k] > genotype.bounds[k + 1])
      throw ValidationError("genotype segment bounds are not ordered");
    PairSchedule pair = simulate_pair<Record>(genotype.segment(k), genotype.bounds[k], instance, distances);
    schedule.system_time = std::max(schedule.system_time, pair.completion);
    schedule.truck_distance += pair.truck_distance;
    schedule.drone_distance += pair.drone_distance;
    if constexpr (Record) schedule.pairs.push_back(std::move(pair));
  }
  return schedule;
}

}  // namespace

Schedule decode(const Genotype& genotype, const Instance& instance, const DistanceMatrix& distances) {
  return simulate<true>(genotype, instance, distances);
}

Schedule decode(const Genotype& genotype, const Instance& instance) {
  return decode(genotype, instance, DistanceMatrix(instance));
}

Evaluation evaluate(const Genotype& genotype, const Instance& instance, const DistanceMatrix& distances) {
  const Schedule s = simulate<false>(genotype, instance, distances);
  return {s.system_time, s.truck_distance, s.drone_distance};
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::VisitOnce: return "VisitOnce";
    case ViolationKind::InvalidNode: return "InvalidNode";
    case ViolationKind::SegmentBounds: return "SegmentBounds";
    case ViolationKind::Capacity: return "Capacity";
    case ViolationKind::ConsecutiveDrone: return "ConsecutiveDrone";
    case ViolationKind::DroneRange: return "DroneRange";
  }
  return "Unknown";
}

std::vector<Violation> check_feasibility(const Genotype& genotype, const Instance& instance) {
  std::vector<Violation> out;
  const int customers = instance.customer_count();

  std::vector<int> seen(static_cast<std::size_t>(customers) + 1, 0);
  for (std::size_t i = 0; i < genotype.size(); ++i) {
    const int node = genotype.genes[i].node;
    if (node <= 0 || node > customers) {
      out.push_back({ViolationKind::InvalidNode, i, fmt::format("gene {} refers to node {}", i, node)});
      continue;
    }
    if (++seen[static_cast<std::size_t>(node)] == 2)
      out.push_back({ViolationKind::VisitOnce, static_cast<std::size_t>(node),
                     fmt::format("node {} is visited more than once", node)});
  }
  for (int node = 1; node <= customers; ++node) {
    if (seen[static_cast<std::size_t>(node)] == 0)
      out.push_back({ViolationKind::VisitOnce, static_cast<std::size_t>(node), fmt::format("node {} is never visited", node)});
  }

  const auto& b = genotype.bounds;
  const bool bounds_ok = b.size() >= 2 && b.front() == 0 && b.back() == genotype.size() &&
                         std::is_sorted(b.begin(), b.end());
  if (!bounds_ok) {
    out.push_back({ViolationKind::SegmentBounds, 0, "segment bounds do not partition the genes"});
    return out;
  }

  const auto& max_range = instance.max_drone_distance();
  for (std::size_t k = 0; k < genotype.segment_count(); ++k) {
    const auto seg = genotype.segment(k);
    int load = 0;
    for (const Gene& g : seg) {
      if (g.node > 0 && g.node <= customers) load += instance.node(g.node).demand;
    }
    if (load > instance.capacity())
      out.push_back({ViolationKind::Capacity, k,
                     fmt::format("segment {} carries {} units, capacity {}", k, load, instance.capacity())});

    int launch = 0;
    for (std::size_t i = 0; i < seg.size(); ++i) {
      const std::size_t index = b[k] + i;
      const Gene& g = seg[i];
      if (g.delivery == Delivery::Truck) {
        launch = g.node;
        continue;
      }
      if (i > 0 && seg[i - 1].delivery == Delivery::Drone)
        out.push_back({ViolationKind::ConsecutiveDrone, index,
                       fmt::format("gene {} is a second consecutive drone delivery", index)});
      if (max_range && g.node > 0 && g.node <= customers) {
        const double leg = euclidean_distance(instance.node(launch).pos, instance.node(g.node).pos);
        if (leg > *max_range + kRangeTolerance)
          out.push_back({ViolationKind::DroneRange, index,
                         fmt::format("drone leg {} -> {} is {} > {}", launch, g.node, leg, *max_range)});
      }
    }
  }
  return out;
}

double improvement(double vrp_time, double vrpdi_time) {
  if (!(vrp_time > 0.0) || !(vrpdi_time > 0.0)) throw ValidationError("improvement needs positive times");
  return (vrp_time - vrpdi_time) / vrpdi_time * 100.0;
}

namespace {

const char* purpose_name(LegPurpose p) {
  switch (p) {
    case LegPurpose::Delivery: return "delivery";
    case LegPurpose::Interception: return "interception";
    case LegPurpose::ReturnToDepot: return "return";
    case LegPurpose::Carried: return "carried";
  }
  return "unknown";
}

nlohmann::json leg_json(const Leg& leg) {
  return {{"from", {leg.from.x, leg.from.y}}, {"to", {leg.to.x, leg.to.y}}, {"depart", leg.depart},
          {"arrive", leg.arrive},             {"purpose", purpose_name(leg.purpose)}, {"node", leg.node}};
}

}  // namespace

void to_json(nlohmann::json& j, const Schedule& schedule) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const PairSchedule& p : schedule.pairs) {
    nlohmann::json truck = nlohmann::json::array();
    nlohmann::json drone = nlohmann::json::array();
    nlohmann::json meets = nlohmann::json::array();
    for (const Leg& l : p.truck_legs) truck.push_back(leg_json(l));
    for (const Leg& l : p.drone_legs) drone.push_back(leg_json(l));
    for (const InterceptionResult& r : p.rendezvous) {
      meets.push_back({{"kind", r.kind == RendezvousKind::EnRouteIntercept ? "en_route" : "at_node"},
                       {"point", {r.point.x, r.point.y}},
                       {"time", r.time},
                       {"truck_wait", r.truck_wait},
                       {"drone_wait", r.drone_wait}});
    }
    pairs.push_back({{"completion", p.completion},
                     {"truck_distance", p.truck_distance},
                     {"drone_distance", p.drone_distance},
                     {"truck_legs", std::move(truck)},
                     {"drone_legs", std::move(drone)},
                     {"rendezvous", std::move(meets)}});
  }
  j = {{"system_time", schedule.system_time},
       {"truck_distance", schedule.truck_distance},
       {"drone_distance", schedule.drone_distance},
       {"pairs", std::move(pairs)}};
}

}  // namespace vrpdi
