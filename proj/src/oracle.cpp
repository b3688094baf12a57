#include "vrpdi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "vrpdi/errors.hpp"
#include "vrpdi/evaluator.hpp"

namespace vrpdi {

namespace {

constexpr double kTieTolerance = 1e-9;

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

// Delivery masks of `length` bits (bit i = gene i is a drone) with no two adjacent drones.
std::vector<std::uint32_t> drone_masks(int length, Mode mode) {
  std::vector<std::uint32_t> masks;
  if (mode == Mode::VRP) return {0u};
  for (std::uint32_t m = 0; m < (1u << length); ++m) {
    if ((m & (m >> 1)) == 0) masks.push_back(m);
  }
  return masks;
}

void compositions(int remaining, int parts, int cap, std::vector<std::size_t>& current,
                  std::vector<std::vector<std::size_t>>& out) {
  if (parts == 1) {
    if (remaining <= cap) {
      current.push_back(current.back() + static_cast<std::size_t>(remaining));
      out.push_back(current);
      current.pop_back();
    }
    return;
  }
  for (int len = 0; len <= std::min(remaining, cap); ++len) {
    current.push_back(current.back() + static_cast<std::size_t>(len));
    compositions(remaining - len, parts - 1, cap, current, out);
    current.pop_back();
  }
}

bool within_range(const Genotype& g, const Instance& instance) {
  const auto& range = instance.max_drone_distance();
  if (!range) return true;
  for (std::size_t k = 0; k < g.segment_count(); ++k) {
    int launch = 0;
    for (const Gene& gene : g.segment(k)) {
      if (gene.delivery == Delivery::Truck) {
        launch = gene.node;
      } else if (euclidean_distance(instance.node(launch).pos, instance.node(gene.node).pos) > *range + 1e-9) {
        return false;
      }
    }
  }
  return true;
}

struct Best {
  bool found = false;
  Genotype genotype;
  double objective = std::numeric_limits<double>::infinity();
  std::uint64_t evaluated = 0;
  std::vector<double> all;

  void offer(const Genotype& g, double z) {
    if (!found || z < objective - kTieTolerance ||
        (std::abs(z - objective) <= kTieTolerance && g < genotype)) {
      found = true;
      genotype = g;
      objective = z;
    }
  }
};

}  // namespace

std::uint64_t search_space_size(int customers, int pair_count, int capacity, Mode mode) {
  const int n = customers;
  std::vector<std::uint64_t> per_length(static_cast<std::size_t>(n) + 1, 1);
  if (mode == Mode::VRPDi) {
    // strings without adjacent drones: 1, 2, 3, 5, 8, ...
    for (int l = 1; l <= n; ++l) {
      per_length[static_cast<std::size_t>(l)] =
          l == 1 ? 2 : sat_add(per_length[static_cast<std::size_t>(l - 1)], per_length[static_cast<std::size_t>(l - 2)]);
    }
  }
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(n) + 1, 0);
  ways[0] = 1;
  for (int p = 0; p < pair_count; ++p) {
    std::vector<std::uint64_t> next(ways.size(), 0);
    for (int s = 0; s <= n; ++s) {
      if (ways[static_cast<std::size_t>(s)] == 0) continue;
      for (int len = 0; len <= std::min(capacity, n - s); ++len) {
        auto& slot = next[static_cast<std::size_t>(s + len)];
        slot = sat_add(slot, sat_mul(ways[static_cast<std::size_t>(s)], per_length[static_cast<std::size_t>(len)]));
      }
    }
    ways = std::move(next);
  }
  std::uint64_t total = ways[static_cast<std::size_t>(n)];
  for (int i = 2; i <= n; ++i) total = sat_mul(total, static_cast<std::uint64_t>(i));
  return total;
}

OracleResult enumerate_optimum(const Instance& instance, int pair_count, Mode mode, const OracleOptions& options) {
  const int n = instance.customer_count();
  if (pair_count < 1) throw ValidationError("pair count must be positive");
  const std::uint64_t space = search_space_size(n, pair_count, instance.capacity(), mode);
  const int limit = mode == Mode::VRPDi ? 9 : 10;
  if (n > limit || space > options.max_genotypes) {
    throw ValidationError(fmt::format("instance too large for enumeration: {} customers, {} feasible genotypes",
                                      n, space));
  }
  if (space == 0) throw ValidationError("no genotype satisfies the capacity with this pair count");

  std::vector<std::vector<std::size_t>> splits;
  std::vector<std::size_t> current{0};
  compositions(n, pair_count, instance.capacity(), current, splits);

  std::vector<std::vector<std::uint32_t>> masks_by_length(static_cast<std::size_t>(n) + 1);
  for (int l = 0; l <= n; ++l) masks_by_length[static_cast<std::size_t>(l)] = drone_masks(l, mode);

  const DistanceMatrix distances(instance);
  const int hw = options.threads > 0 ? options.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int workers = std::min(hw, n);

  std::vector<Best> results(static_cast<std::size_t>(workers));
  auto work = [&](int w) {
    Best& best = results[static_cast<std::size_t>(w)];
    Genotype g;
    g.genes.resize(static_cast<std::size_t>(n));
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int first = 1 + w; first <= n; first += workers) {
      order[0] = first;
      for (int v = 1, k = 1; v <= n; ++v) {
        if (v != first) order[static_cast<std::size_t>(k++)] = v;
      }
      do {
        for (const auto& bounds : splits) {
          g.bounds = bounds;
          // odometer over one mask per segment
          std::vector<std::size_t> pick(static_cast<std::size_t>(pair_count), 0);
          while (true) {
            for (int k = 0; k < pair_count; ++k) {
              const std::size_t b = bounds[static_cast<std::size_t>(k)];
              const std::size_t len = bounds[static_cast<std::size_t>(k) + 1] - b;
              const std::uint32_t mask = masks_by_length[len][pick[static_cast<std::size_t>(k)]];
              for (std::size_t i = 0; i < len; ++i) {
                g.genes[b + i] = {order[b + i], (mask >> i) & 1u ? Delivery::Drone : Delivery::Truck};
              }
            }
            if (within_range(g, instance)) {
              const double z = evaluate(g, instance, distances).system_time;
              ++best.evaluated;
              if (options.keep_all) best.all.push_back(z);
              best.offer(g, z);
            }
            int k = 0;
            for (; k < pair_count; ++k) {
              const std::size_t len = bounds[static_cast<std::size_t>(k) + 1] - bounds[static_cast<std::size_t>(k)];
              if (++pick[static_cast<std::size_t>(k)] < masks_by_length[len].size()) break;
              pick[static_cast<std::size_t>(k)] = 0;
            }
            if (k == pair_count) break;
          }
        }
      } while (std::next_permutation(order.begin() + 1, order.end()));
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  Best merged;
  OracleResult result;
  for (Best& b : results) {
    if (b.found) merged.offer(b.genotype, b.objective);
    result.evaluated += b.evaluated;
    if (options.keep_all) result.all_objectives.insert(result.all_objectives.end(), b.all.begin(), b.all.end());
  }
  if (!merged.found) throw ValidationError("no feasible genotype within the drone range");
  result.genotype = std::move(merged.genotype);
  result.objective = merged.objective;
  return result;
}

}  // namespace vrpdi
