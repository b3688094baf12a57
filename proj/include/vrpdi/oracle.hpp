#pragma once

#include <cstdint>
#include <vector>

#include "vrpdi/ea.hpp"
#include "vrpdi/genotype.hpp"
#include "vrpdi/instance.hpp"

namespace vrpdi {

struct OracleOptions {
  // Refuse when the feasible genotype count exceeds this.
  std::uint64_t max_genotypes = 40'000'000;
  int threads = 0;  // 0 = hardware concurrency
  bool keep_all = false;
};

struct OracleResult {
  Genotype genotype;
  double objective = 0.0;
  std::uint64_t evaluated = 0;
  std::vector<double> all_objectives;  // only with keep_all, in no particular order
};

// Feasible genotypes over `pair_count` segments: every permutation, every split
// into segments of at most `capacity` genes, and (VRPDi) every delivery
// assignment without consecutive drones inside a segment. Saturates at UINT64_MAX.
std::uint64_t search_space_size(int customers, int pair_count, int capacity, Mode mode);

// Brute-force minimiser of the system time. Among objectives equal within
// 1e-9 the lexicographically smallest genotype wins. Throws ValidationError
// (carrying the search space size) for instances beyond 9 customers in VRPDi
// mode, 10 in VRP mode, or above options.max_genotypes.
OracleResult enumerate_optimum(const Instance& instance, int pair_count, Mode mode, const OracleOptions& options = {});

}  // namespace vrpdi
