#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vrpdi/evaluator.hpp"
#include "vrpdi/genotype.hpp"
#include "vrpdi/instance.hpp"

namespace vrpdi {

enum class Mode { VRP, VRPDi };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

using Rng = std::mt19937_64;

// Independent stream for (seed, a, b); used to give each run, generation and
// child its own generator so results do not depend on thread scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

struct EAConfig {
  int population_size = 150;
  double elitism_rate = 0.15;
  double mutation_rate = 0.30;
  int generations = 1000;
  std::uint64_t seed = 0;
  std::optional<int> pair_count_override;
  int threads = 1;  // workers building children inside one generation

  // Throws ConfigError.
  void validate() const;
  int elite_count() const;
};

// Accepts either a JSON object or `key = value` lines (`#` starts a comment).
// Keys: population_size, elitism_rate, mutation_rate, generations, seed,
// pairs, threads. Unspecified keys keep their defaults.
EAConfig parse_config(const std::string& text);
EAConfig load_config(const std::filesystem::path& path);

struct Solution {
  Genotype genotype;
  double objective = 0.0;  // system time z
  double fitness = 0.0;    // 1 / z
  double truck_distance = 0.0;
  double drone_distance = 0.0;
};

struct Population {
  std::vector<Solution> members;
  int generation = 0;
};

struct DiversityStats {
  double unique_fraction = 0.0;
  double fitness_stddev = 0.0;
};

struct RunReport {
  Mode mode = Mode::VRPDi;
  std::uint64_t seed = 0;
  int pair_count = 0;
  std::vector<double> best_objective;  // incumbent after init and after each generation
  std::vector<DiversityStats> diversity;
  double elapsed_seconds = 0.0;
  Solution best;
};

// Sets fitness = 1/z and orders members best first; ties keep their order.
Population evaluate_population(Population population);

// First index whose cumulative normalised fitness exceeds `r` in [0, 1).
std::size_t roulette_pick(std::span<const double> fitness, double r);

// Breeding pool as indices into a best-first population: the `elite_count`
// leaders followed by roulette draws until the pool is as large as the population.
std::vector<std::size_t> select(const Population& population, std::size_t elite_count, Rng& rng);

// Child keeps parent A's genes on [min(cut_a, cut_b), max(cut_a, cut_b)) in place;
// the remaining slots take parent B's genes in B's order, skipping nodes already
// copied. Bounds are balanced over parent A's segment count.
Genotype crossover_at(const Genotype& parent_a, const Genotype& parent_b, std::size_t cut_a, std::size_t cut_b);
Genotype crossover(const Genotype& parent_a, const Genotype& parent_b, Rng& rng);

void swap_genes(Genotype& genotype, std::size_t i, std::size_t j);

// Each position swaps with a random other position with probability `rate`;
// in VRPDi mode each delivery bit is then inverted with probability `rate`.
void mutate(Genotype& genotype, double rate, Mode mode, Rng& rng);

// Within each segment, the second of two consecutive drone genes becomes a
// truck gene (left to right). With an instance that limits drone range, drone
// genes whose launch leg is too long also become truck genes.
Genotype repair(Genotype genotype, const Instance* instance = nullptr);

DiversityStats diversity(const Population& population);

// Random permutation with balanced bounds; delivery bits are fair coin flips
// (all truck in VRP mode) followed by repair.
Genotype random_genotype(const Instance& instance, std::size_t pairs, Mode mode, Rng& rng);

Solution make_solution(Genotype genotype, const Instance& instance, const DistanceMatrix& distances);

// Pair count used by run(): the override when set, otherwise fleet_size().
int pair_count(const Instance& instance, const EAConfig& config);

std::pair<Solution, RunReport> run(const Instance& instance, const EAConfig& config, Mode mode);

void to_json(nlohmann::json& j, const RunReport& report);

}  // namespace vrpdi
