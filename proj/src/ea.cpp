#include "vrpdi/ea.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vrpdi/errors.hpp"

namespace vrpdi {

std::string to_string(Mode mode) { return mode == Mode::VRP ? "vrp" : "vrpdi"; }

Mode parse_mode(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "vrp") return Mode::VRP;
  if (lower == "vrpdi") return Mode::VRPDi;
  throw ConfigError(fmt::format("unknown mode '{}', expected vrp or vrpdi", text));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 over the mixed inputs
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

void EAConfig::validate() const {
  if (population_size < 2) throw ConfigError("population_size must be at least 2");
  if (!(elitism_rate > 0.0 && elitism_rate < 1.0)) throw ConfigError("elitism_rate must lie in (0, 1)");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw ConfigError("mutation_rate must lie in [0, 1]");
  if (generations < 0) throw ConfigError("generations must be non-negative");
  if (pair_count_override && *pair_count_override <= 0) throw ConfigError("pairs must be positive");
  if (threads < 1) throw ConfigError("threads must be positive");
  if (elite_count() < 2) throw ConfigError("elitism_rate * population_size must give at least 2 elites");
}

int EAConfig::elite_count() const {
  return static_cast<int>(std::ceil(elitism_rate * population_size - 1e-9));
}

namespace {

void apply_key(EAConfig& config, const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    auto whole = [&](std::size_t n) {
      if (n != value.size()) throw std::invalid_argument(value);
    };
    if (key == "population_size") {
      config.population_size = std::stoi(value, &used);
    } else if (key == "elitism_rate") {
      config.elitism_rate = std::stod(value, &used);
    } else if (key == "mutation_rate") {
      config.mutation_rate = std::stod(value, &used);
    } else if (key == "generations") {
      config.generations = std::stoi(value, &used);
    } else if (key == "seed") {
      config.seed = std::stoull(value, &used);
    } else if (key == "pairs") {
      config.pair_count_override = std::stoi(value, &used);
    } else if (key == "threads") {
      config.threads = std::stoi(value, &used);
    } else {
      throw ConfigError(fmt::format("unknown config key '{}'", key));
    }
    whole(used);
  } catch (const std::logic_error&) {
    throw ConfigError(fmt::format("invalid value '{}' for '{}'", value, key));
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

EAConfig parse_config(const std::string& text) {
  EAConfig config;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(fmt::format("invalid JSON config: {}", e.what()));
    }
    for (const auto& [key, value] : j.items()) {
      if (!value.is_number()) throw ConfigError(fmt::format("config key '{}' must be numeric", key));
      apply_key(config, key, value.dump());
    }
  } else {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError(fmt::format("config line {}: expected key = value", line_no));
      apply_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }
  config.validate();
  return config;
}

EAConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

Population evaluate_population(Population population) {
  for (Solution& s : population.members) s.fitness = 1.0 / s.objective;
  std::stable_sort(population.members.begin(), population.members.end(),
                   [](const Solution& a, const Solution& b) { return a.fitness > b.fitness; });
  return population;
}

std::size_t roulette_pick(std::span<const double> fitness, double r) {
  const double total = std::accumulate(fitness.begin(), fitness.end(), 0.0);
  double running = 0.0;
  for (std::size_t j = 0; j < fitness.size(); ++j) {
    running += fitness[j] / total;
    if (r < running) return j;
  }
  return fitness.empty() ? 0 : fitness.size() - 1;
}

std::vector<std::size_t> select(const Population& population, std::size_t elite_count, Rng& rng) {
  const std::size_t size = population.members.size();
  if (size < elite_count) {
    throw ConfigError(fmt::format("population of {} is smaller than the elite count {}", size, elite_count));
  }
  std::vector<std::size_t> pool(elite_count);
  std::iota(pool.begin(), pool.end(), std::size_t{0});

  std::vector<double> fitness(size);
  for (std::size_t i = 0; i < size; ++i) fitness[i] = population.members[i].fitness;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = elite_count; i < size; ++i) pool.push_back(roulette_pick(fitness, unit(rng)));
  return pool;
}

Genotype crossover_at(const Genotype& parent_a, const Genotype& parent_b, std::size_t cut_a, std::size_t cut_b) {
  const std::size_t n = parent_a.size();
  const std::size_t lo = std::min(cut_a, cut_b);
  const std::size_t hi = std::min(std::max(cut_a, cut_b), n);

  int max_node = 0;
  for (const Gene& g : parent_a.genes) max_node = std::max(max_node, g.node);
  std::vector<char> taken(static_cast<std::size_t>(max_node) + 1, 0);

  Genotype child;
  child.genes.resize(n);
  std::vector<char> filled(n, 0);
  for (std::size_t i = lo; i < hi; ++i) {
    child.genes[i] = parent_a.genes[i];
    filled[i] = 1;
    taken[static_cast<std::size_t>(parent_a.genes[i].node)] = 1;
  }
  std::size_t slot = 0;
  for (const Gene& g : parent_b.genes) {
    const auto node = static_cast<std::size_t>(g.node);
    if (node < taken.size() && taken[node]) continue;
    while (slot < n && filled[slot]) ++slot;
    if (slot == n) break;
    child.genes[slot] = g;
    filled[slot] = 1;
    if (node < taken.size()) taken[node] = 1;
  }
  child.bounds = balanced_bounds(n, std::max<std::size_t>(parent_a.segment_count(), 1));
  return child;
}

Genotype crossover(const Genotype& parent_a, const Genotype& parent_b, Rng& rng) {
  const std::size_t n = parent_a.size();
  if (n == 0) return parent_a;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto cut = [&] { return std::min(static_cast<std::size_t>(unit(rng) * static_cast<double>(n)), n - 1); };
  const std::size_t a = cut();
  const std::size_t b = cut();
  return crossover_at(parent_a, parent_b, a, b);
}

void swap_genes(Genotype& genotype, std::size_t i, std::size_t j) { std::swap(genotype.genes[i], genotype.genes[j]); }

void mutate(Genotype& genotype, double rate, Mode mode, Rng& rng) {
  const std::size_t n = genotype.size();
  if (rate <= 0.0 || n == 0) return;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (n > 1) {
    std::uniform_int_distribution<std::size_t> other(0, n - 2);
    for (std::size_t i = 0; i < n; ++i) {
      if (unit(rng) < rate) {
        std::size_t s = other(rng);
        if (s >= i) ++s;  // uniform over indices != i
        swap_genes(genotype, i, s);
      }
    }
  }
  if (mode == Mode::VRPDi) {
    for (Gene& g : genotype.genes) {
      if (unit(rng) < rate) g.delivery = g.delivery == Delivery::Truck ? Delivery::Drone : Delivery::Truck;
    }
  }
}

Genotype repair(Genotype genotype, const Instance* instance) {
  const bool ranged = instance && instance->max_drone_distance().has_value();
  const double limit = ranged ? *instance->max_drone_distance() : 0.0;
  for (std::size_t k = 0; k < genotype.segment_count(); ++k) {
    const std::size_t begin = genotype.bounds[k];
    const std::size_t end = genotype.bounds[k + 1];
    for (std::size_t i = begin; i + 1 < end; ++i) {
      if (genotype.genes[i].delivery == Delivery::Drone && genotype.genes[i + 1].delivery == Delivery::Drone)
        genotype.genes[i + 1].delivery = Delivery::Truck;
    }
    if (!ranged) continue;
    int launch = 0;
    for (std::size_t i = begin; i < end; ++i) {
      Gene& g = genotype.genes[i];
      if (g.delivery == Delivery::Drone &&
          euclidean_distance(instance->node(launch).pos, instance->node(g.node).pos) > limit + 1e-9)
        g.delivery = Delivery::Truck;
      if (g.delivery == Delivery::Truck) launch = g.node;
    }
  }
  return genotype;
}

DiversityStats diversity(const Population& population) {
  const auto& members = population.members;
  if (members.empty()) throw ValidationError("diversity of an empty population");
  std::set<double> unique;
  for (const Solution& s : members) unique.insert(s.fitness);
  const double n = static_cast<double>(members.size());
  DiversityStats stats;
  stats.unique_fraction = static_cast<double>(unique.size()) / n;
  if (members.size() > 1) {
    // shifted by the first value so identical fitness gives exactly zero
    const double shift = members.front().fitness;
    double sum = 0.0, ss = 0.0;
    for (const Solution& s : members) {
      sum += s.fitness - shift;
      ss += (s.fitness - shift) * (s.fitness - shift);
    }
    stats.fitness_stddev = std::sqrt(std::max(0.0, (ss - sum * sum / n) / (n - 1.0)));
  }
  return stats;
}

Genotype random_genotype(const Instance& instance, std::size_t pairs, Mode mode, Rng& rng) {
  std::vector<Gene> genes;
  genes.reserve(static_cast<std::size_t>(instance.customer_count()));
  for (int node = 1; node <= instance.customer_count(); ++node) genes.push_back({node, Delivery::Truck});
  std::shuffle(genes.begin(), genes.end(), rng);
  if (mode == Mode::VRPDi) {
    std::bernoulli_distribution coin(0.5);
    for (Gene& g : genes) g.delivery = coin(rng) ? Delivery::Drone : Delivery::Truck;
  }
  return repair(make_genotype(std::move(genes), pairs), &instance);
}

Solution make_solution(Genotype genotype, const Instance& instance, const DistanceMatrix& distances) {
  const Evaluation e = evaluate(genotype, instance, distances);
  if (!(e.system_time > 0.0)) throw ValidationError("solution has zero delivery time; fitness undefined");
  Solution s;
  s.genotype = std::move(genotype);
  s.objective = e.system_time;
  s.fitness = 1.0 / e.system_time;
  s.truck_distance = e.truck_distance;
  s.drone_distance = e.drone_distance;
  return s;
}

int pair_count(const Instance& instance, const EAConfig& config) {
  return config.pair_count_override ? *config.pair_count_override : fleet_size(instance);
}

namespace {

// Children are drawn from one random stream per block of this many slots, so
// the outcome is independent of the thread count.
constexpr std::size_t kStreamBlock = 16;

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < count; i += workers) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

const Solution& best_of(const std::vector<Solution>& members) {
  return *std::min_element(members.begin(), members.end(),
                           [](const Solution& a, const Solution& b) { return a.objective < b.objective; });
}

}  // namespace

std::pair<Solution, RunReport> run(const Instance& instance, const EAConfig& config, Mode mode) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  const int pairs = pair_count(instance, config);
  const auto n = static_cast<std::size_t>(instance.customer_count());
  int max_demand = 0;
  for (const Node& node : instance.nodes()) max_demand = std::max(max_demand, node.demand);
  const std::size_t largest_segment = (n + static_cast<std::size_t>(pairs) - 1) / static_cast<std::size_t>(pairs);
  if (largest_segment * static_cast<std::size_t>(max_demand) > static_cast<std::size_t>(instance.capacity())) {
    throw ConfigError(fmt::format("{} pairs cannot serve {} customers with capacity {}", pairs, n, instance.capacity()));
  }

  const DistanceMatrix distances(instance);
  const auto size = static_cast<std::size_t>(config.population_size);
  const auto elites = static_cast<std::size_t>(config.elite_count());

  RunReport report;
  report.mode = mode;
  report.seed = config.seed;
  report.pair_count = pairs;

  Population population;
  population.members.resize(size);
  const std::size_t blocks = (size + kStreamBlock - 1) / kStreamBlock;
  parallel_for(blocks, config.threads, [&](std::size_t blk) {
    Rng rng(derive_seed(config.seed, 0, blk));
    for (std::size_t i = blk * kStreamBlock; i < std::min(size, (blk + 1) * kStreamBlock); ++i)
      population.members[i] = make_solution(random_genotype(instance, static_cast<std::size_t>(pairs), mode, rng),
                                            instance, distances);
  });
  population = evaluate_population(std::move(population));
  Solution incumbent = population.members.front();
  report.best_objective.push_back(incumbent.objective);
  report.diversity.push_back(diversity(population));

  for (int gen = 1; gen <= config.generations; ++gen) {
    Rng select_rng(derive_seed(config.seed, static_cast<std::uint64_t>(gen), ~std::uint64_t{0}));
    const std::vector<std::size_t> pool = select(population, elites, select_rng);

    std::vector<Solution> children(size);
    parallel_for(blocks, config.threads, [&](std::size_t blk) {
      Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(gen), blk));
      for (std::size_t j = blk * kStreamBlock; j < std::min(size, (blk + 1) * kStreamBlock); ++j) {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        const Genotype& a = population.members[pool[pick(rng)]].genotype;
        const Genotype* b = &population.members[pool[pick(rng)]].genotype;
        // Parent B must differ from A when the pool allows it.
        for (int tries = 0; *b == a && tries < 32; ++tries) b = &population.members[pool[pick(rng)]].genotype;
        if (*b == a) {
          const std::size_t offset = pick(rng);
          for (std::size_t k = 0; k < pool.size(); ++k) {
            const Genotype& cand = population.members[pool[(offset + k) % pool.size()]].genotype;
            if (cand != a) {
              b = &cand;
              break;
            }
          }
        }
        Genotype child = crossover(a, *b, rng);
        mutate(child, config.mutation_rate, mode, rng);
        child = repair(std::move(child), &instance);
        children[j] = make_solution(std::move(child), instance, distances);
      }
    });

    const Solution& best_child = best_of(children);
    if (best_child.objective < incumbent.objective) incumbent = best_child;

    population.members = std::move(children);
    population.generation = gen;
    population = evaluate_population(std::move(population));
    report.best_objective.push_back(incumbent.objective);
    report.diversity.push_back(diversity(population));
  }

  report.best = incumbent;
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {incumbent, report};
}

void to_json(nlohmann::json& j, const RunReport& report) {
  nlohmann::json unique = nlohmann::json::array();
  nlohmann::json stddev = nlohmann::json::array();
  for (const auto& d : report.diversity) {
    unique.push_back(d.unique_fraction);
    stddev.push_back(d.fitness_stddev);
  }
  nlohmann::json genotype;
  to_json(genotype, report.best.genotype);
  // Timing is kept out so that reports are reproducible byte for byte.
  j = {{"mode", to_string(report.mode)},
       {"seed", report.seed},
       {"pairs", report.pair_count},
       {"best_time", report.best.objective},
       {"best_truck_distance", report.best.truck_distance},
       {"best_drone_distance", report.best.drone_distance},
       {"best_genotype", std::move(genotype)},
       {"best_objective", report.best_objective},
       {"unique_fitness_fraction", std::move(unique)},
       {"fitness_stddev", std::move(stddev)}};
}

}  // namespace vrpdi
