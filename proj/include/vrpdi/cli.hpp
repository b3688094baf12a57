#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vrpdi/ea.hpp"
#include "vrpdi/stats.hpp"

namespace vrpdi::cli {

enum ExitCode : int { kOk = 0, kSolveFailed = 1, kUsage = 2 };

// Environment variable naming the default dataset directory.
inline constexpr const char* kDatasetEnv = "VRPDI_DATASETS";

struct CommonOptions {
  std::optional<std::filesystem::path> config;
  int runs = 30;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::optional<double> max_drone_fraction;
  std::optional<int> pairs;
  std::optional<int> generations;
  std::optional<std::filesystem::path> out;
};

struct SolveOptions {
  std::filesystem::path instance;
  Mode mode = Mode::VRPDi;
  CommonOptions common;
};

struct CompareOptions {
  std::filesystem::path instance;
  CommonOptions common;
  bool self_compare = false;  // VRPDi against itself
  double alpha = 0.05;
};

enum class BenchTable { VrpVsVrpdi, MaxDroneDistance };

struct BenchOptions {
  std::filesystem::path dataset_dir;
  BenchTable table = BenchTable::VrpVsVrpdi;
  CommonOptions common;
};

// One solve protocol: `runs` independent EA runs (seed + r for run r), executed
// `jobs` at a time. Results are ordered by run index.
struct Batch {
  std::string dataset;
  Mode mode = Mode::VRPDi;
  std::uint64_t seed = 0;
  std::vector<RunReport> reports;
  RunSummary summary;
};

Batch run_batch(const Instance& instance, const EAConfig& base, Mode mode, int runs, int jobs);

inline constexpr const char* kSummaryHeader =
    "dataset,mode,runs,best_time,mean_time,stddev_time,best_distance,mean_distance,stddev_distance,cpu_minutes,seed";
std::string summary_row(const Batch& batch);

int cmd_solve(const SolveOptions& options, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& options, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);

// Finds `<name>` (any extension, case-insensitive) inside `dir`.
std::optional<std::filesystem::path> find_dataset(const std::filesystem::path& dir, const std::string& name);

// Published reference values reproduced side by side by `bench`.
struct VrpVsVrpdiReference {
  const char* dataset;
  int nodes;
  double vrp_time, vrp_distance, vrp_cpu;
  double vrpdi_time, vrpdi_distance, vrpdi_cpu;
};

struct MaxDroneReference {
  const char* dataset;
  int nodes;
  double max_distance;
  double max_drone_distance;
  int pairs;
  double ea_time;
  double nnhis_time;
};

const std::vector<VrpVsVrpdiReference>& vrp_vs_vrpdi_reference();
const std::vector<MaxDroneReference>& max_drone_reference();

}  // namespace vrpdi::cli
