// vrpdi: evolutionary solver for truck-drone routing with interception.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vrpdi/cli.hpp"

namespace {

using namespace vrpdi;

void add_common(CLI::App* app, cli::CommonOptions& o) {
  app->add_option("--config", o.config, "EA parameter file (JSON or key=value)")->check(CLI::ExistingFile);
  app->add_option("--runs", o.runs, "independent runs")->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "base seed; run r uses seed + r");
  app->add_option("--jobs", o.jobs, "runs executed concurrently")->check(CLI::PositiveNumber);
  app->add_option("--max-drone-fraction", o.max_drone_fraction,
                  "drone leg limit as a fraction of the largest node distance")
      ->check(CLI::Range(0.0, 1e9));
  app->add_option("--pairs", o.pairs, "number of truck-drone pairs")->check(CLI::PositiveNumber);
  app->add_option("--generations", o.generations, "generation count override")->check(CLI::PositiveNumber);
  app->add_option("--out", o.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vehicle routing with drones and interception"};
  app.require_subcommand(1);

  cli::SolveOptions solve;
  std::string solve_mode = "vrpdi";
  auto* solve_cmd = app.add_subcommand("solve", "run the EA on one instance");
  solve_cmd->add_option("instance", solve.instance, "instance file")->required();
  solve_cmd->add_option("--mode", solve_mode, "vrp or vrpdi")
      ->check(CLI::IsMember({"vrp", "vrpdi"}, CLI::ignore_case));
  add_common(solve_cmd, solve.common);

  cli::CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "VRP against VRPDi on one instance");
  compare_cmd->add_option("instance", compare.instance, "instance file")->required();
  compare_cmd->add_flag("--self-compare", compare.self_compare, "compare VRPDi with itself");
  compare_cmd->add_option("--alpha", compare.alpha, "significance level")->check(CLI::Range(0.0, 1.0));
  add_common(compare_cmd, compare.common);

  cli::BenchOptions bench;
  std::string dataset_dir;
  std::string table = "vrp-vs-vrpdi";
  auto* bench_cmd = app.add_subcommand("bench", "reproduce the benchmark tables");
  bench_cmd->add_option("dataset_dir", dataset_dir, "directory holding the benchmark instances");
  bench_cmd->add_option("--table", table, "vrp-vs-vrpdi or max-drone-distance")
      ->check(CLI::IsMember({"vrp-vs-vrpdi", "max-drone-distance"}));
  add_common(bench_cmd, bench.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  if (*solve_cmd) {
    solve.mode = parse_mode(solve_mode);
    return cli::cmd_solve(solve, std::cout, std::cerr);
  }
  if (*compare_cmd) return cli::cmd_compare(compare, std::cout, std::cerr);

  if (dataset_dir.empty()) {
    const char* env = std::getenv(cli::kDatasetEnv);
    dataset_dir = env && *env ? env : "data";
  }
  bench.dataset_dir = dataset_dir;
  bench.table = table == "max-drone-distance" ? cli::BenchTable::MaxDroneDistance : cli::BenchTable::VrpVsVrpdi;
  return cli::cmd_bench(bench, std::cout, std::cerr);
}
