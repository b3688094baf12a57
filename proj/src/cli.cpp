#include "vrpdi/cli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vrpdi/errors.hpp"
#include "vrpdi/evaluator.hpp"
#include "vrpdi/svg.hpp"

namespace vrpdi::cli {

namespace fs = std::filesystem;

const std::vector<VrpVsVrpdiReference>& vrp_vs_vrpdi_reference() {
  static const std::vector<VrpVsVrpdiReference> rows = {
      {"Uniform-71-n50", 50, 58.61, 712.31, 5.02, 37.63, 662.34, 7.53},
      {"Uniform-72-n50", 50, 60.46, 819.87, 4.66, 43.19, 562.46, 10.75},
      {"Uniform-73-n50", 50, 58.40, 770.00, 5.13, 39.03, 509.72, 8.00},
      {"Uniform-91-n100", 100, 82.03, 1683.95, 10.34, 52.75, 1156.19, 11.08},
      {"Uniform-92-n100", 100, 80.44, 1634.95, 6.92, 51.69, 1107.40, 12.40},
      {"Uniform-93-n100", 100, 81.98, 1681.81, 7.13, 51.17, 1082.89, 11.72},
      {"Uniform-1-n250", 250, 220.34, 6566.14, 27.86, 144.00, 3933.12, 29.14},
      {"Uniform-2-n250", 250, 224.39, 6691.53, 38.61, 149.70, 4013.30, 24.75},
      {"Uniform-5-n500", 500, 260.68, 9730.62, 149.37, 154.23, 6662.66, 119.68},
      {"Uniform-6-n500", 500, 245.24, 8842.61, 168.39, 149.23, 6382.95, 136.56},
  };
  return rows;
}

const std::vector<MaxDroneReference>& max_drone_reference() {
  static const std::vector<MaxDroneReference> rows = {
      {"Doublecenter-71-n50", 50, 822.02, 616.51, 2, 77.15, 87.08},
      {"Doublecenter-91-n100", 100, 751.58, 563.69, 3, 79.34, 86.56},
      {"Doublecenter-1-n250", 250, 772.27, 579.20, 3, 228.43, 132.71},
      {"Doublecenter-5-n500", 500, 896.52, 672.39, 5, 221.60, 162.01},
      {"Singlecenter-71-n50", 50, 327.35, 245.52, 2, 51.51, 35.22},
      {"Singlecenter-91-n100", 100, 451.54, 338.66, 3, 81.01, 65.63},
      {"Singlecenter-1-n250", 250, 478.34, 358.75, 3, 161.91, 97.43},
      {"Singlecenter-5-n500", 500, 546.21, 409.66, 5, 181.81, 101.70},
      {"Uniform-71-n50", 50, 249.41, 187.06, 2, 36.70, 38.17},
      {"Uniform-72-n50", 50, 256.03, 192.02, 2, 40.96, 39.78},
      {"Uniform-73-n50", 50, 253.04, 189.78, 2, 40.12, 41.48},
      {"Uniform-91-n100", 100, 263.07, 197.30, 3, 43.70, 46.84},
      {"Uniform-92-n100", 100, 270.17, 202.62, 3, 40.09, 40.66},
      {"Uniform-1-n250", 250, 266.60, 199.95, 3, 80.38, 67.56},
      {"Uniform-2-n250", 250, 259.27, 194.45, 3, 79.09, 54.52},
      {"Uniform-5-n500", 500, 276.50, 207.37, 5, 87.43, 55.38},
      // Published max distance 74.57 does not match its 205.93 drone limit.
      {"Uniform-6-n500", 500, 74.57, 205.93, 5, 79.31, 52.49},
  };
  return rows;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(fmt::format("cannot write '{}'", tmp.string()));
    f << content;
    if (!f) throw Error(fmt::format("failed writing '{}'", tmp.string()));
  }
  fs::rename(tmp, path);
}

EAConfig base_config(const CommonOptions& common) {
  EAConfig config = common.config ? load_config(*common.config) : EAConfig{};
  config.seed = common.seed;
  if (common.generations) config.generations = *common.generations;
  if (common.pairs) config.pair_count_override = *common.pairs;
  config.validate();
  if (common.runs < 1) throw ConfigError("--runs must be at least 1");
  if (common.jobs < 1) throw ConfigError("--jobs must be at least 1");
  return config;
}

InstanceOverrides overrides_for(const CommonOptions& common) {
  InstanceOverrides o;
  o.max_drone_distance_fraction = common.max_drone_fraction;
  return o;
}

const RunReport& best_report(const Batch& batch) {
  return *std::min_element(batch.reports.begin(), batch.reports.end(),
                           [](const RunReport& a, const RunReport& b) { return a.best.objective < b.best.objective; });
}

RunSummary summarize(const std::vector<RunReport>& reports) {
  if (reports.size() >= 2) return summarize_runs(reports);
  const RunReport& r = reports.front();
  RunSummary s;
  s.best_time = s.mean_time = r.best.objective;
  s.best_distance = s.mean_distance = r.best.truck_distance;
  s.mean_cpu_minutes = r.elapsed_seconds / 60.0;
  return s;
}

std::vector<double> final_times(const Batch& b) {
  std::vector<double> v;
  for (const RunReport& r : b.reports) v.push_back(r.best.objective);
  return v;
}

std::vector<double> final_distances(const Batch& b) {
  std::vector<double> v;
  for (const RunReport& r : b.reports) v.push_back(r.best.truck_distance);
  return v;
}

std::string file_stem(const Batch& b) { return fmt::format("{}_{}", b.dataset, to_string(b.mode)); }

// Run reports, best schedule (JSON + SVG) and per-run timings for one batch.
void write_batch_artifacts(const Batch& batch, const Instance& instance, const fs::path& dir) {
  std::string timing = "run,seed,elapsed_seconds\n";
  for (std::size_t r = 0; r < batch.reports.size(); ++r) {
    const RunReport& report = batch.reports[r];
    nlohmann::json j = report;
    j["dataset"] = batch.dataset;
    write_file_atomic(dir / "runs" / fmt::format("{}_run{:03}.json", file_stem(batch), r), j.dump(1) + "\n");
    timing += fmt::format("{},{},{:.6f}\n", r, report.seed, report.elapsed_seconds);
  }
  write_file_atomic(dir / fmt::format("{}_timing.csv", file_stem(batch)), timing);

  const RunReport& best = best_report(batch);
  const Schedule schedule = decode(best.best.genotype, instance);
  nlohmann::json genotype = best.best.genotype;
  nlohmann::json sched = schedule;
  nlohmann::json j = {{"dataset", batch.dataset}, {"mode", to_string(batch.mode)}, {"seed", best.seed},
                      {"genotype", genotype},      {"schedule", sched}};
  write_file_atomic(dir / fmt::format("{}_best.json", file_stem(batch)), j.dump(1) + "\n");
  write_file_atomic(dir / fmt::format("{}_best.svg", file_stem(batch)), render_svg(schedule, instance));
}

void require_feasible(const Batch& batch, const Instance& instance) {
  for (const RunReport& r : batch.reports) {
    const auto violations = check_feasibility(r.best.genotype, instance);
    if (!violations.empty())
      throw InfeasibleError(violations.front().index, "run produced an infeasible solution: " + violations.front().message);
  }
}

struct Loaded {
  Instance instance;
  EAConfig config;
};

std::optional<Loaded> load_inputs(const fs::path& path, const CommonOptions& common, std::ostream& err) {
  try {
    if (!fs::exists(path)) {
      err << fmt::format("error: instance file '{}' does not exist\n", path.string());
      return std::nullopt;
    }
    return Loaded{load_instance(path, overrides_for(common)), base_config(common)};
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return std::nullopt;
  }
}

struct Comparison {
  Batch vrp;
  Batch vrpdi;
  ComparisonResult time;      // VRP against VRPDi
  ComparisonResult distance;  // VRP against VRPDi
  double time_improvement = 0.0;
  double distance_improvement = 0.0;
};

Comparison compare_modes(const Instance& instance, const EAConfig& config, int runs, int jobs, double alpha,
                         bool self_compare) {
  Comparison c;
  c.vrp = run_batch(instance, config, self_compare ? Mode::VRPDi : Mode::VRP, runs, jobs);
  EAConfig second = config;
  // an independent seed block so a self comparison is not trivially identical
  if (self_compare) second.seed = config.seed + static_cast<std::uint64_t>(runs);
  c.vrpdi = run_batch(instance, second, Mode::VRPDi, runs, jobs);
  const auto tv = final_times(c.vrp), tn = final_times(c.vrpdi);
  const auto dv = final_distances(c.vrp), dn = final_distances(c.vrpdi);
  c.time = mann_whitney_u(tv, tn, alpha, Metric::Time);
  c.distance = mann_whitney_u(dv, dn, alpha, Metric::Distance);
  c.time_improvement = improvement(c.vrp.summary.best_time, c.vrpdi.summary.best_time);
  c.distance_improvement = improvement(c.vrp.summary.best_distance, c.vrpdi.summary.best_distance);
  return c;
}

Verdict mirrored(Verdict v) { return v == Verdict::Win ? Verdict::Loss : v == Verdict::Loss ? Verdict::Win : Verdict::Draw; }

}  // namespace

Batch run_batch(const Instance& instance, const EAConfig& base, Mode mode, int runs, int jobs) {
  Batch batch;
  batch.dataset = instance.name().empty() ? "instance" : instance.name();
  batch.mode = mode;
  batch.seed = base.seed;
  batch.reports.resize(static_cast<std::size_t>(runs));

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(runs));
  auto one = [&](std::size_t r) {
    try {
      EAConfig config = base;
      config.seed = base.seed + r;
      batch.reports[r] = run(instance, config, mode).second;
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };
  const auto workers = static_cast<std::size_t>(std::min(std::max(jobs, 1), runs));
  if (workers <= 1) {
    for (std::size_t r = 0; r < static_cast<std::size_t>(runs); ++r) one(r);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < static_cast<std::size_t>(runs); r += workers) one(r);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  batch.summary = summarize(batch.reports);
  return batch;
}

std::string summary_row(const Batch& batch) {
  const RunSummary& s = batch.summary;
  return fmt::format("{},{},{},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.2f},{}", batch.dataset,
                     to_string(batch.mode), batch.reports.size(), s.best_time, s.mean_time, s.stddev_time,
                     s.best_distance, s.mean_distance, s.stddev_distance, s.mean_cpu_minutes, batch.seed);
}

std::optional<fs::path> find_dataset(const fs::path& dir, const std::string& name) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return std::nullopt;
  const std::string wanted = lower(name);
  std::optional<fs::path> found;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (lower(p.stem().string()) == wanted || lower(p.filename().string()) == wanted) {
      if (!found || p < *found) found = p;
    }
  }
  return found;
}

int cmd_solve(const SolveOptions& options, std::ostream& out, std::ostream& err) {
  auto inputs = load_inputs(options.instance, options.common, err);
  if (!inputs) return kUsage;
  const fs::path dir = options.common.out.value_or("out");
  try {
    Batch batch = run_batch(inputs->instance, inputs->config, options.mode, options.common.runs, options.common.jobs);
    require_feasible(batch, inputs->instance);
    write_batch_artifacts(batch, inputs->instance, dir);
    const std::string csv = std::string(kSummaryHeader) + "\n" + summary_row(batch) + "\n";
    write_file_atomic(dir / "summary.csv", csv);
    out << csv;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolveFailed;
  }
  return kOk;
}

int cmd_compare(const CompareOptions& options, std::ostream& out, std::ostream& err) {
  auto inputs = load_inputs(options.instance, options.common, err);
  if (!inputs) return kUsage;
  try {
    const Comparison c = compare_modes(inputs->instance, inputs->config, options.common.runs, options.common.jobs,
                                       options.alpha, options.self_compare);
    require_feasible(c.vrp, inputs->instance);
    require_feasible(c.vrpdi, inputs->instance);

    std::string csv = std::string(kSummaryHeader) + "\n" + summary_row(c.vrp) + "\n" + summary_row(c.vrpdi) + "\n";
    const std::string first = options.self_compare ? "vrpdi-a" : "vrp";
    const std::string second = options.self_compare ? "vrpdi-b" : "vrpdi";
    std::string report;
    report += csv;
    report += fmt::format("time improvement: {:.2f}%\n", c.time_improvement);
    report += fmt::format("distance improvement: {:.2f}%\n", c.distance_improvement);
    report += fmt::format("mann-whitney time: U={:.1f} p={:.6f} {} {}\n", c.time.u_statistic, c.time.p_value,
                          second, to_string(mirrored(c.time.verdict)));
    report += fmt::format("mann-whitney distance: U={:.1f} p={:.6f} {} {}\n", c.distance.u_statistic,
                          c.distance.p_value, second, to_string(mirrored(c.distance.verdict)));
    const std::vector<ComparisonResult> results{c.time, c.distance};
    const auto rows = tally_comparisons(first, second, results);
    report += tally_text(rows);
    out << report;

    if (options.common.out) {
      const fs::path dir = *options.common.out;
      write_batch_artifacts(c.vrp, inputs->instance, dir / first);
      write_batch_artifacts(c.vrpdi, inputs->instance, dir / second);
      write_file_atomic(dir / "summary.csv", csv);
      write_file_atomic(dir / "hypothesis.csv", tally_csv(rows));
      write_file_atomic(dir / "compare.txt", report);
    }
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolveFailed;
  }
  return kOk;
}

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  if (!fs::is_directory(options.dataset_dir, ec)) {
    err << fmt::format("error: dataset directory '{}' does not exist\n", options.dataset_dir.string());
    return kUsage;
  }
  EAConfig config;
  try {
    config = base_config(options.common);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::vector<std::string> missing;
  std::string csv;
  std::string text;
  int ran = 0;
  try {
    if (options.table == BenchTable::VrpVsVrpdi) {
      csv = "dataset,nodes,vrp_time,vrp_distance,vrp_cpu,vrpdi_time,vrpdi_distance,vrpdi_cpu,time_improvement,"
            "distance_improvement,time_p_value,ref_vrp_time,ref_vrp_distance,ref_vrpdi_time,ref_vrpdi_distance\n";
      text = fmt::format("{:<16} {:>9} {:>9} {:>9} {:>9} {:>8} {:>8} | {:>9} {:>9}\n", "dataset", "vrp_time",
                         "vrp_dist", "vrpdi_t", "vrpdi_d", "time%", "dist%", "ref_vrp", "ref_vrpdi");
      std::vector<ComparisonResult> tests;
      for (const auto& ref : vrp_vs_vrpdi_reference()) {
        const auto path = find_dataset(options.dataset_dir, ref.dataset);
        if (!path) {
          missing.emplace_back(ref.dataset);
          continue;
        }
        InstanceOverrides o = overrides_for(options.common);
        const Instance instance = load_instance(*path, o);
        const Comparison c =
            compare_modes(instance, config, options.common.runs, options.common.jobs, 0.05, /*self_compare=*/false);
        tests.push_back(c.time);
        tests.push_back(c.distance);
        const RunSummary& v = c.vrp.summary;
        const RunSummary& d = c.vrpdi.summary;
        csv += fmt::format("{},{},{:.4f},{:.4f},{:.2f},{:.4f},{:.4f},{:.2f},{:.2f},{:.2f},{:.6f},{},{},{},{}\n",
                           ref.dataset, instance.customer_count(), v.best_time, v.best_distance, v.mean_cpu_minutes,
                           d.best_time, d.best_distance, d.mean_cpu_minutes, c.time_improvement,
                           c.distance_improvement, c.time.p_value, ref.vrp_time, ref.vrp_distance, ref.vrpdi_time,
                           ref.vrpdi_distance);
        text += fmt::format("{:<16} {:>9.2f} {:>9.2f} {:>9.2f} {:>9.2f} {:>7.1f}% {:>7.1f}% | {:>9.2f} {:>9.2f}\n",
                            ref.dataset, v.best_time, v.best_distance, d.best_time, d.best_distance,
                            c.time_improvement, c.distance_improvement, ref.vrp_time, ref.vrpdi_time);
        ++ran;
      }
      if (ran > 0) {
        const auto rows = tally_comparisons("VRP", "VRPDi", tests);
        text += "\n" + tally_text(rows);
        if (options.common.out) write_file_atomic(*options.common.out / "bench_hypothesis.csv", tally_csv(rows));
      }
    } else {
      csv = "dataset,nodes,max_distance,max_drone_distance,pairs,best_time,mean_time,ref_max_distance,"
            "ref_max_drone_distance,ref_ea_time,ref_nnhis_time\n";
      text = fmt::format("{:<22} {:>6} {:>9} {:>9} {:>5} {:>9} | {:>9} {:>9}\n", "dataset", "nodes", "max_dist",
                         "drone_max", "pairs", "best", "ref_ea", "ref_nnhis");
      for (const auto& ref : max_drone_reference()) {
        const auto path = find_dataset(options.dataset_dir, ref.dataset);
        if (!path) {
          missing.emplace_back(ref.dataset);
          continue;
        }
        InstanceOverrides o = overrides_for(options.common);
        o.max_drone_distance_fraction = options.common.max_drone_fraction.value_or(0.75);
        Instance instance = load_instance(*path, o);
        EAConfig cfg = config;
        const int pairs = options.common.pairs.value_or(ref.pairs);
        cfg.pair_count_override = pairs;
        const int needed = (instance.customer_count() + pairs - 1) / pairs;
        if (needed > instance.capacity()) {
          Instance::Params p = instance.params();
          p.capacity = needed;
          instance = instance.with_params(p);
        }
        const Batch b = run_batch(instance, cfg, Mode::VRPDi, options.common.runs, options.common.jobs);
        require_feasible(b, instance);
        const double max_d = DistanceMatrix(instance).max_entry();
        csv += fmt::format("{},{},{:.2f},{:.2f},{},{:.4f},{:.4f},{},{},{},{}\n", ref.dataset,
                           instance.customer_count(), max_d, *instance.max_drone_distance(), pairs,
                           b.summary.best_time, b.summary.mean_time, ref.max_distance, ref.max_drone_distance,
                           ref.ea_time, ref.nnhis_time);
        text += fmt::format("{:<22} {:>6} {:>9.2f} {:>9.2f} {:>5} {:>9.2f} | {:>9.2f} {:>9.2f}\n", ref.dataset,
                            instance.customer_count(), max_d, *instance.max_drone_distance(), pairs,
                            b.summary.best_time, ref.ea_time, ref.nnhis_time);
        ++ran;
      }
    }
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolveFailed;
  }

  for (const auto& name : missing) err << fmt::format("missing dataset: {}\n", name);
  if (ran == 0) {
    err << fmt::format("error: no benchmark datasets found in '{}'\n", options.dataset_dir.string());
    return kUsage;
  }
  out << text;
  if (options.common.out) {
    const std::string name =
        options.table == BenchTable::VrpVsVrpdi ? "bench_vrp_vs_vrpdi.csv" : "bench_max_drone_distance.csv";
    try {
      write_file_atomic(*options.common.out / name, csv);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }
  }
  return kOk;
}

}  // namespace vrpdi::cli
