#pragma once

#include <span>
#include <string>
#include <vector>

#include "vrpdi/ea.hpp"

namespace vrpdi {

enum class Metric { Time, Distance };
enum class Verdict { Win, Draw, Loss };

std::string to_string(Metric m);
std::string to_string(Verdict v);

struct ComparisonResult {
  Metric metric = Metric::Time;
  double u_statistic = 0.0;  // U of the first sample
  double p_value = 1.0;
  Verdict verdict = Verdict::Draw;
};

// Two-sided Mann-Whitney U test, normal approximation with tie and continuity
// corrections. Lower values are better: Win means sample_a is significantly
// smaller than sample_b.
ComparisonResult mann_whitney_u(std::span<const double> sample_a, std::span<const double> sample_b,
                                double alpha = 0.05, Metric metric = Metric::Time);

double mean(std::span<const double> values);
// Sample (N - 1) standard deviation; 0 for a single value.
double sample_stddev(std::span<const double> values);

struct RunSummary {
  double best_time = 0.0;
  double best_distance = 0.0;  // truck distance of the best-time run
  double mean_time = 0.0;
  double stddev_time = 0.0;
  double mean_distance = 0.0;
  double stddev_distance = 0.0;
  double mean_cpu_minutes = 0.0;
};

// Statistics over each run's final incumbent. Needs at least two reports.
RunSummary summarize_runs(std::span<const RunReport> reports);

struct Tally {
  int win = 0;
  int draw = 0;
  int loss = 0;

  void add(Verdict v);
};

struct TallyRow {
  std::string variant;
  Tally time;
  Tally distance;
};

// Rows for `first` and `second` from comparisons of first against second;
// the second row mirrors the first.
std::vector<TallyRow> tally_comparisons(const std::string& first, const std::string& second,
                                        std::span<const ComparisonResult> results);

std::string tally_csv(std::span<const TallyRow> rows);
std::string tally_text(std::span<const TallyRow> rows);

}  // namespace vrpdi
