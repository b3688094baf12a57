#include "vrpdi/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "vrpdi/errors.hpp"

namespace vrpdi {

std::string to_string(Metric m) { return m == Metric::Time ? "time" : "distance"; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Win: return "win";
    case Verdict::Draw: return "draw";
    case Verdict::Loss: return "loss";
  }
  return "unknown";
}

ComparisonResult mann_whitney_u(std::span<const double> sample_a, std::span<const double> sample_b, double alpha,
                                Metric metric) {
  if (sample_a.empty() || sample_b.empty()) throw ValidationError("Mann-Whitney U needs two non-empty samples");
  const std::size_t na = sample_a.size();
  const std::size_t nb = sample_b.size();
  const std::size_t n = na + nb;

  struct Item {
    double value;
    bool from_a;
  };
  std::vector<Item> items;
  items.reserve(n);
  for (double v : sample_a) items.push_back({v, true});
  for (double v : sample_b) items.push_back({v, false});
  std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.value < y.value; });

  // Average ranks over ties.
  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && items[j].value == items[i].value) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (items[k].from_a) rank_sum_a += avg_rank;
    }
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }

  const double dna = static_cast<double>(na);
  const double dnb = static_cast<double>(nb);
  const double dn = static_cast<double>(n);
  ComparisonResult result;
  result.metric = metric;
  result.u_statistic = rank_sum_a - dna * (dna + 1.0) / 2.0;

  const double mu = dna * dnb / 2.0;
  const double variance = dn > 1.0 ? dna * dnb / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0))) : 0.0;
  if (variance <= 0.0) {
    result.p_value = 1.0;
  } else {
    const double z = std::max(std::abs(result.u_statistic - mu) - 0.5, 0.0) / std::sqrt(variance);
    result.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  }

  if (result.p_value >= alpha) {
    result.verdict = Verdict::Draw;
  } else {
    result.verdict = result.u_statistic < mu ? Verdict::Win : Verdict::Loss;
  }
  return result;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw ValidationError("mean of no values");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double shift = values.front();
  double sum = 0.0, ss = 0.0;
  for (double v : values) {
    sum += v - shift;
    ss += (v - shift) * (v - shift);
  }
  const double n = static_cast<double>(values.size());
  return std::sqrt(std::max(0.0, (ss - sum * sum / n) / (n - 1.0)));
}

RunSummary summarize_runs(std::span<const RunReport> reports) {
  if (reports.size() < 2) throw ValidationError("summarising needs at least two runs");
  std::vector<double> times;
  std::vector<double> distances;
  std::vector<double> cpu;
  for (const RunReport& r : reports) {
    times.push_back(r.best.objective);
    distances.push_back(r.best.truck_distance);
    cpu.push_back(r.elapsed_seconds / 60.0);
  }
  RunSummary s;
  const auto best = std::min_element(times.begin(), times.end()) - times.begin();
  s.best_time = times[static_cast<std::size_t>(best)];
  s.best_distance = distances[static_cast<std::size_t>(best)];
  s.mean_time = mean(times);
  s.stddev_time = sample_stddev(times);
  s.mean_distance = mean(distances);
  s.stddev_distance = sample_stddev(distances);
  s.mean_cpu_minutes = mean(cpu);
  return s;
}

void Tally::add(Verdict v) {
  switch (v) {
    case Verdict::Win: ++win; break;
    case Verdict::Draw: ++draw; break;
    case Verdict::Loss: ++loss; break;
  }
}

std::vector<TallyRow> tally_comparisons(const std::string& first, const std::string& second,
                                        std::span<const ComparisonResult> results) {
  TallyRow a{first, {}, {}};
  TallyRow b{second, {}, {}};
  auto mirror = [](Verdict v) {
    return v == Verdict::Win ? Verdict::Loss : v == Verdict::Loss ? Verdict::Win : Verdict::Draw;
  };
  for (const ComparisonResult& r : results) {
    Tally& ta = r.metric == Metric::Time ? a.time : a.distance;
    Tally& tb = r.metric == Metric::Time ? b.time : b.distance;
    ta.add(r.verdict);
    tb.add(mirror(r.verdict));
  }
  return {a, b};
}

std::string tally_csv(std::span<const TallyRow> rows) {
  std::string out = "variant,time_win,time_draw,time_loss,distance_win,distance_draw,distance_loss\n";
  for (const TallyRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.variant, r.time.win, r.time.draw, r.time.loss, r.distance.win,
                       r.distance.draw, r.distance.loss);
  }
  return out;
}

std::string tally_text(std::span<const TallyRow> rows) {
  std::size_t width = 7;
  for (const TallyRow& r : rows) width = std::max(width, r.variant.size());
  std::string out = fmt::format("{:>{}} | {:^17} | {:^17}\n", "", width, "Time", "Distance");
  out += fmt::format("{:>{}} | {:>5} {:>5} {:>5} | {:>5} {:>5} {:>5}\n", "", width, "Win", "Draw", "Loss", "Win",
                     "Draw", "Loss");
  out += std::string(width + 42, '-') + "\n";
  for (const TallyRow& r : rows) {
    out += fmt::format("{:>{}} | {:>5} {:>5} {:>5} | {:>5} {:>5} {:>5}\n", r.variant, width, r.time.win, r.time.draw,
                       r.time.loss, r.distance.win, r.distance.draw, r.distance.loss);
  }
  return out;
}

}  // namespace vrpdi
