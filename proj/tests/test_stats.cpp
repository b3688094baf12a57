#include <doctest.h>

#include <cmath>
#include <random>

#include "vrpdi/errors.hpp"
#include "vrpdi/stats.hpp"

using namespace vrpdi;

namespace {

// Exact null distribution of U for samples of size na and nb without ties:
// counts[u] = number of rank arrangements giving U = u.
std::vector<double> exact_u_counts(int na, int nb) {
  // f[i][j][u]: arrangements of i a's and j b's with U = u
  const int max_u = na * nb;
  std::vector<std::vector<std::vector<double>>> f(
      static_cast<std::size_t>(na) + 1,
      std::vector<std::vector<double>>(static_cast<std::size_t>(nb) + 1, std::vector<double>(static_cast<std::size_t>(max_u) + 1, 0.0)));
  for (int j = 0; j <= nb; ++j) f[0][static_cast<std::size_t>(j)][0] = 1.0;
  for (int i = 1; i <= na; ++i) {
    f[static_cast<std::size_t>(i)][0][0] = 1.0;
    for (int j = 1; j <= nb; ++j) {
      for (int u = 0; u <= max_u; ++u) {
        // largest element is an a (beats all j b's) or a b
        double v = f[static_cast<std::size_t>(i)][static_cast<std::size_t>(j) - 1][static_cast<std::size_t>(u)];
        if (u >= j) v += f[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j)][static_cast<std::size_t>(u - j)];
        f[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(u)] = v;
      }
    }
  }
  return f[static_cast<std::size_t>(na)][static_cast<std::size_t>(nb)];
}

double exact_two_sided_p(int na, int nb, double u) {
  const auto counts = exact_u_counts(na, nb);
  const double mu = na * nb / 2.0;
  double total = 0.0, extreme = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    total += counts[k];
    if (std::abs(double(k) - mu) >= std::abs(u - mu) - 1e-12) extreme += counts[k];
  }
  return std::min(1.0, extreme / total);
}

// Sample A whose rank-based U equals `u` against B = {0.5, 1.5, ...}.
std::pair<std::vector<double>, std::vector<double>> samples_with_u(int na, int nb, int u) {
  std::vector<double> b;
  for (int j = 0; j < nb; ++j) b.push_back(j + 0.5);
  // each a value beats some number of b's; distribute u over the a's
  std::vector<double> a;
  int left = u;
  for (int i = 0; i < na; ++i) {
    const int beats = std::min(nb, left);
    left -= beats;
    a.push_back(beats + 0.25 + 0.01 * i);
  }
  return {a, b};
}

}  // namespace

TEST_CASE("exact reference for complete separation at n = 3") {
  // all 20 arrangements; U = 0 occurs once, U = 9 once
  const auto counts = exact_u_counts(3, 3);
  double total = 0.0;
  for (double c : counts) total += c;
  CHECK(total == 20.0);
  CHECK(counts[0] == 1.0);
  CHECK(exact_two_sided_p(3, 3, 0.0) == doctest::Approx(0.1));
}

TEST_CASE("complete separation") {
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  const auto r = mann_whitney_u(a, b, 0.05, Metric::Time);
  CHECK(r.u_statistic == 0.0);
  CHECK(std::abs(r.p_value - 0.1) <= 0.02);
  CHECK(r.verdict == Verdict::Draw);
  CHECK(r.metric == Metric::Time);

  std::vector<double> big_a, big_b;
  for (int i = 0; i < 30; ++i) {
    big_a.push_back(i);
    big_b.push_back(100 + i);
  }
  const auto win = mann_whitney_u(big_a, big_b);
  CHECK(win.verdict == Verdict::Win);
  CHECK(win.p_value < 1e-6);
  CHECK(mann_whitney_u(big_b, big_a).verdict == Verdict::Loss);
}

TEST_CASE("identical samples draw") {
  const std::vector<double> a{3, 1, 4, 1, 5, 9, 2, 6};
  const auto r = mann_whitney_u(a, a);
  CHECK(r.verdict == Verdict::Draw);
  CHECK(r.p_value == doctest::Approx(1.0));
  const std::vector<double> flat(10, 2.5);
  CHECK(mann_whitney_u(flat, flat).p_value == 1.0);
}

TEST_CASE("ties use average ranks") {
  // a = {1, 2, 2}, b = {2, 3}: ranks 1, 3, 3 | 3, 5 -> R_a = 7, U_a = 1
  const auto r = mann_whitney_u(std::vector<double>{1, 2, 2}, std::vector<double>{2, 3});
  CHECK(r.u_statistic == doctest::Approx(1.0));
}

TEST_CASE("empty samples are rejected") {
  const std::vector<double> some{1.0}, none;
  CHECK_THROWS_AS(mann_whitney_u(some, none), ValidationError);
  CHECK_THROWS_AS(mann_whitney_u(none, some), ValidationError);
}

TEST_CASE("swapping the samples mirrors the verdict") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    const int na = 2 + t % 30, nb = 2 + (t * 7) % 30;
    const double shift = (t % 5) * 0.4;
    std::vector<double> a, b;
    for (int i = 0; i < na; ++i) a.push_back(std::round(noise(rng) * 4) / 4);
    for (int i = 0; i < nb; ++i) b.push_back(std::round((noise(rng) + shift) * 4) / 4);
    const auto ab = mann_whitney_u(a, b);
    const auto ba = mann_whitney_u(b, a);
    CHECK(ab.p_value == doctest::Approx(ba.p_value).epsilon(1e-12));
    CHECK(ab.u_statistic + ba.u_statistic == doctest::Approx(double(na) * nb));
    const Verdict mirrored = ab.verdict == Verdict::Win    ? Verdict::Loss
                             : ab.verdict == Verdict::Loss ? Verdict::Win
                                                           : Verdict::Draw;
    CHECK(ba.verdict == mirrored);
    // draw exactly when not significant
    CHECK((ab.verdict == Verdict::Draw) == (ab.p_value >= 0.05));
  }
}

TEST_CASE("normal approximation tracks the exact test for 5 to 8 per sample") {
  double worst = 0.0;
  for (int na = 5; na <= 8; ++na) {
    for (int nb = 5; nb <= 8; ++nb) {
      for (int u = 0; u <= na * nb; ++u) {
        const auto [a, b] = samples_with_u(na, nb, u);
        const auto r = mann_whitney_u(a, b);
        REQUIRE(r.u_statistic == doctest::Approx(u));
        const double exact = exact_two_sided_p(na, nb, u);
        worst = std::max(worst, std::abs(r.p_value - exact));
        CHECK(std::abs(r.p_value - exact) <= 0.02);
      }
    }
  }
  MESSAGE("largest deviation from the exact p-value: " << worst);
}

TEST_CASE("summary statistics") {
  const std::vector<double> v{10, 20};
  CHECK(mean(v) == 15.0);
  CHECK(sample_stddev(v) == doctest::Approx(7.0710678118654755));
  const std::vector<double> same{37.63, 37.63, 37.63};
  CHECK(sample_stddev(same) == 0.0);
  CHECK(sample_stddev(std::vector<double>{4.0}) == 0.0);
  CHECK_THROWS(mean(std::vector<double>{}));

  auto report = [](double time, double dist, double secs) {
    RunReport r;
    r.best.objective = time;
    r.best.truck_distance = dist;
    r.elapsed_seconds = secs;
    return r;
  };
  const std::vector<RunReport> runs{report(10, 100, 60), report(20, 90, 120), report(15, 80, 180)};
  const RunSummary s = summarize_runs(runs);
  CHECK(s.best_time == 10.0);
  CHECK(s.best_distance == 100.0);
  CHECK(s.mean_time == 15.0);
  CHECK(s.stddev_time == doctest::Approx(5.0));
  CHECK(s.mean_distance == 90.0);
  CHECK(s.stddev_distance == doctest::Approx(10.0));
  CHECK(s.mean_cpu_minutes == doctest::Approx(2.0));

  const std::vector<RunReport> twins{report(5, 5, 1), report(5, 5, 1)};
  CHECK(summarize_runs(twins).stddev_time == 0.0);
  CHECK_THROWS_AS(summarize_runs(std::vector<RunReport>{report(1, 1, 1)}), ValidationError);
}

TEST_CASE("win/draw/loss tallies") {
  std::vector<ComparisonResult> results;
  for (int i = 0; i < 3; ++i) results.push_back({Metric::Time, 0.0, 0.01, Verdict::Loss});
  results.push_back({Metric::Distance, 0.0, 0.3, Verdict::Draw});
  results.push_back({Metric::Distance, 0.0, 0.01, Verdict::Win});
  const auto rows = tally_comparisons("VRP", "VRPDi", results);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].variant == "VRP");
  CHECK(rows[0].time.loss == 3);
  CHECK(rows[1].time.win == 3);
  CHECK(rows[1].time.draw == 0);
  CHECK(rows[0].distance.win == 1);
  CHECK(rows[0].distance.draw == 1);
  CHECK(rows[1].distance.loss == 1);

  CHECK(tally_csv(rows) ==
        "variant,time_win,time_draw,time_loss,distance_win,distance_draw,distance_loss\n"
        "VRP,0,0,3,1,1,0\n"
        "VRPDi,3,0,0,0,1,1\n");
  const std::string text = tally_text(rows);
  CHECK(text.find("Win") != std::string::npos);
  CHECK(text.find("VRPDi |     3     0     0 |") != std::string::npos);
}
