#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"

using namespace lvs;
using doctest::Approx;

namespace {

// H(X|Y) straight from the 2x2 joint table.
double joint_table_conditional_entropy(double p0, double alpha, double beta) {
  const double joint[2][2] = {{p0 * (1 - alpha), p0 * alpha},
                              {(1 - p0) * (1 - beta), (1 - p0) * beta}};
  double h = 0.0;
  for (int y = 0; y < 2; ++y) {
    const double py = joint[0][y] + joint[1][y];
    for (int x = 0; x < 2; ++x) {
      if (joint[x][y] > 0) h -= joint[x][y] * std::log2(joint[x][y] / py);
    }
  }
  return h;
}

double tail_by_simpson(double x) {
  const double hi = x + 12.0;
  const int n = 20000;
  const double h = (hi - x) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = x + i * h;
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    s += w * std::exp(-0.5 * t * t);
  }
  return s * h / 3.0 / std::sqrt(2 * std::numbers::pi);
}

}  // namespace

TEST_SUITE("infotheory") {

TEST_CASE("Q function") {
  CHECK(q_function(0.0) == Approx(0.5));
  for (double x : {0.5, 1.0, 2.0}) CHECK(q_function(x) + q_function(-x) == Approx(1.0));
  CHECK(std::abs(q_function(1.6449) - 0.05) < 1e-4);
  CHECK(std::abs(q_function(1.6449) - tail_by_simpson(1.6449)) < 1e-8);
  for (double x = -5; x < 5; x += 0.25) CHECK(q_function(x + 0.25) < q_function(x));
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == Approx(1.0));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(std::abs(binary_entropy(0.9) - 0.4690) < 1e-4);
}

TEST_CASE("conditional entropy, mutual information, NMI") {
  const PriorParams p{0.9};
  CHECK(conditional_entropy(p, {0.0, 1.0}) == Approx(0.0));
  for (double a : {0.0, 0.1, 0.5, 1.0}) {
    CHECK(conditional_entropy(p, {a, a}) == Approx(binary_entropy(0.9)));
    CHECK(mutual_information(p, {a, a}) == 0.0);
    CHECK(nmi(p, {a, a}) == 0.0);
  }
  CHECK(std::abs(conditional_entropy(p, {0.04, 0.90}) -
                 joint_table_conditional_entropy(0.9, 0.04, 0.90)) < 1e-12);
  const double mi = binary_entropy(0.9) - joint_table_conditional_entropy(0.9, 0.04, 0.90);
  CHECK(std::abs(mutual_information(p, {0.04, 0.90}) - mi) < 1e-12);
  CHECK(std::abs(nmi(p, {0.04, 0.90}) - mi / binary_entropy(0.9)) < 1e-12);
  CHECK(nmi(p, {0.0, 1.0}) == Approx(1.0));
  CHECK_THROWS_AS(conditional_entropy(p, {-0.1, 0.5}), std::invalid_argument);

  for (double p0 : {0.1, 0.5, 0.93}) {
    for (double a = 0; a <= 1.0; a += 0.125) {
      for (double b = 0; b <= 1.0; b += 0.125) {
        const double h = conditional_entropy({p0}, {a, b});
        CHECK(h >= -1e-15);
        CHECK(h <= binary_entropy(p0) + 1e-12);
        CHECK(std::abs(h - joint_table_conditional_entropy(p0, a, b)) < 1e-12);
        const double n = nmi({p0}, {a, b});
        CHECK(n >= 0.0);
        CHECK(n <= 1.0);
      }
    }
  }
}

TEST_CASE("misclassification and Bayes cost") {
  const PriorParams p{0.9};
  CHECK(misclassification(p, {0.0, 1.0}) == 0.0);
  CHECK(misclassification(p, {1.0, 0.0}) == Approx(1.0));
  CHECK(misclassification(p, {0.04, 0.90}) == Approx(0.9 * 0.04 + 0.1 * 0.1));
  CHECK(misclassification(p, {0.04, 0.90}) == Approx(0.046));
  CHECK(bayes_cost(p, {0.04, 0.9}, 2.0, 3.0) == Approx(0.9 * 0.04 * 2 + 0.1 * 0.1 * 3));
  CHECK_THROWS(Objective::bayes(0.0, 1.0).validate());
}

TEST_CASE("mutual information increases with the detection rate") {
  // Dense grid over (alpha, beta, P0): strictly increasing in beta on (alpha, 1].
  int violations = 0;
  for (double p0 = 0.05; p0 < 1.0; p0 += 0.05) {
    for (double a = 0.0; a < 1.0; a += 0.02) {
      double prev = mutual_information({p0}, {a, a});
      for (double b = a + 0.01; b <= 1.0 + 1e-12; b += 0.01) {
        const double v = mutual_information({p0}, {a, std::min(b, 1.0)});
        if (!(v > prev)) ++violations;
        prev = v;
      }
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("far-field closed-form rates") {
  const ChannelParams p;
  const auto g = test::random_geometry(41);
  const auto law = ffa_statistic_law(g, p);
  CHECK(law.h1_mean == Approx(0.0).scale(1.0));
  CHECK(ffa_alpha(law.h0_mean, g, p) == Approx(0.5));
  CHECK(ffa_beta(0.0, g, p) == Approx(0.5));
  double pa = 1.0, pb = 1.0;
  for (double gamma = law.h0_mean - 4 * law.stddev; gamma < 4 * law.stddev;
       gamma += 0.1 * law.stddev) {
    const double a = ffa_alpha(gamma, g, p);
    const double b = ffa_beta(gamma, g, p);
    CHECK(a < pa);
    CHECK(b < pb);
    CHECK(b >= a);
    CHECK(a > 0.0);
    CHECK(b < 1.0);
    pa = a;
    pb = b;
  }
  CHECK_THROWS_AS(ffa_statistic_law(test::cross_geometry(), p), DegenerateRuleError);
}

TEST_CASE("closed-form rates match simulation on a 50-point grid") {
  ExperimentConfig c;
  c.rule = StatisticKind::kFfaLinear;
  c.seed = 7;
  const StatisticKind kinds[] = {StatisticKind::kFfaLinear};
  const auto stats = simulate_statistics(c, kinds);
  const auto g = make_geometry(c.geometry, c.seed);
  const auto law = ffa_statistic_law(g, c.channel);
  const auto grid = uniform_grid(law.h0_mean - 3 * law.stddev, law.h1_mean + 3 * law.stddev, 50);
  const auto a = exceedance_rates(stats.h0[0], grid);
  const auto b = exceedance_rates(stats.h1[0], grid);
  const double n = static_cast<double>(c.trials);
  int outside = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double ea = ffa_alpha(grid[j], g, c.channel);
    const double eb = ffa_beta(grid[j], g, c.channel);
    if (std::abs(a[j] - ea) > 3 * std::sqrt(ea * (1 - ea) / n)) ++outside;
    if (std::abs(b[j] - eb) > 3 * std::sqrt(eb * (1 - eb) / n)) ++outside;
  }
  // 100 comparisons; at 3 SE an occasional miss is expected.
  CHECK(outside <= 2);
}

TEST_CASE("threshold optimisation") {
  const auto grid = default_threshold_grid();
  CHECK(grid.size() == 201);
  CHECK(grid.front() == -25.0);
  CHECK(grid.back() == 25.0);

  const ChannelParams p;
  const auto g = test::random_geometry(42);
  const RateCurve curve = [&](double t) { return ffa_rates_at(t, g, p); };

  SUBCASE("equal priors: NMI and misclassification both optimal at ln T = 0") {
    const PriorParams half{0.5};
    const auto n = optimize_threshold(curve, grid, half, Objective::nmi());
    const auto e = optimize_threshold(curve, grid, half, Objective::misclassification());
    CHECK(std::abs(n.optimal_log_threshold) <= 0.25);
    CHECK(std::abs(e.optimal_log_threshold) <= 0.25);
  }

  SUBCASE("result invariants") {
    const auto r = optimize_threshold(curve, grid, PriorParams{0.9}, Objective::nmi());
    for (std::size_t j = 1; j < r.curve.size(); ++j) {
      CHECK(r.curve[j].log_threshold > r.curve[j - 1].log_threshold);
    }
    const auto& row = r.curve[r.optimal_index];
    CHECK(row.log_threshold == r.optimal_log_threshold);
    CHECK(row.nmi == Approx(r.objective_value));
    for (const auto& x : r.curve) CHECK(x.nmi <= r.objective_value + 1e-12);
  }

  SUBCASE("Bayes-optimal threshold is ln(P0/P1)") {
    for (double p0 : {0.5, 0.7, 0.9, 0.99}) {
      const auto e = optimize_threshold(curve, grid, PriorParams{p0},
                                        Objective::misclassification());
      CHECK(e.optimal_log_threshold == Approx(std::log(p0 / (1 - p0))).epsilon(1e-5));
    }
  }

  SUBCASE("perfectly separating curve") {
    const RateCurve perfect = [](double t) {
      return (t > -2 && t < 3) ? RatePair{0.0, 1.0} : RatePair{0.5, 0.5};
    };
    const auto r = optimize_threshold(perfect, grid, PriorParams{0.9}, Objective::nmi());
    CHECK(r.objective_value == Approx(1.0));
    CHECK(r.optimal_log_threshold > -2);
    CHECK(r.optimal_log_threshold < 3);
  }

  SUBCASE("tabulated curves use the grid argmax only") {
    std::vector<RatePair> rates;
    for (double t : grid) rates.push_back(curve(t));
    const auto r = optimize_threshold(grid, rates, PriorParams{0.9}, Objective::nmi());
    CHECK(r.curve.size() == grid.size());
    CHECK(std::find(grid.begin(), grid.end(), r.optimal_log_threshold) != grid.end());
  }

  SUBCASE("bad input") {
    std::vector<double> empty;
    CHECK_THROWS_AS(optimize_threshold(curve, empty, PriorParams{}, Objective::nmi()),
                    std::invalid_argument);
    std::vector<double> unsorted = {0.0, -1.0};
    CHECK_THROWS_AS(optimize_threshold(curve, unsorted, PriorParams{}, Objective::nmi()),
                    std::invalid_argument);
  }
}

TEST_CASE("likelihood ratio dominates the nearest-station residual") {
  // Far-field threat, 20 geometries; each rule at its own best threshold.
  int checked = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    ExperimentConfig c;
    c.seed = 500 + s;
    c.trials = 4000;
    const auto pair = nmi_sweep_comparison(c, StatisticKind::kLrtFfa,
                                           StatisticKind::kNearestResidual);
    const auto lrt = optimize_threshold(pair.first.thresholds(), pair.first.rates(), c.priors,
                                        Objective::nmi());
    const auto alt = optimize_threshold(pair.second.thresholds(), pair.second.rates(),
                                        c.priors, Objective::nmi());
    const double se = pair.first.rows[lrt.optimal_index].nmi_se +
                      pair.second.rows[alt.optimal_index].nmi_se;
    CHECK(lrt.objective_value >= alt.objective_value - 2.0 * se);
    ++checked;
  }
  CHECK(checked == 20);
}

}
