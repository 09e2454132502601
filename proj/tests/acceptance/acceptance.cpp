// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "lvs/simulator.hpp"
#include "scenarios.hpp"

using namespace lvs;
using namespace lvs::cli;

namespace {

constexpr double kGridStep = 0.25;  // default ln T grid spacing
constexpr double kStepSlack = 1e-9;

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(const char* id, bool ok, const std::string& detail, double seconds) {
  std::printf("%s %-5s %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

void info(const std::string& line) {
  std::printf("      %s\n", line.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

void guarded(const char* id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("threw: ") + e.what(), 0.0);
  }
}

double combined_se(double a, double b) { return std::sqrt(a * a + b * b); }

// 1. Closed-form far-field rates against simulation.
void ac1() {
  Timer timer;
  const ExperimentConfig c = fig3_defaults();
  const StatisticKind kinds[] = {StatisticKind::kFfaLinear};
  const auto stats = simulate_statistics(c, kinds);
  const auto g = make_geometry(c.geometry, c.seed);
  const auto law = ffa_statistic_law(g, c.channel, c.samples_per_station);
  const auto grid =
      uniform_grid(law.h0_mean - 3 * law.stddev, law.h1_mean + 3 * law.stddev, 50);
  const auto a = exceedance_rates(stats.h0[0], grid);
  const auto b = exceedance_rates(stats.h1[0], grid);
  const double n = static_cast<double>(c.trials);
  int good = 0;
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double ea = ffa_alpha(grid[j], g, c.channel, c.samples_per_station);
    const double eb = ffa_beta(grid[j], g, c.channel, c.samples_per_station);
    const double za = std::abs(a[j] - ea) / std::sqrt(ea * (1 - ea) / n);
    const double zb = std::abs(b[j] - eb) / std::sqrt(eb * (1 - eb) / n);
    if (za <= 3.0 && zb <= 3.0) ++good;
    worst = std::max({worst, za, zb});
  }
  const double t = timer.seconds();
  report("AC1", good >= 48 && t < 30.0,
         fmt("%d/50 thresholds with alpha and beta within 3 SE (max |z| %.2f)", good, worst), t);
}

// 2. False-alarm rate at the NMI-optimal threshold.
void ac2() {
  Timer timer;
  const auto alpha_at_optimum = [](std::uint64_t seed, double* ln_t) {
    ExperimentConfig c = fig3_defaults();
    c.seed = seed;
    const auto g = make_geometry(c.geometry, c.seed);
    const RateCurve curve = [&](double t) {
      return ffa_rates_at(t, g, c.channel, c.samples_per_station);
    };
    const auto best = optimize_threshold(curve, c.threshold_grid, c.priors, Objective::nmi());
    if (ln_t) *ln_t = best.optimal_log_threshold;
    return best.curve[best.optimal_index].alpha;
  };
  double ln_t = 0.0;
  const double a42 = alpha_at_optimum(42, &ln_t);
  report("AC2", a42 >= 0.02 && a42 <= 0.06,
         fmt("seed 42: alpha %.4f at ln T* %.3f, window [0.02, 0.06]", a42, ln_t),
         timer.seconds());
  std::string per_seed = "other seeds:";
  for (std::uint64_t s = 1; s <= 10; ++s) {
    per_seed += fmt(" %llu:%.4f", static_cast<unsigned long long>(s), alpha_at_optimum(s, nullptr));
  }
  info(per_seed);
}

// 3. Ring radius ratio.
void ac3() {
  Timer timer;
  const double r = rho_star(ChannelParams{0.0, 1.0, 3.0, 5.0});
  report("AC3", std::abs(r - 5.2753) <= 1e-3, fmt("rho* = %.6f", r), timer.seconds());
}

struct PairedOptimum {
  OptimumSummary exact;
  OptimumSummary ffa;
};

PairedOptimum paired_optimum(const ExperimentConfig& c) {
  const auto p = nmi_sweep_comparison(c, StatisticKind::kLrtExact, StatisticKind::kLrtFfa);
  return {nmi_optimum(p.first, c.priors), nmi_optimum(p.second, c.priors)};
}

// 4. Circle attacker: the far-field rule is optimal at rho*, not well inside it.
void ac4() {
  Timer timer;
  ExperimentConfig c = fig3_defaults();
  c.threat.kind = ThreatSpec::Kind::kCircle;
  const double rs = rho_star(c.channel);
  c.threat.rho = rs;
  const auto at = paired_optimum(c);
  c.threat.rho = 0.2 * rs;
  const auto in = paired_optimum(c);
  const double t = timer.seconds();

  const double gap_at = std::abs(at.exact.log_threshold - at.ffa.log_threshold);
  const double nmi_gap = std::abs(at.exact.nmi - at.ffa.nmi);
  const double se = combined_se(at.exact.nmi_se, at.ffa.nmi_se);
  const double gap_in = std::abs(in.exact.log_threshold - in.ffa.log_threshold);
  const bool coincide = gap_at <= kGridStep + kStepSlack && nmi_gap <= 2 * se;
  const bool separate = gap_in > kGridStep + kStepSlack;
  report("AC4", coincide && separate && t < 300.0,
         fmt("rho*: ln T* exact %.2f ffa %.2f, NMI %.4f vs %.4f (2 SE = %.4f); "
             "0.2 rho*: ln T* exact %.2f ffa %.2f",
             at.exact.log_threshold, at.ffa.log_threshold, at.exact.nmi, at.ffa.nmi, 2 * se,
             in.exact.log_threshold, in.ffa.log_threshold),
         t);
  info(fmt("coincidence at rho*: %s; separation at 0.2 rho* (> one step of %.2f): %s",
           coincide ? "yes" : "no", kGridStep, separate ? "yes" : "no"));
}

// 5. Annulus: far-field threshold converges to the exact one as R2 grows.
void ac5() {
  Timer timer;
  ExperimentConfig c = fig3_defaults();
  c.threat.kind = ThreatSpec::Kind::kAnnulus;
  c.threat.rho = 0.2 * rho_star(c.channel);
  std::vector<double> gaps;
  std::string detail = "threshold gap by R2/R1:";
  for (double ratio : kFig6OuterRatios) {
    c.threat.outer_ratio = ratio;
    const auto o = paired_optimum(c);
    gaps.push_back(std::abs(o.exact.log_threshold - o.ffa.log_threshold));
    detail += fmt(" %g:%.2f", ratio, gaps.back());
  }
  bool ok = gaps.back() <= kGridStep + kStepSlack;
  for (std::size_t j = 1; j < gaps.size(); ++j) ok = ok && gaps[j] <= gaps[j - 1] + kStepSlack;
  report("AC5", ok, detail, timer.seconds());
}

// 6. Laplace-approximated marginal against the numerical one.
void ac6() {
  Timer timer;
  ExperimentConfig c = fig3_defaults();
  c.threat.kind = ThreatSpec::Kind::kAnnulus;
  c.threat.inner_m = 100.0;
  c.threat.outer_m = 500.0;
  bool ok = true;
  std::string detail = "max |beta gap| over alpha in [0.05, 0.5]:";
  std::string fallbacks = "laplace fallbacks:";
  for (std::size_t k : kFig7Counts) {
    c.geometry.count = k;
    const StatisticKind kinds[] = {StatisticKind::kLrtExact, StatisticKind::kLrtLaplace};
    const auto s = simulate_statistics(c, kinds);
    const auto num = roc_from_statistics(s.h0[0], s.h1[0], 400);
    const auto lap = roc_from_statistics(s.h0[1], s.h1[1], 400);
    double worst = 0.0;
    for (double a : uniform_grid(0.05, 0.5, 91)) {
      worst = std::max(worst, std::abs(roc_beta_at(num, a) - roc_beta_at(lap, a)));
    }
    ok = ok && worst <= 0.05;
    detail += fmt(" K=%zu:%.4f", k, worst);
    fallbacks += fmt(" K=%zu:%zu/%zu", k, s.laplace_fallbacks[1], 2 * c.trials);
  }
  report("AC6", ok, detail + " (limit 0.05)", timer.seconds());
  info(fallbacks);
}

// 7. NMI and misclassification optima coincide only for equal priors.
void ac7() {
  Timer timer;
  const ExperimentConfig base = fig3_defaults();
  const auto g = make_geometry(base.geometry, base.seed);
  const RateCurve curve = [&](double t) {
    return ffa_rates_at(t, g, base.channel, base.samples_per_station);
  };
  double tn[2], tp[2];
  const double priors[2] = {0.5, 0.9};
  for (int i = 0; i < 2; ++i) {
    const PriorParams p{priors[i]};
    tn[i] = optimize_threshold(curve, base.threshold_grid, p, Objective::nmi())
                .optimal_log_threshold;
    tp[i] = optimize_threshold(curve, base.threshold_grid, p, Objective::misclassification())
                .optimal_log_threshold;
  }
  const bool same = std::abs(tn[0]) <= kGridStep + kStepSlack &&
                    std::abs(tp[0]) <= kGridStep + kStepSlack;
  const bool differ = std::abs(tn[1] - tp[1]) > kGridStep + kStepSlack;
  report("AC7", same && differ,
         fmt("P0=0.5: NMI %.3f, Pe %.3f; P0=0.9: NMI %.3f, Pe %.3f", tn[0], tp[0], tn[1], tp[1]),
         timer.seconds());
}

// 8. Optimal thresholds as the attack base rate varies.
void ac8() {
  Timer timer;
  const ExperimentConfig base = fig3_defaults();
  const auto g = make_geometry(base.geometry, base.seed);
  const RateCurve curve = [&](double t) {
    return ffa_rates_at(t, g, base.channel, base.samples_per_station);
  };
  double lo = INFINITY, hi = -INFINITY;
  double nmi_first = 0.0, nmi_last = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double p1 = 0.01 * i;
    const PriorParams p{1.0 - p1};
    const double tp = optimize_threshold(curve, base.threshold_grid, p,
                                         Objective::misclassification())
                          .optimal_log_threshold;
    const double ratio = std::exp(tp) / ((1.0 - p1) / p1);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    const double tn =
        optimize_threshold(curve, base.threshold_grid, p, Objective::nmi()).optimal_log_threshold;
    if (i == 1) nmi_first = tn;
    if (i == 10) nmi_last = tn;
  }
  const double spread = hi / lo - 1.0;
  const double change = std::abs(nmi_last - nmi_first) / std::abs(nmi_first);
  report("AC8", spread <= 0.05 && change < 0.20,
         fmt("Pe threshold / (P0/P1) in [%.4f, %.4f]; NMI ln T* %.3f -> %.3f (%.0f%% change, "
             "limit 20%%)",
             lo, hi, nmi_first, nmi_last, 100.0 * change),
         timer.seconds());
  info(fmt("Bayes proportionality: %s; NMI threshold stability: %s",
           spread <= 0.05 ? "holds" : "fails", change < 0.20 ? "holds" : "fails"));
}

// 9. Property suites.
void ac9() {
  Timer timer;
  std::vector<std::string> broken;

  // Mutual information strictly increasing in beta on (alpha, 1].
  for (double p0 = 0.05; p0 < 1.0; p0 += 0.05) {
    for (double a = 0.0; a < 1.0; a += 0.02) {
      double prev = mutual_information({p0}, {a, a});
      for (double b = a + 0.01; b <= 1.0 + 1e-12; b += 0.01) {
        const double v = mutual_information({p0}, {a, std::min(b, 1.0)});
        if (!(v > prev)) {
          broken.push_back("MI monotonicity");
          goto mi_done;
        }
        prev = v;
      }
    }
  }
mi_done:

  // Likelihood ratio vs nearest-station residual, each at its best threshold.
  {
    int worse = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      ExperimentConfig c = fig3_defaults();
      c.seed = 900 + s;
      const auto p =
          nmi_sweep_comparison(c, StatisticKind::kLrtFfa, StatisticKind::kNearestResidual);
      const auto l = nmi_optimum(p.first, c.priors);
      const auto r = nmi_optimum(p.second, c.priors);
      if (l.nmi < r.nmi - 2 * combined_se(l.nmi_se, r.nmi_se)) ++worse;
    }
    if (worse > 0) broken.push_back(fmt("NMI dominance (%d of 20 geometries)", worse));
  }

  // Neyman-Pearson: exact-rule ROC above the residual ROC.
  {
    ExperimentConfig c = fig3_defaults();
    c.threat.kind = ThreatSpec::Kind::kCircle;
    c.threat.rho = 2.0;
    const StatisticKind kinds[] = {StatisticKind::kLrtExact, StatisticKind::kNearestResidual};
    const auto s = simulate_statistics(c, kinds);
    const auto lrt = roc_from_statistics(s.h0[0], s.h1[0], 200);
    const auto res = roc_from_statistics(s.h0[1], s.h1[1], 200);
    const double n = static_cast<double>(c.trials);
    for (double a = 0.02; a < 0.98; a += 0.02) {
      const double bl = roc_beta_at(lrt, a);
      const double br = roc_beta_at(res, a);
      if (bl < br - 3 * std::sqrt((bl * (1 - bl) + br * (1 - br)) / n)) {
        broken.push_back("ROC dominance");
        break;
      }
    }
  }

  // Closed-form boost against a numerical KL minimum.
  {
    const ChannelParams p;
    GeometrySpec spec;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto g = make_geometry(spec, 3000 + s);
      Rng rng = make_rng(s, Stream::kMaliciousTrial, 0);
      const auto t = *sample_true_position(AnnulusMd{200, 800}, g.claimed(), rng);
      const double closed = optimal_power_boost(g, p, t);
      const double found = numeric::golden_section_maximize(
          [&](double x) { return -kl_divergence_h0_vs_h1(g, p, t, x); }, closed - 50.0,
          closed + 47.0, 1e-10);
      if (std::abs(found - closed) >= 1e-6) {
        broken.push_back("KL argmin");
        break;
      }
    }
  }

  // Conditional entropy against the joint table.
  for (double p0 : {0.1, 0.5, 0.9}) {
    for (double a = 0.0; a <= 1.0; a += 0.05) {
      for (double b = 0.0; b <= 1.0; b += 0.05) {
        const double j[2][2] = {{p0 * (1 - a), p0 * a}, {(1 - p0) * (1 - b), (1 - p0) * b}};
        double h = 0.0;
        for (int y = 0; y < 2; ++y) {
          const double py = j[0][y] + j[1][y];
          for (int x = 0; x < 2; ++x) {
            if (j[x][y] > 0) h -= j[x][y] * std::log2(j[x][y] / py);
          }
        }
        if (std::abs(conditional_entropy({p0}, {a, b}) - h) > 1e-12) {
          broken.push_back("conditional entropy");
          goto entropy_done;
        }
      }
    }
  }
entropy_done:

  // Byte-identical output across runs and thread counts.
  {
    ExperimentConfig c = fig3_defaults();
    c.threat.kind = ThreatSpec::Kind::kCircle;
    c.threat.rho = 0.5 * rho_star(c.channel);
    c.rule = StatisticKind::kLrtExact;
    c.trials = 2000;
    const Scenario* custom = find_scenario("custom");
    c.threads = 1;
    const auto first = format_csv(custom->run(c, {}).table);
    const auto again = format_csv(custom->run(c, {}).table);
    c.threads = 4;
    const auto threaded = format_csv(custom->run(c, {}).table);
    if (first != again || first != threaded) broken.push_back("determinism");
  }

  std::string detail = "MI monotonicity, NMI and ROC dominance, KL argmin, entropy oracle, "
                       "determinism";
  if (!broken.empty()) {
    detail = "broken:";
    for (const auto& b : broken) detail += " " + b + ";";
  }
  report("AC9", broken.empty(), detail, timer.seconds());
}

// Maximum NMI falls with shadowing and rises with station count.
void fig4_shape() {
  Timer timer;
  const Scenario* s = find_scenario("fig4");
  ExperimentConfig c = fig3_defaults();
  s->defaults(c);
  const auto table = s->run(c, {}).table;
  // Rows: K-major, sigma-minor. Columns: K, sigma, max_nmi, se, ...
  const std::size_t ns = kFig4Sigmas.size();
  const auto at = [&](std::size_t ki, std::size_t si) { return table.rows[ki * ns + si]; };
  int violations = 0;
  for (std::size_t ki = 0; ki < kFig4Counts.size(); ++ki) {
    for (std::size_t si = 0; si + 1 < ns; ++si) {
      const auto a = at(ki, si);
      const auto b = at(ki, si + 1);
      if (b[2] > a[2] + 2 * combined_se(a[3], b[3])) ++violations;
    }
  }
  for (std::size_t si = 0; si < ns; ++si) {
    for (std::size_t ki = 0; ki + 1 < kFig4Counts.size(); ++ki) {
      const auto a = at(ki, si);
      const auto b = at(ki + 1, si);
      if (b[2] < a[2] - 2 * combined_se(a[3], b[3])) ++violations;
    }
  }
  report("FIG4", violations == 0,
         fmt("max NMI nonincreasing in sigma, nondecreasing in K: %d violations", violations),
         timer.seconds());
  std::string grid = "max NMI (K x sigma 2..10):";
  for (std::size_t ki = 0; ki < kFig4Counts.size(); ++ki) {
    grid += fmt(" K=%zu[", kFig4Counts[ki]);
    for (std::size_t si = 0; si < ns; ++si) grid += fmt(si ? " %.3f" : "%.3f", at(ki, si)[2]);
    grid += "]";
  }
  info(grid);
}

}  // namespace

int main() {
  Timer total;
  guarded("AC1", ac1);
  guarded("AC2", ac2);
  guarded("AC3", ac3);
  guarded("AC4", ac4);
  guarded("AC5", ac5);
  guarded("AC6", ac6);
  guarded("AC7", ac7);
  guarded("AC8", ac8);
  guarded("AC9", ac9);
  guarded("FIG4", fig4_shape);
  std::printf("%d failure(s), %.1f s total\n", failures, total.seconds());
  return failures == 0 ? 0 : 1;
}
