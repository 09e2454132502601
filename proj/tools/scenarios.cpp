#include "scenarios.hpp"

#include <cstdio>
#include <sstream>

namespace lvs::cli {
namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

using Kind = ThreatSpec::Kind;

RateCurve ffa_curve(const NetworkGeometry& geom, const ExperimentConfig& c) {
  return [&geom, &c](double t) {
    return ffa_rates_at(t, geom, c.channel, c.samples_per_station);
  };
}

std::string trials_note(const ExperimentConfig& c) {
  return "trials per hypothesis: " + std::to_string(c.trials);
}

// fig3: far-field rates and NMI, closed form next to simulation.
ScenarioRun run_fig3(const ExperimentConfig& c, const ScenarioOptions&) {
  const NetworkGeometry geom = make_geometry(c.geometry, c.seed);
  const SweepResult sim = estimate_rates(c);
  const auto analytic = ffa_curve(geom, c);
  ScenarioRun out;
  out.table.header = {"ln_T",     "alpha_analytic", "beta_analytic", "alpha_sim",
                      "beta_sim", "nmi_analytic",   "nmi_sim"};
  for (const auto& row : sim.rows) {
    const RatePair a = analytic(row.log_threshold);
    out.table.rows.push_back({row.log_threshold, a.alpha, a.beta, row.alpha, row.beta,
                              nmi(c.priors, a), row.nmi});
  }
  const auto best = optimize_threshold(analytic, c.threshold_grid, c.priors, Objective::nmi());
  out.notes.push_back("analytic NMI optimum: ln_T=" + fmt(best.optimal_log_threshold) +
                      " alpha=" + fmt(best.curve[best.optimal_index].alpha) +
                      " nmi=" + fmt(best.objective_value));
  out.notes.push_back(trials_note(c));
  return out;
}

// fig4: maximum NMI over sigma and station count, nested station layouts.
ScenarioRun run_fig4(const ExperimentConfig& base, const ScenarioOptions&) {
  ScenarioRun out;
  out.table.header = {"K", "sigma_dB", "max_nmi_sim", "max_nmi_sim_se", "opt_ln_T_sim",
                      "max_nmi_analytic", "opt_ln_T_analytic"};
  for (std::size_t k : kFig4Counts) {
    for (double sigma : kFig4Sigmas) {
      ExperimentConfig c = base;
      c.geometry.count = k;
      c.channel.shadowing_sigma_dB = sigma;
      const NetworkGeometry geom = make_geometry(c.geometry, c.seed);
      const auto sim = nmi_optimum(estimate_rates(c), c.priors);
      const auto an = optimize_threshold(ffa_curve(geom, c), c.threshold_grid, c.priors,
                                         Objective::nmi());
      out.table.rows.push_back({static_cast<double>(k), sigma, sim.nmi, sim.nmi_se,
                                sim.log_threshold, an.objective_value,
                                an.optimal_log_threshold});
    }
  }
  out.notes.push_back(trials_note(base));
  return out;
}

Table paired_table(const std::string& key_name) {
  Table t;
  t.header = {key_name,     "ln_T",        "nmi_exact",  "nmi_exact_se",
              "nmi_ffa",    "nmi_ffa_se",  "alpha_exact", "beta_exact",
              "alpha_ffa",  "beta_ffa"};
  return t;
}

void append_paired(Table& t, double key, const PairedSweep& p) {
  for (std::size_t j = 0; j < p.first.rows.size(); ++j) {
    const auto& a = p.first.rows[j];
    const auto& b = p.second.rows[j];
    t.rows.push_back({key, a.log_threshold, a.nmi, a.nmi_se, b.nmi, b.nmi_se, a.alpha,
                      a.beta, b.alpha, b.beta});
  }
}

std::string optimum_note(const std::string& label, const PairedSweep& p,
                         const PriorParams& priors) {
  const auto e = nmi_optimum(p.first, priors);
  const auto f = nmi_optimum(p.second, priors);
  return label + ": exact ln_T*=" + fmt(e.log_threshold) + " nmi=" + fmt(e.nmi) +
         "; ffa ln_T*=" + fmt(f.log_threshold) + " nmi=" + fmt(f.nmi);
}

// fig5: attacker on a circle of radius rho * r; exact rule vs far-field rule.
ScenarioRun run_fig5(const ExperimentConfig& base, const ScenarioOptions& opt) {
  ScenarioRun out;
  out.table = paired_table("rho_factor");
  const double rs = rho_star(base.channel);
  const std::vector<double> factors =
      opt.rho_factor ? std::vector<double>{*opt.rho_factor} : kFig5RhoFactors;
  for (double f : factors) {
    ExperimentConfig c = base;
    c.threat.kind = Kind::kCircle;
    c.threat.rho = f * rs;
    const auto p = nmi_sweep_comparison(c, StatisticKind::kLrtExact, StatisticKind::kLrtFfa);
    append_paired(out.table, f, p);
    out.notes.push_back(optimum_note("rho/rho*=" + fmt(f), p, c.priors));
  }
  out.notes.push_back("rho*=" + fmt(rs));
  out.notes.push_back(trials_note(base));
  return out;
}

// fig6: annulus with R1 = 0.2 rho* r and growing R2 / R1.
ScenarioRun run_fig6(const ExperimentConfig& base, const ScenarioOptions& opt) {
  ScenarioRun out;
  out.table = paired_table("outer_ratio");
  const double factor = opt.rho_factor.value_or(0.2);
  for (double ratio : kFig6OuterRatios) {
    ExperimentConfig c = base;
    c.threat.kind = Kind::kAnnulus;
    c.threat.rho = factor * rho_star(c.channel);
    c.threat.outer_ratio = ratio;
    const auto p = nmi_sweep_comparison(c, StatisticKind::kLrtExact, StatisticKind::kLrtFfa);
    append_paired(out.table, ratio, p);
    out.notes.push_back(optimum_note("R2/R1=" + fmt(ratio), p, c.priors));
  }
  out.notes.push_back(trials_note(base));
  return out;
}

// fig7: ROC of the exact rule with numerical and Laplace marginals.
ScenarioRun run_fig7(const ExperimentConfig& base, const ScenarioOptions&) {
  ScenarioRun out;
  out.table.header = {"K", "alpha", "beta_numerical", "beta_laplace"};
  const auto alphas = uniform_grid(0.0, 1.0, 101);
  for (std::size_t k : kFig7Counts) {
    ExperimentConfig c = base;
    c.geometry.count = k;
    const StatisticKind kinds[] = {StatisticKind::kLrtExact, StatisticKind::kLrtLaplace};
    const auto stats = simulate_statistics(c, kinds);
    const auto numerical = roc_from_statistics(stats.h0[0], stats.h1[0], 400);
    const auto laplace = roc_from_statistics(stats.h0[1], stats.h1[1], 400);
    for (double a : alphas) {
      out.table.rows.push_back({static_cast<double>(k), a, roc_beta_at(numerical, a),
                                roc_beta_at(laplace, a)});
    }
    out.notes.push_back("K=" + std::to_string(k) + " laplace fallbacks: " +
                        std::to_string(stats.laplace_fallbacks[1]) + " of " +
                        std::to_string(2 * c.trials));
  }
  out.notes.push_back(trials_note(base));
  return out;
}

// fig8: NMI and misclassification against ln T for two priors.
ScenarioRun run_fig8(const ExperimentConfig& base, const ScenarioOptions&) {
  ScenarioRun out;
  out.table.header = {"p0", "ln_T", "alpha", "beta", "nmi", "pe", "nmi_sim", "pe_sim"};
  for (double p0 : {0.5, 0.9}) {
    ExperimentConfig c = base;
    c.priors.prior_legitimate = p0;
    const NetworkGeometry geom = make_geometry(c.geometry, c.seed);
    const auto analytic = ffa_curve(geom, c);
    const SweepResult sim = estimate_rates(c);
    for (const auto& row : sim.rows) {
      const RatePair a = analytic(row.log_threshold);
      out.table.rows.push_back({p0, row.log_threshold, a.alpha, a.beta, nmi(c.priors, a),
                                misclassification(c.priors, a), row.nmi, row.pe});
    }
    const auto bn = optimize_threshold(analytic, c.threshold_grid, c.priors, Objective::nmi());
    const auto bp = optimize_threshold(analytic, c.threshold_grid, c.priors,
                                       Objective::misclassification());
    out.notes.push_back("p0=" + fmt(p0) + ": nmi ln_T*=" + fmt(bn.optimal_log_threshold) +
                        " pe ln_T*=" + fmt(bp.optimal_log_threshold));
  }
  out.notes.push_back(trials_note(base));
  return out;
}

// fig9-p1: optimal thresholds as the attack base rate P1 varies.
ScenarioRun run_fig9(const ExperimentConfig& base, const ScenarioOptions&) {
  ScenarioRun out;
  out.table.header = {"p1", "nmi_opt_ln_T", "pe_opt_ln_T", "bayes_ln_T", "max_nmi", "min_pe"};
  const NetworkGeometry geom = make_geometry(base.geometry, base.seed);
  const auto analytic = ffa_curve(geom, base);
  for (int i = 1; i <= 10; ++i) {
    const double p1 = 0.01 * i;
    const PriorParams priors{1.0 - p1};
    const auto bn = optimize_threshold(analytic, base.threshold_grid, priors, Objective::nmi());
    const auto bp = optimize_threshold(analytic, base.threshold_grid, priors,
                                       Objective::misclassification());
    out.table.rows.push_back({p1, bn.optimal_log_threshold, bp.optimal_log_threshold,
                              std::log((1.0 - p1) / p1), bn.objective_value,
                              bp.objective_value});
  }
  out.notes.push_back("closed-form far-field rates; no Monte Carlo trials");
  return out;
}

ScenarioRun run_custom(const ExperimentConfig& c, const ScenarioOptions&) {
  const SweepResult sim = estimate_rates(c);
  ScenarioRun out;
  out.table.header = {"ln_T", "alpha", "beta", "nmi", "pe", "alpha_se", "beta_se", "nmi_se"};
  for (const auto& r : sim.rows) {
    out.table.rows.push_back(
        {r.log_threshold, r.alpha, r.beta, r.nmi, r.pe, r.alpha_se, r.beta_se, r.nmi_se});
  }
  const auto best = nmi_optimum(sim, c.priors);
  out.notes.push_back("rule " + std::string(to_string(c.rule)) + ": ln_T*=" +
                      fmt(best.log_threshold) + " nmi=" + fmt(best.nmi));
  if (sim.laplace_fallbacks > 0) {
    out.notes.push_back("laplace fallbacks: " + std::to_string(sim.laplace_fallbacks));
  }
  out.notes.push_back(trials_note(c));
  return out;
}

void far_field_defaults(ExperimentConfig& c) {
  c.threat = ThreatSpec{};
  c.rule = StatisticKind::kLrtFfa;
}

}  // namespace

std::string format_csv(const Table& table) {
  std::ostringstream os;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    os << (j ? "," : "") << table.header[j];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << fmt(row[j]);
    os << '\n';
  }
  return os.str();
}

ExperimentConfig fig3_defaults() {
  ExperimentConfig c;
  c.geometry.count = 10;
  c.geometry.side_m = 200.0;
  c.channel = ChannelParams{0.0, 1.0, 3.0, 5.0};
  c.priors = PriorParams{0.9};
  c.threat = ThreatSpec{};
  c.rule = StatisticKind::kFfaLinear;
  c.samples_per_station = 1;
  c.trials = 10000;
  c.seed = 42;
  return c;
}

OptimumSummary nmi_optimum(const SweepResult& sweep, const PriorParams& priors) {
  const auto best = optimize_threshold(sweep.thresholds(), sweep.rates(), priors,
                                       Objective::nmi());
  return {best.optimal_log_threshold, best.objective_value,
          sweep.rows[best.optimal_index].nmi_se};
}

const std::vector<Scenario>& scenarios() {
  static const std::vector<Scenario> all = {
      {"fig3", "far-field rates and NMI vs ln T, closed form and simulated",
       [](ExperimentConfig& c) { c.rule = StatisticKind::kFfaLinear; }, run_fig3},
      {"fig4", "maximum NMI vs sigma_dB for K = 4, 6, 8, 10", far_field_defaults, run_fig4},
      {"fig5", "circle attacker, rho sweep: exact vs far-field rule NMI",
       [](ExperimentConfig& c) {
         c.threat.kind = Kind::kCircle;
       },
       run_fig5},
      {"fig6", "annulus attacker, R2 sweep at rho = 0.2 rho*: exact vs far-field rule",
       [](ExperimentConfig& c) {
         c.threat.kind = Kind::kAnnulus;
       },
       run_fig6},
      {"fig7", "ROC with Laplace vs numerical marginal, K = 4, 8",
       [](ExperimentConfig& c) {
         c.threat.kind = Kind::kAnnulus;
         c.threat.inner_m = 100.0;
         c.threat.outer_m = 500.0;
       },
       run_fig7},
      {"fig8", "NMI and misclassification vs ln T for P0 = 0.5, 0.9", far_field_defaults,
       run_fig8},
      {"fig9-p1", "optimal NMI and misclassification thresholds vs P1 = 1 - P0",
       far_field_defaults, run_fig9},
      {"custom", "one rate sweep of the configured threat model and rule",
       [](ExperimentConfig&) {}, run_custom},
  };
  return all;
}

const Scenario* find_scenario(const std::string& name) {
  for (const auto& s : scenarios()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

}  // namespace lvs::cli
