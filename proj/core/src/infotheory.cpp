#include "lvs/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lvs/likelihood.hpp"
#include "lvs/numeric.hpp"

namespace lvs {
namespace {

// -p log2(p / total), with 0 log 0 = 0.
double surprisal_term(double p, double total) {
  if (!(p > 0.0)) return 0.0;
  return -p * std::log2(p / total);
}

void check_rates(RatePair rates) {
  if (!(rates.alpha >= 0.0 && rates.alpha <= 1.0 && rates.beta >= 0.0 &&
        rates.beta <= 1.0)) {
    throw std::invalid_argument("rates must lie in [0, 1]");
  }
}

ThresholdRow make_row(double t, RatePair r, const PriorParams& priors) {
  return {t, r.alpha, r.beta, nmi(priors, r), misclassification(priors, r)};
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("threshold grid is empty");
  for (std::size_t j = 1; j < grid.size(); ++j) {
    if (!(grid[j] > grid[j - 1])) {
      throw std::invalid_argument("threshold grid must be strictly increasing");
    }
  }
}

std::size_t best_index(std::span<const ThresholdRow> rows,
                       const PriorParams& priors, const Objective& objective) {
  std::size_t best = 0;
  double best_value = objective.evaluate(priors, {rows[0].alpha, rows[0].beta});
  for (std::size_t j = 1; j < rows.size(); ++j) {
    const double v = objective.evaluate(priors, {rows[j].alpha, rows[j].beta});
    if (objective.maximize() ? v > best_value : v < best_value) {
      best = j;
      best_value = v;
    }
  }
  return best;
}

}  // namespace

double q_function(double x) noexcept {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double binary_entropy(double p) noexcept {
  return surprisal_term(p, 1.0) + surprisal_term(1.0 - p, 1.0);
}

double conditional_entropy(const PriorParams& priors, RatePair rates) {
  check_rates(rates);
  const double p0 = priors.prior_legitimate;
  const double p1 = priors.prior_malicious();
  // Joint mass of (X, Y); Y=0 verified, Y=1 not verified.
  const double legit_pass = p0 * (1.0 - rates.alpha);
  const double legit_fail = p0 * rates.alpha;
  const double mal_pass = p1 * (1.0 - rates.beta);
  const double mal_fail = p1 * rates.beta;
  const double pass = legit_pass + mal_pass;
  const double fail = legit_fail + mal_fail;
  return surprisal_term(legit_pass, pass) + surprisal_term(legit_fail, fail) +
         surprisal_term(mal_pass, pass) + surprisal_term(mal_fail, fail);
}

double mutual_information(const PriorParams& priors, RatePair rates) {
  if (rates.alpha == rates.beta) {
    check_rates(rates);
    return 0.0;
  }
  const double hx = binary_entropy(priors.prior_legitimate);
  const double info = hx - conditional_entropy(priors, rates);
  return std::clamp(info, 0.0, hx);
}

double nmi(const PriorParams& priors, RatePair rates) {
  const double hx = binary_entropy(priors.prior_legitimate);
  if (!(hx > 0.0)) return 0.0;
  return mutual_information(priors, rates) / hx;
}

double misclassification(const PriorParams& priors, RatePair rates) {
  return bayes_cost(priors, rates, 1.0, 1.0);
}

double bayes_cost(const PriorParams& priors, RatePair rates, double cost_reject,
                  double cost_accept) {
  check_rates(rates);
  return priors.prior_legitimate * rates.alpha * cost_reject +
         priors.prior_malicious() * (1.0 - rates.beta) * cost_accept;
}

double Objective::evaluate(const PriorParams& priors, RatePair rates) const {
  switch (kind) {
    case Kind::kNmi: return lvs::nmi(priors, rates);
    case Kind::kMisclassification: return lvs::misclassification(priors, rates);
    case Kind::kBayesCost: return bayes_cost(priors, rates, cost_reject, cost_accept);
  }
  return 0.0;
}

void Objective::validate() const {
  if (kind == Kind::kBayesCost && !(cost_reject > 0.0 && cost_accept > 0.0)) {
    throw std::invalid_argument("Bayes costs must be positive");
  }
}

FfaStatisticLaw ffa_statistic_law(const NetworkGeometry& geom,
                                  const ChannelParams& params,
                                  std::size_t samples) {
  const auto claimed = claimed_means(geom, params);
  const double avg = mean_of(claimed);
  const double l = static_cast<double>(samples);
  double h0 = 0.0;
  double h1 = 0.0;
  double weight_sq = 0.0;
  for (double mu : claimed) {
    const double w = avg - mu;
    h0 += mu * w;
    h1 += avg * w;
    weight_sq += w * w;
  }
  if (!(weight_sq > 0.0)) {
    throw DegenerateRuleError(
        "far-field statistic is degenerate: every station sees the same "
        "claimed mean");
  }
  return {l * h0, l * h1,
          std::sqrt(l * weight_sq) * params.shadowing_sigma_dB};
}

double ffa_alpha(double gamma, const NetworkGeometry& geom,
                 const ChannelParams& params, std::size_t samples) {
  const auto law = ffa_statistic_law(geom, params, samples);
  return q_function((gamma - law.h0_mean) / law.stddev);
}

double ffa_beta(double gamma, const NetworkGeometry& geom,
                const ChannelParams& params, std::size_t samples) {
  const auto law = ffa_statistic_law(geom, params, samples);
  return q_function((gamma - law.h1_mean) / law.stddev);
}

RatePair ffa_rates_at(double log_threshold, const NetworkGeometry& geom,
                      const ChannelParams& params, std::size_t samples) {
  const double gamma = ffa_gamma_from_log_threshold(log_threshold, geom, params, samples);
  return {ffa_alpha(gamma, geom, params, samples), ffa_beta(gamma, geom, params, samples)};
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<double> default_threshold_grid() { return uniform_grid(-25.0, 25.0, 201); }

ThresholdResult optimize_threshold(const RateCurve& analytic,
                                   std::span<const double> grid,
                                   const PriorParams& priors,
                                   const Objective& objective) {
  check_grid(grid);
  objective.validate();
  ThresholdResult out;
  out.curve.reserve(grid.size() + 1);
  for (double t : grid) out.curve.push_back(make_row(t, analytic(t), priors));
  std::size_t best = best_index(out.curve, priors, objective);
  double best_value =
      objective.evaluate(priors, {out.curve[best].alpha, out.curve[best].beta});

  if (grid.size() > 1) {
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    const double sign = objective.maximize() ? 1.0 : -1.0;
    const double t = numeric::golden_section_maximize(
        [&](double x) { return sign * objective.evaluate(priors, analytic(x)); },
        lo, hi, 1e-10 * std::max(1.0, hi - lo));
    const RatePair r = analytic(t);
    const double v = objective.evaluate(priors, r);
    const bool better = objective.maximize() ? v > best_value : v < best_value;
    const auto pos = std::lower_bound(grid.begin(), grid.end(), t) - grid.begin();
    const bool fresh = pos >= static_cast<std::ptrdiff_t>(grid.size()) || grid[pos] != t;
    if (better && fresh) {
      out.curve.insert(out.curve.begin() + pos, make_row(t, r, priors));
      best = static_cast<std::size_t>(pos);
      best_value = v;
    }
  }
  out.optimal_index = best;
  out.optimal_log_threshold = out.curve[best].log_threshold;
  out.objective_value = best_value;
  return out;
}

ThresholdResult optimize_threshold(std::span<const double> grid,
                                   std::span<const RatePair> rates,
                                   const PriorParams& priors,
                                   const Objective& objective) {
  check_grid(grid);
  objective.validate();
  if (rates.size() != grid.size()) {
    throw std::invalid_argument("rates and grid differ in length");
  }
  ThresholdResult out;
  out.curve.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out.curve.push_back(make_row(grid[j], rates[j], priors));
  }
  out.optimal_index = best_index(out.curve, priors, objective);
  out.optimal_log_threshold = out.curve[out.optimal_index].log_threshold;
  out.objective_value = objective.evaluate(
      priors, {out.curve[out.optimal_index].alpha, out.curve[out.optimal_index].beta});
  return out;
}

}  // namespace lvs
