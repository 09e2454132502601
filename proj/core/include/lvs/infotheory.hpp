#pragma once

// Information measures of the binary verification channel X -> Y, the
// far-field closed-form rates, and threshold optimisation.

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "lvs/core_model.hpp"

namespace lvs {

/// alpha: false positive rate P(not verified | legitimate).
/// beta: detection rate P(not verified | malicious).
struct RatePair {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Standard normal upper tail.
double q_function(double x) noexcept;

/// Entropy in bits of a Bernoulli(p) variable, with 0 log 0 = 0.
double binary_entropy(double p) noexcept;

/// H(X|Y) in bits.
double conditional_entropy(const PriorParams& priors, RatePair rates);

/// I(X;Y) = H(X) - H(X|Y) in bits.
double mutual_information(const PriorParams& priors, RatePair rates);

/// I(X;Y) / H(X); 0 when alpha == beta.
double nmi(const PriorParams& priors, RatePair rates);

/// P0 alpha + P1 (1 - beta).
double misclassification(const PriorParams& priors, RatePair rates);

/// P0 alpha C0 + P1 (1 - beta) C1.
double bayes_cost(const PriorParams& priors, RatePair rates, double cost_reject,
                  double cost_accept);

struct Objective {
  enum class Kind { kNmi, kMisclassification, kBayesCost };
  Kind kind = Kind::kNmi;
  double cost_reject = 1.0;  // C0, rejecting a legitimate user
  double cost_accept = 1.0;  // C1, accepting a malicious user

  static Objective nmi() { return {Kind::kNmi, 1.0, 1.0}; }
  static Objective misclassification() { return {Kind::kMisclassification, 1.0, 1.0}; }
  static Objective bayes(double c0, double c1) { return {Kind::kBayesCost, c0, c1}; }

  bool maximize() const noexcept { return kind == Kind::kNmi; }
  double evaluate(const PriorParams& priors, RatePair rates) const;
  void validate() const;
};

/// Distribution of the linear far-field statistic F under each hypothesis;
/// both are normal with a shared standard deviation.
struct FfaStatisticLaw {
  double h0_mean = 0.0;
  double h1_mean = 0.0;
  double stddev = 0.0;
};

/// Throws DegenerateRuleError when every station sees the same claimed mean.
FfaStatisticLaw ffa_statistic_law(const NetworkGeometry& geom,
                                  const ChannelParams& params,
                                  std::size_t samples = 1);

double ffa_alpha(double gamma, const NetworkGeometry& geom,
                 const ChannelParams& params, std::size_t samples = 1);
double ffa_beta(double gamma, const NetworkGeometry& geom,
                const ChannelParams& params, std::size_t samples = 1);

/// Closed-form (alpha, beta) at ratio threshold ln T.
RatePair ffa_rates_at(double log_threshold, const NetworkGeometry& geom,
                      const ChannelParams& params, std::size_t samples = 1);

struct ThresholdRow {
  double log_threshold = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double nmi = 0.0;
  double pe = 0.0;
};

struct ThresholdResult {
  double optimal_log_threshold = 0.0;
  double objective_value = 0.0;
  std::size_t optimal_index = 0;  // row of `curve` holding the optimum
  std::vector<ThresholdRow> curve;
};

/// n points uniform on [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

/// 201 points uniform in ln T on [-25, 25].
std::vector<double> default_threshold_grid();

using RateCurve = std::function<RatePair(double log_threshold)>;

/// Grid search followed by golden-section refinement on the bracket around
/// the best grid point. The refined point is inserted into the curve.
ThresholdResult optimize_threshold(const RateCurve& analytic,
                                   std::span<const double> grid,
                                   const PriorParams& priors,
                                   const Objective& objective);

/// Grid search only, for noisy (Monte Carlo) curves. `rates[j]` belongs to
/// `grid[j]`.
ThresholdResult optimize_threshold(std::span<const double> grid,
                                   std::span<const RatePair> rates,
                                   const PriorParams& priors,
                                   const Objective& objective);

}  // namespace lvs
