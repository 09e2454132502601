#pragma once

// Measurement likelihoods under both hypotheses, marginalisation over the
// attacker position, the Laplace approximation of that marginal, and the
// likelihood-ratio decision statistics built from them.
//
// Everything is in the natural-log domain. Ratio thresholds T are carried as
// ln T.

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "lvs/adversary.hpp"
#include "lvs/core_model.hpp"
#include "lvs/numeric.hpp"

namespace lvs {

/// A rule whose statistic carries no information for this geometry (e.g. the
/// linear far-field statistic when every station sees the same claimed mean).
class DegenerateRuleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sum over all entries of log N(m_il; means_i, sigma^2).
double log_lik_gaussian(const MeasurementMatrix& m, std::span<const double> means,
                        double sigma);

double log_lik_h0(const MeasurementMatrix& m, const NetworkGeometry& geom,
                  const ChannelParams& params);

/// Likelihood of m for an attacker at `true_pos` using the optimal boost.
double log_lik_h1_given_theta(const MeasurementMatrix& m,
                              const NetworkGeometry& geom,
                              const ChannelParams& params, Point2D true_pos);

/// Far-field likelihood: every station has mean equal to the average claimed
/// mean.
double log_lik_h1_ffa(const MeasurementMatrix& m, const NetworkGeometry& geom,
                      const ChannelParams& params);

/// Precomputed per-geometry quantities used on every trial.
class LikelihoodModel {
 public:
  LikelihoodModel(const NetworkGeometry& geom, const ChannelParams& params);

  const NetworkGeometry& geometry() const noexcept { return geom_; }
  const ChannelParams& channel() const noexcept { return params_; }
  std::span<const double> claimed_means() const noexcept { return claimed_; }
  double claimed_mean_average() const noexcept { return claimed_average_; }

  double h0(const MeasurementMatrix& m) const;
  double h1_ffa(const MeasurementMatrix& m) const;

  /// -inf when `pos` coincides with a station.
  double h1_given(const MeasurementMatrix& m, Point2D pos) const;

  /// Spoofed means for an attacker at `pos`, written into `out`. Returns
  /// false when `pos` coincides with a station.
  bool spoofed_means_into(Point2D pos, std::span<double> out) const;

 private:
  NetworkGeometry geom_;
  ChannelParams params_;
  std::vector<double> claimed_;
  double claimed_average_ = 0.0;
};

enum class IntegrationMethod { kMonteCarloPrior, kPolarQuadrature };

struct IntegrationSpec {
  IntegrationMethod method = IntegrationMethod::kPolarQuadrature;
  /// Polar tensor grid; circle models use only the angular nodes.
  std::size_t radial_nodes = 128;
  std::size_t angular_nodes = 256;
  /// Prior draws for kMonteCarloPrior.
  std::size_t sample_count = 100000;
  std::uint64_t rng_seed = 0;

  /// Nodes actually used for `model`.
  std::size_t node_count(const ThreatModel& model) const;
  void validate(const ThreatModel& model) const;
};

inline constexpr std::size_t kMinIntegrationNodes = 256;

/// Log-likelihood of m at a fixed set of attacker positions, evaluated in one
/// pass. Positions that coincide with a station get -inf.
class PositionTable {
 public:
  PositionTable(const LikelihoodModel& model, std::vector<Point2D> positions);

  std::size_t size() const noexcept { return positions_.size(); }
  std::span<const Point2D> positions() const noexcept { return positions_; }

  /// out[n] = log p(m | positions[n], H1).
  void log_likelihoods(const MeasurementMatrix& m, std::span<double> out) const;

 private:
  std::size_t stations_ = 0;
  double sigma_ = 1.0;
  std::vector<double> reference_;  // claimed means; residual origin
  std::vector<Point2D> positions_;
  std::vector<double> offsets_;    // position-major, spoofed mean - reference
  std::vector<double> offset_sq_;  // per position: sum of squared offsets
  std::vector<char> valid_;
};

/// p(m|H1) = integral p(m|theta,H1) p(theta|H1) dtheta for circle and annulus
/// threat models, by polar quadrature or by averaging over prior draws.
class MarginalLikelihood {
 public:
  MarginalLikelihood(const LikelihoodModel& model, const ThreatModel& threat,
                     const IntegrationSpec& spec);

  double log_density(const MeasurementMatrix& m) const;
  std::size_t node_count() const noexcept { return table_.size(); }
  std::span<const Point2D> nodes() const noexcept { return table_.positions(); }

 private:
  std::vector<double> log_weights_;  // filled while table_ is built
  PositionTable table_;
};

double log_lik_h1_marginal(const MeasurementMatrix& m,
                           const NetworkGeometry& geom,
                           const ChannelParams& params,
                           const ThreatModel& threat,
                           const IntegrationSpec& spec);

struct LaplaceResult {
  double log_likelihood = 0.0;
  Point2D map_estimate;
  /// Set when the MAP sits on the prior boundary or the Hessian there is not
  /// negative definite; log_likelihood then comes from the numerical marginal.
  bool fell_back = false;
};

/// Laplace approximation of the marginal likelihood around the MAP attacker
/// position. Finite-difference Hessian with a 0.1 m step.
class LaplaceLikelihood {
 public:
  static constexpr double kHessianStep = 0.1;

  LaplaceLikelihood(const LikelihoodModel& model, const ThreatModel& threat,
                    const IntegrationSpec& fallback = {});

  /// Throws std::runtime_error if no start converges to a finite objective.
  Point2D map_estimate(const MeasurementMatrix& m) const;
  LaplaceResult evaluate(const MeasurementMatrix& m) const;

  /// log p(m|theta,H1) + log p(theta|H1); -inf outside the prior support.
  double log_posterior(const MeasurementMatrix& m, Point2D theta) const;

 private:
  struct Mode {
    Point2D point;
    double objective;
    bool on_boundary;
  };
  Mode find_mode(const MeasurementMatrix& m) const;
  Mode refine_on_circle(const MeasurementMatrix& m, double angle) const;
  Mode refine_in_annulus(const MeasurementMatrix& m, Point2D start) const;

  const LikelihoodModel* model_;
  double inner_ = 0.0;
  double outer_ = 0.0;
  bool circle_ = false;
  double log_prior_ = 0.0;
  std::size_t coarse_radial_ = 0;
  std::size_t coarse_angular_ = 0;
  PositionTable coarse_;  // initialised after the ring members above
  MarginalLikelihood fallback_;
};

Point2D laplace_map_estimate(const MeasurementMatrix& m,
                             const NetworkGeometry& geom,
                             const ChannelParams& params,
                             const ThreatModel& threat);

LaplaceResult log_lik_h1_laplace(const MeasurementMatrix& m,
                                 const NetworkGeometry& geom,
                                 const ChannelParams& params,
                                 const ThreatModel& threat);

/// F(m) = sum_i sum_l m_il (mean(mu_claim) - mu_claim_i).
double ffa_statistic(const MeasurementMatrix& m, const NetworkGeometry& geom,
                     const ChannelParams& params);

/// Maps a ratio threshold (as ln T) onto the linear far-field statistic:
/// Gamma = sigma^2 ln T - (L/2) sum(mu_i^2 - mean(mu)^2).
double ffa_gamma_from_log_threshold(double log_threshold,
                                    const NetworkGeometry& geom,
                                    const ChannelParams& params,
                                    std::size_t samples = 1);
double ffa_log_threshold_from_gamma(double gamma, const NetworkGeometry& geom,
                                    const ChannelParams& params,
                                    std::size_t samples = 1);
/// Ratio-domain convenience; requires threshold > 0.
double ffa_gamma_from_T(double threshold, const NetworkGeometry& geom,
                        const ChannelParams& params, std::size_t samples = 1);
double ffa_T_from_gamma(double gamma, const NetworkGeometry& geom,
                        const ChannelParams& params, std::size_t samples = 1);

enum class Decision { kVerified, kNotVerified };

/// Rejects (not verified) iff statistic >= threshold.
Decision decide(double statistic, double threshold) noexcept;

enum class RuleKind {
  kLrtExact,    // exact p(m|H1) for the threat model
  kLrtFfa,      // far-field likelihood, whatever the threat model
  kLrtLaplace,  // Laplace-approximated marginal
  kFfaLinear,   // linear far-field statistic F against Gamma
};

std::string_view to_string(RuleKind kind) noexcept;

/// Decision statistic for one rule, ready to evaluate on many measurements.
/// Ratio rules return ln Lambda(m); kFfaLinear returns F(m).
class DecisionStatistic {
 public:
  DecisionStatistic(const NetworkGeometry& geom, const ChannelParams& params,
                    const ThreatModel& threat, RuleKind kind,
                    const IntegrationSpec& spec = {}, std::size_t samples = 1);
  DecisionStatistic(const DecisionStatistic&) = delete;
  DecisionStatistic& operator=(const DecisionStatistic&) = delete;
  ~DecisionStatistic();

  RuleKind kind() const noexcept { return kind_; }
  const LikelihoodModel& model() const noexcept { return model_; }

  /// `fell_back` (optional) reports a Laplace fallback to the numerical
  /// marginal.
  double operator()(const MeasurementMatrix& m, bool* fell_back = nullptr) const;

  /// ln T expressed in this statistic's own domain.
  double threshold_for(double log_threshold) const;

 private:
  LikelihoodModel model_;
  RuleKind kind_;
  std::size_t samples_;
  std::unique_ptr<MarginalLikelihood> marginal_;
  std::unique_ptr<LaplaceLikelihood> laplace_;
  bool threat_is_ffa_ = false;
};

/// ln Lambda(m) for the given rule. For kFfaLinear this is the far-field ratio
/// recovered from F(m).
double log_likelihood_ratio(const MeasurementMatrix& m, RuleKind kind,
                            const NetworkGeometry& geom,
                            const ChannelParams& params,
                            const ThreatModel& threat,
                            const IntegrationSpec& spec = {});

}  // namespace lvs
