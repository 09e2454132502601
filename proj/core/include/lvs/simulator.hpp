#pragma once

// Seeded Monte Carlo estimation of false-positive and detection rates for any
// pairing of threat model and decision statistic.
//
// Reproducibility: every trial draws from its own generator derived from
// (seed, hypothesis, trial index), so results are identical for any thread
// count.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lvs/adversary.hpp"
#include "lvs/core_model.hpp"
#include "lvs/infotheory.hpp"
#include "lvs/likelihood.hpp"

namespace lvs {

struct GeometrySpec {
  /// Explicit layout; when empty, `count` stations are drawn uniformly from a
  /// square of side `side_m` centred on `claimed`.
  std::vector<Point2D> base_stations;
  std::size_t count = 10;
  double side_m = 200.0;
  Point2D claimed{};
  /// Random layouts are redrawn while every station lies within this distance
  /// of one line.
  double collinearity_tolerance_m = 1.0;
};

/// Geometry for repeat `repeat` of an experiment seeded with `seed`. Random
/// layouts with the same seed and repeat share their leading stations, so a
/// K-station layout is a prefix of a larger one unless a redraw occurred.
NetworkGeometry make_geometry(const GeometrySpec& spec, std::uint64_t seed,
                              std::uint64_t repeat = 0);

/// Threat model whose radii may be given relative to the network radius r.
struct ThreatSpec {
  enum class Kind { kFarField, kCircle, kAnnulus };
  Kind kind = Kind::kFarField;
  double radius_m = 0.0;  // circle
  double inner_m = 0.0;   // annulus
  double outer_m = 0.0;
  /// When set: circle radius, or annulus inner radius, is rho * r.
  std::optional<double> rho;
  /// With `rho` set, annulus outer radius = inner * outer_ratio.
  double outer_ratio = 1.0;

  ThreatModel resolve(const NetworkGeometry& geom) const;
  std::string describe() const;
};

/// Decision statistics the simulator can tally. The last two are reference
/// detectors used to check the optimality of the likelihood ratio.
enum class StatisticKind {
  kLrtExact,
  kLrtFfa,
  kLrtLaplace,
  kFfaLinear,
  kNearestResidual,  // |mean_l m_1l - mu_1|, station 1 nearest the claim
  kRandomGuess,      // uniform draw independent of the data
};

std::string_view to_string(StatisticKind kind) noexcept;
std::optional<StatisticKind> parse_statistic_kind(std::string_view name) noexcept;

struct ExperimentConfig {
  GeometrySpec geometry;
  ChannelParams channel;
  PriorParams priors;
  ThreatSpec threat;
  StatisticKind rule = StatisticKind::kLrtExact;
  IntegrationSpec integration;
  std::size_t samples_per_station = 1;
  std::size_t trials = 10000;  // per hypothesis
  std::uint64_t seed = 42;
  std::vector<double> threshold_grid = default_threshold_grid();  // ln T
  /// Geometries to pool over; 1 keeps a single seeded layout.
  std::size_t geometry_repeats = 1;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;

  void validate() const;
};

/// Canonical text form of a configuration; hashed into SweepResult.
std::string describe(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

struct SweepRow {
  double log_threshold = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double nmi = 0.0;
  double pe = 0.0;
  double alpha_se = 0.0;
  double beta_se = 0.0;
  double nmi_se = 0.0;
  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepResult {
  StatisticKind statistic = StatisticKind::kLrtExact;
  std::vector<SweepRow> rows;  // ordered by threshold
  /// Raw statistic per trial, in trial order (pooled over repeats).
  std::vector<double> h0_statistics;
  std::vector<double> h1_statistics;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::size_t trials = 0;
  std::size_t laplace_fallbacks = 0;

  std::vector<RatePair> rates() const;
  std::vector<double> thresholds() const;

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// sqrt(p (1 - p) / n).
double binomial_se(double p, std::size_t n) noexcept;

/// Delta-method standard error of NMI from independent rate estimates.
double nmi_standard_error(const PriorParams& priors, RatePair rates,
                          double alpha_se, double beta_se);

/// Raw per-trial statistics for several detectors evaluated on the same
/// measurement realisations.
struct TrialStatistics {
  std::vector<StatisticKind> kinds;
  std::vector<std::vector<double>> h0;  // [kind][trial]
  std::vector<std::vector<double>> h1;
  std::vector<std::size_t> laplace_fallbacks;  // per kind
};

TrialStatistics simulate_statistics(const ExperimentConfig& config,
                                    std::span<const StatisticKind> kinds);

/// Fraction of statistics >= threshold, for each threshold.
std::vector<double> exceedance_rates(std::span<const double> statistics,
                                     std::span<const double> thresholds);

SweepResult estimate_rates(const ExperimentConfig& config);

/// Both rules tallied on identical measurement realisations.
struct PairedSweep {
  SweepResult first;
  SweepResult second;
};
PairedSweep nmi_sweep_comparison(const ExperimentConfig& config,
                                 StatisticKind first = StatisticKind::kLrtExact,
                                 StatisticKind second = StatisticKind::kLrtFfa);

/// Empirical ROC sorted by alpha. Thresholds are `resolution` quantiles of the
/// pooled statistics plus the two trivial end points.
std::vector<RatePair> roc_from_statistics(std::span<const double> h0,
                                          std::span<const double> h1,
                                          std::size_t resolution);
std::vector<RatePair> roc_curve(const ExperimentConfig& config,
                                std::size_t resolution);

/// Detection rate at a given false-positive rate by linear interpolation
/// along a sorted ROC.
double roc_beta_at(std::span<const RatePair> roc, double alpha);

}  // namespace lvs
