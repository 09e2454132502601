#include "lvs/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace lvs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t repeat_seed(std::uint64_t seed, std::uint64_t repeat) {
  return repeat == 0 ? seed : derive_seed(seed, Stream::kGeometry, ~repeat);
}

std::size_t nearest_station(const NetworkGeometry& geom) {
  const auto d = geom.claimed_distances();
  return static_cast<std::size_t>(std::min_element(d.begin(), d.end()) - d.begin());
}

/// One detector, built once per geometry and shared by all worker threads.
class TrialStatistic {
 public:
  TrialStatistic(StatisticKind kind, const NetworkGeometry& geom,
                 const ChannelParams& params, const ThreatModel& threat,
                 const IntegrationSpec& spec, std::size_t samples)
      : kind_(kind) {
    switch (kind) {
      case StatisticKind::kLrtExact:
        rule_ = std::make_unique<DecisionStatistic>(geom, params, threat,
                                                    RuleKind::kLrtExact, spec, samples);
        break;
      case StatisticKind::kLrtFfa:
        rule_ = std::make_unique<DecisionStatistic>(geom, params, threat,
                                                    RuleKind::kLrtFfa, spec, samples);
        break;
      case StatisticKind::kLrtLaplace:
        rule_ = std::make_unique<DecisionStatistic>(geom, params, threat,
                                                    RuleKind::kLrtLaplace, spec, samples);
        break;
      case StatisticKind::kFfaLinear:
        rule_ = std::make_unique<DecisionStatistic>(geom, params, threat,
                                                    RuleKind::kFfaLinear, spec, samples);
        break;
      case StatisticKind::kNearestResidual: {
        nearest_ = nearest_station(geom);
        nearest_mean_ = claimed_means(geom, params)[nearest_];
        break;
      }
      case StatisticKind::kRandomGuess:
        break;
    }
  }

  double operator()(const MeasurementMatrix& m, double guess, bool* fell_back) const {
    if (rule_) return (*rule_)(m, fell_back);
    if (fell_back) *fell_back = false;
    if (kind_ == StatisticKind::kRandomGuess) return guess;
    const auto row = m.row(nearest_);
    double avg = 0.0;
    for (double x : row) avg += x;
    avg /= static_cast<double>(row.size());
    return std::abs(avg - nearest_mean_);
  }

  /// ln T mapped into the statistic's domain; reference detectors take the
  /// grid values verbatim.
  double threshold_for(double log_threshold) const {
    return rule_ ? rule_->threshold_for(log_threshold) : log_threshold;
  }

 private:
  StatisticKind kind_;
  std::unique_ptr<DecisionStatistic> rule_;
  std::size_t nearest_ = 0;
  double nearest_mean_ = 0.0;
};

unsigned worker_count(unsigned requested, std::size_t work) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency())
                              : requested;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(work, 1)));
}

/// Runs body(index) for index in [0, count) across `threads` workers.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  const unsigned n = worker_count(threads, count);
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  constexpr std::size_t kChunk = 16;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned w = 0; w < n; ++w) {
    pool.emplace_back([&] {
      try {
        for (;;) {
          const std::size_t begin = next.fetch_add(kChunk);
          if (begin >= count || failed.load()) break;
          const std::size_t end = std::min(count, begin + kChunk);
          for (std::size_t i = begin; i < end; ++i) body(i);
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double uniform_from(std::uint64_t seed, std::uint64_t index) {
  Rng rng = make_rng(seed, Stream::kGuess, index);
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

SweepResult tally(const ExperimentConfig& config, StatisticKind kind,
                  std::vector<double> h0, std::vector<double> h1,
                  std::span<const double> domain_thresholds,
                  std::size_t fallbacks) {
  SweepResult out;
  out.statistic = kind;
  out.seed = config.seed;
  out.config_hash = config_hash(config);
  out.trials = h0.size();
  out.laplace_fallbacks = fallbacks;
  const auto alpha = exceedance_rates(h0, domain_thresholds);
  const auto beta = exceedance_rates(h1, domain_thresholds);
  out.rows.reserve(config.threshold_grid.size());
  for (std::size_t j = 0; j < config.threshold_grid.size(); ++j) {
    SweepRow row;
    row.log_threshold = config.threshold_grid[j];
    row.alpha = alpha[j];
    row.beta = beta[j];
    const RatePair r{row.alpha, row.beta};
    row.nmi = nmi(config.priors, r);
    row.pe = misclassification(config.priors, r);
    row.alpha_se = binomial_se(row.alpha, h0.size());
    row.beta_se = binomial_se(row.beta, h1.size());
    row.nmi_se = nmi_standard_error(config.priors, r, row.alpha_se, row.beta_se);
    out.rows.push_back(row);
  }
  out.h0_statistics = std::move(h0);
  out.h1_statistics = std::move(h1);
  return out;
}

}  // namespace

NetworkGeometry make_geometry(const GeometrySpec& spec, std::uint64_t seed,
                              std::uint64_t repeat) {
  if (!spec.base_stations.empty()) {
    return NetworkGeometry(spec.base_stations, spec.claimed);
  }
  if (spec.count < 3) {
    throw std::invalid_argument("geometry.count must be at least 3");
  }
  if (!(spec.side_m > 0.0)) {
    throw std::invalid_argument("geometry.side_m must be positive");
  }
  Rng rng = make_rng(seed, Stream::kGeometry, repeat);
  std::uniform_real_distribution<double> coord(-0.5 * spec.side_m, 0.5 * spec.side_m);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Point2D> stations(spec.count);
    for (auto& s : stations) {
      s.u = spec.claimed.u + coord(rng);
      s.v = spec.claimed.v + coord(rng);
    }
    if (max_line_deviation(stations) < spec.collinearity_tolerance_m) continue;
    const bool clear = std::none_of(stations.begin(), stations.end(), [&](Point2D s) {
      return distance(s, spec.claimed) == 0.0;
    });
    if (clear) return NetworkGeometry(std::move(stations), spec.claimed);
  }
  throw std::runtime_error("could not draw a non-collinear geometry");
}

ThreatModel ThreatSpec::resolve(const NetworkGeometry& geom) const {
  const double r = geom.max_claimed_distance();
  ThreatModel model;
  switch (kind) {
    case Kind::kFarField:
      model = FarField{};
      break;
    case Kind::kCircle:
      model = CircleUda{rho ? *rho * r : radius_m};
      break;
    case Kind::kAnnulus: {
      const double inner = rho ? *rho * r : inner_m;
      const double outer = rho ? inner * outer_ratio : outer_m;
      model = AnnulusMd{inner, outer};
      break;
    }
  }
  validate_threat(model, geom);
  return model;
}

std::string ThreatSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::kFarField: os << "ffa"; break;
    case Kind::kCircle: os << "circle"; break;
    case Kind::kAnnulus: os << "annulus"; break;
  }
  if (rho) {
    os << " rho=" << *rho << " outer_ratio=" << outer_ratio;
  } else {
    os << " radius=" << radius_m << " inner=" << inner_m << " outer=" << outer_m;
  }
  return os.str();
}

std::string_view to_string(StatisticKind kind) noexcept {
  switch (kind) {
    case StatisticKind::kLrtExact: return "lrt-exact";
    case StatisticKind::kLrtFfa: return "lrt-ffa";
    case StatisticKind::kLrtLaplace: return "lrt-laplace";
    case StatisticKind::kFfaLinear: return "ffa-linear";
    case StatisticKind::kNearestResidual: return "nearest-residual";
    case StatisticKind::kRandomGuess: return "random-guess";
  }
  return "unknown";
}

std::optional<StatisticKind> parse_statistic_kind(std::string_view name) noexcept {
  for (auto k : {StatisticKind::kLrtExact, StatisticKind::kLrtFfa,
                 StatisticKind::kLrtLaplace, StatisticKind::kFfaLinear,
                 StatisticKind::kNearestResidual, StatisticKind::kRandomGuess}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  channel.validate();
  priors.validate();
  const std::size_t k = geometry.base_stations.empty() ? geometry.count
                                                       : geometry.base_stations.size();
  if (k < 4 || k > 64) {
    throw std::invalid_argument("geometry: station count must be in [4, 64], got " +
                                std::to_string(k));
  }
  if (trials < 1000) {
    throw std::invalid_argument("sim.trials must be at least 1000, got " +
                                std::to_string(trials));
  }
  if (samples_per_station < 1) {
    throw std::invalid_argument("sim.L must be at least 1");
  }
  if (geometry_repeats < 1) {
    throw std::invalid_argument("sim.geometry_repeats must be at least 1");
  }
  if (threshold_grid.empty()) {
    throw std::invalid_argument("sim threshold grid is empty");
  }
  for (std::size_t j = 1; j < threshold_grid.size(); ++j) {
    if (!(threshold_grid[j] > threshold_grid[j - 1])) {
      throw std::invalid_argument("sim threshold grid must be strictly increasing");
    }
  }
}

std::string describe(const ExperimentConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "geometry:";
  if (c.geometry.base_stations.empty()) {
    os << " random count=" << c.geometry.count << " side=" << c.geometry.side_m;
  } else {
    for (const auto& p : c.geometry.base_stations) os << " (" << p.u << "," << p.v << ")";
  }
  os << " claimed=(" << c.geometry.claimed.u << "," << c.geometry.claimed.v << ")"
     << " collinear_tol=" << c.geometry.collinearity_tolerance_m << "\n";
  os << "channel: P0=" << c.channel.ref_power_dB << " d0=" << c.channel.ref_distance_m
     << " gamma=" << c.channel.path_loss_exponent
     << " sigma=" << c.channel.shadowing_sigma_dB << "\n";
  os << "priors: p0=" << c.priors.prior_legitimate << "\n";
  os << "threat: " << c.threat.describe() << "\n";
  os << "rule: " << to_string(c.rule) << " integration="
     << (c.integration.method == IntegrationMethod::kPolarQuadrature ? "polar" : "monte-carlo")
     << " radial=" << c.integration.radial_nodes
     << " angular=" << c.integration.angular_nodes
     << " mc=" << c.integration.sample_count
     << " mc_seed=" << c.integration.rng_seed << "\n";
  os << "sim: L=" << c.samples_per_station << " trials=" << c.trials
     << " seed=" << c.seed << " repeats=" << c.geometry_repeats << " grid=";
  for (double t : c.threshold_grid) os << t << ",";
  os << "\n";
  return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  // FNV-1a, 64 bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : describe(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<RatePair> SweepResult::rates() const {
  std::vector<RatePair> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back({r.alpha, r.beta});
  return out;
}

std::vector<double> SweepResult::thresholds() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.log_threshold);
  return out;
}

double binomial_se(double p, std::size_t n) noexcept {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

double nmi_standard_error(const PriorParams& priors, RatePair rates,
                          double alpha_se, double beta_se) {
  const auto partial = [&](bool wrt_alpha) {
    const double h = 1e-6;
    RatePair lo = rates;
    RatePair hi = rates;
    double& vlo = wrt_alpha ? lo.alpha : lo.beta;
    double& vhi = wrt_alpha ? hi.alpha : hi.beta;
    vlo = std::max(0.0, vlo - h);
    vhi = std::min(1.0, vhi + h);
    if (vhi <= vlo) return 0.0;
    return (nmi(priors, hi) - nmi(priors, lo)) / (vhi - vlo);
  };
  const double da = partial(true) * alpha_se;
  const double db = partial(false) * beta_se;
  return std::sqrt(da * da + db * db);
}

TrialStatistics simulate_statistics(const ExperimentConfig& config,
                                    std::span<const StatisticKind> kinds) {
  config.validate();
  TrialStatistics out;
  out.kinds.assign(kinds.begin(), kinds.end());
  const std::size_t nk = kinds.size();
  const std::size_t n = config.trials;
  out.h0.assign(nk, std::vector<double>(n * config.geometry_repeats));
  out.h1.assign(nk, std::vector<double>(n * config.geometry_repeats));
  out.laplace_fallbacks.assign(nk, 0);

  for (std::size_t rep = 0; rep < config.geometry_repeats; ++rep) {
    const std::uint64_t seed = repeat_seed(config.seed, rep);
    const NetworkGeometry geom = make_geometry(config.geometry, config.seed, rep);
    const ThreatModel threat = config.threat.resolve(geom);
    std::vector<std::unique_ptr<TrialStatistic>> stats;
    stats.reserve(nk);
    for (auto kind : kinds) {
      stats.push_back(std::make_unique<TrialStatistic>(
          kind, geom, config.channel, threat, config.integration,
          config.samples_per_station));
    }
    std::vector<std::atomic<std::size_t>> fallbacks(nk);

    const std::size_t offset = rep * n;
    parallel_for(n, config.threads, [&](std::size_t t) {
      const auto evaluate = [&](const MeasurementMatrix& m, std::uint64_t guess_index,
                                std::vector<std::vector<double>>& sink) {
        const double guess = uniform_from(seed, guess_index);
        for (std::size_t k = 0; k < nk; ++k) {
          bool fell_back = false;
          sink[k][offset + t] = (*stats[k])(m, guess, &fell_back);
          if (fell_back) fallbacks[k].fetch_add(1, std::memory_order_relaxed);
        }
      };
      {
        Rng rng = make_rng(seed, Stream::kLegitimateTrial, t);
        const auto m = sample_legitimate(geom, config.channel,
                                         config.samples_per_station, rng);
        evaluate(m, 2 * t, out.h0);
      }
      {
        Rng rng = make_rng(seed, Stream::kMaliciousTrial, t);
        const auto pos = sample_true_position(threat, geom.claimed(), rng);
        const auto m = pos ? sample_malicious(geom, config.channel, *pos,
                                              config.samples_per_station, rng)
                           : sample_malicious_far_field(geom, config.channel,
                                                        config.samples_per_station, rng);
        evaluate(m, 2 * t + 1, out.h1);
      }
    });
    for (std::size_t k = 0; k < nk; ++k) out.laplace_fallbacks[k] += fallbacks[k].load();
  }
  return out;
}

std::vector<double> exceedance_rates(std::span<const double> statistics,
                                     std::span<const double> thresholds) {
  std::vector<double> sorted(statistics.begin(), statistics.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(thresholds.size());
  const double n = static_cast<double>(sorted.size());
  for (double t : thresholds) {
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    out.push_back(n == 0.0 ? 0.0 : (n - static_cast<double>(below)) / n);
  }
  return out;
}

namespace {

/// Thresholds in each statistic's own domain, for the first repeat's geometry.
/// Only kFfaLinear maps ln T to something else, and F is built so that the
/// mapping is the same affine function across repeats only when the geometry
/// is fixed; pooled repeats therefore tally kFfaLinear in ln T.
std::vector<double> domain_thresholds(const ExperimentConfig& config,
                                      StatisticKind kind) {
  if (kind != StatisticKind::kFfaLinear) return config.threshold_grid;
  const NetworkGeometry geom = make_geometry(config.geometry, config.seed, 0);
  std::vector<double> out;
  out.reserve(config.threshold_grid.size());
  for (double t : config.threshold_grid) {
    out.push_back(ffa_gamma_from_log_threshold(t, geom, config.channel,
                                               config.samples_per_station));
  }
  return out;
}

}  // namespace

SweepResult estimate_rates(const ExperimentConfig& config) {
  if (config.rule == StatisticKind::kFfaLinear && config.geometry_repeats > 1) {
    throw std::invalid_argument(
        "ffa-linear thresholds depend on the geometry; use lrt-ffa when pooling "
        "repeats");
  }
  const StatisticKind kinds[] = {config.rule};
  auto stats = simulate_statistics(config, kinds);
  const auto thresholds = domain_thresholds(config, config.rule);
  return tally(config, config.rule, std::move(stats.h0[0]), std::move(stats.h1[0]),
               thresholds, stats.laplace_fallbacks[0]);
}

PairedSweep nmi_sweep_comparison(const ExperimentConfig& config,
                                 StatisticKind first, StatisticKind second) {
  if (config.geometry_repeats > 1 &&
      (first == StatisticKind::kFfaLinear || second == StatisticKind::kFfaLinear)) {
    throw std::invalid_argument(
        "ffa-linear thresholds depend on the geometry; use lrt-ffa when pooling "
        "repeats");
  }
  const StatisticKind kinds[] = {first, second};
  auto stats = simulate_statistics(config, kinds);
  PairedSweep out;
  out.first = tally(config, first, std::move(stats.h0[0]), std::move(stats.h1[0]),
                    domain_thresholds(config, first), stats.laplace_fallbacks[0]);
  out.second = tally(config, second, std::move(stats.h0[1]), std::move(stats.h1[1]),
                     domain_thresholds(config, second), stats.laplace_fallbacks[1]);
  return out;
}

std::vector<RatePair> roc_from_statistics(std::span<const double> h0,
                                          std::span<const double> h1,
                                          std::size_t resolution) {
  std::vector<double> pooled(h0.begin(), h0.end());
  pooled.insert(pooled.end(), h1.begin(), h1.end());
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> thresholds{-kInf};
  if (!pooled.empty() && resolution > 0) {
    for (std::size_t q = 0; q < resolution; ++q) {
      const double pos = (static_cast<double>(q) + 0.5) / static_cast<double>(resolution);
      const auto idx = static_cast<std::size_t>(pos * static_cast<double>(pooled.size() - 1));
      thresholds.push_back(pooled[idx]);
    }
  }
  thresholds.push_back(kInf);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  const auto alpha = exceedance_rates(h0, thresholds);
  const auto beta = exceedance_rates(h1, thresholds);
  std::vector<RatePair> roc;
  roc.reserve(thresholds.size());
  for (std::size_t j = 0; j < thresholds.size(); ++j) roc.push_back({alpha[j], beta[j]});
  std::sort(roc.begin(), roc.end(), [](RatePair a, RatePair b) {
    return a.alpha != b.alpha ? a.alpha < b.alpha : a.beta < b.beta;
  });
  return roc;
}

std::vector<RatePair> roc_curve(const ExperimentConfig& config, std::size_t resolution) {
  const StatisticKind kinds[] = {config.rule};
  const auto stats = simulate_statistics(config, kinds);
  return roc_from_statistics(stats.h0[0], stats.h1[0], resolution);
}

double roc_beta_at(std::span<const RatePair> roc, double alpha) {
  if (roc.empty()) throw std::invalid_argument("empty ROC");
  if (alpha <= roc.front().alpha) return roc.front().beta;
  for (std::size_t j = 1; j < roc.size(); ++j) {
    if (roc[j].alpha >= alpha) {
      const RatePair a = roc[j - 1];
      const RatePair b = roc[j];
      if (b.alpha == a.alpha) return b.beta;
      const double w = (alpha - a.alpha) / (b.alpha - a.alpha);
      return a.beta + w * (b.beta - a.beta);
    }
  }
  return roc.back().beta;
}

}  // namespace lvs
