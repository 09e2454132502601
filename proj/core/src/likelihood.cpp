#include "lvs/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lvs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_norm_const(double sigma) {
  return -std::log(std::sqrt(2.0 * std::numbers::pi) * sigma);
}

Point2D on_ring(Point2D center, double radius, double angle) {
  return {center.u + radius * std::cos(angle), center.v + radius * std::sin(angle)};
}

double angle_of(Point2D center, Point2D p) {
  return std::atan2(p.v - center.v, p.u - center.u);
}

double spread_of_claimed(std::span<const double> claimed) {
  const double avg = mean_of(claimed);
  double s = 0.0;
  for (double mu : claimed) s += (mu - avg) * (mu - avg);
  return s;
}

struct Ring {
  double inner;
  double outer;
};

Ring ring_of(const ThreatModel& threat) {
  if (const auto* c = std::get_if<CircleUda>(&threat)) {
    return {c->radius_m, c->radius_m};
  }
  if (const auto* a = std::get_if<AnnulusMd>(&threat)) {
    return {a->inner_m, a->outer_m};
  }
  throw std::invalid_argument(
      "far-field threat has no position prior; use the far-field likelihood");
}

std::vector<Point2D> ring_grid(Point2D center, Ring ring, std::size_t radial,
                               std::size_t angular) {
  std::vector<Point2D> out;
  const bool circle = ring.inner == ring.outer;
  const std::size_t nr = circle ? 1 : radial;
  out.reserve(nr * angular);
  const double lo = ring.inner * ring.inner;
  const double hi = ring.outer * ring.outer;
  for (std::size_t j = 0; j < nr; ++j) {
    // Midpoints in squared radius: equal-area shells.
    const double s = lo + (static_cast<double>(j) + 0.5) / static_cast<double>(nr) * (hi - lo);
    const double radius = circle ? ring.inner : std::sqrt(s);
    for (std::size_t k = 0; k < angular; ++k) {
      const double angle = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) /
                           static_cast<double>(angular);
      out.push_back(on_ring(center, radius, angle));
    }
  }
  return out;
}

}  // namespace

double log_lik_gaussian(const MeasurementMatrix& m, std::span<const double> means,
                        double sigma) {
  if (m.stations() != means.size()) {
    throw std::invalid_argument("measurement rows do not match station count");
  }
  double q = 0.0;
  for (std::size_t i = 0; i < m.stations(); ++i) {
    for (double x : m.row(i)) q += (x - means[i]) * (x - means[i]);
  }
  const double n = static_cast<double>(m.values().size());
  return n * log_norm_const(sigma) - q / (2.0 * sigma * sigma);
}

// ---------------------------------------------------------------------------

LikelihoodModel::LikelihoodModel(const NetworkGeometry& geom,
                                 const ChannelParams& params)
    : geom_(geom), params_(params), claimed_(lvs::claimed_means(geom, params)) {
  params_.validate();
  claimed_average_ = mean_of(claimed_);
}

double LikelihoodModel::h0(const MeasurementMatrix& m) const {
  return log_lik_gaussian(m, claimed_, params_.shadowing_sigma_dB);
}

double LikelihoodModel::h1_ffa(const MeasurementMatrix& m) const {
  const std::vector<double> flat(claimed_.size(), claimed_average_);
  return log_lik_gaussian(m, flat, params_.shadowing_sigma_dB);
}

bool LikelihoodModel::spoofed_means_into(Point2D pos, std::span<double> out) const {
  const auto stations = geom_.base_stations();
  double attack_sum = 0.0;
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const double d = distance(stations[i], pos);
    if (!(d > 0.0)) return false;
    out[i] = mean_rss(params_, d);
    attack_sum += out[i];
  }
  const double boost = claimed_average_ - attack_sum / static_cast<double>(stations.size());
  for (std::size_t i = 0; i < stations.size(); ++i) out[i] += boost;
  return true;
}

double LikelihoodModel::h1_given(const MeasurementMatrix& m, Point2D pos) const {
  std::vector<double> means(geom_.size());
  if (!spoofed_means_into(pos, means)) return -kInf;
  return log_lik_gaussian(m, means, params_.shadowing_sigma_dB);
}

double log_lik_h0(const MeasurementMatrix& m, const NetworkGeometry& geom,
                  const ChannelParams& params) {
  return log_lik_gaussian(m, claimed_means(geom, params), params.shadowing_sigma_dB);
}

double log_lik_h1_given_theta(const MeasurementMatrix& m,
                              const NetworkGeometry& geom,
                              const ChannelParams& params, Point2D true_pos) {
  return log_lik_gaussian(m, spoofed_means(geom, params, true_pos),
                          params.shadowing_sigma_dB);
}

double log_lik_h1_ffa(const MeasurementMatrix& m, const NetworkGeometry& geom,
                      const ChannelParams& params) {
  return log_lik_gaussian(m, far_field_means(geom, params), params.shadowing_sigma_dB);
}

// ---------------------------------------------------------------------------

std::size_t IntegrationSpec::node_count(const ThreatModel& model) const {
  if (method == IntegrationMethod::kMonteCarloPrior) return sample_count;
  if (circle_radius(model)) return angular_nodes;
  return radial_nodes * angular_nodes;
}

void IntegrationSpec::validate(const ThreatModel& model) const {
  if (std::holds_alternative<FarField>(model)) {
    throw std::invalid_argument(
        "far-field threat has no position prior; use the far-field likelihood");
  }
  const std::size_t n = node_count(model);
  if (n < kMinIntegrationNodes) {
    throw std::invalid_argument("integration needs at least " +
                                std::to_string(kMinIntegrationNodes) +
                                " nodes, got " + std::to_string(n));
  }
}

PositionTable::PositionTable(const LikelihoodModel& model,
                             std::vector<Point2D> positions)
    : stations_(model.geometry().size()),
      sigma_(model.channel().shadowing_sigma_dB),
      reference_(model.claimed_means().begin(), model.claimed_means().end()),
      positions_(std::move(positions)) {
  offsets_.assign(positions_.size() * stations_, 0.0);
  offset_sq_.assign(positions_.size(), 0.0);
  valid_.assign(positions_.size(), 0);
  std::vector<double> means(stations_);
  for (std::size_t n = 0; n < positions_.size(); ++n) {
    if (!model.spoofed_means_into(positions_[n], means)) continue;
    valid_[n] = 1;
    double sq = 0.0;
    for (std::size_t i = 0; i < stations_; ++i) {
      const double off = means[i] - reference_[i];
      offsets_[n * stations_ + i] = off;
      sq += off * off;
    }
    offset_sq_[n] = sq;
  }
}

void PositionTable::log_likelihoods(const MeasurementMatrix& m,
                                    std::span<double> out) const {
  if (m.stations() != stations_) {
    throw std::invalid_argument("measurement rows do not match station count");
  }
  // With residuals e = m - reference and offsets o_n, the squared error at
  // node n is sum(e^2) - 2 sum_i o_ni sum_l e_il + L sum_i o_ni^2.
  const double samples = static_cast<double>(m.samples());
  std::vector<double> row_residual(stations_);
  double total_sq = 0.0;
  for (std::size_t i = 0; i < stations_; ++i) {
    double acc = 0.0;
    for (double x : m.row(i)) {
      const double e = x - reference_[i];
      acc += e;
      total_sq += e * e;
    }
    row_residual[i] = acc;
  }
  const double base = static_cast<double>(m.values().size()) * log_norm_const(sigma_);
  const double scale = 1.0 / (2.0 * sigma_ * sigma_);
  for (std::size_t n = 0; n < positions_.size(); ++n) {
    if (!valid_[n]) {
      out[n] = -kInf;
      continue;
    }
    const double* off = offsets_.data() + n * stations_;
    double dot = 0.0;
    for (std::size_t i = 0; i < stations_; ++i) dot += off[i] * row_residual[i];
    const double q = std::max(0.0, total_sq - 2.0 * dot + samples * offset_sq_[n]);
    out[n] = base - q * scale;
  }
}

namespace {

struct WeightedNodes {
  std::vector<Point2D> positions;
  std::vector<double> log_weights;
};

WeightedNodes integration_nodes(const LikelihoodModel& model,
                                const ThreatModel& threat,
                                const IntegrationSpec& spec) {
  spec.validate(threat);
  validate_threat(threat, model.geometry());
  const Point2D center = model.geometry().claimed();
  const Ring ring = ring_of(threat);
  WeightedNodes out;
  if (spec.method == IntegrationMethod::kMonteCarloPrior) {
    Rng rng = make_rng(spec.rng_seed, Stream::kQuadrature, 0);
    const ThreatModel prior = ring.inner == ring.outer
                                  ? ThreatModel{CircleUda{ring.inner}}
                                  : threat;
    out.positions.reserve(spec.sample_count);
    for (std::size_t n = 0; n < spec.sample_count; ++n) {
      out.positions.push_back(*sample_true_position(prior, center, rng));
    }
    out.log_weights.assign(spec.sample_count,
                           -std::log(static_cast<double>(spec.sample_count)));
    return out;
  }

  const std::size_t na = spec.angular_nodes;
  const double log_angle_weight = -std::log(static_cast<double>(na));
  if (ring.inner == ring.outer) {
    out.positions = ring_grid(center, ring, 1, na);
    out.log_weights.assign(na, log_angle_weight);
    return out;
  }
  // Gauss-Legendre in squared radius makes the area-uniform prior a constant
  // weight per node.
  const auto rule = numeric::gauss_legendre(spec.radial_nodes);
  const double lo = ring.inner * ring.inner;
  const double hi = ring.outer * ring.outer;
  out.positions.reserve(spec.radial_nodes * na);
  out.log_weights.reserve(spec.radial_nodes * na);
  for (std::size_t j = 0; j < spec.radial_nodes; ++j) {
    const double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[j];
    const double radius = std::sqrt(s);
    const double lw = std::log(0.5 * rule.weights[j]) + log_angle_weight;
    for (std::size_t k = 0; k < na; ++k) {
      const double angle =
          2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(na);
      out.positions.push_back(on_ring(center, radius, angle));
      out.log_weights.push_back(lw);
    }
  }
  return out;
}

}  // namespace

MarginalLikelihood::MarginalLikelihood(const LikelihoodModel& model,
                                       const ThreatModel& threat,
                                       const IntegrationSpec& spec)
    : table_([&] {
        auto nodes = integration_nodes(model, threat, spec);
        log_weights_ = std::move(nodes.log_weights);
        return PositionTable(model, std::move(nodes.positions));
      }()) {}

double MarginalLikelihood::log_density(const MeasurementMatrix& m) const {
  std::vector<double> terms(table_.size());
  table_.log_likelihoods(m, terms);
  for (std::size_t n = 0; n < terms.size(); ++n) terms[n] += log_weights_[n];
  return numeric::log_sum_exp(terms);
}

double log_lik_h1_marginal(const MeasurementMatrix& m,
                           const NetworkGeometry& geom,
                           const ChannelParams& params,
                           const ThreatModel& threat,
                           const IntegrationSpec& spec) {
  const LikelihoodModel model(geom, params);
  return MarginalLikelihood(model, threat, spec).log_density(m);
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kCoarseRadial = 24;
constexpr std::size_t kCoarseAngular = 96;
constexpr std::size_t kCircleAngular = 360;
constexpr std::size_t kMaxStarts = 4;

}  // namespace

LaplaceLikelihood::LaplaceLikelihood(const LikelihoodModel& model,
                                     const ThreatModel& threat,
                                     const IntegrationSpec& fallback)
    : model_(&model),
      coarse_([&] {
        validate_threat(threat, model.geometry());
        const Ring ring = ring_of(threat);
        inner_ = ring.inner;
        outer_ = ring.outer;
        circle_ = inner_ == outer_;
        coarse_radial_ = circle_ ? 1 : kCoarseRadial;
        coarse_angular_ = circle_ ? kCircleAngular : kCoarseAngular;
        return PositionTable(model, ring_grid(model.geometry().claimed(), ring,
                                              coarse_radial_, coarse_angular_));
      }()),
      fallback_(model, threat, fallback) {
  log_prior_ = circle_ ? -std::log(2.0 * std::numbers::pi)
                       : -std::log(std::numbers::pi * (outer_ * outer_ - inner_ * inner_));
}

double LaplaceLikelihood::log_posterior(const MeasurementMatrix& m,
                                        Point2D theta) const {
  const double radius = distance(theta, model_->geometry().claimed());
  const double slack = 1e-9 * std::max(1.0, outer_);
  if (radius < inner_ - slack || radius > outer_ + slack) return -kInf;
  return model_->h1_given(m, theta) + log_prior_;
}

LaplaceLikelihood::Mode LaplaceLikelihood::refine_on_circle(
    const MeasurementMatrix& m, double angle) const {
  const Point2D center = model_->geometry().claimed();
  const auto objective = [&](double a) {
    return model_->h1_given(m, on_ring(center, inner_, a));
  };
  const double bracket = 2.0 * std::numbers::pi / static_cast<double>(kCircleAngular);
  const double best =
      numeric::golden_section_maximize(objective, angle - bracket, angle + bracket, 1e-12);
  return {on_ring(center, inner_, best), objective(best), false};
}

LaplaceLikelihood::Mode LaplaceLikelihood::refine_in_annulus(
    const MeasurementMatrix& m, Point2D start) const {
  const Point2D center = model_->geometry().claimed();
  const numeric::Field2D f = [&](Point2D p) { return model_->h1_given(m, p); };
  const auto project = [&](Point2D p) {
    const double du = p.u - center.u;
    const double dv = p.v - center.v;
    const double radius = std::hypot(du, dv);
    if (radius >= inner_ && radius <= outer_) return p;
    const double target = std::clamp(radius, inner_, outer_);
    if (radius == 0.0) return Point2D{center.u + target, center.v};
    return Point2D{center.u + du * target / radius, center.v + dv * target / radius};
  };
  constexpr double kStep = kHessianStep;
  const double trust = 0.1 * (outer_ - inner_) + 1.0;

  Point2D x = project(start);
  double fx = f(x);
  for (int iter = 0; iter < 200; ++iter) {
    const auto g = numeric::central_gradient(f, x, kStep);
    const auto h = numeric::central_hessian(f, x, kStep);
    double du = 0.0;
    double dv = 0.0;
    if (h.negative_definite()) {
      const double det = h.det();
      du = -(h.yy * g[0] - h.xy * g[1]) / det;
      dv = -(-h.xy * g[0] + h.xx * g[1]) / det;
    } else {
      const double gnorm = std::hypot(g[0], g[1]);
      if (gnorm == 0.0) break;
      du = g[0] / gnorm * trust;
      dv = g[1] / gnorm * trust;
    }
    const double len = std::hypot(du, dv);
    if (len > trust) {
      du *= trust / len;
      dv *= trust / len;
    }
    Point2D next = project({x.u + du, x.v + dv});
    double fnext = f(next);
    for (int halving = 0; halving < 40 && !(fnext >= fx); ++halving) {
      du *= 0.5;
      dv *= 0.5;
      next = project({x.u + du, x.v + dv});
      fnext = f(next);
    }
    if (!(fnext >= fx)) break;
    const double moved = distance(next, x);
    x = next;
    fx = fnext;
    if (moved < 1e-9) break;
  }
  const double radius = distance(x, center);
  const double tol = 1e-6 * std::max(1.0, outer_);
  const bool on_boundary = radius - inner_ < tol || outer_ - radius < tol;
  return {x, fx, on_boundary};
}

LaplaceLikelihood::Mode LaplaceLikelihood::find_mode(const MeasurementMatrix& m) const {
  std::vector<double> values(coarse_.size());
  coarse_.log_likelihoods(m, values);
  const std::size_t nr = coarse_radial_;
  const std::size_t na = coarse_angular_;
  const auto at = [&](std::size_t j, std::size_t k) { return values[j * na + k]; };

  std::vector<std::size_t> peaks;
  for (std::size_t j = 0; j < nr; ++j) {
    for (std::size_t k = 0; k < na; ++k) {
      const double v = at(j, k);
      if (!std::isfinite(v)) continue;
      bool peak = true;
      for (int dj = -1; dj <= 1 && peak; ++dj) {
        for (int dk = -1; dk <= 1; ++dk) {
          if (dj == 0 && dk == 0) continue;
          const auto jj = static_cast<long>(j) + dj;
          if (jj < 0 || jj >= static_cast<long>(nr)) continue;
          const auto kk = (static_cast<long>(k) + dk + static_cast<long>(na)) %
                          static_cast<long>(na);
          if (at(static_cast<std::size_t>(jj), static_cast<std::size_t>(kk)) > v) {
            peak = false;
            break;
          }
        }
      }
      if (peak) peaks.push_back(j * na + k);
    }
  }
  std::sort(peaks.begin(), peaks.end(),
            [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  if (peaks.size() > kMaxStarts) peaks.resize(kMaxStarts);

  const Point2D center = model_->geometry().claimed();
  Mode best{center, -kInf, false};
  for (std::size_t idx : peaks) {
    const Point2D start = coarse_.positions()[idx];
    const Mode mode = circle_ ? refine_on_circle(m, angle_of(center, start))
                              : refine_in_annulus(m, start);
    if (mode.objective > best.objective) best = mode;
  }
  if (!std::isfinite(best.objective)) {
    throw std::runtime_error("MAP search did not reach a finite objective");
  }
  return best;
}

Point2D LaplaceLikelihood::map_estimate(const MeasurementMatrix& m) const {
  return find_mode(m).point;
}

LaplaceResult LaplaceLikelihood::evaluate(const MeasurementMatrix& m) const {
  const Mode mode = find_mode(m);
  LaplaceResult out;
  out.map_estimate = mode.point;
  const Point2D center = model_->geometry().claimed();
  if (circle_) {
    const double angle = angle_of(center, mode.point);
    const double step = kHessianStep / inner_;
    const auto f = [&](double a) { return model_->h1_given(m, on_ring(center, inner_, a)); };
    const double curvature = (f(angle + step) - 2.0 * mode.objective + f(angle - step)) /
                             (step * step);
    if (curvature < 0.0) {
      out.log_likelihood = mode.objective + log_prior_ +
                           0.5 * std::log(2.0 * std::numbers::pi / -curvature);
      return out;
    }
  } else if (!mode.on_boundary) {
    const numeric::Field2D f = [&](Point2D p) { return model_->h1_given(m, p); };
    const auto estimate = numeric::laplace_log_integral(f, mode.point, kHessianStep);
    if (estimate.valid) {
      out.log_likelihood = estimate.log_integral + log_prior_;
      return out;
    }
  }
  out.fell_back = true;
  out.log_likelihood = fallback_.log_density(m);
  return out;
}

Point2D laplace_map_estimate(const MeasurementMatrix& m,
                             const NetworkGeometry& geom,
                             const ChannelParams& params,
                             const ThreatModel& threat) {
  const LikelihoodModel model(geom, params);
  return LaplaceLikelihood(model, threat).map_estimate(m);
}

LaplaceResult log_lik_h1_laplace(const MeasurementMatrix& m,
                                 const NetworkGeometry& geom,
                                 const ChannelParams& params,
                                 const ThreatModel& threat) {
  const LikelihoodModel model(geom, params);
  return LaplaceLikelihood(model, threat).evaluate(m);
}

// ---------------------------------------------------------------------------

double ffa_statistic(const MeasurementMatrix& m, const NetworkGeometry& geom,
                     const ChannelParams& params) {
  const auto claimed = claimed_means(geom, params);
  const double avg = mean_of(claimed);
  double f = 0.0;
  for (std::size_t i = 0; i < m.stations(); ++i) f += m.row_sum(i) * (avg - claimed[i]);
  return f;
}

double ffa_gamma_from_log_threshold(double log_threshold,
                                    const NetworkGeometry& geom,
                                    const ChannelParams& params,
                                    std::size_t samples) {
  const double var = params.shadowing_sigma_dB * params.shadowing_sigma_dB;
  const double spread = spread_of_claimed(claimed_means(geom, params));
  return var * log_threshold - 0.5 * static_cast<double>(samples) * spread;
}

double ffa_log_threshold_from_gamma(double gamma, const NetworkGeometry& geom,
                                    const ChannelParams& params,
                                    std::size_t samples) {
  const double var = params.shadowing_sigma_dB * params.shadowing_sigma_dB;
  const double spread = spread_of_claimed(claimed_means(geom, params));
  return (gamma + 0.5 * static_cast<double>(samples) * spread) / var;
}

double ffa_gamma_from_T(double threshold, const NetworkGeometry& geom,
                        const ChannelParams& params, std::size_t samples) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("ratio threshold must be positive");
  }
  return ffa_gamma_from_log_threshold(std::log(threshold), geom, params, samples);
}

double ffa_T_from_gamma(double gamma, const NetworkGeometry& geom,
                        const ChannelParams& params, std::size_t samples) {
  return std::exp(ffa_log_threshold_from_gamma(gamma, geom, params, samples));
}

Decision decide(double statistic, double threshold) noexcept {
  return statistic >= threshold ? Decision::kNotVerified : Decision::kVerified;
}

std::string_view to_string(RuleKind kind) noexcept {
  switch (kind) {
    case RuleKind::kLrtExact: return "lrt-exact";
    case RuleKind::kLrtFfa: return "lrt-ffa";
    case RuleKind::kLrtLaplace: return "lrt-laplace";
    case RuleKind::kFfaLinear: return "ffa-linear";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

DecisionStatistic::DecisionStatistic(const NetworkGeometry& geom,
                                     const ChannelParams& params,
                                     const ThreatModel& threat, RuleKind kind,
                                     const IntegrationSpec& spec,
                                     std::size_t samples)
    : model_(geom, params),
      kind_(kind),
      samples_(samples),
      threat_is_ffa_(std::holds_alternative<FarField>(threat)) {
  validate_threat(threat, geom);
  switch (kind_) {
    case RuleKind::kLrtExact:
      if (!threat_is_ffa_) {
        marginal_ = std::make_unique<MarginalLikelihood>(model_, threat, spec);
      }
      break;
    case RuleKind::kLrtLaplace:
      if (threat_is_ffa_) {
        throw std::invalid_argument(
            "the Laplace rule needs a circle or annulus threat model");
      }
      laplace_ = std::make_unique<LaplaceLikelihood>(model_, threat, spec);
      break;
    case RuleKind::kFfaLinear:
      if (!(spread_of_claimed(model_.claimed_means()) > 0.0)) {
        throw DegenerateRuleError(
            "linear far-field statistic is identically zero: every station "
            "sees the same claimed mean");
      }
      break;
    case RuleKind::kLrtFfa:
      break;
  }
}

DecisionStatistic::~DecisionStatistic() = default;

double DecisionStatistic::operator()(const MeasurementMatrix& m,
                                     bool* fell_back) const {
  if (fell_back) *fell_back = false;
  switch (kind_) {
    case RuleKind::kLrtExact:
      if (threat_is_ffa_) return model_.h1_ffa(m) - model_.h0(m);
      return marginal_->log_density(m) - model_.h0(m);
    case RuleKind::kLrtFfa:
      return model_.h1_ffa(m) - model_.h0(m);
    case RuleKind::kLrtLaplace: {
      const auto result = laplace_->evaluate(m);
      if (fell_back) *fell_back = result.fell_back;
      return result.log_likelihood - model_.h0(m);
    }
    case RuleKind::kFfaLinear: {
      if (m.samples() != samples_) {
        throw std::invalid_argument("sample count differs from the rule's");
      }
      const auto claimed = model_.claimed_means();
      const double avg = model_.claimed_mean_average();
      double f = 0.0;
      for (std::size_t i = 0; i < m.stations(); ++i) {
        f += m.row_sum(i) * (avg - claimed[i]);
      }
      return f;
    }
  }
  return 0.0;
}

double DecisionStatistic::threshold_for(double log_threshold) const {
  if (kind_ != RuleKind::kFfaLinear) return log_threshold;
  return ffa_gamma_from_log_threshold(log_threshold, model_.geometry(),
                                      model_.channel(), samples_);
}

double log_likelihood_ratio(const MeasurementMatrix& m, RuleKind kind,
                            const NetworkGeometry& geom,
                            const ChannelParams& params,
                            const ThreatModel& threat,
                            const IntegrationSpec& spec) {
  if (kind == RuleKind::kFfaLinear) {
    return ffa_log_threshold_from_gamma(ffa_statistic(m, geom, params), geom,
                                        params, m.samples());
  }
  const DecisionStatistic statistic(geom, params, threat, kind, spec, m.samples());
  return statistic(m);
}

}  // namespace lvs
