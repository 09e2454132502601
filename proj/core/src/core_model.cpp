#include "lvs/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lvs {

double distance(Point2D a, Point2D b) noexcept {
  return std::hypot(a.u - b.u, a.v - b.v);
}

double max_line_deviation(std::span<const Point2D> points) {
  if (points.size() < 2) return 0.0;
  const double n = static_cast<double>(points.size());
  double cu = 0.0;
  double cv = 0.0;
  for (const auto& p : points) {
    cu += p.u;
    cv += p.v;
  }
  cu /= n;
  cv /= n;
  double suu = 0.0;
  double suv = 0.0;
  double svv = 0.0;
  for (const auto& p : points) {
    const double du = p.u - cu;
    const double dv = p.v - cv;
    suu += du * du;
    suv += du * dv;
    svv += dv * dv;
  }
  // Principal axis of the scatter matrix; the fitted line runs along it.
  const double angle = 0.5 * std::atan2(2.0 * suv, suu - svv);
  const double nu = -std::sin(angle);
  const double nv = std::cos(angle);
  double worst = 0.0;
  for (const auto& p : points) {
    worst = std::max(worst, std::abs(nu * (p.u - cu) + nv * (p.v - cv)));
  }
  return worst;
}

NetworkGeometry::NetworkGeometry(std::vector<Point2D> base_stations,
                                 Point2D claimed)
    : base_stations_(std::move(base_stations)), claimed_(claimed) {
  if (base_stations_.size() < 3) {
    throw std::invalid_argument("geometry needs at least 3 base stations, got " +
                                std::to_string(base_stations_.size()));
  }
  for (const auto& bs : base_stations_) {
    if (!std::isfinite(bs.u) || !std::isfinite(bs.v)) {
      throw std::invalid_argument("base station coordinates must be finite");
    }
  }
  if (!std::isfinite(claimed_.u) || !std::isfinite(claimed_.v)) {
    throw std::invalid_argument("claimed position must be finite");
  }
  // Relative to the layout's extent, so rounding noise on a line still counts.
  double extent = 0.0;
  for (const auto& bs : base_stations_) {
    extent = std::max(extent, distance(bs, base_stations_.front()));
  }
  if (!(max_line_deviation(base_stations_) > 1e-9 * extent)) {
    throw std::invalid_argument("base stations are collinear");
  }
  claimed_distances_.reserve(base_stations_.size());
  for (const auto& bs : base_stations_) {
    const double d = distance(bs, claimed_);
    if (!(d > 0.0)) {
      throw std::invalid_argument("claimed position coincides with a base station");
    }
    claimed_distances_.push_back(d);
  }
  max_claimed_distance_ =
      *std::max_element(claimed_distances_.begin(), claimed_distances_.end());
}

void ChannelParams::validate() const {
  if (!std::isfinite(ref_power_dB)) {
    throw std::invalid_argument("channel.ref_power_dB must be finite");
  }
  if (!(ref_distance_m > 0.0) || !std::isfinite(ref_distance_m)) {
    throw std::invalid_argument("channel.ref_distance_m must be positive");
  }
  if (!(path_loss_exponent > 0.0) || !std::isfinite(path_loss_exponent)) {
    throw std::invalid_argument("channel.path_loss_exponent must be positive");
  }
  if (!(shadowing_sigma_dB > 0.0) || !std::isfinite(shadowing_sigma_dB)) {
    throw std::invalid_argument("channel.sigma_dB must be positive");
  }
}

void PriorParams::validate() const {
  if (!(prior_legitimate > 0.0 && prior_legitimate < 1.0)) {
    throw std::invalid_argument("priors.p0 must lie strictly between 0 and 1");
  }
}

MeasurementMatrix::MeasurementMatrix(std::size_t stations, std::size_t samples)
    : stations_(stations), samples_(samples), values_(stations * samples, 0.0) {}

double MeasurementMatrix::row_sum(std::size_t i) const {
  const auto r = row(i);
  return std::accumulate(r.begin(), r.end(), 0.0);
}

MeasurementMatrix MeasurementMatrix::broadcast(std::span<const double> means,
                                               std::size_t samples) {
  MeasurementMatrix m(means.size(), samples);
  for (std::size_t i = 0; i < means.size(); ++i) {
    for (std::size_t l = 0; l < samples; ++l) m(i, l) = means[i];
  }
  return m;
}

double mean_rss(const ChannelParams& params, double d) {
  if (!(d > 0.0)) {
    throw std::domain_error("mean_rss: distance must be positive");
  }
  return params.ref_power_dB -
         10.0 * params.path_loss_exponent * std::log10(d / params.ref_distance_m);
}

std::vector<double> station_means(const NetworkGeometry& geom,
                                  const ChannelParams& params,
                                  Point2D position) {
  std::vector<double> out;
  out.reserve(geom.size());
  for (const auto& bs : geom.base_stations()) {
    out.push_back(mean_rss(params, distance(bs, position)));
  }
  return out;
}

std::vector<double> claimed_means(const NetworkGeometry& geom,
                                  const ChannelParams& params) {
  std::vector<double> out;
  out.reserve(geom.size());
  for (double d : geom.claimed_distances()) out.push_back(mean_rss(params, d));
  return out;
}

double mean_of(std::span<const double> values) noexcept {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

std::vector<double> spoofed_means(const NetworkGeometry& geom,
                                  const ChannelParams& params,
                                  Point2D true_pos) {
  auto means = station_means(geom, params, true_pos);
  const auto claim = claimed_means(geom, params);
  const double boost = mean_of(claim) - mean_of(means);
  for (double& m : means) m += boost;
  return means;
}

std::vector<double> far_field_means(const NetworkGeometry& geom,
                                    const ChannelParams& params) {
  const auto claim = claimed_means(geom, params);
  return std::vector<double>(geom.size(), mean_of(claim));
}

MeasurementMatrix sample_around(std::span<const double> means, double sigma,
                                std::size_t samples, Rng& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  MeasurementMatrix m(means.size(), samples);
  for (std::size_t i = 0; i < means.size(); ++i) {
    for (std::size_t l = 0; l < samples; ++l) {
      m(i, l) = means[i] + sigma * unit(rng);
    }
  }
  return m;
}

MeasurementMatrix sample_legitimate(const NetworkGeometry& geom,
                                    const ChannelParams& params,
                                    std::size_t samples, Rng& rng) {
  return sample_around(claimed_means(geom, params), params.shadowing_sigma_dB,
                       samples, rng);
}

MeasurementMatrix sample_malicious(const NetworkGeometry& geom,
                                   const ChannelParams& params,
                                   Point2D true_pos, std::size_t samples,
                                   Rng& rng) {
  return sample_around(spoofed_means(geom, params, true_pos),
                       params.shadowing_sigma_dB, samples, rng);
}

MeasurementMatrix sample_malicious_far_field(const NetworkGeometry& geom,
                                             const ChannelParams& params,
                                             std::size_t samples, Rng& rng) {
  return sample_around(far_field_means(geom, params),
                       params.shadowing_sigma_dB, samples, rng);
}

}  // namespace lvs
