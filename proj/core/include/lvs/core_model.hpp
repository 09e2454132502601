#pragma once

// Network geometry, log-normal shadowing channel and RSS synthesis for the
// legitimate and spoofing hypotheses.

#include <cstddef>
#include <span>
#include <vector>

#include "lvs/rng.hpp"

namespace lvs {

/// Planar position in meters.
struct Point2D {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

double distance(Point2D a, Point2D b) noexcept;

/// Largest perpendicular distance from any point to the total-least-squares
/// line through the set. Zero means the points are collinear.
double max_line_deviation(std::span<const Point2D> points);

/// Base stations plus the position a user claims to be at.
///
/// Requires more than two stations that are not all on one line, and a claimed
/// position that does not coincide with every station.
class NetworkGeometry {
 public:
  NetworkGeometry(std::vector<Point2D> base_stations, Point2D claimed);

  std::size_t size() const noexcept { return base_stations_.size(); }
  std::span<const Point2D> base_stations() const noexcept {
    return base_stations_;
  }
  Point2D claimed() const noexcept { return claimed_; }

  /// Distance from each station to the claimed position.
  std::span<const double> claimed_distances() const noexcept {
    return claimed_distances_;
  }

  /// Largest station-to-claim distance (the network radius seen from the
  /// claim).
  double max_claimed_distance() const noexcept { return max_claimed_distance_; }

 private:
  std::vector<Point2D> base_stations_;
  Point2D claimed_;
  std::vector<double> claimed_distances_;
  double max_claimed_distance_ = 0.0;
};

struct ChannelParams {
  double ref_power_dB = 0.0;
  double ref_distance_m = 1.0;
  double path_loss_exponent = 3.0;
  double shadowing_sigma_dB = 5.0;

  void validate() const;
};

struct PriorParams {
  /// Probability that a user is legitimate.
  double prior_legitimate = 0.9;

  double prior_malicious() const noexcept { return 1.0 - prior_legitimate; }
  void validate() const;
};

/// K x L block of RSS samples in dB; row i holds the L samples taken by
/// station i.
class MeasurementMatrix {
 public:
  MeasurementMatrix() = default;
  MeasurementMatrix(std::size_t stations, std::size_t samples);

  std::size_t stations() const noexcept { return stations_; }
  std::size_t samples() const noexcept { return samples_; }

  double& operator()(std::size_t i, std::size_t l) {
    return values_[i * samples_ + l];
  }
  double operator()(std::size_t i, std::size_t l) const {
    return values_[i * samples_ + l];
  }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * samples_, samples_};
  }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double row_sum(std::size_t i) const;

  /// Matrix with every column equal to `means`.
  static MeasurementMatrix broadcast(std::span<const double> means,
                                     std::size_t samples);

  friend bool operator==(const MeasurementMatrix&,
                         const MeasurementMatrix&) = default;

 private:
  std::size_t stations_ = 0;
  std::size_t samples_ = 0;
  std::vector<double> values_;
};

/// Mean received power at distance `d` under log-distance path loss.
double mean_rss(const ChannelParams& params, double d);

/// Per-station mean RSS for a transmitter at `position` with no power boost.
std::vector<double> station_means(const NetworkGeometry& geom,
                                  const ChannelParams& params,
                                  Point2D position);

/// Per-station means seen from a legitimate user at the claimed position.
std::vector<double> claimed_means(const NetworkGeometry& geom,
                                  const ChannelParams& params);

/// Per-station means produced by an attacker at `true_pos` who applies the
/// KL-optimal power boost: mu_i(true_pos) + mean(mu_claim) - mean(mu_true).
/// Throws std::domain_error if `true_pos` coincides with a station.
std::vector<double> spoofed_means(const NetworkGeometry& geom,
                                  const ChannelParams& params,
                                  Point2D true_pos);

/// Far-field attacker: every station sees the mean of the claimed means.
std::vector<double> far_field_means(const NetworkGeometry& geom,
                                    const ChannelParams& params);

double mean_of(std::span<const double> values) noexcept;

/// Draws `samples` i.i.d. columns of means + sigma * z. The draw order is row
/// major, so two calls with equal generators consume identical noise.
MeasurementMatrix sample_around(std::span<const double> means, double sigma,
                                std::size_t samples, Rng& rng);

MeasurementMatrix sample_legitimate(const NetworkGeometry& geom,
                                    const ChannelParams& params,
                                    std::size_t samples, Rng& rng);

MeasurementMatrix sample_malicious(const NetworkGeometry& geom,
                                   const ChannelParams& params,
                                   Point2D true_pos, std::size_t samples,
                                   Rng& rng);

/// Attacker at effective infinity (the far-field threat model).
MeasurementMatrix sample_malicious_far_field(const NetworkGeometry& geom,
                                             const ChannelParams& params,
                                             std::size_t samples, Rng& rng);

}  // namespace lvs
