#include "lvs/adversary.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lvs {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

void validate_threat(const ThreatModel& model, const NetworkGeometry& geom) {
  const double r = geom.max_claimed_distance();
  std::visit(
      Overloaded{
          [](const FarField&) {},
          [r](const CircleUda& c) {
            if (!(c.radius_m > r) || !std::isfinite(c.radius_m)) {
              throw std::invalid_argument(
                  "threat.radius_m must exceed the network radius r = " +
                  std::to_string(r));
            }
          },
          [](const AnnulusMd& a) {
            if (!(a.inner_m > 0.0) || !(a.outer_m >= a.inner_m) ||
                !std::isfinite(a.outer_m)) {
              throw std::invalid_argument(
                  "threat annulus needs 0 < inner_m <= outer_m");
            }
          },
      },
      model);
}

std::string describe(const ThreatModel& model) {
  std::ostringstream os;
  os.precision(9);
  std::visit(Overloaded{
                 [&](const FarField&) { os << "ffa"; },
                 [&](const CircleUda& c) { os << "circle(R=" << c.radius_m << ")"; },
                 [&](const AnnulusMd& a) {
                   os << "annulus(R1=" << a.inner_m << ",R2=" << a.outer_m << ")";
                 },
             },
             model);
  return os.str();
}

std::optional<double> circle_radius(const ThreatModel& model) noexcept {
  if (const auto* c = std::get_if<CircleUda>(&model)) return c->radius_m;
  if (const auto* a = std::get_if<AnnulusMd>(&model)) {
    if (a->inner_m == a->outer_m) return a->inner_m;
  }
  return std::nullopt;
}

double optimal_power_boost(const NetworkGeometry& geom,
                           const ChannelParams& params, Point2D true_pos) {
  const auto claim = claimed_means(geom, params);
  const auto attack = station_means(geom, params, true_pos);
  double sum = 0.0;
  for (std::size_t i = 0; i < claim.size(); ++i) sum += claim[i] - attack[i];
  return sum / static_cast<double>(claim.size());
}

double kl_divergence_h0_vs_h1(const NetworkGeometry& geom,
                              const ChannelParams& params, Point2D true_pos,
                              double power_offset_dB) {
  const auto claim = claimed_means(geom, params);
  const auto attack = station_means(geom, params, true_pos);
  const double var = params.shadowing_sigma_dB * params.shadowing_sigma_dB;
  double sum = 0.0;
  for (std::size_t i = 0; i < claim.size(); ++i) {
    const double gap = claim[i] - attack[i] - power_offset_dB;
    sum += gap * gap;
  }
  return sum / (2.0 * var);
}

double rho_star(const ChannelParams& params) {
  const double growth = std::exp(params.shadowing_sigma_dB * std::numbers::ln10 /
                                 (10.0 * params.path_loss_exponent));
  return 2.0 / (growth - 1.0) + 1.0;
}

std::optional<Point2D> sample_true_position(const ThreatModel& model,
                                            Point2D claimed, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto at = [&](double radius, double angle) {
    return Point2D{claimed.u + radius * std::cos(angle),
                   claimed.v + radius * std::sin(angle)};
  };
  return std::visit(
      Overloaded{
          [](const FarField&) -> std::optional<Point2D> { return std::nullopt; },
          [&](const CircleUda& c) -> std::optional<Point2D> {
            return at(c.radius_m, 2.0 * std::numbers::pi * unit(rng));
          },
          [&](const AnnulusMd& a) -> std::optional<Point2D> {
            const double angle = 2.0 * std::numbers::pi * unit(rng);
            const double lo = a.inner_m * a.inner_m;
            const double hi = a.outer_m * a.outer_m;
            return at(std::sqrt(lo + unit(rng) * (hi - lo)), angle);
          },
      },
      model);
}

}  // namespace lvs
