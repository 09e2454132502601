#pragma once

// Attacker strategy and threat-model priors over the attacker's true position.

#include <optional>
#include <string>
#include <variant>

#include "lvs/core_model.hpp"

namespace lvs {

/// Attacker at effective infinity: every station sees the same mean RSS.
struct FarField {};

/// Attacker uniformly distributed on a circle around the claimed position.
struct CircleUda {
  double radius_m = 0.0;
};

/// Attacker uniformly distributed (by area) over an annulus around the claimed
/// position. inner == outer degenerates to CircleUda.
struct AnnulusMd {
  double inner_m = 0.0;
  double outer_m = 0.0;
};

using ThreatModel = std::variant<FarField, CircleUda, AnnulusMd>;

/// Throws std::invalid_argument if the model's radii are inconsistent with the
/// geometry (circle radius must exceed the network radius r; annulus needs
/// 0 < inner <= outer).
void validate_threat(const ThreatModel& model, const NetworkGeometry& geom);

std::string describe(const ThreatModel& model);

/// Circle models, including a degenerate annulus, report their radius.
std::optional<double> circle_radius(const ThreatModel& model) noexcept;

/// Transmit power offset that minimises the KL divergence between the
/// legitimate and spoofed measurement densities: mean_i(mu_claim_i - mu_true_i).
double optimal_power_boost(const NetworkGeometry& geom,
                           const ChannelParams& params, Point2D true_pos);

/// D_KL(p(m|H0) || p(m|theta,H1)) in nats for a given power offset.
double kl_divergence_h0_vs_h1(const NetworkGeometry& geom,
                              const ChannelParams& params, Point2D true_pos,
                              double power_offset_dB);

/// Ring-to-network radius ratio above which the spread of spoofed RSS across
/// any two stations stays within one shadowing standard deviation.
double rho_star(const ChannelParams& params);

/// Draws an attacker position from the threat model's prior. Returns
/// std::nullopt for FarField (no finite position).
std::optional<Point2D> sample_true_position(const ThreatModel& model,
                                            Point2D claimed, Rng& rng);

}  // namespace lvs
