#pragma once

// Small numerical kernels shared by the likelihood and threshold code.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "lvs/core_model.hpp"

namespace lvs::numeric {

/// log(sum(exp(x))) without overflow; -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> x) noexcept;

/// n-point Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(std::size_t n);

/// Golden-section search for the maximiser of a unimodal f on [lo, hi].
double golden_section_maximize(const std::function<double(double)>& f,
                               double lo, double hi, double tolerance);

/// Symmetric 2x2 matrix stored as {xx, xy, yy}.
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const noexcept { return xx * yy - xy * xy; }
  bool negative_definite() const noexcept { return xx < 0.0 && det() > 0.0; }
};

using Field2D = std::function<double(Point2D)>;

std::array<double, 2> central_gradient(const Field2D& f, Point2D x, double step);
Sym2 central_hessian(const Field2D& f, Point2D x, double step);

/// Second-order Laplace estimate of log(integral exp(f) d^2 theta) around a
/// mode: f(mode) + log(2 pi) - 0.5 log det(-H).
struct LaplaceEstimate {
  double log_integral = 0.0;
  Sym2 hessian;
  bool valid = false;  // false when the Hessian is not negative definite
};
LaplaceEstimate laplace_log_integral(const Field2D& f, Point2D mode,
                                     double step);

}  // namespace lvs::numeric
