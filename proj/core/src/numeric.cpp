#include "lvs/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lvs::numeric {

double log_sum_exp(std::span<const double> x) noexcept {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : x) peak = std::max(peak, v);
  if (!std::isfinite(peak)) return peak;
  double acc = 0.0;
  for (double v : x) acc += std::exp(v - peak);
  return peak + std::log(acc);
}

QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double nd = static_cast<double>(n);
  for (std::size_t k = 0; k < (n + 1) / 2; ++k) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(k) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t j = 2; j <= n; ++j) {
        const double jd = static_cast<double>(j);
        const double p2 = ((2.0 * jd - 1.0) * x * p1 - (jd - 1.0) * p0) / jd;
        p0 = p1;
        p1 = p2;
      }
      dp = nd * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[k] = -x;
    rule.nodes[n - 1 - k] = x;
    rule.weights[k] = w;
    rule.weights[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double golden_section_maximize(const std::function<double(double)>& f,
                               double lo, double hi, double tolerance) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (std::abs(b - a) > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::array<double, 2> central_gradient(const Field2D& f, Point2D x, double step) {
  const double gu = (f({x.u + step, x.v}) - f({x.u - step, x.v})) / (2.0 * step);
  const double gv = (f({x.u, x.v + step}) - f({x.u, x.v - step})) / (2.0 * step);
  return {gu, gv};
}

Sym2 central_hessian(const Field2D& f, Point2D x, double step) {
  const double f0 = f(x);
  const double h2 = step * step;
  Sym2 h;
  h.xx = (f({x.u + step, x.v}) - 2.0 * f0 + f({x.u - step, x.v})) / h2;
  h.yy = (f({x.u, x.v + step}) - 2.0 * f0 + f({x.u, x.v - step})) / h2;
  h.xy = (f({x.u + step, x.v + step}) - f({x.u + step, x.v - step}) -
          f({x.u - step, x.v + step}) + f({x.u - step, x.v - step})) /
         (4.0 * h2);
  return h;
}

LaplaceEstimate laplace_log_integral(const Field2D& f, Point2D mode,
                                     double step) {
  LaplaceEstimate out;
  out.hessian = central_hessian(f, mode, step);
  out.valid = out.hessian.negative_definite();
  if (!out.valid) return out;
  out.log_integral = f(mode) + std::log(2.0 * std::numbers::pi) -
                     0.5 * std::log(out.hessian.det());
  return out;
}

}  // namespace lvs::numeric
