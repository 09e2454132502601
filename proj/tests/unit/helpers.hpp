#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "lvs/simulator.hpp"

namespace lvs::test {

// Four stations on the axes; every station sees the same claimed mean.
inline NetworkGeometry cross_geometry(double arm = 100.0) {
  return NetworkGeometry({{arm, 0}, {-arm, 0}, {0, arm}, {0, -arm}}, {0, 0});
}

inline NetworkGeometry random_geometry(std::uint64_t seed, std::size_t k = 10) {
  GeometrySpec spec;
  spec.count = k;
  return make_geometry(spec, seed);
}

// Sum of per-entry normal log densities, written out term by term.
inline double naive_log_density(const MeasurementMatrix& m, const std::vector<double>& means,
                                double sigma) {
  double total = 0.0;
  for (std::size_t i = 0; i < m.stations(); ++i) {
    for (std::size_t l = 0; l < m.samples(); ++l) {
      const double z = (m(i, l) - means[i]) / sigma;
      total += std::log(std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sigma));
    }
  }
  return total;
}

inline double zero_residual_log_lik(std::size_t k, std::size_t l, double sigma) {
  return static_cast<double>(k * l) *
         std::log(1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma));
}

}  // namespace lvs::test
