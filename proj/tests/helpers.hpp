#pragma once

#include <cmath>
#include <random>

#include "nlkg/grid.hpp"

namespace testing {

inline double sech(double x) { return 1.0 / std::cosh(x); }

// Closed-form p = 3, d = 1 ground state sqrt(2 kappa^2) sech(kappa x).
inline double cubic_profile(double kappa, double x) {
  return std::sqrt(2.0) * kappa * sech(kappa * x);
}

// Smooth random field: a few localized Gaussian packets.
inline nlkg::Field random_field(const nlkg::Grid& grid, std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  nlkg::Field w(grid);
  for (int b = 0; b < 3; ++b) {
    const double c1 = 4.0 * u(rng), c2 = 4.0 * u(rng);
    const double k1 = u(rng), k2 = u(rng);
    const nlkg::Complex a1(u(rng), u(rng)), a2(u(rng), u(rng));
    for (std::size_t i = 0; i < grid.points(); ++i) {
      const double x = grid.x(i);
      w.u1[i] += scale * a1 * std::exp(-(x - c1) * (x - c1) / 2.0) * std::polar(1.0, k1 * x);
      w.u2[i] += scale * a2 * std::exp(-(x - c2) * (x - c2) / 2.0) * std::polar(1.0, k2 * x);
    }
  }
  return w;
}

inline double max_abs_diff(const nlkg::ComplexVector& a, const nlkg::ComplexVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testing
