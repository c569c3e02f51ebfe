#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace doslab {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
inline QuadRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // evaluate P_n and P_n' by the three-term recurrence
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

/// Gauss-Legendre rule mapped to [0, 1].
inline QuadRule gauss_legendre01(int n) {
  QuadRule rule = gauss_legendre(n);
  for (auto& x : rule.nodes) x = 0.5 * (x + 1.0);
  for (auto& w : rule.weights) w *= 0.5;
  return rule;
}

/// Tensor quadrature grid on the unit disk: Gauss-Legendre radially on
/// [0, 1] (with the r Jacobian folded into integrate), uniform angles.
struct DiskGrid {
  QuadRule radial;                 // nodes/weights on [0, 1]
  int n_theta = 256;

  static DiskGrid make(int n_r = 64, int n_theta = 256) {
    if (n_r < 1 || n_theta < 4) throw std::invalid_argument("DiskGrid: grid too small");
    DiskGrid g;
    g.radial = gauss_legendre01(n_r);
    g.n_theta = n_theta;
    return g;
  }

  /// Area integral over the disk of a complex-valued integrand F(z).
  std::complex<double> integrate(const std::function<std::complex<double>(std::complex<double>)>& F) const {
    std::complex<double> acc{0.0, 0.0};
    const double dtheta = 2.0 * std::numbers::pi / n_theta;
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
      const double r = radial.nodes[i];
      const double wr = radial.weights[i] * r;  // Jacobian
      std::complex<double> ring{0.0, 0.0};
      for (int j = 0; j < n_theta; ++j) {
        const double theta = dtheta * j;
        ring += F(std::polar(r, theta));
      }
      acc += wr * ring * dtheta;
    }
    return acc;
  }

  /// sum w_i r_i over the radial rule; equals 1/2 (= area / 2 pi) up to
  /// quadrature tolerance.
  double radial_mass() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < radial.nodes.size(); ++i)
      acc += radial.weights[i] * radial.nodes[i];
    return acc;
  }
};

}  // namespace doslab
