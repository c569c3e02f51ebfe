#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doslab/dos.hpp"
#include "doslab/quadrature.hpp"
#include "doslab/spectrum.hpp"

namespace doslab {

/// Poisson kernel P_r(t) = Re (1 + r e^{it}) / (1 - r e^{it})
///               = (1 - r^2) / (1 + r^2 - 2 r cos t).
inline double poisson_kernel(double r, double t) {
  if (r < 0.0 || r >= 1.0) throw std::invalid_argument("poisson_kernel: need 0 <= r < 1");
  return (1.0 - r * r) / (1.0 + r * r - 2.0 * r * std::cos(t));
}

/// Conjugate Poisson kernel Q_r(t) = 2 r sin t / (1 + r^2 - 2 r cos t).
inline double conjugate_poisson(double r, double t) {
  if (r < 0.0 || r >= 1.0) throw std::invalid_argument("conjugate_poisson: need 0 <= r < 1");
  return 2.0 * r * std::sin(t) / (1.0 + r * r - 2.0 * r * std::cos(t));
}

/// Borel (Cauchy) transform F_k(z) = sum w_i / (x_i - z) of a measure on
/// the real line.
inline Complex borel_transform(const EmpiricalMeasure& dk, Complex z) {
  if (dk.support_kind != SupportKind::real_line)
    throw std::invalid_argument("borel_transform: measure must live on the real line");
  Complex acc{0.0, 0.0};
  for (const auto& [loc, w] : dk.points) {
    const Complex x{loc.real(), 0.0};
    if (std::abs(x - z) < 1e-10)
      throw std::domain_error("borel_transform: z too close to an atom");
    acc += w / (x - z);
  }
  return acc;
}

/// psi from a plane measure: psi(z) = sum w_i / (1 - z conj(zeta_i)).
inline Complex psi_from_plane_measure(const EmpiricalMeasure& dm, Complex z) {
  if (dm.support_kind != SupportKind::plane)
    throw std::invalid_argument("psi_from_plane_measure: measure must live in the plane");
  Complex acc{0.0, 0.0};
  for (const auto& [zeta, w] : dm.points) {
    const Complex denom = 1.0 - z * std::conj(zeta);
    if (std::abs(denom) < 1e-12)
      throw std::domain_error("psi_from_plane_measure: pole proximity");
    acc += w / denom;
  }
  return acc;
}

/// NSA representation psi^(g)(z) = int dk(x) / (1 - z x / s(g)) with
/// s(g) = e^g + e^-g + B, over an atomic Anderson density of states dk.
inline Complex psi_g_nsa(const EmpiricalMeasure& dk, double g, double B, Complex z) {
  if (dk.support_kind != SupportKind::real_line)
    throw std::invalid_argument("psi_g_nsa: dk must live on the real line");
  const double s = std::exp(g) + std::exp(-g) + B;
  if (std::abs(z) >= s / (2.0 + B))
    throw std::domain_error("psi_g_nsa: z outside the holomorphy disk");
  Complex acc{0.0, 0.0};
  for (const auto& [loc, w] : dk.points) {
    const Complex denom = 1.0 - z * loc.real() / s;
    if (std::abs(denom) < 1e-12) throw std::domain_error("psi_g_nsa: pole proximity");
    acc += w / denom;
  }
  return acc;
}

/// Borel-transform route to the same function: psi^(g)(z) =
/// -F_k(s/z) s/z, valid for z != 0 off the support image.
inline Complex psi_g_nsa_via_borel(const EmpiricalMeasure& dk, double g, double B, Complex z) {
  if (std::abs(z) < 1e-14) return Complex{1.0, 0.0};  // limit value psi(0) = b_0 = 1
  const double s = std::exp(g) + std::exp(-g) + B;
  const Complex w = s / z;
  return -borel_transform(dk, w) * w;
}

/// Scaled-unitary representation psi^(r)(z) = int dk(t') / (1 - z r e^{-it'})
/// over an atomic measure on the circle (locations are the unit-modulus
/// points e^{it'}).
inline Complex psi_r_unitary(const EmpiricalMeasure& dk, double r, Complex z) {
  if (dk.support_kind != SupportKind::circle)
    throw std::invalid_argument("psi_r_unitary: dk must live on the circle");
  if (std::abs(z) * r >= 1.0 + 1e-12)
    throw std::domain_error("psi_r_unitary: z outside the holomorphy disk");
  Complex acc{0.0, 0.0};
  for (const auto& [loc, w] : dk.points) {
    const Complex denom = 1.0 - z * r * std::conj(loc);
    if (std::abs(denom) < 1e-12) throw std::domain_error("psi_r_unitary: pole proximity");
    acc += w / denom;
  }
  return acc;
}

/// Harmonic disk density for phi_Lambda, in the anti-analytic closed form
/// that coincides with the averaged Bergman reproducing kernel:
/// m_phi(z) = (1 / pi |Lambda|) sum_j 1 / (1 - lambda_j conj(z))^2.
inline Complex bergman_density(const Spectrum& s, Complex z) {
  if (s.eigenvalues.empty()) throw std::invalid_argument("bergman_density: empty spectrum");
  Complex acc{0.0, 0.0};
  for (const Complex& lam : s.eigenvalues) {
    const Complex d = 1.0 - lam * std::conj(z);
    acc += 1.0 / (d * d);
  }
  return acc / (std::numbers::pi * static_cast<double>(s.eigenvalues.size()));
}

struct HarmonicCheckReport {
  double poisson_route_max_dev = 0.0;   // |m_phi via Poisson integral - closed form|
  double laplacian_h = 0.0;             // |discrete Laplacian| at step h
  double laplacian_h2 = 0.0;            // |discrete Laplacian| at step h/2
  double stencil_h = 0.0;
  std::vector<double> reproducing_devs; // |int f m_phi - L_Lambda(f)| per test f
  bool pass = false;
};

namespace detail {

/// Poisson integral P[phi_Lambda](z) by trapezoid over boundary samples.
inline Complex poisson_extension(const Spectrum& s, Complex z, int nodes = 2048) {
  const double r = std::abs(z);
  const double th = std::arg(z);
  Complex acc{0.0, 0.0};
  for (int k = 0; k < nodes; ++k) {
    const double t = 2.0 * std::numbers::pi * k / nodes;
    acc += poisson_kernel(r, th - t) * phi_Lambda(s, t);
  }
  return acc / static_cast<double>(nodes);
}

/// m_phi(x, y) = (1/2pi)(d_x + i d_y){(x - iy) P[phi](x, y)} by central
/// differences on the Poisson-integral route.
inline Complex m_phi_numeric(const Spectrum& s, Complex z, double h = 1e-4, int nodes = 2048) {
  auto D = [&](Complex w) {
    return std::conj(w) * poisson_extension(s, w, nodes);
  };
  const Complex dx = (D(z + h) - D(z - h)) / (2.0 * h);
  const Complex dy = (D(z + Complex{0.0, h}) - D(z - Complex{0.0, h})) / (2.0 * h);
  return (dx + Complex{0.0, 1.0} * dy) / (2.0 * std::numbers::pi);
}

}  // namespace detail

/// Numerical validation of the harmonic disk representation: the Poisson
/// route to m_phi matches the anti-analytic closed form, the closed form is
/// discretely harmonic at O(h^2), and area integration against it
/// reproduces L_Lambda on a polynomial test set.
inline HarmonicCheckReport harmonic_density_check(
    const Spectrum& s, const DiskGrid& grid,
    const std::vector<HoloPoly>& test_set = {HoloPoly::monomial(0), HoloPoly::monomial(1),
                                             HoloPoly::monomial(2)},
    double route_tol = 1e-5, double reproduce_tol = 1e-6) {
  if (spectral_radius(s) >= 1.0 - 1e-12)
    throw std::invalid_argument("harmonic_density_check: spectral radius too close to 1");
  HarmonicCheckReport rep;

  // (i) Poisson-integral route vs closed form at interior probes.
  const std::vector<Complex> probes = {
      Complex{0.0, 0.0}, Complex{0.3, 0.1}, Complex{-0.2, 0.25}, Complex{0.1, -0.35}};
  for (const Complex& z : probes) {
    const double dev = std::abs(detail::m_phi_numeric(s, z) - bergman_density(s, z));
    rep.poisson_route_max_dev = std::max(rep.poisson_route_max_dev, dev);
  }

  // (ii) discrete Laplacian of the closed form on a 5-point stencil,
  // at steps h and h/2.
  auto lap = [&](Complex z, double h) {
    const Complex sum = bergman_density(s, z + h) + bergman_density(s, z - h) +
                        bergman_density(s, z + Complex{0.0, h}) +
                        bergman_density(s, z - Complex{0.0, h}) -
                        4.0 * bergman_density(s, z);
    return std::abs(sum / (h * h));
  };
  const Complex z0{0.2, 0.1};
  rep.stencil_h = 0.05;
  rep.laplacian_h = lap(z0, rep.stencil_h);
  rep.laplacian_h2 = lap(z0, rep.stencil_h / 2.0);

  // (iii) reproducing property over the test polynomials.
  bool reproduce_ok = true;
  for (const HoloPoly& f : test_set) {
    const Complex quad = grid.integrate(
        [&](Complex z) { return f(z) * bergman_density(s, z); });
    const double dev = std::abs(quad - eval_L_finite(f, s));
    rep.reproducing_devs.push_back(dev);
    reproduce_ok = reproduce_ok && dev <= reproduce_tol;
  }

  rep.pass = rep.poisson_route_max_dev <= route_tol &&
             rep.laplacian_h2 <= rep.laplacian_h + 1e-12 && reproduce_ok;
  return rep;
}

}  // namespace doslab
