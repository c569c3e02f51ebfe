#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doslab/eig.hpp"
#include "doslab/models.hpp"

namespace doslab {

enum class SupportKind { real_line, circle, plane };

/// Weighted point masses.  Locations live on the real axis, on the unit
/// circle, or in the plane; weights are nonnegative.
struct EmpiricalMeasure {
  SupportKind support_kind = SupportKind::plane;
  std::vector<std::pair<Complex, double>> points;  // (location, weight)

  double total_mass() const {
    double acc = 0.0;
    for (const auto& [loc, w] : points) acc += w;
    return acc;
  }

  static EmpiricalMeasure dirac(Complex at, SupportKind kind = SupportKind::plane) {
    EmpiricalMeasure m;
    m.support_kind = kind;
    m.points.emplace_back(at, 1.0);
    return m;
  }
};

inline double spectral_radius(const Spectrum& s) {
  if (s.eigenvalues.empty()) throw std::invalid_argument("spectral_radius: empty spectrum");
  double r = 0.0;
  for (const Complex& lam : s.eigenvalues) r = std::max(r, std::abs(lam));
  return r;
}

/// Normalised counting measure dm^Lambda: weight 1/|Lambda| per eigenvalue,
/// repeated atoms kept.
inline EmpiricalMeasure counting_measure(const Spectrum& s) {
  EmpiricalMeasure m;
  m.support_kind = SupportKind::plane;
  const double w = s.eigenvalues.empty() ? 0.0 : 1.0 / static_cast<double>(s.eigenvalues.size());
  m.points.reserve(s.eigenvalues.size());
  for (const Complex& lam : s.eigenvalues) m.points.emplace_back(lam, w);
  return m;
}

/// Mixed moment integral m_pq = sum w z^p conj(z)^q.
inline Complex measure_moment(const EmpiricalMeasure& m, int p, int q) {
  Complex acc{0.0, 0.0};
  for (const auto& [z, w] : m.points) {
    Complex t{1.0, 0.0};
    for (int i = 0; i < p; ++i) t *= z;
    for (int i = 0; i < q; ++i) t *= std::conj(z);
    acc += w * t;
  }
  return acc;
}

/// Weak-convergence diagnostic: max deviation of mixed moments up to total
/// degree K (plane) or of the monomial moments x^p, p <= K (real line).
inline double moment_distance(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2, int K) {
  if (mu1.support_kind != mu2.support_kind)
    throw std::invalid_argument("moment_distance: mismatched supports");
  double worst = 0.0;
  if (mu1.support_kind == SupportKind::real_line) {
    for (int p = 0; p <= K; ++p)
      worst = std::max(worst, std::abs(measure_moment(mu1, p, 0) - measure_moment(mu2, p, 0)));
    return worst;
  }
  for (int p = 0; p <= K; ++p)
    for (int q = 0; p + q <= K; ++q)
      worst = std::max(worst, std::abs(measure_moment(mu1, p, q) - measure_moment(mu2, p, q)));
  return worst;
}

/// Closed-form eigenvalues of the corner-wrapped band matrix with
/// C0 = diag(1, g): lambda_j = sqrt(g) e^{i mean(omega)} e^{i (j-1) pi / n},
/// j = 1..2n.
inline Spectrum closed_form_band_eigs(double g, const std::vector<double>& phases) {
  if (!(g > 0.0 && g < 1.0))
    throw std::invalid_argument("closed_form_band_eigs: need 0 < g < 1");
  if (phases.empty() || phases.size() % 2 != 0)
    throw std::invalid_argument("closed_form_band_eigs: need an even, positive phase count");
  const std::int64_t two_n = static_cast<std::int64_t>(phases.size());
  const std::int64_t n = two_n / 2;
  double mean_phase = 0.0;
  for (double w : phases) mean_phase += w;
  mean_phase /= static_cast<double>(two_n);
  Spectrum s;
  s.source_size = two_n;
  s.residual = 0.0;
  const double rad = std::sqrt(g);
  for (std::int64_t j = 1; j <= two_n; ++j) {
    const double arg = mean_phase + static_cast<double>(j - 1) * std::numbers::pi / static_cast<double>(n);
    s.eigenvalues.push_back(std::polar(rad, arg));
  }
  return s;
}

/// Unordered set distance between two spectra: greedy globally-nearest
/// matching, verified to be a bijection.  Returns the largest matched
/// distance (infinity on size mismatch).
inline double spectrum_set_distance(const Spectrum& a, const Spectrum& b) {
  const std::size_t n = a.eigenvalues.size();
  if (n != b.eigenvalues.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used_a(n, false), used_b(n, false);
  double worst = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used_a[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (used_b[j]) continue;
        const double d = std::abs(a.eigenvalues[i] - b.eigenvalues[j]);
        if (d < best) { best = d; bi = i; bj = j; }
      }
    }
    used_a[bi] = used_b[bj] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace doslab
