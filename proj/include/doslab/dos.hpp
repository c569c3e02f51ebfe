#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "doslab/eig.hpp"
#include "doslab/models.hpp"
#include "doslab/spectrum.hpp"

namespace doslab {

/// Polynomial truncation of a holomorphic function on the disk,
/// f(z) = sum a_n z^n.  sup-norm on the closed disk is bounded by
/// sum |a_n|.
struct HoloPoly {
  std::vector<Complex> coeffs;  // a_0 .. a_N

  HoloPoly() : coeffs{Complex{0.0, 0.0}} {}
  explicit HoloPoly(std::vector<Complex> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) coeffs.push_back(Complex{0.0, 0.0});
  }

  static HoloPoly constant(Complex a0) { return HoloPoly({a0}); }

  static HoloPoly monomial(int k, Complex scale = Complex{1.0, 0.0}) {
    if (k < 0) throw std::invalid_argument("HoloPoly: negative degree");
    std::vector<Complex> c(static_cast<std::size_t>(k) + 1, Complex{0.0, 0.0});
    c.back() = scale;
    return HoloPoly(std::move(c));
  }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  double supnorm_bound() const {
    double acc = 0.0;
    for (const Complex& a : coeffs) acc += std::abs(a);
    return acc;
  }

  Complex operator()(Complex z) const {
    Complex acc{0.0, 0.0};
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
    return acc;
  }

  /// f(M) by Horner recursion on matrices.
  Eigen::MatrixXcd operator()(const Eigen::MatrixXcd& M) const {
    const std::int64_t n = M.rows();
    Eigen::MatrixXcd acc =
        coeffs.back() * Eigen::MatrixXcd::Identity(n, n);
    for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
      acc = (acc * M).eval();
      acc.diagonal().array() += coeffs[i];
    }
    return acc;
  }
};

/// L_Lambda(f) = (1/|Lambda|) sum_j f(lambda_j).
inline Complex eval_L_finite(const HoloPoly& f, const Spectrum& s) {
  if (s.eigenvalues.empty()) throw std::invalid_argument("eval_L_finite: empty spectrum");
  Complex acc{0.0, 0.0};
  for (const Complex& lam : s.eigenvalues) acc += f(lam);
  return acc / static_cast<double>(s.eigenvalues.size());
}

/// Boundary representative phi_Lambda(e^{it}) = (1/|Lambda|) sum_j
/// 1 / (1 - lambda_j e^{-it}); requires all eigenvalues strictly inside
/// the disk.
inline Complex phi_Lambda(const Spectrum& s, double t) {
  if (s.eigenvalues.empty()) throw std::invalid_argument("phi_Lambda: empty spectrum");
  const Complex em = std::polar(1.0, -t);
  Complex acc{0.0, 0.0};
  for (const Complex& lam : s.eigenvalues) {
    if (std::abs(lam) >= 1.0 - 1e-10)
      throw std::domain_error("phi_Lambda: eigenvalue too close to the unit circle");
    acc += 1.0 / (1.0 - lam * em);
  }
  return acc / static_cast<double>(s.eigenvalues.size());
}

/// psi_Lambda(z) = (1/|Lambda|) sum_j 1 / (1 - conj(lambda_j) z),
/// holomorphic for |z| < 1 / spr.
inline Complex psi_Lambda(const Spectrum& s, Complex z) {
  if (s.eigenvalues.empty()) throw std::invalid_argument("psi_Lambda: empty spectrum");
  const double spr = spectral_radius(s);
  if (std::abs(z) * spr >= 1.0 - 1e-12)
    throw std::domain_error("psi_Lambda: z outside the holomorphy disk");
  Complex acc{0.0, 0.0};
  for (const Complex& lam : s.eigenvalues) acc += 1.0 / (1.0 - std::conj(lam) * z);
  return acc / static_cast<double>(s.eigenvalues.size());
}

/// Taylor coefficients of psi_Lambda: b_k = tr((M^*)^k) / |Lambda|, by
/// repeated application of M^*.  b_0 = 1.
inline std::vector<Complex> moments_trace(const FiniteMatrix& m, int K) {
  if (K < 0) throw std::invalid_argument("moments_trace: K must be >= 0");
  const std::int64_t n = m.size();
  std::vector<Complex> b;
  b.reserve(static_cast<std::size_t>(K) + 1);
  b.emplace_back(1.0, 0.0);
  if (K == 0) return b;
  const Eigen::MatrixXcd A = m.entries.adjoint();
  Eigen::MatrixXcd P = A;
  for (int k = 1; k <= K; ++k) {
    b.push_back(P.trace() / static_cast<double>(n));
    if (k < K) P = (A * P).eval();
  }
  return b;
}

/// Projected trace per unit volume: Ltilde_Lambda(f) =
/// (1/|Lambda|) tr(P_Lambda f(T) P_Lambda), computed exactly for banded T
/// and polynomial f by finite propagation: entries of T^j on Lambda only
/// see sites within j * bandwidth of Lambda, so evaluating f on the window
/// enlarged by deg(f) * bandwidth and tracing the central block is exact.
inline Complex eval_L_tilde(const HoloPoly& f, const ModelSpec& spec,
                            const LatticeWindow& window, std::uint64_t seed,
                            std::int64_t extra_margin = 0,
                            std::int64_t size_cap = 4096) {
  const std::int64_t margin =
      static_cast<std::int64_t>(f.degree()) * spec.bandwidth() + extra_margin;
  const LatticeWindow big = window.enlarged(margin);
  if (big.size() > size_cap)
    throw std::invalid_argument("eval_L_tilde: enlarged matrix exceeds size cap");
  const FiniteMatrix M = build(spec, big, seed);
  const Eigen::MatrixXcd F = f(M.entries);
  const std::int64_t off = window.lo - big.lo;
  Complex acc{0.0, 0.0};
  for (std::int64_t i = 0; i < window.size(); ++i) acc += F(off + i, off + i);
  return acc / static_cast<double>(window.size());
}

/// L_Lambda via a fresh eigensolve of the window matrix.
inline Complex eval_L_restricted(const HoloPoly& f, const ModelSpec& spec,
                                 const LatticeWindow& window, std::uint64_t seed,
                                 double tol = 1e-12) {
  return eval_L_finite(f, eig_dense(build(spec, window, seed), tol));
}

enum class LRoute { restricted /* L_Lambda */, projected /* Ltilde_Lambda */ };

struct MeanStderr {
  Complex mean{0.0, 0.0};
  double stderr_of_mean = 0.0;
};

/// Monte-Carlo estimate of E(L_{Lambda,omega}(f)) over disorder
/// realizations.  Plain sample mean with Kahan-compensated accumulation in
/// the given seed order.
inline MeanStderr expectation_L(const HoloPoly& f, const ModelSpec& spec,
                                const LatticeWindow& window,
                                std::span<const std::uint64_t> seeds,
                                LRoute route = LRoute::projected) {
  if (seeds.size() < 2) throw std::invalid_argument("expectation_L: need at least 2 seeds");
  std::vector<Complex> samples;
  samples.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    samples.push_back(route == LRoute::projected
                          ? eval_L_tilde(f, spec, window, seed)
                          : eval_L_restricted(f, spec, window, seed));
  }
  Complex sum{0.0, 0.0}, comp{0.0, 0.0};
  for (const Complex& x : samples) {
    const Complex y = x - comp;
    const Complex t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  const double m = static_cast<double>(samples.size());
  MeanStderr out;
  out.mean = sum / m;
  double var = 0.0;
  for (const Complex& x : samples) var += std::norm(x - out.mean);
  out.stderr_of_mean = std::sqrt(var / (m * (m - 1.0)));
  return out;
}

inline constexpr int kQuadratureStartNodes = 64;
inline constexpr int kQuadratureMaxNodes = 1 << 16;

/// Trapezoid quadrature of f(e^{it}) g(t) dt / 2pi over the circle, with
/// node doubling until two successive levels agree below tol.  Spectrally
/// accurate for boundary data analytic in an annulus around T.
inline Complex circle_quadrature(const HoloPoly& f, const std::function<Complex(double)>& g,
                                 double tol, int max_nodes = kQuadratureMaxNodes) {
  auto level = [&](int nodes) {
    Complex acc{0.0, 0.0}, comp{0.0, 0.0};
    for (int k = 0; k < nodes; ++k) {
      const double t = 2.0 * std::numbers::pi * k / nodes;
      const Complex x = f(std::polar(1.0, t)) * g(t) - comp;
      const Complex s = acc + x;
      comp = (s - acc) - x;
      acc = s;
    }
    return acc / static_cast<double>(nodes);
  };
  int nodes = kQuadratureStartNodes;
  Complex prev = level(nodes);
  while (2 * nodes <= max_nodes) {
    nodes *= 2;
    const Complex cur = level(nodes);
    if (std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
  throw std::runtime_error(
      "circle_quadrature: no convergence before node cap (spectral radius too close to 1?)");
}

/// Boundary-circle route to the functional:
/// L_Lambda(f) = (1/2pi) int f(e^{it}) phi_Lambda(e^{it}) dt.
inline Complex circle_quadrature_L(const HoloPoly& f, const Spectrum& s, double tol) {
  if (spectral_radius(s) >= 1.0 - 1e-12)
    throw std::domain_error("circle_quadrature_L: spectral radius too close to 1");
  return circle_quadrature(f, [&](double t) { return phi_Lambda(s, t); }, tol);
}

/// Hardy-space pairing route: L(f) = <psi | f> = sum conj(b_n) a_n.
inline Complex pairing_L(const HoloPoly& f, std::span<const Complex> psi_coeffs) {
  if (static_cast<int>(psi_coeffs.size()) <= f.degree())
    throw std::invalid_argument("pairing_L: not enough psi coefficients for deg(f)");
  Complex acc{0.0, 0.0};
  for (int n = 0; n <= f.degree(); ++n)
    acc += std::conj(psi_coeffs[static_cast<std::size_t>(n)]) * f.coeffs[static_cast<std::size_t>(n)];
  return acc;
}

}  // namespace doslab
