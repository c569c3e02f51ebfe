#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "doslab/disorder.hpp"
#include "doslab/lattice.hpp"

namespace doslab {

using Complex = std::complex<double>;

enum class BoundaryTag { dirichlet, periodic };
enum class ModelKind { nsa, anderson, scaled_unitary_band, non_unitary_band };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::nsa: return "nsa";
    case ModelKind::anderson: return "anderson";
    case ModelKind::scaled_unitary_band: return "scaled_unitary_band";
    case ModelKind::non_unitary_band: return "non_unitary_band";
  }
  return "?";
}

/// Non self-adjoint Anderson chain with asymmetric hopping e^{+-g} and
/// random potential on [-B, B], rescaled by s(g) = e^g + e^-g + B.
struct NsaParams {
  double g = 1.0;
  double B = 4.0;
  PotentialDist dist = PotentialDist::uniform;
  double scale() const { return std::exp(g) + std::exp(-g) + B; }
};

/// Hermitian Anderson chain (g = 0, no rescaling).
struct AndersonParams {
  double B = 1.0;
  PotentialDist dist = PotentialDist::uniform;
};

/// Band family with an exactly unitary planar-rotation coupling block,
/// shrunk by a factor r < 1.
struct ScaledUnitaryBandParams {
  double r = 0.7;
  double theta0 = 0.0;
  PhaseDist dist = PhaseDist::uniform;
};

/// Band family with a general 2x2 coupling block C0 = [[alpha, beta],
/// [gamma, delta]], ||C0|| <= 1, optionally shrunk by r <= 1.
struct NonUnitaryBandParams {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};
  Complex gamma{0.0, 0.0};
  Complex delta{0.25, 0.0};
  double r = 1.0;
  PhaseDist dist = PhaseDist::uniform;
};

struct ModelSpec {
  std::variant<NsaParams, AndersonParams, ScaledUnitaryBandParams, NonUnitaryBandParams> params;

  ModelKind kind() const {
    switch (params.index()) {
      case 0: return ModelKind::nsa;
      case 1: return ModelKind::anderson;
      case 2: return ModelKind::scaled_unitary_band;
      default: return ModelKind::non_unitary_band;
    }
  }

  /// Maximal off-diagonal reach of the matrix representation.
  int bandwidth() const {
    const ModelKind k = kind();
    return (k == ModelKind::nsa || k == ModelKind::anderson) ? 1 : 2;
  }

  bool is_band() const {
    const ModelKind k = kind();
    return k == ModelKind::scaled_unitary_band || k == ModelKind::non_unitary_band;
  }
};

/// Dense realization of one finite-volume restriction T^Lambda_omega.
struct FiniteMatrix {
  Eigen::MatrixXcd entries;
  LatticeWindow window;
  BoundaryTag bc_tag = BoundaryTag::dirichlet;
  int bandwidth = 1;
  double scale_applied = 1.0;
  ModelKind kind = ModelKind::nsa;

  std::int64_t size() const { return entries.rows(); }

  bool is_real(double tol = 0.0) const {
    return entries.imag().cwiseAbs().maxCoeff() <= tol;
  }

  /// Largest singular value.  The builders never scale past a contraction
  /// except for the unscaled Anderson helper (scale_applied = 1 by spec).
  double operator_norm() const {
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(entries).singularValues()(0);
  }

  /// The Anderson helper is the one family built without its contraction
  /// rescaling; all other builders produce genuine contractions.
  bool contraction_expected() const { return kind != ModelKind::anderson; }
};

namespace detail {

inline Eigen::MatrixXcd nsa_tridiagonal(double g, double B, PotentialDist dist,
                                        const LatticeWindow& window,
                                        std::uint64_t seed, double scale) {
  const std::int64_t N = window.size();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
  const Disorder dis{seed};
  const double sub = std::exp(-g) / scale;
  const double sup = std::exp(g) / scale;
  for (std::int64_t i = 0; i < N; ++i) {
    M(i, i) = dis.potential(window.site(i), B, dist) / scale;
    if (i + 1 < N) {
      M(i + 1, i) = sub;
      M(i, i + 1) = sup;
    }
  }
  return M;
}

/// Spectral norm of a 2x2 complex block.
inline double block_norm(Complex a, Complex b, Complex c, Complex d) {
  Eigen::Matrix2cd C;
  C << a, b, c, d;
  return C.jacobiSvd().singularValues()(0);
}

}  // namespace detail

/// T^Lambda_omega(g) = H^Lambda_omega(g) / s(g) with Dirichlet boundary
/// conditions on a symmetric window; sub-diagonal e^-g/s, super-diagonal
/// e^g/s, diagonal omega_j/s.
inline FiniteMatrix build_nsa(const NsaParams& p, const LatticeWindow& window,
                              std::uint64_t seed) {
  if (p.B <= 0.0) throw std::invalid_argument("build_nsa: B must be positive");
  if (p.g < 0.0) throw std::invalid_argument("build_nsa: g must be >= 0");
  if (window.cell_size != 1) throw std::invalid_argument("build_nsa: window must have cell size 1");
  if (window.size() < 3) throw std::invalid_argument("build_nsa: window too small (n = 0 degenerates)");
  FiniteMatrix m;
  m.window = window;
  m.bc_tag = BoundaryTag::dirichlet;
  m.bandwidth = 1;
  m.scale_applied = p.scale();
  m.kind = ModelKind::nsa;
  m.entries = detail::nsa_tridiagonal(p.g, p.B, p.dist, window, seed, m.scale_applied);
  return m;
}

/// Unscaled Hermitian Anderson matrix H^Lambda_omega(0); real symmetric.
inline FiniteMatrix build_anderson(const AndersonParams& p, const LatticeWindow& window,
                                   std::uint64_t seed) {
  if (p.B <= 0.0) throw std::invalid_argument("build_anderson: B must be positive");
  if (window.cell_size != 1) throw std::invalid_argument("build_anderson: window must have cell size 1");
  if (window.size() < 3) throw std::invalid_argument("build_anderson: window too small (n = 0 degenerates)");
  FiniteMatrix m;
  m.window = window;
  m.bc_tag = BoundaryTag::dirichlet;
  m.bandwidth = 1;
  m.scale_applied = 1.0;
  m.kind = ModelKind::anderson;
  m.entries = detail::nsa_tridiagonal(0.0, p.B, p.dist, window, seed, 1.0);
  return m;
}

namespace detail {

/// Shared band-matrix assembly.  Local sites 1..2n carry n coupling cells;
/// cell j couples columns (2j, 2j+1) into rows (2j-1) with (gamma, delta)
/// and (2j+2) with (alpha, beta).  The corner wrap glues columns (1, 2n)
/// to rows (2, 2n-1) with the same block, which keeps the matrix unitary
/// whenever C0 is.  Every row i is multiplied by the phase e^{i omega_i}.
inline FiniteMatrix build_band_impl(Complex alpha, Complex beta, Complex gamma,
                                    Complex delta, double r, PhaseDist dist,
                                    ModelKind kind, const LatticeWindow& window,
                                    std::uint64_t seed) {
  const std::int64_t N = window.size();
  if (N % 2 != 0) throw std::invalid_argument("build_band: window size must be even");
  if (detail::block_norm(alpha, beta, gamma, delta) > 1.0 + 1e-12)
    throw std::invalid_argument("build_band: ||C0|| > 1");
  if (r <= 0.0 || r > 1.0) throw std::invalid_argument("build_band: scale r must lie in (0, 1]");
  const std::int64_t n = N / 2;

  const Disorder dis{seed};
  std::vector<Complex> rowphase(static_cast<std::size_t>(N));
  for (std::int64_t i = 0; i < N; ++i) {
    const double w = dis.phase(window.site(i), dist);
    rowphase[static_cast<std::size_t>(i)] = std::polar(1.0, w);
  }

  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
  // 1-based local indices for legibility; at(i, j) addresses row i, col j.
  auto at = [&](std::int64_t i, std::int64_t j) -> Complex& { return M(i - 1, j - 1); };
  auto ph = [&](std::int64_t i) { return rowphase[static_cast<std::size_t>(i - 1)]; };

  for (std::int64_t j = 1; j < n; ++j) {
    at(2 * j - 1, 2 * j) = gamma * ph(2 * j - 1);
    at(2 * j - 1, 2 * j + 1) = delta * ph(2 * j - 1);
    at(2 * j + 2, 2 * j) = alpha * ph(2 * j + 2);
    at(2 * j + 2, 2 * j + 1) = beta * ph(2 * j + 2);
  }
  // corner wrap: columns (1, 2n) into rows (2, 2n-1)
  at(2, 1) = alpha * ph(2);
  at(2, 2 * n) = beta * ph(2);
  at(2 * n - 1, 1) = gamma * ph(2 * n - 1);
  at(2 * n - 1, 2 * n) = delta * ph(2 * n - 1);

  FiniteMatrix m;
  m.entries = (r * M).eval();
  m.window = window;
  m.bc_tag = BoundaryTag::periodic;
  m.bandwidth = 2;
  m.scale_applied = r;
  m.kind = kind;
  return m;
}

}  // namespace detail

inline FiniteMatrix build_band(const ScaledUnitaryBandParams& p, const LatticeWindow& window,
                               std::uint64_t seed) {
  if (p.r <= 0.0 || p.r >= 1.0)
    throw std::invalid_argument("build_band: scaled-unitary r must lie in (0, 1)");
  const double c = std::cos(p.theta0), s = std::sin(p.theta0);
  return detail::build_band_impl(Complex{c, 0}, Complex{-s, 0}, Complex{s, 0}, Complex{c, 0},
                                 p.r, p.dist, ModelKind::scaled_unitary_band, window, seed);
}

inline FiniteMatrix build_band(const NonUnitaryBandParams& p, const LatticeWindow& window,
                               std::uint64_t seed) {
  return detail::build_band_impl(p.alpha, p.beta, p.gamma, p.delta, p.r, p.dist,
                                 ModelKind::non_unitary_band, window, seed);
}

/// Dispatch on the model family.
inline FiniteMatrix build(const ModelSpec& spec, const LatticeWindow& window,
                          std::uint64_t seed) {
  return std::visit(
      [&](const auto& p) -> FiniteMatrix {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, NsaParams>) return build_nsa(p, window, seed);
        else if constexpr (std::is_same_v<P, AndersonParams>) return build_anderson(p, window, seed);
        else return build_band(p, window, seed);
      },
      spec.params);
}

/// Whether the NonUnitaryBand block satisfies the cnu conditions
/// |det C0| < 1, |alpha| < 1, |delta| < 1.
inline bool band_is_cnu(const NonUnitaryBandParams& p) {
  const Complex det = p.alpha * p.delta - p.beta * p.gamma;
  return std::abs(det) < 1.0 && std::abs(p.alpha) < 1.0 && std::abs(p.delta) < 1.0;
}

/// Boundary of the rescaled almost-sure NSA spectral region
/// (E_g + [-B, B]) / s(g), where E_g is the ellipse with semi-axes
/// e^g + e^-g and e^g - e^-g.  Returned as a closed polyline.
inline std::vector<Complex> nsa_reference_region(double g, double B, int samples) {
  if (g < 0.0) throw std::invalid_argument("nsa_reference_region: g must be >= 0");
  if (B < 0.0) throw std::invalid_argument("nsa_reference_region: B must be >= 0");
  if (samples < 8) samples = 8;
  const double a = std::exp(g) + std::exp(-g);
  const double b = std::exp(g) - std::exp(-g);
  const double s = a + B;
  std::vector<Complex> curve;
  curve.reserve(static_cast<std::size_t>(samples) + 1);
  const int quarter = samples / 4;
  // right arc, shifted +B
  for (int k = 0; k <= quarter; ++k) {
    const double th = -std::numbers::pi / 2 + std::numbers::pi * k / quarter;
    curve.emplace_back((a * std::cos(th) + B) / s, b * std::sin(th) / s);
  }
  // top segment, left arc, bottom segment
  curve.emplace_back(-B / s, b / s);
  for (int k = 0; k <= quarter; ++k) {
    const double th = std::numbers::pi / 2 + std::numbers::pi * k / quarter;
    curve.emplace_back((a * std::cos(th) - B) / s, b * std::sin(th) / s);
  }
  curve.emplace_back(B / s, -b / s);
  curve.push_back(curve.front());
  return curve;
}

/// Point-containment test for the rescaled region (E_g + [-B, B]) / s(g).
inline bool nsa_region_contains(double g, double B, Complex z, double tol = 1e-8) {
  const double a = std::exp(g) + std::exp(-g);
  const double b = std::exp(g) - std::exp(-g);
  const double s = a + B;
  const double x = z.real() * s;
  const double y = z.imag() * s;
  if (std::abs(y) > b + tol) return false;
  // The region is the Minkowski sum of the ellipse *curve* with [-B, B]:
  // at height y the admissible abscissae are two intervals around the
  // ellipse branches +-xe, merged when B >= xe.
  const double frac = b > 0.0 ? std::max(0.0, 1.0 - (y / b) * (y / b)) : (std::abs(y) <= tol ? 1.0 : 0.0);
  const double xe = a * std::sqrt(frac);
  const bool right = x >= xe - B - tol && x <= xe + B + tol;
  const bool left = x >= -xe - B - tol && x <= -xe + B + tol;
  return right || left;
}

/// Gauge away the e^{+-g} hopping asymmetry of an NSA matrix: the diagonal
/// similarity W phi_k = e^{kg} phi_k turns it into a real symmetric
/// tridiagonal matrix with the same spectrum (off-diagonal 1/s(g)).
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> similarity_reduce(const FiniteMatrix& m) {
  if (m.kind != ModelKind::nsa || m.bc_tag != BoundaryTag::dirichlet)
    throw std::invalid_argument("similarity_reduce: expects a Dirichlet NSA matrix");
  const std::int64_t N = m.size();
  Eigen::VectorXd diag(N), off(std::max<std::int64_t>(N - 1, 0));
  for (std::int64_t i = 0; i < N; ++i) diag(i) = m.entries(i, i).real();
  for (std::int64_t i = 0; i + 1 < N; ++i)
    off(i) = std::sqrt(m.entries(i + 1, i).real() * m.entries(i, i + 1).real());
  return {diag, off};
}

}  // namespace doslab
