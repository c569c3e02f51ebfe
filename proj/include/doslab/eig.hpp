#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doslab/disorder.hpp"
#include "doslab/models.hpp"

namespace doslab {

/// Eigenvalue list of one finite-volume matrix, repeated according to
/// algebraic multiplicity, with a backward-error estimate from spot-checked
/// eigenpairs.
struct Spectrum {
  std::vector<Complex> eigenvalues;
  double residual = 0.0;          // max ||M v - lambda v|| / ||M|| over spot checks
  std::int64_t source_size = 0;   // |Lambda|
};

inline constexpr std::int64_t kDefaultEigSizeCap = 2048;

namespace detail {

/// Cheap upper bound on the spectral norm: sqrt(||M||_1 ||M||_inf).
inline double norm_estimate(const Eigen::MatrixXcd& M) {
  const double n1 = M.cwiseAbs().colwise().sum().maxCoeff();
  const double ninf = M.cwiseAbs().rowwise().sum().maxCoeff();
  return std::sqrt(n1 * ninf);
}

/// One-sided Osborne balancing with exact ratios f = sqrt(r/c).  Returns
/// the diagonal scaling D (as a vector) with M_balanced = D^-1 M D; the
/// similarity changes eigenvalues only by entry rounding.  Quantized
/// (power-of-two) Osborne has spurious stationary states on cycle-like
/// sparsity patterns (locally balanced, globally spread by many orders of
/// magnitude), so exact ratios and a tight convergence criterion are used:
/// at the true fixed point every row/column pair is equal, which on a
/// weighted cycle forces all weights to the geometric mean.
inline Eigen::VectorXd balance(Eigen::MatrixXcd& M) {
  const std::int64_t n = M.rows();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  const int max_sweeps = std::max<int>(100, 20 * static_cast<int>(n));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double worst = 1.0;
    for (std::int64_t i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (std::int64_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(M(j, i));
        r += std::abs(M(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double f = std::min(std::max(std::sqrt(r / c), 1e-150), 1e150);
      worst = std::max(worst, std::max(f, 1.0 / f));
      if (f != 1.0) {
        d(i) *= f;
        M.col(i) *= f;
        M.row(i) /= f;
      }
    }
    if (worst < 1.0 + 1e-6) break;
  }
  return d;
}

/// Residual spot check: max ||M v - lambda v|| / scale over up to 10
/// deterministically chosen eigenpairs.
inline double spot_residual(const Eigen::MatrixXcd& M,
                            const Eigen::MatrixXcd& vectors,
                            const Eigen::VectorXcd& values, double scale) {
  const std::int64_t n = values.size();
  const std::int64_t checks = std::min<std::int64_t>(n, 10);
  double worst = 0.0;
  std::uint64_t h = 0x5eedull ^ static_cast<std::uint64_t>(n);
  for (std::int64_t k = 0; k < checks; ++k) {
    h = Disorder::mix(h);
    const std::int64_t j = static_cast<std::int64_t>(h % static_cast<std::uint64_t>(n));
    Eigen::VectorXcd v = vectors.col(j);
    const double vn = v.norm();
    if (vn == 0.0) continue;
    v /= vn;
    worst = std::max(worst, (M * v - values(j) * v).norm() / scale);
  }
  return worst;
}

/// Deterministic Haar-like unitary from a seeded Gaussian matrix.  Used to
/// break structured matrices (weighted permutations and the like) on which
/// the Schur iteration loses accuracy; a unitary similarity leaves the
/// eigenvalues exactly invariant.
inline Eigen::MatrixXcd scrambling_unitary(std::int64_t n, std::uint64_t seed) {
  Eigen::MatrixXcd G(n, n);
  std::uint64_t h = Disorder::mix(seed ^ 0x5c7a6b1eull);
  auto next = [&h] {
    h = Disorder::mix(h);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  };
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j) {
      // Box-Muller from two counter-based uniforms
      const double u1 = std::max(next(), 1e-300);
      const double u2 = next();
      const double r = std::sqrt(-2.0 * std::log(u1));
      G(i, j) = Complex{r * std::cos(2.0 * std::numbers::pi * u2),
                        r * std::sin(2.0 * std::numbers::pi * u2)};
    }
  return Eigen::HouseholderQR<Eigen::MatrixXcd>(G).householderQ();
}

}  // namespace detail

/// Dense eigensolve via Schur iteration (Eigen), with power-of-two balancing
/// first.  `tol` is relative to the matrix norm; the residual contract
/// ||M v - lambda v|| <= 10 tol ||M|| is spot-checked, a violating solve is
/// retried once under a deterministic unitary scramble, and runs that still
/// violate it are refused rather than returned partially.
inline Spectrum eig_dense(const Eigen::MatrixXcd& M, double tol = 1e-12,
                          std::int64_t size_cap = kDefaultEigSizeCap) {
  const std::int64_t n = M.rows();
  if (n == 0) throw std::invalid_argument("eig_dense: empty matrix");
  if (M.cols() != n) throw std::invalid_argument("eig_dense: matrix not square");
  if (n > size_cap) throw std::invalid_argument("eig_dense: matrix exceeds size cap");

  const double scale = std::max(detail::norm_estimate(M), 1e-300);
  const double contract = 10.0 * std::max(tol, 1e-15);
  Spectrum s;
  s.source_size = n;

  const bool real_input = M.imag().cwiseAbs().maxCoeff() == 0.0;
  if (real_input) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(M.real(), /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("eig_dense: real Schur iteration failed to converge");
    Eigen::VectorXcd values = solver.eigenvalues();
    Eigen::MatrixXcd vectors = solver.eigenvectors();
    s.eigenvalues.assign(values.data(), values.data() + n);
    s.residual = detail::spot_residual(M, vectors, values, scale);
    if (s.residual <= contract) return s;
    // fall through to the complex path with scrambling
  }

  // Balance once (exact diagonal similarity, eigenvalues untouched) and
  // certify backward error in the balanced coordinates, where the solver
  // actually works.  Attempt 0 solves the balanced matrix directly;
  // attempt 1 scrambles it by a deterministic unitary first, since rigidly
  // structured matrices (weighted permutations, companion-like cycles) can
  // defeat the plain Schur iteration.
  Eigen::MatrixXcd Bal = M;
  detail::balance(Bal);
  const double scale_bal = std::max(detail::norm_estimate(Bal), 1e-300);
  s.eigenvalues.clear();
  s.residual = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 2; ++attempt) {
    Eigen::MatrixXcd B;
    if (attempt == 0) {
      B = Bal;
    } else {
      const Eigen::MatrixXcd Q = detail::scrambling_unitary(n, static_cast<std::uint64_t>(n));
      B = Q.adjoint() * Bal * Q;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(B, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
      if (attempt == 1) throw std::runtime_error("eig_dense: QR iteration failed to converge");
      continue;
    }
    const Eigen::VectorXcd values = solver.eigenvalues();
    const double residual = detail::spot_residual(B, solver.eigenvectors(), values, scale_bal);
    if (residual < s.residual) {
      s.eigenvalues.assign(values.data(), values.data() + n);
      s.residual = residual;
    }
    if (s.residual <= contract) break;
  }
  if (s.residual > contract || s.eigenvalues.empty())
    throw std::runtime_error("eig_dense: residual contract violated");
  return s;
}

inline Spectrum eig_dense(const FiniteMatrix& m, double tol = 1e-12,
                          std::int64_t size_cap = kDefaultEigSizeCap) {
  return eig_dense(m.entries, tol, size_cap);
}

/// Real symmetric tridiagonal eigensolve (implicit QL with Wilkinson shifts
/// via Eigen's tridiagonal path).  All-real spectrum.
inline Spectrum eig_symtridiag(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                               double tol = 1e-12) {
  const std::int64_t n = diag.size();
  if (n == 0) throw std::invalid_argument("eig_symtridiag: empty matrix");
  if (offdiag.size() != n - 1)
    throw std::invalid_argument("eig_symtridiag: offdiag length must be n - 1");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_symtridiag: QL iteration failed to converge");

  Spectrum s;
  s.source_size = n;
  s.eigenvalues.reserve(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) s.eigenvalues.emplace_back(solver.eigenvalues()(j), 0.0);

  double scale = std::abs(diag(0));
  for (std::int64_t i = 0; i < n; ++i) {
    double row = std::abs(diag(i));
    if (i > 0) row += std::abs(offdiag(i - 1));
    if (i + 1 < n) row += std::abs(offdiag(i));
    scale = std::max(scale, row);
  }
  scale = std::max(scale, 1e-300);

  // tridiagonal apply for the residual spot check
  auto apply = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(n);
    for (std::int64_t i = 0; i < n; ++i) {
      double acc = diag(i) * v(i);
      if (i > 0) acc += offdiag(i - 1) * v(i - 1);
      if (i + 1 < n) acc += offdiag(i) * v(i + 1);
      out(i) = acc;
    }
    return out;
  };
  const std::int64_t checks = std::min<std::int64_t>(n, 10);
  std::uint64_t h = 0x7137ull ^ static_cast<std::uint64_t>(n);
  double worst = 0.0;
  for (std::int64_t k = 0; k < checks; ++k) {
    h = Disorder::mix(h);
    const std::int64_t j = static_cast<std::int64_t>(h % static_cast<std::uint64_t>(n));
    Eigen::VectorXd v = solver.eigenvectors().col(j);
    worst = std::max(worst, (apply(v) - solver.eigenvalues()(j) * v).norm() / scale);
  }
  s.residual = worst;
  if (s.residual > 10.0 * std::max(tol, 1e-15))
    throw std::runtime_error("eig_symtridiag: residual contract violated");
  return s;
}

}  // namespace doslab
