#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "doslab/eig.hpp"
#include "doslab/spectrum.hpp"

using namespace doslab;

TEST_CASE("dense eigensolve: 2x2 off-diagonal block") {
  Eigen::MatrixXcd M(2, 2);
  M << 0.0, 0.25, 1.0, 0.0;
  const Spectrum s = eig_dense(M);
  CHECK(spectrum_set_distance(s, Spectrum{{Complex{0.5, 0.0}, Complex{-0.5, 0.0}}, 0.0, 2}) <
        1e-14);
}

TEST_CASE("dense eigensolve: companion matrix of z^3 - 1") {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(3, 3);
  M(0, 2) = 1.0;
  M(1, 0) = 1.0;
  M(2, 1) = 1.0;
  Spectrum expected;
  expected.source_size = 3;
  for (int k = 0; k < 3; ++k)
    expected.eigenvalues.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / 3));
  CHECK(spectrum_set_distance(eig_dense(M), expected) < 1e-12);
}

TEST_CASE("free tridiagonal chain: eigenvalues 2 cos(k pi / (N + 1))") {
  const int N = 5;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
  for (int i = 0; i + 1 < N; ++i) {
    M(i + 1, i) = 1.0;
    M(i, i + 1) = 1.0;
  }
  Spectrum expected;
  expected.source_size = N;
  for (int k = 1; k <= N; ++k)
    expected.eigenvalues.emplace_back(2.0 * std::cos(k * std::numbers::pi / (N + 1)), 0.0);
  CHECK(spectrum_set_distance(eig_dense(M), expected) < 1e-12);

  const Spectrum tri = eig_symtridiag(Eigen::VectorXd::Zero(N), Eigen::VectorXd::Ones(N - 1));
  CHECK(spectrum_set_distance(tri, expected) < 1e-12);
}

TEST_CASE("balancing leaves badly scaled spectra intact") {
  // diagonal similarity of a fixed 3x3; eigenvalues must not move
  Eigen::MatrixXcd A(3, 3);
  A << Complex{0.1, 0.2}, Complex{0.3, 0.0}, Complex{0.0, 0.1},
       Complex{0.2, -0.1}, Complex{-0.1, 0.0}, Complex{0.1, 0.0},
       Complex{0.0, 0.05}, Complex{0.2, 0.2}, Complex{0.15, 0.0};
  Eigen::VectorXd d(3);
  d << 1e-6, 1.0, 1e6;
  const Eigen::MatrixXcd B = d.asDiagonal().inverse() * A * d.asDiagonal();
  CHECK(spectrum_set_distance(eig_dense(A), eig_dense(B)) < 1e-8);
}

TEST_CASE("eigensolver input validation and size cap") {
  CHECK_THROWS_AS(eig_dense(Eigen::MatrixXcd::Zero(0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(eig_dense(Eigen::MatrixXcd::Zero(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(eig_dense(Eigen::MatrixXcd::Zero(4, 4), 1e-12, 3), std::invalid_argument);
  CHECK_THROWS_AS(eig_symtridiag(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("residual spot check reports a small backward error") {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j)
      M(i, j) = Complex{std::sin(0.3 * i + 0.7 * j), std::cos(0.2 * i - 0.5 * j)} / 20.0;
  const Spectrum s = eig_dense(M);
  CHECK(s.residual < 1e-13);
}

TEST_CASE("counting measure and moments") {
  Spectrum s;
  s.eigenvalues = {Complex{0.5, 0.0}, Complex{-0.5, 0.0}, Complex{0.0, 0.5}, Complex{0.0, -0.5}};
  s.source_size = 4;
  const EmpiricalMeasure m = counting_measure(s);
  CHECK(m.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(measure_moment(m, 1, 0)) < 1e-16);
  // sum z^4 / 4 = (0.0625 + 0.0625 + 0.0625 + 0.0625) / 4
  CHECK(measure_moment(m, 4, 0).real() == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(measure_moment(m, 1, 1).real() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(spectral_radius(s) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("moment distance separates measures and vanishes on equality") {
  const EmpiricalMeasure a = EmpiricalMeasure::dirac(Complex{0.3, 0.0});
  const EmpiricalMeasure b = EmpiricalMeasure::dirac(Complex{0.4, 0.0});
  CHECK(moment_distance(a, a, 4) == 0.0);
  CHECK(moment_distance(a, b, 1) == doctest::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("closed-form band eigenvalues for zero phases") {
  const Spectrum s = closed_form_band_eigs(0.25, {0.0, 0.0, 0.0, 0.0});
  Spectrum expected;
  expected.source_size = 4;
  for (int j = 0; j < 4; ++j)
    expected.eigenvalues.push_back(std::polar(0.5, j * std::numbers::pi / 2.0));
  CHECK(spectrum_set_distance(s, expected) < 1e-15);
  CHECK_THROWS_AS(closed_form_band_eigs(0.25, {0.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(closed_form_band_eigs(1.5, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("set distance is permutation invariant and size aware") {
  Spectrum a, b;
  a.eigenvalues = {Complex{1.0, 0.0}, Complex{0.0, 1.0}, Complex{-1.0, 0.0}};
  b.eigenvalues = {Complex{0.0, 1.0}, Complex{-1.0, 0.0}, Complex{1.0, 0.0}};
  CHECK(spectrum_set_distance(a, b) == 0.0);
  b.eigenvalues.pop_back();
  CHECK(std::isinf(spectrum_set_distance(a, b)));
}
