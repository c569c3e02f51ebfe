// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Thresholds are pinned here on purpose; loosening them is a
// behavior change, not a tuning knob.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doslab/config.hpp"
#include "doslab/runner.hpp"

using namespace doslab;
namespace fs = std::filesystem;

namespace {

constexpr int kThreads = 4;

ModelSpec diag_band(double g) {
  NonUnitaryBandParams p;
  p.alpha = Complex{1.0, 0.0};
  p.beta = Complex{0.0, 0.0};
  p.gamma = Complex{0.0, 0.0};
  p.delta = Complex{g, 0.0};
  ModelSpec spec;
  spec.params = p;
  return spec;
}

// 1. exactly solvable band family: computed spectra match the closed form
bool criterion_band_closed_form() {
  for (double g : {0.09, 0.25, 0.81})
    for (int n : {1, 4, 16, 32})
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const LatticeWindow w = LatticeWindow::paired(n);
        const FiniteMatrix m = build(diag_band(g), w, seed);
        const Disorder dis{seed};
        std::vector<double> phases;
        for (std::int64_t i = 0; i < w.size(); ++i)
          phases.push_back(dis.phase(w.site(i), PhaseDist::uniform));
        const double dist = spectrum_set_distance(eig_dense(m), closed_form_band_eigs(g, phases));
        if (!(dist < 1e-8)) return false;
      }
  return true;
}

// 2. eigenvalue average, boundary quadrature, and coefficient pairing agree
bool criterion_three_routes() {
  std::vector<HoloPoly> fs = {HoloPoly::monomial(0), HoloPoly::monomial(1), HoloPoly::monomial(2),
                              HoloPoly::monomial(3), HoloPoly::monomial(5)};
  ModelSpec nsa;
  nsa.params = NsaParams{1.0, 4.0};
  struct Case { ModelSpec spec; LatticeWindow window; };
  const std::vector<Case> cases = {{nsa, LatticeWindow::centered(50)},
                                   {diag_band(0.25), LatticeWindow::paired(32)}};
  for (const Case& c : cases) {
    const FiniteMatrix m = build(c.spec, c.window, 7);
    const Spectrum s = eig_dense(m);
    const std::vector<Complex> b = moments_trace(m, 6);
    for (const HoloPoly& f : fs) {
      const Complex L = eval_L_finite(f, s);
      if (!(std::abs(L - circle_quadrature_L(f, s, 1e-11)) < 1e-8)) return false;
      if (!(std::abs(L - pairing_L(f, b)) < 1e-9)) return false;
    }
  }
  return true;
}

// 3. projected trace is exactly margin-invariant past deg(f) * bandwidth
bool criterion_finite_propagation() {
  ModelSpec nsa;
  nsa.params = NsaParams{1.0, 4.0};
  const LatticeWindow w = LatticeWindow::centered(16);
  const HoloPoly f = HoloPoly::monomial(4);
  const Complex base = eval_L_tilde(f, nsa, w, 5);
  for (std::int64_t extra : {2, 4, 8})
    if (!(std::abs(eval_L_tilde(f, nsa, w, 5, extra) - base) < 1e-12)) return false;
  return true;
}

// 4. |L - Ltilde| shrinks strictly along a window sweep at fixed disorder
bool criterion_gap_trend() {
  ModelSpec nsa;
  nsa.params = NsaParams{1.0, 4.0};
  const HoloPoly f = HoloPoly::monomial(3);
  const std::uint64_t seed = 5;
  const std::vector<int> ns = {8, 16, 32, 64, 128};
  auto gaps = detail::parallel_map(ns, [&](const int& n) {
    const LatticeWindow w = LatticeWindow::centered(n);
    const Complex L = eval_L_finite(f, eig_dense(build(nsa, w, seed)));
    return std::abs(L - eval_L_tilde(f, nsa, w, seed));
  }, kThreads);
  for (std::size_t i = 1; i < gaps.size(); ++i)
    if (!(gaps[i] < gaps[i - 1])) return false;
  return true;
}

// 5. spectral radius near its reference value, spectrum real, at n = 500.
// The chain is too non-normal at this size for a dense nonsymmetric solve
// (its eigenbasis condition grows like e^{g n}), so the spectrum comes from
// the exact diagonal gauge to a symmetric tridiagonal matrix; the two
// routes are verified to coincide at an accessible size first.
bool criterion_spectral_radius() {
  const double B = std::exp(1.0) + std::exp(-1.0);
  const NsaParams p{1.0, B, PotentialDist::bernoulli};
  const double ref = (2.0 + B) / p.scale();

  {
    const FiniteMatrix small = build_nsa(p, LatticeWindow::centered(15), 1);
    const auto [d, o] = similarity_reduce(small);
    if (!(spectrum_set_distance(eig_dense(small), eig_symtridiag(d, o)) < 1e-8)) return false;
  }

  const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  auto results = detail::parallel_map(seeds, [&](const std::uint64_t& seed) {
    const auto [d, o] = similarity_reduce(build_nsa(p, LatticeWindow::centered(500), seed));
    const Spectrum s = eig_symtridiag(d, o);
    double max_im = 0.0;
    for (const Complex& lam : s.eigenvalues) max_im = std::max(max_im, std::abs(lam.imag()));
    return std::pair<double, double>(spectral_radius(s), max_im);
  }, kThreads);
  for (const auto& [spr, max_im] : results) {
    if (!(std::abs(spr - ref) < 0.02)) return false;
    if (!(max_im < 1e-8)) return false;
  }
  return true;
}

// 6. uniform phases average the band functional to zero, with shrinking
// fluctuations as the window grows
bool criterion_phase_averaging() {
  ModelSpec band;
  band.params = ScaledUnitaryBandParams{0.7, 0.4, PhaseDist::uniform};
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 256; ++s) seeds.push_back(s);
  const std::vector<HoloPoly> fs = {HoloPoly::monomial(1), HoloPoly::monomial(2),
                                    HoloPoly::monomial(3)};
  for (const HoloPoly& f : fs) {
    const MeanStderr big = expectation_L(f, band, LatticeWindow::paired(64), seeds);
    const MeanStderr small = expectation_L(f, band, LatticeWindow::paired(16), seeds);
    if (!(std::abs(big.mean) <= 3.0 * big.stderr_of_mean + 1e-14)) return false;
    // odd powers have no closed return paths at all: both spreads collapse
    const bool degenerate = big.stderr_of_mean <= 1e-15 && small.stderr_of_mean <= 1e-15;
    if (!degenerate && !(big.stderr_of_mean < small.stderr_of_mean)) return false;
  }
  return true;
}

// 7. chain moments against the empirical symmetric density of states, and
// the two analytic routes to psi
bool criterion_moment_match() {
  const double B = 3.0, g = 1.0;
  const double s = std::exp(g) + std::exp(-g) + B;
  const LatticeWindow w = LatticeWindow::centered(128);
  const int K = 6;

  std::vector<std::uint64_t> dk_seeds, nsa_seeds;
  for (std::uint64_t i = 1; i <= 64; ++i) {
    dk_seeds.push_back(i);
    nsa_seeds.push_back(1000 + i);
  }

  auto real_moments = [&](const Spectrum& sp, double scale) {
    std::vector<double> b(static_cast<std::size_t>(K) + 1, 0.0);
    for (const Complex& lam : sp.eigenvalues) {
      double p = 1.0;
      for (int k = 0; k <= K; ++k) {
        b[static_cast<std::size_t>(k)] += p;
        p *= lam.real() / scale;
      }
    }
    for (double& x : b) x /= static_cast<double>(sp.eigenvalues.size());
    return b;
  };

  auto dk_moms = detail::parallel_map(dk_seeds, [&](const std::uint64_t& seed) {
    const FiniteMatrix h = build_anderson(AndersonParams{B, PotentialDist::uniform}, w, seed);
    Eigen::VectorXd diag(h.size()), off(h.size() - 1);
    for (std::int64_t i = 0; i < h.size(); ++i) diag(i) = h.entries(i, i).real();
    for (std::int64_t i = 0; i + 1 < h.size(); ++i) off(i) = h.entries(i + 1, i).real();
    return real_moments(eig_symtridiag(diag, off), s);  // int (x/s)^k dk
  }, kThreads);

  auto nsa_moms = detail::parallel_map(nsa_seeds, [&](const std::uint64_t& seed) {
    const auto [diag, off] =
        similarity_reduce(build_nsa(NsaParams{g, B, PotentialDist::uniform}, w, seed));
    return real_moments(eig_symtridiag(diag, off), 1.0);  // already rescaled by s
  }, kThreads);

  auto stats = [](const std::vector<std::vector<double>>& rows, int k) {
    double mean = 0.0;
    for (const auto& r : rows) mean += r[static_cast<std::size_t>(k)];
    mean /= static_cast<double>(rows.size());
    double var = 0.0;
    for (const auto& r : rows) {
      const double d = r[static_cast<std::size_t>(k)] - mean;
      var += d * d;
    }
    const double se = std::sqrt(var / (rows.size() * (rows.size() - 1.0)));
    return std::pair<double, double>(mean, se);
  };
  for (int k = 1; k <= K; ++k) {
    const auto [m1, se1] = stats(dk_moms, k);
    const auto [m2, se2] = stats(nsa_moms, k);
    if (!(std::abs(m1 - m2) <= 3.0 * std::sqrt(se1 * se1 + se2 * se2) + 1e-12)) return false;
  }

  // two analytic routes to psi over the pooled empirical density
  EmpiricalMeasure dk;
  dk.support_kind = SupportKind::real_line;
  {
    const FiniteMatrix h = build_anderson(AndersonParams{B, PotentialDist::uniform}, w, 1);
    Eigen::VectorXd diag(h.size()), off(h.size() - 1);
    for (std::int64_t i = 0; i < h.size(); ++i) diag(i) = h.entries(i, i).real();
    for (std::int64_t i = 0; i + 1 < h.size(); ++i) off(i) = h.entries(i + 1, i).real();
    const Spectrum sp = eig_symtridiag(diag, off);
    const double wgt = 1.0 / static_cast<double>(sp.eigenvalues.size());
    for (const Complex& lam : sp.eigenvalues)
      dk.points.emplace_back(Complex{lam.real(), 0.0}, wgt);
  }
  for (Complex z : {Complex{0.5, 0.2}, Complex{-0.3, 0.4}, Complex{0.7, -0.1}, Complex{0.0, 0.8}})
    if (!(std::abs(psi_g_nsa(dk, g, B, z) - psi_g_nsa_via_borel(dk, g, B, z)) < 1e-12))
      return false;
  return true;
}

// 8. Herglotz positivity of the circle representation
bool criterion_poisson_positivity() {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Disorder dis{seed};
    EmpiricalMeasure dk;
    dk.support_kind = SupportKind::circle;
    const int atoms = 32;
    double mass = 0.0;
    std::vector<double> raw(atoms);
    for (int i = 0; i < atoms; ++i) {
      raw[static_cast<std::size_t>(i)] = dis.uniform01(i, 1) + 1e-3;
      mass += raw[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < atoms; ++i)
      dk.points.emplace_back(std::polar(1.0, 2.0 * std::numbers::pi * dis.uniform01(i, 2)),
                             raw[static_cast<std::size_t>(i)] / mass);
    for (double r : {0.3, 0.7, 0.95})
      for (int k = 0; k < 1024; ++k) {
        const double t = 2.0 * std::numbers::pi * k / 1024;
        if (!(psi_r_unitary(dk, r, std::polar(1.0, t)).real() - 0.5 >= -1e-12)) return false;
      }
  }
  return true;
}

// 9. area integrals against the averaged Bergman kernel reproduce the
// functional, and the disk density is harmonic at O(h^2)
bool criterion_bergman() {
  const Spectrum sp = eig_dense(build_nsa(NsaParams{1.0, 4.0}, LatticeWindow::centered(8), 3));
  const DiskGrid grid = DiskGrid::make(64, 256);
  std::vector<HoloPoly> fs;
  for (int k = 0; k <= 6; ++k) fs.push_back(HoloPoly::monomial(k));
  const HarmonicCheckReport rep = harmonic_density_check(sp, grid, fs, 1e-5, 1e-6);
  for (double d : rep.reproducing_devs)
    if (!(d < 1e-6)) return false;
  // halving the stencil must shrink the discrete Laplacian about fourfold
  if (!(rep.laplacian_h2 <= 0.3 * rep.laplacian_h + 1e-12)) return false;
  return rep.pass;
}

// 10. boundary quadrature is blind to added anti-analytic gauge terms
bool criterion_gauge_invariance() {
  const Spectrum sp = eig_dense(build_nsa(NsaParams{1.0, 4.0}, LatticeWindow::centered(20), 11));
  for (const HoloPoly& f : {HoloPoly::monomial(0), HoloPoly::monomial(1), HoloPoly::monomial(2),
                            HoloPoly::monomial(4)}) {
    const Complex base = circle_quadrature_L(f, sp, 1e-12);
    for (int m : {1, 2, 5}) {
      const Complex gauged = circle_quadrature(
          f, [&](double t) { return phi_Lambda(sp, t) + std::polar(1.0, m * t); }, 1e-12);
      if (!(std::abs(gauged - base) < 1e-10)) return false;
    }
  }
  return true;
}

// 11. repeated validate runs produce byte-identical artifacts
bool criterion_determinism() {
  const fs::path dir = fs::temp_directory_path() / "doslab_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "cfg.json");
    out << R"({
      "model": {"variant": "nsa", "g": 1.0, "B": 4.0},
      "windows": [6, 10],
      "seeds": [1, 2, 3],
      "functions": [[0, 1], [0, 0, 1], [1, [0, -1], 0, 2]],
      "tol": 1e-8
    })";
  }
  const std::string cli = DOSLAB_CLI_PATH;
  for (const char* run : {"run1", "run2"}) {
    const std::string cmd = cli + " --config " + (dir / "cfg.json").string() + " --out " +
                            (dir / run).string() + " --threads " + std::to_string(kThreads) +
                            " validate";
    if (std::system(cmd.c_str()) != 0) return false;
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  std::vector<fs::path> names;
  for (const auto& e : fs::directory_iterator(dir / "run1")) names.push_back(e.path().filename());
  if (names.empty()) return false;
  std::size_t count2 = 0;
  for (const auto& e : fs::directory_iterator(dir / "run2")) { (void)e; ++count2; }
  if (count2 != names.size()) return false;
  for (const fs::path& name : names) {
    if (!fs::exists(dir / "run2" / name)) return false;
    if (slurp(dir / "run1" / name) != slurp(dir / "run2" / name)) return false;
  }
  return true;
}

}  // namespace

int main() {
  struct Criterion { const char* label; bool (*fn)(); };
  const std::vector<Criterion> criteria = {
      {"closed-form band spectrum", criterion_band_closed_form},
      {"three-route functional identity", criterion_three_routes},
      {"finite-propagation margin invariance", criterion_finite_propagation},
      {"window-sweep gap decreases", criterion_gap_trend},
      {"spectral radius and real spectrum at large volume", criterion_spectral_radius},
      {"phase averaging kills the mean, fluctuations shrink", criterion_phase_averaging},
      {"chain moments match the symmetric density of states", criterion_moment_match},
      {"Herglotz positivity of the circle representation", criterion_poisson_positivity},
      {"Bergman reproduction and harmonic disk density", criterion_bergman},
      {"gauge invariance of the boundary quadrature", criterion_gauge_invariance},
      {"byte-identical repeated runs", criterion_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    bool ok = false;
    std::string note;
    try {
      ok = criteria[i].fn();
    } catch (const std::exception& e) {
      note = std::string(" (") + e.what() + ")";
    }
    std::printf("criterion %2zu: %s - %s%s\n", i + 1, ok ? "PASS" : "FAIL", criteria[i].label,
                note.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
