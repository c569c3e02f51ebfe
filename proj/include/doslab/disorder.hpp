#pragma once

#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace doslab {

enum class PotentialDist { uniform, bernoulli };
enum class PhaseDist { uniform, bernoulli };

/// Counter-based disorder source.  Every per-site variable is a pure function
/// of (master_seed, site), so a realization omega is meaningfully shared
/// across nested windows: growing the window never reshuffles sites already
/// present.
struct Disorder {
  std::uint64_t master_seed = 0;

  static std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform deviate in [0, 1), keyed on (master_seed, site, stream).
  double uniform01(std::int64_t site, std::uint64_t stream = 0) const {
    std::uint64_t h = mix(master_seed);
    h = mix(h ^ static_cast<std::uint64_t>(site));
    h = mix(h ^ stream);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  }

  /// Potential value in [-B, B].
  double potential(std::int64_t site, double B, PotentialDist dist) const {
    const double u = uniform01(site, 0x706f74ull /* "pot" */);
    switch (dist) {
      case PotentialDist::uniform: return (2.0 * u - 1.0) * B;
      case PotentialDist::bernoulli: return u < 0.5 ? -B : B;
    }
    throw std::logic_error("unknown potential distribution");
  }

  /// Phase value in [0, 2*pi).
  double phase(std::int64_t site, PhaseDist dist) const {
    const double u = uniform01(site, 0x706873ull /* "phs" */);
    switch (dist) {
      case PhaseDist::uniform: return 2.0 * std::numbers::pi * u;
      case PhaseDist::bernoulli: return u < 0.5 ? 0.0 : std::numbers::pi;
    }
    throw std::logic_error("unknown phase distribution");
  }
};

}  // namespace doslab
