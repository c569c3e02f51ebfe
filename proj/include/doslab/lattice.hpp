#pragma once

#include <cstdint>
#include <stdexcept>

namespace doslab {

/// One-dimensional window of consecutive lattice sites, grouped into
/// primitive cells of size `cell_size`.  Two layouts are used by the model
/// builders: symmetric windows {-n..n} (cell size 1) and paired windows
/// {1..2n} (cell size 2) whose cells carry the 2x2 coupling blocks of the
/// band families.
struct LatticeWindow {
  std::int64_t lo = 0;        // first site
  int cell_size = 1;          // p
  std::int64_t n_cells = 0;   // number of cell translates in the window

  /// Symmetric window of 2n+1 cells centred at the origin.
  /// For cell_size 1 this is the site set {-n, ..., n}.
  static LatticeWindow centered(int half_width, int cell_size = 1) {
    if (half_width < 0) throw std::invalid_argument("LatticeWindow: half_width must be >= 0");
    if (cell_size < 1) throw std::invalid_argument("LatticeWindow: cell_size must be >= 1");
    LatticeWindow w;
    w.cell_size = cell_size;
    w.n_cells = 2 * static_cast<std::int64_t>(half_width) + 1;
    w.lo = -static_cast<std::int64_t>(half_width) * cell_size;
    return w;
  }

  /// Window of n cells of size 2 on the sites {1, ..., 2n}.
  static LatticeWindow paired(std::int64_t pairs) {
    if (pairs < 1) throw std::invalid_argument("LatticeWindow: need at least one pair");
    LatticeWindow w;
    w.cell_size = 2;
    w.n_cells = pairs;
    w.lo = 1;
    return w;
  }

  std::int64_t size() const { return n_cells * cell_size; }
  std::int64_t hi() const { return lo + size() - 1; }

  /// Global site index of the i-th row/column, i in [0, size()).
  std::int64_t site(std::int64_t i) const { return lo + i; }

  /// Half-width n of a symmetric window (cells {-n..n}).
  int half_width() const {
    if (n_cells % 2 == 0) throw std::logic_error("LatticeWindow: not a symmetric window");
    return static_cast<int>((n_cells - 1) / 2);
  }

  /// Grow the window by whole cells on both sides until at least
  /// `margin_sites` extra sites are present on each side.
  LatticeWindow enlarged(std::int64_t margin_sites) const {
    if (margin_sites < 0) throw std::invalid_argument("LatticeWindow: negative margin");
    const std::int64_t extra_cells = (margin_sites + cell_size - 1) / cell_size;
    LatticeWindow w = *this;
    w.lo -= extra_cells * cell_size;
    w.n_cells += 2 * extra_cells;
    return w;
  }

  bool contains(const LatticeWindow& inner) const {
    return lo <= inner.lo && inner.hi() <= hi();
  }

  bool operator==(const LatticeWindow&) const = default;
};

}  // namespace doslab
