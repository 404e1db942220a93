#pragma once

#include <cstdint>
#include <vector>

#include "mfcz/grid.hpp"

namespace mfcz {

/// Half-open run of grid cells [start, start + length) taken mod M.
/// length is clamped to M, so a range never covers a cell twice.
struct CellRange {
  std::int64_t start = 0;   // in [0, M)
  std::int64_t length = 0;  // in [0, M]

  bool contains(std::int64_t cell, std::int64_t m) const {
    const std::int64_t d = (cell - start + m) % m;
    return d < length;
  }
};

/// Dyadic interval [k 2^-l, (k+1) 2^-l) of the base lattice on the torus.
struct DyadicInterval {
  int level = 0;
  std::int64_t offset = 0;

  double measure() const { return 1.0 / static_cast<double>(std::int64_t{1} << level); }
  double left() const { return static_cast<double>(offset) * measure(); }

  DyadicInterval parent() const;
  DyadicInterval child(int which) const;  // which in {0, 1}

  /// Lattice containment test, exact on (level, offset).
  bool contains(const DyadicInterval& other) const;

  friend bool operator==(const DyadicInterval& a, const DyadicInterval& b) {
    return a.level == b.level && a.offset == b.offset;
  }
};

/// Cells of Q on the grid. Q must be resolvable: level <= log2_size.
CellRange cells_of(const DyadicInterval& q, const Grid& g);

/// Cells of 3Q (same center, triple length, wrapped mod 1; at most M cells).
CellRange triple_cells_of(const DyadicInterval& q, const Grid& g);

struct CubeSet {
  std::vector<DyadicInterval> cubes;
  bool pairwise_disjoint = true;
  double total_measure = 0.0;
};

/// Exact pairwise-disjointness check on lattice indices.
bool cubes_pairwise_disjoint(const std::vector<DyadicInterval>& cubes);

/// (|Q|^-1 int_Q |f|^r)^{1/r} by the rectangle rule; equals the plain mean
/// of |f|^r over Q's cells raised to 1/r.
double average(const SampledFunction& f, const DyadicInterval& q, double r);

/// Same r-average over an arbitrary cell range.
double average_cells(const SampledFunction& f, const CellRange& range, double r);

/// Hardy-Littlewood maximal function over the base dyadic lattice plus the
/// two 1/3-shifted lattices, all resolvable levels. t in (0, inf); t < 1 is
/// allowed for the (M |f|^s)^{1/s} trick.
SampledFunction maximal_function(const SampledFunction& f, double t);

/// Maximal dyadic intervals (base lattice, top-down) with mean_Q |f| >
/// threshold. Selected cubes are pairwise disjoint, and every selected cube
/// of level > 0 has a parent whose mean is <= threshold.
CubeSet stopping_cubes(const SampledFunction& f, double threshold);

namespace detail {
/// Cell shifts of the three scan lattices: {0, round(M/3), round(2M/3)}.
std::vector<std::int64_t> lattice_shifts(const Grid& g);
}  // namespace detail

}  // namespace mfcz
