#include "mfcz/dyadic.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace mfcz {

DyadicInterval DyadicInterval::parent() const {
  if (level == 0) throw std::invalid_argument("DyadicInterval: root has no parent");
  return {level - 1, offset >> 1};
}

DyadicInterval DyadicInterval::child(int which) const {
  return {level + 1, 2 * offset + which};
}

bool DyadicInterval::contains(const DyadicInterval& other) const {
  if (other.level < level) return false;
  return (other.offset >> (other.level - level)) == offset;
}

CellRange cells_of(const DyadicInterval& q, const Grid& g) {
  if (q.level > g.log2_size()) {
    throw std::invalid_argument("dyadic: cube below grid resolution");
  }
  const std::int64_t m = g.size() >> q.level;
  return {q.offset * m, m};
}

CellRange triple_cells_of(const DyadicInterval& q, const Grid& g) {
  const CellRange base = cells_of(q, g);
  const std::int64_t m = g.size();
  const std::int64_t len = std::min<std::int64_t>(3 * base.length, m);
  const std::int64_t start = ((base.start - base.length) % m + m) % m;
  return {start, len};
}

bool cubes_pairwise_disjoint(const std::vector<DyadicInterval>& cubes) {
  // Two dyadic intervals intersect iff one contains the other.
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    for (std::size_t j = i + 1; j < cubes.size(); ++j) {
      if (cubes[i].contains(cubes[j]) || cubes[j].contains(cubes[i])) return false;
    }
  }
  return true;
}

double average_cells(const SampledFunction& f, const CellRange& range, double r) {
  if (r <= 0.0) throw std::invalid_argument("average: r must be positive");
  if (range.length <= 0) throw std::invalid_argument("average: empty cell range");
  const std::int64_t m = f.grid.size();
  double acc = 0.0;
  for (std::int64_t k = 0; k < range.length; ++k) {
    const std::int64_t i = (range.start + k) % m;
    const double av = std::abs(f.samples[static_cast<std::size_t>(i)]);
    acc += (r == 1.0) ? av : (r == 2.0 ? av * av : std::pow(av, r));
  }
  const double mean = acc / static_cast<double>(range.length);
  return (r == 1.0) ? mean : std::pow(mean, 1.0 / r);
}

double average(const SampledFunction& f, const DyadicInterval& q, double r) {
  return average_cells(f, cells_of(q, f.grid), r);
}

namespace detail {

std::vector<std::int64_t> lattice_shifts(const Grid& g) {
  const double m = static_cast<double>(g.size());
  return {0, std::llround(m / 3.0), std::llround(2.0 * m / 3.0)};
}

}  // namespace detail

SampledFunction maximal_function(const SampledFunction& f, double t) {
  if (t <= 0.0) throw std::invalid_argument("maximal_function: t must be positive");
  const std::int64_t m = f.grid.size();
  const int levels = f.grid.log2_size();
  std::vector<double> powed(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    const double av = std::abs(f.samples[static_cast<std::size_t>(i)]);
    powed[static_cast<std::size_t>(i)] = (t == 1.0) ? av : std::pow(av, t);
  }
  std::vector<double> best(static_cast<std::size_t>(m), 0.0);
  for (const std::int64_t shift : detail::lattice_shifts(f.grid)) {
    for (int level = 0; level <= levels; ++level) {
      const std::int64_t w = m >> level;
      const std::int64_t count = m / w;
      for (std::int64_t k = 0; k < count; ++k) {
        double acc = 0.0;
        const std::int64_t start = (k * w + shift) % m;
        for (std::int64_t j = 0; j < w; ++j) {
          acc += powed[static_cast<std::size_t>((start + j) % m)];
        }
        const double mean = acc / static_cast<double>(w);
        for (std::int64_t j = 0; j < w; ++j) {
          double& slot = best[static_cast<std::size_t>((start + j) % m)];
          slot = std::max(slot, mean);
        }
      }
    }
  }
  SampledFunction out = SampledFunction::zeros(f.grid);
  for (std::int64_t i = 0; i < m; ++i) {
    const double v = best[static_cast<std::size_t>(i)];
    out.samples[static_cast<std::size_t>(i)] = (t == 1.0) ? v : std::pow(v, 1.0 / t);
  }
  return out;
}

CubeSet stopping_cubes(const SampledFunction& f, double threshold) {
  if (threshold <= 0.0) {
    throw std::invalid_argument("stopping_cubes: threshold must be positive");
  }
  CubeSet out;
  const int max_level = f.grid.log2_size();
  std::deque<DyadicInterval> queue{DyadicInterval{0, 0}};
  while (!queue.empty()) {
    const DyadicInterval q = queue.front();
    queue.pop_front();
    if (average(f, q, 1.0) > threshold) {
      out.cubes.push_back(q);
      out.total_measure += q.measure();
    } else if (q.level < max_level) {
      queue.push_back(q.child(0));
      queue.push_back(q.child(1));
    }
  }
  out.pairwise_disjoint = true;  // selection never descends into a hit
  return out;
}

}  // namespace mfcz
