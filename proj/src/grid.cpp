#include "mfcz/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mfcz {

Grid::Grid(int log2_size) : log2_size_(log2_size) {
  if (log2_size < kMinLog2 || log2_size > kMaxLog2) {
    throw std::invalid_argument("Grid: log2_size " + std::to_string(log2_size) +
                                " outside [" + std::to_string(kMinLog2) + ", " +
                                std::to_string(kMaxLog2) + "]");
  }
}

Grid make_grid(int log2_size) { return Grid(log2_size); }

SampledFunction::SampledFunction(Grid g, std::vector<cplx> values)
    : grid(g), samples(std::move(values)) {
  if (static_cast<std::int64_t>(samples.size()) != grid.size()) {
    throw std::invalid_argument("SampledFunction: sample count does not match grid");
  }
}

SampledFunction SampledFunction::zeros(Grid g) {
  return SampledFunction(g, std::vector<cplx>(static_cast<std::size_t>(g.size())));
}

Spectrum::Spectrum(Grid g, std::vector<cplx> coeffs)
    : grid(g), coefficients(std::move(coeffs)) {
  if (static_cast<std::int64_t>(coefficients.size()) != grid.size()) {
    throw std::invalid_argument("Spectrum: coefficient count does not match grid");
  }
}

Spectrum Spectrum::zeros(Grid g) {
  return Spectrum(g, std::vector<cplx>(static_cast<std::size_t>(g.size())));
}

std::int64_t Spectrum::index_of(std::int64_t xi) const {
  const std::int64_t m = grid.size();
  if (xi < -m / 2 || xi >= m / 2) {
    throw std::invalid_argument("Spectrum: frequency " + std::to_string(xi) +
                                " not representable on grid of size " +
                                std::to_string(m));
  }
  return xi >= 0 ? xi : xi + m;
}

namespace detail {

void fft_pow2(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("fft_pow2: length must be a power of two");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<cplx> tw;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    tw.resize(half);
    // twiddles from direct sin/cos per index; keeps error O(log n * eps)
    const double ang = static_cast<double>(sign) * 2.0 * std::numbers::pi /
                       static_cast<double>(len);
    for (std::size_t k = 0; k < half; ++k) {
      const double a_k = ang * static_cast<double>(k);
      tw[k] = cplx(std::cos(a_k), std::sin(a_k));
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + half] * tw[k];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

}  // namespace detail

Spectrum forward_transform(const SampledFunction& f) {
  std::vector<cplx> a = f.samples;
  detail::fft_pow2(a, -1);
  const double inv_m = 1.0 / static_cast<double>(f.grid.size());
  for (auto& c : a) c *= inv_m;
  return Spectrum(f.grid, std::move(a));
}

SampledFunction inverse_transform(const Spectrum& s) {
  std::vector<cplx> a = s.coefficients;
  detail::fft_pow2(a, +1);
  return SampledFunction(s.grid, std::move(a));
}

double lp_norm(const SampledFunction& f, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  double acc = 0.0;
  if (p == 2.0) {
    for (const cplx& v : f.samples) acc += std::norm(v);
  } else if (p == 1.0) {
    for (const cplx& v : f.samples) acc += std::abs(v);
  } else {
    for (const cplx& v : f.samples) acc += std::pow(std::abs(v), p);
  }
  return std::pow(f.grid.spacing() * acc, 1.0 / p);
}

double lp_norm(const SampledFunction& f, double p,
               const std::vector<double>& weight_samples) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (static_cast<std::int64_t>(weight_samples.size()) != f.grid.size()) {
    throw std::invalid_argument("lp_norm: weight grid mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const double av = std::abs(f.samples[i]);
    acc += (p == 2.0 ? av * av : p == 1.0 ? av : std::pow(av, p)) *
           weight_samples[i];
  }
  return std::pow(f.grid.spacing() * acc, 1.0 / p);
}

double sup_norm(const SampledFunction& f) {
  double m = 0.0;
  for (const cplx& v : f.samples) m = std::max(m, std::abs(v));
  return m;
}

double weak_l1_quasinorm(const SampledFunction& f) {
  std::vector<double> mags(f.samples.size());
  for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(f.samples[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  // After the descending sort, |{ |f| >= mags[i] }| = (i+1) * spacing once
  // ties are skipped to their last occurrence.
  double best = 0.0;
  const double h = f.grid.spacing();
  for (std::size_t i = 0; i < mags.size(); ++i) {
    if (mags[i] == 0.0) break;
    if (i + 1 < mags.size() && mags[i + 1] == mags[i]) continue;
    best = std::max(best, mags[i] * static_cast<double>(i + 1) * h);
  }
  return best;
}

}  // namespace mfcz
