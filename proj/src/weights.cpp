#include "mfcz/weights.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfcz/dyadic.hpp"
#include "mfcz/rng.hpp"

namespace mfcz {

Weight::Weight(Grid g, std::vector<double> values)
    : grid_(g), samples_(std::move(values)), cache_(std::make_shared<Cache>()) {
  if (static_cast<std::int64_t>(samples_.size()) != grid_.size()) {
    throw std::invalid_argument("Weight: sample count does not match grid");
  }
  bool any_positive = false;
  for (const double v : samples_) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw std::invalid_argument("Weight: samples must be finite and >= 0");
    }
    any_positive = any_positive || v > 0.0;
  }
  if (!any_positive) throw std::invalid_argument("Weight: identically zero");
}

double Weight::cached_or_compute(char kind, double p,
                                 double (*compute)(const Weight&, double)) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    const auto it = cache_->values.find({kind, p});
    if (it != cache_->values.end()) return it->second;
  }
  const double value = compute(*this, p);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  cache_->values.emplace(std::make_pair(kind, p), value);
  return value;
}

namespace {

// Shared scan over the three shifted lattices: for each interval, both
// per-cell arrays are averaged left-to-right (wrapped order) and combined.
// The brute-force test oracles replicate this interval family.
template <typename Combine>
double scan_intervals(const Grid& g, const std::vector<double>& a,
                      const std::vector<double>& b, Combine&& combine) {
  const std::int64_t m = g.size();
  double best = -std::numeric_limits<double>::infinity();
  for (const std::int64_t shift : detail::lattice_shifts(g)) {
    for (int level = 0; level <= g.log2_size(); ++level) {
      const std::int64_t w = m >> level;
      for (std::int64_t k = 0; k < m / w; ++k) {
        const std::int64_t start = (k * w + shift) % m;
        double sa = 0.0, sb = 0.0;
        for (std::int64_t j = 0; j < w; ++j) {
          const auto i = static_cast<std::size_t>((start + j) % m);
          sa += a[i];
          sb += b[i];
        }
        const double denom = static_cast<double>(w);
        best = std::max(best, combine(sa / denom, sb / denom));
      }
    }
  }
  return best;
}

double ap_compute(const Weight& w, double p) {
  const double p_conj = p / (p - 1.0);
  const std::vector<double>& samples = w.samples();
  std::vector<double> dual(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    dual[i] = std::pow(samples[i], 1.0 - p_conj);  // 0^{negative} -> +inf
  }
  const double value = scan_intervals(
      w.grid(), samples, dual, [p](double avg_w, double avg_dual) {
        if (avg_w == 0.0 || !std::isfinite(avg_dual)) {
          return std::numeric_limits<double>::infinity();
        }
        return avg_w * std::pow(avg_dual, p - 1.0);
      });
  return std::max(value, 1.0);
}

double rh_compute(const Weight& w, double p) {
  const std::vector<double>& samples = w.samples();
  std::vector<double> powed(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    powed[i] = std::pow(samples[i], p);
  }
  const double value = scan_intervals(
      w.grid(), samples, powed, [p](double avg_w, double avg_pow) {
        if (avg_w == 0.0) return 1.0;  // vacuous cube
        return std::pow(avg_pow, 1.0 / p) / avg_w;
      });
  return std::max(value, 1.0);
}

}  // namespace

double ap_characteristic(const Weight& w, double p) {
  if (p <= 1.0) throw std::invalid_argument("ap_characteristic: p must be > 1");
  return w.cached_or_compute('A', p, &ap_compute);
}

double rh_characteristic(const Weight& w, double p) {
  if (p <= 1.0) throw std::invalid_argument("rh_characteristic: p must be > 1");
  return w.cached_or_compute('R', p, &rh_compute);
}

Weight power_weight(const Grid& g, double alpha) {
  if (alpha <= -1.0) {
    throw std::invalid_argument("power_weight: alpha <= -1 is not locally integrable");
  }
  const std::int64_t m = g.size();
  std::vector<double> values(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    const double x = g.point(i);
    const double d = (i == 0) ? 0.5 * g.spacing() : std::min(x, 1.0 - x);
    values[static_cast<std::size_t>(i)] = (alpha == 0.0) ? 1.0 : std::pow(d, alpha);
  }
  return Weight(g, std::move(values));
}

Weight random_ap_weight(const Grid& g, double roughness, std::uint64_t seed) {
  if (roughness < 0.0 || roughness >= 1.0) {
    throw std::invalid_argument("random_ap_weight: roughness must be in [0, 1)");
  }
  const std::int64_t m = g.size();
  if (roughness == 0.0) {
    return Weight(g, std::vector<double>(static_cast<std::size_t>(m), 1.0));
  }
  Rng rng(seed);
  Spectrum spec = Spectrum::zeros(g);
  const std::int64_t band = std::min<std::int64_t>(16, m / 2 - 1);
  for (std::int64_t xi = 1; xi <= band; ++xi) {
    const double decay = 1.0 / static_cast<double>(xi);
    spec.set_coeff(xi, decay * cplx(rng.normal(), rng.normal()));
  }
  SampledFunction field = inverse_transform(spec);
  double peak = 0.0;
  for (const cplx& v : field.samples) peak = std::max(peak, std::abs(v.real()));
  const double amp = (peak > 0.0) ? roughness / ((1.0 - roughness) * peak) : 0.0;
  std::vector<double> values(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    values[static_cast<std::size_t>(i)] =
        std::exp(amp * field.samples[static_cast<std::size_t>(i)].real());
  }
  return Weight(g, std::move(values));
}

double lp_norm(const SampledFunction& f, double p, const Weight& w) {
  if (f.grid != w.grid()) throw std::invalid_argument("lp_norm: weight grid mismatch");
  return lp_norm(f, p, w.samples());
}

}  // namespace mfcz
