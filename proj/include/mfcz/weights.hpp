#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "mfcz/grid.hpp"

namespace mfcz {

/// Nonnegative weight on a grid with a write-once characteristic cache.
/// Copies share the cache.
class Weight {
 public:
  Weight(Grid g, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& samples() const { return samples_; }

  /// Cache lookup used by the characteristic computations. kind is 'A'
  /// (Muckenhoupt) or 'R' (reverse Holder).
  double cached_or_compute(char kind, double p,
                           double (*compute)(const Weight&, double)) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::pair<char, double>, double> values;
  };
  Grid grid_;
  std::vector<double> samples_;
  std::shared_ptr<Cache> cache_;
};

/// [w]_{A_p}: max over the three shifted dyadic lattices, all resolvable
/// levels, of (avg_Q w) (avg_Q w^{1-p'})^{p-1}. Returns +inf when w vanishes
/// on a cube of positive measure. Floored at 1 (Jensen).
double ap_characteristic(const Weight& w, double p);

/// [w]_{RH_p}: max over the same interval family of
/// (avg_Q w^p)^{1/p} / (avg_Q w). Cubes where w vanishes identically are
/// skipped. Floored at 1.
double rh_characteristic(const Weight& w, double p);

/// w(x) = d(x)^alpha with d(x) = min(x, 1-x); the x = 0 sample is evaluated
/// at half spacing. Requires alpha > -1 (local integrability).
Weight power_weight(const Grid& g, double alpha);

/// exp of a seeded low-pass random field, amplitude increasing with
/// roughness in [0, 1). roughness = 0 gives w == 1 exactly.
Weight random_ap_weight(const Grid& g, double roughness, std::uint64_t seed);

double lp_norm(const SampledFunction& f, double p, const Weight& w);

}  // namespace mfcz
