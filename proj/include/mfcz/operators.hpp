#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfcz/dyadic.hpp"
#include "mfcz/grid.hpp"

namespace mfcz {

/// Sorted distinct integer frequencies, each representable on the grid.
struct FrequencySet {
  std::vector<std::int64_t> frequencies;

  static FrequencySet of(std::vector<std::int64_t> freqs, const Grid& g);
  int size() const { return static_cast<int>(frequencies.size()); }
};

enum class DiniProfile { Linear, Power };

/// Modulus of continuity, one of the named profiles:
///   linear  omega(t) = L t
///   power   omega(t) = L t^a, a > 0 (subadditive iff a <= 1)
class DiniModulus {
 public:
  static DiniModulus linear(double scale);
  static DiniModulus power(double scale, double exponent);

  double operator()(double t) const;
  DiniProfile profile() const { return profile_; }
  double scale() const { return scale_; }
  double exponent() const { return exponent_; }

 private:
  DiniModulus(DiniProfile p, double scale, double exponent);
  DiniProfile profile_;
  double scale_;
  double exponent_;
};

/// ||omega||_Dini = int_0^1 omega(t) dt/t, composite Simpson on 2^12
/// log-spaced panels over [1e-9, 1] plus the analytic tail below 1e-9.
double dini_norm(const DiniModulus& mod);

enum class ProfileShape { Flat, CosineSquared, GaussianTruncated };

std::string shape_name(ProfileShape s);

/// One frequency cube [center - halfwidth, center + halfwidth] with a signed
/// multiplier profile on it.
struct FrequencyCube {
  std::int64_t center = 0;
  std::int64_t halfwidth = 0;
  double sign = 1.0;
};

/// T = sum_j phi_j * f with hat(phi_j) a bump adapted to its frequency cube:
/// value |sign| = 1 at the center, vanishing at the edges for the smooth
/// shapes. Application is exact multiplier action on the spectrum.
class MultiFrequencyOperator {
 public:
  MultiFrequencyOperator(Grid g, std::vector<FrequencyCube> cubes,
                         ProfileShape shape, DiniModulus modulus);

  const Grid& grid() const { return grid_; }
  const FrequencySet& frequency_set() const { return theta_; }
  const std::vector<FrequencyCube>& frequency_cubes() const { return cubes_; }
  ProfileShape shape() const { return shape_; }
  const DiniModulus& modulus() const { return modulus_; }
  int frequency_count() const { return theta_.size(); }

  /// Multiplier values in Spectrum (DFT) layout.
  const std::vector<cplx>& multiplier() const { return multiplier_; }

  /// Discrete convolution weights: (Tf)(i) = sum_d w_d f_{i-d}.
  const std::vector<cplx>& conv_weights() const { return conv_weights_; }

  /// Replayable build descriptor (shape, halfwidths, centers, signs).
  std::string descriptor() const;

 private:
  Grid grid_;
  std::vector<FrequencyCube> cubes_;
  ProfileShape shape_;
  DiniModulus modulus_;
  FrequencySet theta_;
  std::vector<cplx> multiplier_;
  std::vector<cplx> conv_weights_;
};

/// Operator from disjoint equal-halfwidth cubes at the given centers.
MultiFrequencyOperator build_multiplier_operator(
    const Grid& g, const std::vector<std::int64_t>& centers,
    std::int64_t halfwidth, ProfileShape shape);

/// Multiplier epsilon_n on integer frequency n for n = 0..N-1, realized as
/// an N-frequency operator with unit (halfwidth 0) cubes.
MultiFrequencyOperator random_sign_operator(const Grid& g, std::int64_t n,
                                            const std::vector<int>& signs);

SampledFunction apply(const MultiFrequencyOperator& t, const SampledFunction& f);

/// apply(T, f * indicator of the complement of the excluded ranges).
SampledFunction apply_truncated(const MultiFrequencyOperator& t,
                                const SampledFunction& f,
                                const std::vector<CellRange>& excluded);

/// y -> sum_j phi_j(x - y), the integral-kernel row through grid point x.
SampledFunction kernel_slice(const MultiFrequencyOperator& t, std::int64_t x_cell);

struct DiniProbeReport {
  double max_ratio = 0.0;
  double declared_constant = 0.0;
  bool pass = false;
  int pairs_sampled = 0;
};

/// Samples (x, x', y) with |x - y| > 2|x - x'| > 0 (torus metric) and
/// compares the modulated-kernel oscillation
///   sum_j |K~_j(x,y) - K~_j(x',y)| + |K~_j(y,x) - K~_j(y,x')|,
/// K~_j the demodulated kernel, against omega(|x-x'|/|x-y|) / |x-y|.
/// PASS iff the max ratio is <= the declared constant (default: the
/// frequency count, the structural factor of the j-sum).
DiniProbeReport dini_regularity_probe(const MultiFrequencyOperator& t,
                                      int sample_pairs, std::uint64_t seed,
                                      std::optional<double> declared_constant = {});

/// Function with unit Fourier coefficients on frequencies {0, ..., n} and
/// zero elsewhere. Requires n < M/2.
SampledFunction dirichlet_function(const Grid& g, std::int64_t n);

namespace detail {
/// Certified per-shape Lipschitz slope of the demodulated single-bump
/// kernel; flat cutoffs scale with the bump width.
double certified_lipschitz(ProfileShape shape, std::int64_t halfwidth);
}  // namespace detail

}  // namespace mfcz
