#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace mfcz {

using cplx = std::complex<double>;

/// Uniform periodic discretization of the torus [0,1) with M = 2^K points.
class Grid {
 public:
  static constexpr int kMinLog2 = 4;
  static constexpr int kMaxLog2 = 24;

  explicit Grid(int log2_size);

  int log2_size() const { return log2_size_; }
  std::int64_t size() const { return std::int64_t{1} << log2_size_; }
  double spacing() const { return 1.0 / static_cast<double>(size()); }
  double point(std::int64_t i) const {
    return static_cast<double>(i) * spacing();
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.log2_size_ == b.log2_size_;
  }
  friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

 private:
  int log2_size_;
};

Grid make_grid(int log2_size);

/// Complex-valued samples on a grid; value at x_i = i/M. The universal
/// signal carrier: integrals are rectangle-rule sums, spacing * sum(samples).
struct SampledFunction {
  Grid grid;
  std::vector<cplx> samples;

  SampledFunction(Grid g, std::vector<cplx> values);
  static SampledFunction zeros(Grid g);
};

/// Fourier coefficients c_xi for integer frequencies xi in [-M/2, M/2),
/// under the convention f(x) = sum_xi c_xi e^{2 pi i xi x}. Storage is DFT
/// order: index j holds frequency j for j < M/2, j - M otherwise.
struct Spectrum {
  Grid grid;
  std::vector<cplx> coefficients;

  Spectrum(Grid g, std::vector<cplx> coeffs);
  static Spectrum zeros(Grid g);

  std::int64_t index_of(std::int64_t xi) const;
  cplx coeff(std::int64_t xi) const { return coefficients[index_of(xi)]; }
  void set_coeff(std::int64_t xi, cplx v) { coefficients[index_of(xi)] = v; }
};

Spectrum forward_transform(const SampledFunction& f);
SampledFunction inverse_transform(const Spectrum& s);

/// (spacing * sum |f_i|^p w_i)^{1/p}. Unweighted overload uses w == 1.
double lp_norm(const SampledFunction& f, double p);
double lp_norm(const SampledFunction& f, double p,
               const std::vector<double>& weight_samples);

double sup_norm(const SampledFunction& f);

/// sup_{lambda>0} lambda * |{x : |f(x)| > lambda}|, evaluated exactly for
/// grid simple functions as max over sample values v of v * |{|f| >= v}|.
double weak_l1_quasinorm(const SampledFunction& f);

namespace detail {
/// In-place radix-2 FFT, power-of-two length. sign = -1: sum f e^{-2pi i},
/// sign = +1: sum f e^{+2pi i}. No normalization applied.
void fft_pow2(std::vector<cplx>& a, int sign);
}  // namespace detail

}  // namespace mfcz
