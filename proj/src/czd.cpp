#include "mfcz/czd.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mfcz {

namespace {

constexpr double kEigenvalueCutoff = 1e-10;

// spacing * sum over L cells starting at s of e^{2 pi i q x_i}, via the
// geometric closed form. Integer q, |q| < M, so the q != 0 denominator is
// never degenerate (phases are exact mod 1 on integer frequencies).
cplx segment_tone_integral(const Grid& g, std::int64_t q, std::int64_t s,
                           std::int64_t len) {
  const double h = g.spacing();
  if (q == 0) return cplx(h * static_cast<double>(len), 0.0);
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(q) * h;
  const cplx step = std::polar(1.0, theta);
  const cplx first = std::polar(1.0, theta * static_cast<double>(s));
  const cplx num = std::polar(1.0, theta * static_cast<double>(len)) - 1.0;
  return h * first * num / (step - 1.0);
}

// Minimum-norm solution of the Hermitian PSD system G c = mu.
Eigen::VectorXcd solve_gram(const Eigen::MatrixXcd& gram,
                            const Eigen::VectorXcd& mu) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("mf_czd: Gram eigensolve failed");
  }
  const Eigen::VectorXd lam = es.eigenvalues();
  const double cutoff = kEigenvalueCutoff * std::max(lam.maxCoeff(), 0.0);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(mu.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] > cutoff && lam[i] > 0.0) {
      const Eigen::VectorXcd u = es.eigenvectors().col(i);
      c += u * (u.dot(mu) / lam[i]);
    }
  }
  return c;
}

int max_overlap(const Grid& g, const std::vector<BadPart>& parts) {
  if (parts.empty()) return 0;
  const std::int64_t m = g.size();
  std::vector<int> count(static_cast<std::size_t>(m), 0);
  for (const BadPart& b : parts) {
    for (std::int64_t k = 0; k < b.support.length; ++k) {
      ++count[static_cast<std::size_t>((b.support.start + k) % m)];
    }
  }
  int best = 0;
  for (const int c : count) best = std::max(best, c);
  return best;
}

}  // namespace

CZDecomposition mf_czd(const SampledFunction& f, double lambda,
                       const FrequencySet& theta) {
  if (lambda <= 0.0) throw std::invalid_argument("mf_czd: lambda must be > 0");
  const int n_freq = theta.size();
  if (n_freq == 0) throw std::invalid_argument("mf_czd: empty frequency set");
  const double l1 = lp_norm(f, 1.0);
  if (l1 == 0.0) throw std::invalid_argument("mf_czd: f is identically zero");

  const Grid& g = f.grid;
  const double h = g.spacing();
  const double sqrt_n = std::sqrt(static_cast<double>(n_freq));
  const double threshold = lambda / sqrt_n;

  CZDecomposition d{f, lambda, theta, stopping_cubes(f, threshold), {},
                    SampledFunction::zeros(g), {}};

  double mass_max = 0.0;
  double local_l2_max = 0.0;
  double cancel_max = 0.0;

  for (const DyadicInterval& q : d.cubes.cubes) {
    const CellRange own = cells_of(q, g);
    const CellRange supp = triple_cells_of(q, g);
    const std::int64_t m = g.size();

    // moments of f chi_Q at the theta frequencies
    Eigen::VectorXcd mu(n_freq);
    for (int j = 0; j < n_freq; ++j) {
      const double omega =
          -2.0 * std::numbers::pi * static_cast<double>(theta.frequencies[j]) * h;
      cplx acc = 0.0;
      for (std::int64_t k = 0; k < own.length; ++k) {
        const std::int64_t i = (own.start + k) % m;
        acc += f.samples[static_cast<std::size_t>(i)] *
               std::polar(1.0, omega * static_cast<double>(own.start + k));
      }
      mu[j] = h * acc;
    }

    // Gram of the tones restricted to 3Q; closed-form entries
    Eigen::MatrixXcd gram(n_freq, n_freq);
    for (int j = 0; j < n_freq; ++j) {
      for (int k = 0; k <= j; ++k) {
        const cplx v = segment_tone_integral(
            g, theta.frequencies[k] - theta.frequencies[j], supp.start, supp.length);
        gram(j, k) = v;
        gram(k, j) = std::conj(v);
      }
    }
    const Eigen::VectorXcd coeff = solve_gram(gram, mu);

    BadPart part{q, supp, std::vector<cplx>(static_cast<std::size_t>(supp.length))};
    for (std::int64_t k = 0; k < supp.length; ++k) {
      const std::int64_t i = (supp.start + k) % m;
      cplx p = 0.0;
      for (int j = 0; j < n_freq; ++j) {
        const double omega =
            2.0 * std::numbers::pi * static_cast<double>(theta.frequencies[j]) * h;
        p += coeff[j] * std::polar(1.0, omega * static_cast<double>(supp.start + k));
      }
      const bool inside_q = own.contains(i, m);
      const cplx fv = inside_q ? f.samples[static_cast<std::size_t>(i)] : cplx(0.0);
      part.values[static_cast<std::size_t>(k)] = fv - p;
    }

    // per-bullet constants for this cube
    const double mass = average_cells(f, own, 1.0) / threshold;
    mass_max = std::max(mass_max, mass);

    double l2_on_q = 0.0;
    for (std::int64_t k = 0; k < supp.length; ++k) {
      const std::int64_t i = (supp.start + k) % m;
      if (!own.contains(i, m)) continue;
      const cplx fv = f.samples[static_cast<std::size_t>(i)];
      l2_on_q += std::norm(fv - part.values[static_cast<std::size_t>(k)]);
    }
    local_l2_max = std::max(local_l2_max,
                            std::sqrt(h * l2_on_q) / (lambda * std::sqrt(q.measure())));

    for (int j = 0; j < n_freq; ++j) {
      const double omega =
          -2.0 * std::numbers::pi * static_cast<double>(theta.frequencies[j]) * h;
      cplx acc = 0.0;
      for (std::int64_t k = 0; k < supp.length; ++k) {
        acc += part.values[static_cast<std::size_t>(k)] *
               std::polar(1.0, omega * static_cast<double>(supp.start + k));
      }
      cancel_max = std::max(cancel_max, std::abs(h * acc));
    }

    d.bad_parts.push_back(std::move(part));
  }

  d.good = f;
  for (const BadPart& b : d.bad_parts) {
    const std::int64_t m = g.size();
    for (std::int64_t k = 0; k < b.support.length; ++k) {
      d.good.samples[static_cast<std::size_t>((b.support.start + k) % m)] -=
          b.values[static_cast<std::size_t>(k)];
    }
  }

  double good_l2_sq = 0.0;
  for (const cplx& v : d.good.samples) good_l2_sq += std::norm(v);
  good_l2_sq *= h;

  d.report.overlap_multiplicity = max_overlap(g, d.bad_parts);
  d.report.packing_constant = d.cubes.total_measure * threshold / l1;
  d.report.good_l2_constant = good_l2_sq / (l1 * lambda * sqrt_n);
  d.report.per_cube_mass_constant = mass_max;
  d.report.local_l2_constant = local_l2_max;
  d.report.cancellation_residual = cancel_max / l1;
  return d;
}

PropertyReport verify_czd(const CZDecomposition& d) {
  const Grid& g = d.f.grid;
  const std::int64_t m = g.size();
  const double h = g.spacing();
  const int n_freq = d.theta.size();
  const double sqrt_n = std::sqrt(static_cast<double>(n_freq));
  const double threshold = d.lambda / sqrt_n;

  double l1 = 0.0;
  for (const cplx& v : d.f.samples) l1 += std::abs(v);
  l1 *= h;

  PropertyReport rep;
  rep.overlap_multiplicity = max_overlap(g, d.bad_parts);

  double total_measure = 0.0;
  for (const DyadicInterval& q : d.cubes.cubes) total_measure += q.measure();
  rep.packing_constant = total_measure * threshold / l1;

  double good_l2_sq = 0.0;
  for (const cplx& v : d.good.samples) good_l2_sq += std::norm(v);
  rep.good_l2_constant = h * good_l2_sq / (l1 * d.lambda * sqrt_n);

  for (const BadPart& b : d.bad_parts) {
    const CellRange own = cells_of(b.cube, g);

    double mass = 0.0;
    for (std::int64_t k = 0; k < own.length; ++k) {
      mass += std::abs(d.f.samples[static_cast<std::size_t>((own.start + k) % m)]);
    }
    mass *= h;
    rep.per_cube_mass_constant =
        std::max(rep.per_cube_mass_constant,
                 mass / (b.cube.measure() * d.lambda / sqrt_n));

    double l2_on_q = 0.0;
    for (std::int64_t k = 0; k < b.support.length; ++k) {
      const std::int64_t i = (b.support.start + k) % m;
      if (!own.contains(i, m)) continue;
      l2_on_q += std::norm(d.f.samples[static_cast<std::size_t>(i)] -
                           b.values[static_cast<std::size_t>(k)]);
    }
    rep.local_l2_constant =
        std::max(rep.local_l2_constant,
                 std::sqrt(h * l2_on_q) / (d.lambda * std::sqrt(b.cube.measure())));

    for (int j = 0; j < n_freq; ++j) {
      const double omega =
          -2.0 * std::numbers::pi * static_cast<double>(d.theta.frequencies[j]) * h;
      cplx acc = 0.0;
      for (std::int64_t k = 0; k < b.support.length; ++k) {
        acc += b.values[static_cast<std::size_t>(k)] *
               std::polar(1.0, omega * static_cast<double>(b.support.start + k));
      }
      rep.cancellation_residual =
          std::max(rep.cancellation_residual, std::abs(h * acc) / l1);
    }
  }
  return rep;
}

}  // namespace mfcz
