#include "mfcz/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "mfcz/parallel.hpp"

namespace mfcz {

FitResult fit_exponent(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 3) {
    throw std::invalid_argument("fit_exponent: need >= 3 matched points");
  }
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (xs[i] <= 0.0 || ys[i] <= 0.0) {
      throw std::invalid_argument("fit_exponent: data must be positive");
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_exponent: degenerate abscissae");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / static_cast<double>(n));
  return fit;
}

MultiFrequencyOperator random_operator(const Grid& g, int n_freq,
                                       std::int64_t halfwidth,
                                       ProfileShape shape, Rng& rng) {
  const std::int64_t half = g.size() / 2;
  const std::int64_t stride = 2 * halfwidth + 2;
  const std::int64_t lo = -half + 1 + halfwidth;
  const std::int64_t hi = half - 1 - halfwidth;
  const std::int64_t slots = (hi - lo) / stride + 1;
  if (slots < n_freq) {
    throw std::invalid_argument("random_operator: band too narrow for n_freq cubes");
  }
  std::vector<std::int64_t> slot_ids(static_cast<std::size_t>(slots));
  for (std::int64_t i = 0; i < slots; ++i) slot_ids[static_cast<std::size_t>(i)] = i;
  std::vector<std::int64_t> centers;
  centers.reserve(static_cast<std::size_t>(n_freq));
  for (int k = 0; k < n_freq; ++k) {
    const auto pick = static_cast<std::size_t>(
        rng.uniform_below(static_cast<std::uint64_t>(slots - k)));
    std::swap(slot_ids[pick], slot_ids[static_cast<std::size_t>(slots - 1 - k)]);
    centers.push_back(lo + slot_ids[static_cast<std::size_t>(slots - 1 - k)] * stride);
  }
  return build_multiplier_operator(g, centers, halfwidth, shape);
}

SampledFunction random_spiky_function(const Grid& g, int spikes, Rng& rng) {
  SampledFunction f = SampledFunction::zeros(g);
  const auto m = static_cast<std::uint64_t>(g.size());
  for (int k = 0; k < spikes; ++k) {
    const auto cell = static_cast<std::size_t>(rng.uniform_below(m));
    const double mass = std::pow(1.0 - rng.uniform(), -0.8);  // heavy tail
    const double phase = 6.283185307179586 * rng.uniform();
    f.samples[cell] += std::polar(mass, phase);
  }
  const double l1 = lp_norm(f, 1.0);
  if (l1 == 0.0) {
    f.samples[0] = 1.0 / g.spacing();
    return f;
  }
  for (cplx& v : f.samples) v /= l1;
  return f;
}

SampledFunction random_test_function(const Grid& g, Rng& rng) {
  Spectrum spec = Spectrum::zeros(g);
  const std::int64_t band = std::min<std::int64_t>(32, g.size() / 2 - 1);
  for (std::int64_t xi = -band; xi <= band; ++xi) {
    const double decay = 1.0 / (1.0 + std::abs(static_cast<double>(xi)));
    spec.set_coeff(xi, decay * cplx(rng.normal(), rng.normal()));
  }
  SampledFunction smooth = inverse_transform(spec);
  const double smooth_l1 = lp_norm(smooth, 1.0);
  SampledFunction f = random_spiky_function(g, 6, rng);  // unit mass spikes
  if (smooth_l1 > 0.0) {
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
      f.samples[i] += smooth.samples[i] / smooth_l1;
    }
  }
  const double l1 = lp_norm(f, 1.0);
  for (cplx& v : f.samples) v /= l1;
  return f;
}

ScalingResult run_weak11_experiment(const Grid& g,
                                    const std::vector<std::int64_t>& ns,
                                    int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("weak11: trials must be >= 1");
  ScalingResult result;
  result.points.resize(ns.size());
  parallel_for(static_cast<std::int64_t>(ns.size()), [&](std::int64_t idx) {
    const std::int64_t n = ns[static_cast<std::size_t>(idx)];
    double best = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      Rng rng(mix_seed(seed, 1000 + static_cast<std::uint64_t>(n) * 64 +
                                 static_cast<std::uint64_t>(trial)));
      const ProfileShape shape = (trial % 2 == 0) ? ProfileShape::CosineSquared
                                                  : ProfileShape::GaussianTruncated;
      const MultiFrequencyOperator t =
          random_operator(g, static_cast<int>(n), 2, shape, rng);
      const SampledFunction f = random_spiky_function(g, 8, rng);
      const double ratio = weak_l1_quasinorm(apply(t, f)) / lp_norm(f, 1.0);
      best = std::max(best, ratio);
    }
    result.points[static_cast<std::size_t>(idx)] = {n, best, trials, seed};
  });
  std::vector<double> xs, ys;
  for (const ScalingPoint& p : result.points) {
    xs.push_back(static_cast<double>(p.n));
    ys.push_back(p.statistic);
  }
  result.fit = fit_exponent(xs, ys);
  return result;
}

ScalingResult run_lower_bound_experiment(const Grid& g, double p,
                                         const std::vector<std::int64_t>& ns,
                                         int sign_trials, std::uint64_t seed) {
  if (p <= 1.0 || p >= 2.0) {
    throw std::invalid_argument("lower bound experiment: need 1 < p < 2");
  }
  ScalingResult result;
  result.points.resize(ns.size());
  parallel_for(static_cast<std::int64_t>(ns.size()), [&](std::int64_t idx) {
    const std::int64_t n = ns[static_cast<std::size_t>(idx)];
    const SampledFunction f_n = dirichlet_function(g, n);
    const double denom = lp_norm(f_n, p);
    Rng rng(mix_seed(seed, 2000 + static_cast<std::uint64_t>(n)));
    double best = 0.0;
    for (int trial = 0; trial < sign_trials; ++trial) {
      std::vector<int> signs(static_cast<std::size_t>(n));
      for (int& s : signs) s = (rng.uniform() < 0.5) ? -1 : 1;
      const MultiFrequencyOperator t = random_sign_operator(g, n, signs);
      best = std::max(best, lp_norm(apply(t, f_n), p) / denom);
    }
    result.points[static_cast<std::size_t>(idx)] = {n, best, sign_trials, seed};
  });
  std::vector<double> xs, ys;
  for (const ScalingPoint& q : result.points) {
    xs.push_back(static_cast<double>(q.n));
    ys.push_back(q.statistic);
  }
  result.fit = fit_exponent(xs, ys);
  return result;
}

ScalingResult run_strong_experiment(const Grid& g, double p,
                                    const std::vector<std::int64_t>& ns,
                                    int trials, std::uint64_t seed) {
  if (p <= 1.0) throw std::invalid_argument("strong experiment: need p > 1");
  ScalingResult result;
  result.points.resize(ns.size());
  parallel_for(static_cast<std::int64_t>(ns.size()), [&](std::int64_t idx) {
    const std::int64_t n = ns[static_cast<std::size_t>(idx)];
    double best = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      Rng rng(mix_seed(seed, 2500 + static_cast<std::uint64_t>(n) * 64 +
                                 static_cast<std::uint64_t>(trial)));
      if (trial % 2 == 0) {
        const MultiFrequencyOperator t = random_operator(
            g, static_cast<int>(n), 2, ProfileShape::CosineSquared, rng);
        const SampledFunction f = random_spiky_function(g, 8, rng);
        best = std::max(best, lp_norm(apply(t, f), p) / lp_norm(f, p));
      } else {
        std::vector<int> signs(static_cast<std::size_t>(n));
        for (int& s : signs) s = (rng.uniform() < 0.5) ? -1 : 1;
        const MultiFrequencyOperator t = random_sign_operator(g, n, signs);
        const SampledFunction f = dirichlet_function(g, n);
        best = std::max(best, lp_norm(apply(t, f), p) / lp_norm(f, p));
      }
    }
    result.points[static_cast<std::size_t>(idx)] = {n, best, trials, seed};
  });
  std::vector<double> xs, ys;
  for (const ScalingPoint& q : result.points) {
    xs.push_back(static_cast<double>(q.n));
    ys.push_back(q.statistic);
  }
  result.fit = fit_exponent(xs, ys);
  return result;
}

WeightedCheckReport check_sparse_weighted(const SparseFamily& s,
                                          const SampledFunction& f,
                                          const Weight& w, double p, double r) {
  if (!(p > r && r >= 1.0)) {
    throw std::invalid_argument("check_sparse_weighted: need p > r >= 1");
  }
  WeightedCheckReport rep;
  rep.p = p;
  rep.r = r;
  rep.ap_char = ap_characteristic(w, p / r);
  rep.exponent = std::max(1.0, 1.0 / (p - r));
  const double denom =
      std::pow(rep.ap_char, rep.exponent) * lp_norm(f, p, w);
  rep.ratio = lp_norm(sparse_apply(s, f, r), p, w) / denom;
  return rep;
}

WeightedCheckReport check_main_theorem(const MultiFrequencyOperator& t,
                                       const SampledFunction& f, const Weight& w,
                                       double p, double r) {
  if (!(p > r && r >= 1.0)) {
    throw std::invalid_argument("check_main_theorem: need p > r >= 1");
  }
  const SparseFamily s = sparse_dominate(t, f, make_domination_params(t, r));
  WeightedCheckReport rep;
  rep.p = p;
  rep.r = r;
  rep.ap_char = ap_characteristic(w, p / r);
  rep.exponent = std::max(1.0, 1.0 / (p - r));
  const double n_pow = std::pow(static_cast<double>(t.frequency_count()),
                                std::abs(1.0 / r - 0.5));
  const double denom =
      n_pow * std::pow(rep.ap_char, rep.exponent) * lp_norm(f, p, w);
  rep.ratio = lp_norm(apply(t, f), p, w) / denom;
  return rep;
}

// ---------------------------------------------------------------------------
// full verification
// ---------------------------------------------------------------------------

namespace {

std::vector<std::int64_t> random_frequencies(const Grid& g, int count, Rng& rng) {
  const std::int64_t band = g.size() / 4;
  std::vector<std::int64_t> pool(static_cast<std::size_t>(2 * band + 1));
  for (std::int64_t i = 0; i <= 2 * band; ++i) {
    pool[static_cast<std::size_t>(i)] = i - band;
  }
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(count));
  const auto total = static_cast<std::int64_t>(pool.size());
  for (int k = 0; k < count; ++k) {
    const auto pick = static_cast<std::size_t>(
        rng.uniform_below(static_cast<std::uint64_t>(total - k)));
    std::swap(pool[pick], pool[static_cast<std::size_t>(total - 1 - k)]);
    out.push_back(pool[static_cast<std::size_t>(total - 1 - k)]);
  }
  return out;
}

struct CzdRow {
  std::int64_t n = 0;
  int func = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::int64_t cube_count = 0;
  PropertyReport rep;
  double identity_err = 0.0;
  bool exact_ok = false;
};

void czd_suite(const VerifyConfig& cfg, const Grid& g, VerificationReport& out) {
  const auto suite_start = std::chrono::steady_clock::now();
  const std::vector<std::int64_t> ns{1, 2, 4, 8, 16, 32, 64};
  const int funcs = cfg.czd_functions;
  const std::int64_t total = static_cast<std::int64_t>(ns.size()) * funcs;
  std::vector<CzdRow> rows(static_cast<std::size_t>(total));

  parallel_for(total, [&](std::int64_t idx) {
    const std::int64_t n = ns[static_cast<std::size_t>(idx) / funcs];
    const int func = static_cast<int>(idx % funcs);
    const std::uint64_t trial_seed =
        mix_seed(cfg.seed, 100 + static_cast<std::uint64_t>(idx));
    Rng rng(trial_seed);
    const SampledFunction f = random_test_function(g, rng);
    const double mult = std::vector<double>{2.0, 4.0, 8.0}[func % 3];
    const double lambda = mult * std::sqrt(static_cast<double>(n));
    const FrequencySet theta =
        FrequencySet::of(random_frequencies(g, static_cast<int>(n), rng), g);
    const CZDecomposition d = mf_czd(f, lambda, theta);
    const PropertyReport rep = verify_czd(d);

    SampledFunction recon = d.good;
    const std::int64_t m = g.size();
    for (const BadPart& b : d.bad_parts) {
      for (std::int64_t k = 0; k < b.support.length; ++k) {
        recon.samples[static_cast<std::size_t>((b.support.start + k) % m)] +=
            b.values[static_cast<std::size_t>(k)];
      }
    }
    double identity_err = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
      identity_err = std::max(identity_err,
                              std::abs(recon.samples[static_cast<std::size_t>(i)] -
                                       f.samples[static_cast<std::size_t>(i)]));
    }
    CzdRow row{n, func, lambda, trial_seed,
               static_cast<std::int64_t>(d.cubes.cubes.size()), rep,
               identity_err, false};
    row.exact_ok = rep.packing_constant <= 1.0 &&
                   rep.per_cube_mass_constant <= 2.0 &&
                   cubes_pairwise_disjoint(d.cubes.cubes);
    rows[static_cast<std::size_t>(idx)] = row;
  });

  CsvTable table({"seed", "grid_log2", "n_freq", "lambda", "n_cubes",
                  "overlap_multiplicity", "packing_constant", "good_l2_constant",
                  "per_cube_mass_constant", "local_l2_constant",
                  "cancellation_residual"});
  bool exact_pass = true;
  double worst_cancel = 0.0, worst_identity = 0.0, worst_pack = 0.0,
         worst_mass = 0.0;
  double worst_good = 0.0, worst_local = 0.0;
  int worst_overlap = 0;
  for (const CzdRow& row : rows) {
    table.add_row({CsvTable::num(static_cast<std::int64_t>(row.seed)),
                   CsvTable::num(static_cast<std::int64_t>(cfg.grid_log2)),
                   CsvTable::num(row.n), CsvTable::num(row.lambda),
                   CsvTable::num(row.cube_count),
                   CsvTable::num(static_cast<std::int64_t>(row.rep.overlap_multiplicity)),
                   CsvTable::num(row.rep.packing_constant),
                   CsvTable::num(row.rep.good_l2_constant),
                   CsvTable::num(row.rep.per_cube_mass_constant),
                   CsvTable::num(row.rep.local_l2_constant),
                   CsvTable::num(row.rep.cancellation_residual)});
    exact_pass = exact_pass && row.exact_ok;
    worst_cancel = std::max(worst_cancel, row.rep.cancellation_residual);
    worst_identity = std::max(worst_identity, row.identity_err);
    worst_pack = std::max(worst_pack, row.rep.packing_constant);
    worst_mass = std::max(worst_mass, row.rep.per_cube_mass_constant);
    worst_good = std::max(worst_good, row.rep.good_l2_constant);
    worst_local = std::max(worst_local, row.rep.local_l2_constant);
    worst_overlap = std::max(worst_overlap, row.rep.overlap_multiplicity);
  }
  out.tables["czd_report.csv"] = table.to_string();

  const double suite_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - suite_start)
          .count();
  const Tolerances& tol = cfg.tol;
  const bool c1 = exact_pass && worst_cancel <= tol.czd_cancellation_rel &&
                  worst_identity <= tol.czd_identity_rel && suite_seconds <= 60.0;
  out.criteria.push_back(
      {"1 czd-exact-properties", c1, worst_cancel, tol.czd_cancellation_rel,
       "packing<=" + CsvTable::num(worst_pack) + " mass<=" + CsvTable::num(worst_mass) +
           " identity<=" + CsvTable::num(worst_identity) + " over " +
           std::to_string(rows.size()) + " triples in " +
           std::to_string(suite_seconds) + " s (cap 60)"});
  const bool c2 = worst_good <= tol.czd_good_l2_ceiling &&
                  worst_local <= tol.czd_local_l2_ceiling &&
                  worst_overlap <= tol.czd_overlap_ceiling;
  out.criteria.push_back(
      {"2 czd-monitored-constants", c2, worst_good, tol.czd_good_l2_ceiling,
       "local_l2=" + CsvTable::num(worst_local) + " (ceiling " +
           CsvTable::num(tol.czd_local_l2_ceiling) + "), overlap=" +
           std::to_string(worst_overlap) + " (ceiling " +
           std::to_string(tol.czd_overlap_ceiling) + ")"});
}

struct DominationRow {
  double r = 0.0;
  std::int64_t n = 0;
  int pair = 0;
  std::uint64_t seed = 0;
  double ratio = 0.0;
  double worst_eta = 1.0;
  bool eta_pass = false;
  int depth = 0;
  std::int64_t nodes = 0;
  double max_cn = 0.0;
};

void domination_suite(const VerifyConfig& cfg, const Grid& g,
                      VerificationReport& out) {
  const auto suite_start = std::chrono::steady_clock::now();
  const std::vector<double> rs{1.0, 1.5};
  const std::vector<std::int64_t> ns{1, 4, 16, 64};
  const int pairs = cfg.domination_pairs;
  const std::int64_t total =
      static_cast<std::int64_t>(rs.size() * ns.size()) * pairs;
  std::vector<DominationRow> rows(static_cast<std::size_t>(total));

  parallel_for(total, [&](std::int64_t idx) {
    const int pair = static_cast<int>(idx % pairs);
    const std::int64_t cell = idx / pairs;
    const std::int64_t n = ns[static_cast<std::size_t>(cell % ns.size())];
    const double r = rs[static_cast<std::size_t>(cell / ns.size())];
    const std::uint64_t trial_seed =
        mix_seed(cfg.seed, 3000 + static_cast<std::uint64_t>(idx));
    Rng rng(trial_seed);

    // alternate the two extremizer families of the N-exponent
    const bool sign_kind = (pair % 2 == 1);
    SampledFunction f = SampledFunction::zeros(g);
    DominationTrace trace;
    SparseFamily family{g, {}, 1, 6};
    double ratio = 0.0;
    if (sign_kind) {
      std::vector<int> signs(static_cast<std::size_t>(n));
      for (int& sgn : signs) sgn = (rng.uniform() < 0.5) ? -1 : 1;
      const MultiFrequencyOperator t = random_sign_operator(g, n, signs);
      f = dirichlet_function(g, n);
      family = sparse_dominate(t, f, make_domination_params(t, r), &trace);
      ratio = check_domination(t, f, family, r, static_cast<int>(n)).max_ratio;
    } else {
      const std::int64_t hw = 2 + static_cast<std::int64_t>(rng.uniform_below(4));
      const ProfileShape shape = (pair % 4 < 2) ? ProfileShape::CosineSquared
                                                : ProfileShape::GaussianTruncated;
      const MultiFrequencyOperator t =
          random_operator(g, static_cast<int>(n), hw, shape, rng);
      f = random_spiky_function(g, 8, rng);
      family = sparse_dominate(t, f, make_domination_params(t, r), &trace);
      ratio = check_domination(t, f, family, r, static_cast<int>(n)).max_ratio;
    }
    const EtaReport eta = check_eta_sparse(family);
    double max_cn = 0.0;
    for (const DominationNode& node : trace.nodes) {
      max_cn = std::max(max_cn, node.c_n);
    }
    rows[static_cast<std::size_t>(idx)] = {
        r,        n,
        pair,     trial_seed,
        ratio,    eta.worst_ratio,
        eta.pass, trace.max_depth_used,
        static_cast<std::int64_t>(trace.nodes.size()),
        max_cn};
  });

  CsvTable table({"seed", "grid_log2", "r", "n_freq", "pair", "max_ratio",
                  "eta_worst", "nodes", "depth", "max_c_n"});
  bool eta_all = true;
  double eta_worst = 1.0;
  int depth_worst = 0;
  std::map<std::pair<double, std::int64_t>, double> constants;
  for (const DominationRow& row : rows) {
    table.add_row({CsvTable::num(static_cast<std::int64_t>(row.seed)),
                   CsvTable::num(static_cast<std::int64_t>(cfg.grid_log2)),
                   CsvTable::num(row.r), CsvTable::num(row.n),
                   CsvTable::num(static_cast<std::int64_t>(row.pair)),
                   CsvTable::num(row.ratio), CsvTable::num(row.worst_eta),
                   CsvTable::num(row.nodes),
                   CsvTable::num(static_cast<std::int64_t>(row.depth)),
                   CsvTable::num(row.max_cn)});
    eta_all = eta_all && row.eta_pass && row.depth <= g.log2_size();
    eta_worst = std::min(eta_worst, row.worst_eta);
    depth_worst = std::max(depth_worst, row.depth);
    auto& slot = constants[{row.r, row.n}];
    slot = std::max(slot, row.ratio);
  }
  out.tables["domination.csv"] = table.to_string();

  out.criteria.push_back({"3 sparse-construction", eta_all, eta_worst,
                          1.0 / 6.0,
                          "exact 1/6-sparse with witnesses; max depth " +
                              std::to_string(depth_worst) + "/" +
                              std::to_string(g.log2_size())});

  const double suite_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - suite_start)
          .count();
  const Tolerances& tol = cfg.tol;
  bool slopes_ok = suite_seconds <= 600.0;
  std::string detail;
  double worst_slope = 0.0;
  for (const double r : rs) {
    std::vector<double> xs, ys;
    for (const std::int64_t n : ns) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(constants[{r, n}]);
    }
    const FitResult fit = fit_exponent(xs, ys);
    if (std::abs(fit.slope) > std::abs(worst_slope)) worst_slope = fit.slope;
    slopes_ok = slopes_ok && fit.slope >= tol.domination_slope_lo &&
                fit.slope <= tol.domination_slope_hi;
    detail += "r=" + CsvTable::num(r) + ": slope=" + CsvTable::num(fit.slope) + "; ";
  }
  detail += std::to_string(suite_seconds) + " s (cap 600)";
  out.criteria.push_back({"4 pointwise-domination-scaling", slopes_ok, worst_slope,
                          tol.domination_slope_hi, detail});
}

void mt_suite(const VerifyConfig& cfg, const Grid& g, VerificationReport& out) {
  const std::vector<std::int64_t> ns{1, 4, 16, 64};
  const int pairs = cfg.mt_pairs;
  const std::int64_t total = static_cast<std::int64_t>(ns.size()) * pairs;
  std::vector<double> ratios(static_cast<std::size_t>(total), 0.0);
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(total), 0);

  parallel_for(total, [&](std::int64_t idx) {
    const std::int64_t n = ns[static_cast<std::size_t>(idx) / pairs];
    const int pair = static_cast<int>(idx % pairs);
    const std::uint64_t trial_seed =
        mix_seed(cfg.seed, 4000 + static_cast<std::uint64_t>(idx));
    Rng rng(trial_seed);
    const MultiFrequencyOperator t = random_operator(
        g, static_cast<int>(n), 3,
        (pair % 2 == 0) ? ProfileShape::CosineSquared : ProfileShape::GaussianTruncated,
        rng);
    const SampledFunction f = (pair % 2 == 0) ? random_spiky_function(g, 8, rng)
                                              : random_test_function(g, rng);
    DominationParams params = make_domination_params(t, 2.0, 0.5);
    ratios[static_cast<std::size_t>(idx)] =
        check_mt_pointwise_bound(t, f, params).max_ratio;
    seeds[static_cast<std::size_t>(idx)] = trial_seed;
  });

  CsvTable table({"seed", "grid_log2", "n_freq", "pair", "r", "s", "max_ratio"});
  double worst = 0.0;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const std::int64_t n = ns[static_cast<std::size_t>(idx) / pairs];
    table.add_row({CsvTable::num(static_cast<std::int64_t>(seeds[static_cast<std::size_t>(idx)])),
                   CsvTable::num(static_cast<std::int64_t>(cfg.grid_log2)),
                   CsvTable::num(n),
                   CsvTable::num(static_cast<std::int64_t>(idx % pairs)),
                   CsvTable::num(2.0), CsvTable::num(0.5),
                   CsvTable::num(ratios[static_cast<std::size_t>(idx)])});
    worst = std::max(worst, ratios[static_cast<std::size_t>(idx)]);
  }
  out.tables["mt_bound.csv"] = table.to_string();
  out.criteria.push_back({"5 grand-maximal-pointwise-bound",
                          worst <= cfg.tol.mt_bound_ceiling, worst,
                          cfg.tol.mt_bound_ceiling, "s=1/2, r=2 corpus"});
}

CsvTable scaling_table(const ScalingResult& result) {
  CsvTable table({"N", "statistic", "trials", "seed"});
  for (const ScalingPoint& p : result.points) {
    table.add_row({CsvTable::num(p.n), CsvTable::num(p.statistic),
                   CsvTable::num(static_cast<std::int64_t>(p.trials)),
                   CsvTable::num(static_cast<std::int64_t>(p.seed))});
  }
  return table;
}

// Largest operator corpora need N disjoint halfwidth-2 cubes in the band.
std::vector<std::int64_t> feasible_sweep(const Grid& g,
                                         std::vector<std::int64_t> ns,
                                         std::int64_t halfwidth) {
  const std::int64_t stride = 2 * halfwidth + 2;
  const std::int64_t slots = (g.size() - 2 - 2 * halfwidth) / stride + 1;
  std::erase_if(ns, [&](std::int64_t n) { return n > slots; });
  return ns;
}

void scaling_suites(const VerifyConfig& cfg, const Grid& g,
                    VerificationReport& out) {
  const std::vector<std::int64_t> weak_ns =
      feasible_sweep(g, {4, 8, 16, 32, 64, 128, 256}, 2);
  const ScalingResult weak =
      run_weak11_experiment(g, weak_ns, cfg.weak11_trials, cfg.seed);
  out.tables["scaling_weak11.csv"] = scaling_table(weak).to_string();
  out.criteria.push_back({"6 weak11-scaling",
                          weak.fit.slope <= cfg.tol.weak11_slope_max,
                          weak.fit.slope, cfg.tol.weak11_slope_max,
                          "residual=" + CsvTable::num(weak.fit.residual)});

  const std::vector<std::int64_t> lower_ns{8, 16, 32, 64, 128, 256};
  const ScalingResult lower =
      run_lower_bound_experiment(g, 4.0 / 3.0, lower_ns, cfg.lower_trials, cfg.seed);
  out.tables["scaling_lower.csv"] = scaling_table(lower).to_string();
  out.criteria.push_back({"7 lower-bound-sharpness",
                          lower.fit.slope >= cfg.tol.lower_bound_slope_min,
                          lower.fit.slope, cfg.tol.lower_bound_slope_min,
                          "target 1/p - 1/2 = 0.25 at p = 4/3"});
}

// Brute-force A_p scan over the same interval family, written independently
// of the weights module internals.
double ap_bruteforce(const Weight& w, double p) {
  const Grid& g = w.grid();
  const std::int64_t m = g.size();
  const double p_conj = p / (p - 1.0);
  double best = 1.0;
  for (const std::int64_t shift : detail::lattice_shifts(g)) {
    for (int level = 0; level <= g.log2_size(); ++level) {
      const std::int64_t width = m >> level;
      for (std::int64_t k = 0; k < m / width; ++k) {
        const std::int64_t start = (k * width + shift) % m;
        double sum_w = 0.0, sum_dual = 0.0;
        for (std::int64_t j = 0; j < width; ++j) {
          const double v = w.samples()[static_cast<std::size_t>((start + j) % m)];
          sum_w += v;
          sum_dual += std::pow(v, 1.0 - p_conj);
        }
        const double avg_w = sum_w / static_cast<double>(width);
        const double avg_dual = sum_dual / static_cast<double>(width);
        double value;
        if (avg_w == 0.0 || !std::isfinite(avg_dual)) {
          value = std::numeric_limits<double>::infinity();
        } else {
          value = avg_w * std::pow(avg_dual, p - 1.0);
        }
        best = std::max(best, value);
      }
    }
  }
  return best;
}

void weights_suite(const VerifyConfig& cfg, const Grid& g,
                   VerificationReport& out) {
  const Tolerances& tol = cfg.tol;
  CsvTable table({"check", "p", "parameter", "value"});
  bool pass = true;
  std::string detail;

  // [1]_{A_p} == 1 exactly
  const Weight unit = random_ap_weight(g, 0.0, cfg.seed);
  for (const double p : {1.5, 2.0, 3.0}) {
    const double c = ap_characteristic(unit, p);
    table.add_row({"unit", CsvTable::num(p), CsvTable::num(0.0), CsvTable::num(c)});
    if (c != 1.0) {
      pass = false;
      detail += "[1]_Ap != 1 at p=" + CsvTable::num(p) + "; ";
    }
  }

  // scale invariance of the characteristic
  double worst_scale_err = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Weight w =
        random_ap_weight(g, 0.5, mix_seed(cfg.seed, 5000 + static_cast<std::uint64_t>(k)));
    const double base = ap_characteristic(w, 2.0);
    for (const double c : {0.37, 64.0}) {
      std::vector<double> scaled = w.samples();
      for (double& v : scaled) v *= c;
      const double rescaled = ap_characteristic(Weight(g, scaled), 2.0);
      worst_scale_err = std::max(worst_scale_err, std::abs(rescaled - base) / base);
    }
    table.add_row({"scale", CsvTable::num(2.0),
                   CsvTable::num(static_cast<std::int64_t>(k)), CsvTable::num(base)});
  }
  if (worst_scale_err > tol.weights_scale_invariance) {
    pass = false;
    detail += "scale err " + CsvTable::num(worst_scale_err) + "; ";
  }

  // oracle equivalence on a tiny grid, exact
  const Grid small(5);
  double worst_oracle_gap = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Weight w = random_ap_weight(
        small, 0.6, mix_seed(cfg.seed, 5100 + static_cast<std::uint64_t>(k)));
    for (const double p : {1.5, 2.0}) {
      const double fast = ap_characteristic(w, p);
      const double brute = ap_bruteforce(w, p);
      worst_oracle_gap = std::max(worst_oracle_gap, std::abs(fast - brute));
    }
  }
  if (worst_oracle_gap != 0.0) {
    pass = false;
    detail += "oracle gap " + CsvTable::num(worst_oracle_gap) + "; ";
  }
  table.add_row({"oracle_gap", CsvTable::num(2.0), CsvTable::num(0.0),
                 CsvTable::num(worst_oracle_gap)});

  // power-weight characteristic strictly increasing in alpha
  double prev = 0.0;
  bool monotone = true;
  for (const double alpha : {0.3, 0.6, 0.9}) {
    const double c = ap_characteristic(power_weight(g, alpha), 2.0);
    table.add_row({"power", CsvTable::num(2.0), CsvTable::num(alpha), CsvTable::num(c)});
    monotone = monotone && c > prev;
    prev = c;
  }
  if (!monotone) {
    pass = false;
    detail += "power weight not monotone; ";
  }

  out.tables["weights_char.csv"] = table.to_string();

  // weight corpus serialization example (columns per the CSV schema)
  CsvTable corpus({"index", "x", "w"});
  const Weight sample_w = power_weight(g, 0.5);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    corpus.add_row({CsvTable::num(i), CsvTable::num(g.point(i)),
                    CsvTable::num(sample_w.samples()[static_cast<std::size_t>(i)])});
  }
  out.tables["weights_corpus.csv"] = corpus.to_string();

  out.criteria.push_back({"8 weight-characteristics", pass, worst_oracle_gap, 0.0,
                          detail.empty() ? "unit, scale, oracle, monotone all ok"
                                         : detail});
}

void weighted_suites(const VerifyConfig& cfg, const Grid& g,
                     VerificationReport& out) {
  const Tolerances& tol = cfg.tol;

  // criterion 9: Thm 2.4 normalized ratios over the power-weight sweep
  CsvTable table({"p", "r", "alpha", "ap_char", "ratio", "seed"});
  bool ceiling_ok = true;
  bool trend_ok = true;
  double worst_ratio = 0.0;
  const std::vector<std::pair<double, double>> prs{{2.0, 1.0}, {3.0, 1.5}};
  const std::vector<double> alphas{-0.5, 0.0, 0.5, 0.9};
  for (const auto& [p, r] : prs) {
    std::vector<double> chars, ratios;
    for (const double alpha : alphas) {
      const Weight w = power_weight(g, alpha);
      double best = 0.0;
      double ap = 0.0;
      for (int k = 0; k < 3; ++k) {
        const std::uint64_t trial_seed = mix_seed(
            cfg.seed, 6000 + static_cast<std::uint64_t>(k) +
                          static_cast<std::uint64_t>(100.0 * (p + alpha + 10.0)));
        Rng rng(trial_seed);
        const MultiFrequencyOperator t =
            random_operator(g, 16, 3, ProfileShape::CosineSquared, rng);
        const SampledFunction f = random_test_function(g, rng);
        const SparseFamily s = sparse_dominate(t, f, make_domination_params(t, r));
        const WeightedCheckReport rep = check_sparse_weighted(s, f, w, p, r);
        best = std::max(best, rep.ratio);
        ap = rep.ap_char;
      }
      table.add_row({CsvTable::num(p), CsvTable::num(r), CsvTable::num(alpha),
                     CsvTable::num(ap), CsvTable::num(best),
                     CsvTable::num(static_cast<std::int64_t>(cfg.seed))});
      chars.push_back(ap);
      ratios.push_back(best);
      worst_ratio = std::max(worst_ratio, best);
      ceiling_ok = ceiling_ok && best <= tol.sparse_weighted_ceiling;
    }
    const FitResult fit = fit_exponent(chars, ratios);
    trend_ok = trend_ok && fit.slope <= tol.sparse_weighted_trend_max;
  }
  out.tables["sparse_weighted.csv"] = table.to_string();
  out.criteria.push_back({"9 sparse-weighted-bound", ceiling_ok && trend_ok,
                          worst_ratio, tol.sparse_weighted_ceiling,
                          "power-weight sweep, (p,r) in {(2,1),(3,3/2)}"});

  // criterion 10: composite main theorem, N-sweep and [w]-sweep at (2,1)
  CsvTable main_table({"sweep", "n_freq", "alpha", "ap_char", "ratio", "seed"});
  std::vector<double> n_xs, n_ys;
  const Weight w_fixed = power_weight(g, 0.5);
  for (const std::int64_t n : {1, 4, 16, 64}) {
    double best = 0.0;
    for (int k = 0; k < 3; ++k) {
      const std::uint64_t trial_seed =
          mix_seed(cfg.seed, 7000 + static_cast<std::uint64_t>(n) * 8 +
                                 static_cast<std::uint64_t>(k));
      Rng rng(trial_seed);
      const MultiFrequencyOperator t = random_operator(
          g, static_cast<int>(n), 3, ProfileShape::CosineSquared, rng);
      const SampledFunction f = random_test_function(g, rng);
      const WeightedCheckReport rep = check_main_theorem(t, f, w_fixed, 2.0, 1.0);
      best = std::max(best, rep.ratio);
    }
    main_table.add_row({"N", CsvTable::num(n), CsvTable::num(0.5),
                        CsvTable::num(ap_characteristic(w_fixed, 2.0)),
                        CsvTable::num(best),
                        CsvTable::num(static_cast<std::int64_t>(cfg.seed))});
    n_xs.push_back(static_cast<double>(n));
    n_ys.push_back(best);
  }
  const FitResult n_fit = fit_exponent(n_xs, n_ys);

  std::vector<double> w_xs, w_ys;
  for (const double alpha : {0.3, 0.6, 0.9, 0.95}) {
    const Weight w = power_weight(g, alpha);
    double best = 0.0;
    for (int k = 0; k < 3; ++k) {
      const std::uint64_t trial_seed = mix_seed(
          cfg.seed, 7500 + static_cast<std::uint64_t>(k) +
                        static_cast<std::uint64_t>(1000.0 * alpha));
      Rng rng(trial_seed);
      const MultiFrequencyOperator t =
          random_operator(g, 16, 3, ProfileShape::CosineSquared, rng);
      const SampledFunction f = random_test_function(g, rng);
      const WeightedCheckReport rep = check_main_theorem(t, f, w, 2.0, 1.0);
      best = std::max(best, rep.ratio);
    }
    main_table.add_row({"w", CsvTable::num(static_cast<std::int64_t>(16)),
                        CsvTable::num(alpha),
                        CsvTable::num(ap_characteristic(w, 2.0)),
                        CsvTable::num(best),
                        CsvTable::num(static_cast<std::int64_t>(cfg.seed))});
    w_xs.push_back(ap_characteristic(w, 2.0));
    w_ys.push_back(best);
  }
  const FitResult w_fit = fit_exponent(w_xs, w_ys);
  out.tables["main_theorem.csv"] = main_table.to_string();

  const bool c10 = n_fit.slope <= tol.main_theorem_n_slope_max &&
                   w_fit.slope <= tol.main_theorem_w_slope_max;
  out.criteria.push_back({"10 main-theorem-composite", c10, n_fit.slope,
                          tol.main_theorem_n_slope_max,
                          "w-sweep slope=" + CsvTable::num(w_fit.slope) +
                              " (max " + CsvTable::num(tol.main_theorem_w_slope_max) +
                              ")"});
}

void determinism_suite(const VerifyConfig& cfg, const Grid& g,
                       VerificationReport& out) {
  const std::vector<std::int64_t> ns{4, 16, 64};
  const ScalingResult a = run_weak11_experiment(g, ns, 3, cfg.seed);
  const ScalingResult b = run_weak11_experiment(g, ns, 3, cfg.seed);
  const std::string sa = scaling_table(a).to_string();
  const std::string sb = scaling_table(b).to_string();
  const bool same = sa == sb;
  out.criteria.push_back({"11 determinism", same, same ? 0.0 : 1.0, 0.0,
                          "same-seed reruns serialize byte-identically"});
}

}  // namespace

bool VerificationReport::all_pass() const {
  for (const CriterionResult& c : criteria) {
    if (!c.pass) return false;
  }
  return true;
}

VerificationReport run_suites(const VerifyConfig& cfg,
                              const std::vector<Suite>& suites) {
  const auto start = std::chrono::steady_clock::now();
  const Grid g(cfg.grid_log2);
  VerificationReport report;

  for (const Suite s : suites) {
    switch (s) {
      case Suite::Czd: czd_suite(cfg, g, report); break;
      case Suite::Domination: domination_suite(cfg, g, report); break;
      case Suite::MtBound: mt_suite(cfg, g, report); break;
      case Suite::Scaling: scaling_suites(cfg, g, report); break;
      case Suite::Weights: weights_suite(cfg, g, report); break;
      case Suite::Weighted: weighted_suites(cfg, g, report); break;
      case Suite::Determinism: determinism_suite(cfg, g, report); break;
    }
  }

  CsvTable summary({"criterion", "pass", "value", "bound", "detail"});
  for (const CriterionResult& c : report.criteria) {
    std::string detail = c.detail;
    for (char& ch : detail) {
      if (ch == ',') ch = ';';
    }
    summary.add_row({c.name, c.pass ? "1" : "0", CsvTable::num(c.value),
                     CsvTable::num(c.bound), detail});
  }
  report.tables["verify_summary.csv"] = summary.to_string();

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    for (const auto& [name, body] : report.tables) {
      std::ofstream file(std::filesystem::path(cfg.out_dir) / name,
                         std::ios::binary | std::ios::trunc);
      if (!file) throw std::runtime_error("verify: cannot write " + name);
      file.write(body.data(), static_cast<std::streamsize>(body.size()));
    }
  }
  return report;
}

VerificationReport run_full_verification(const VerifyConfig& cfg) {
  return run_suites(cfg, {Suite::Czd, Suite::Domination, Suite::MtBound,
                          Suite::Scaling, Suite::Weights, Suite::Weighted,
                          Suite::Determinism});
}

}  // namespace mfcz
