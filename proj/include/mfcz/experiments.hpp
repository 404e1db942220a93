#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mfcz/csv.hpp"
#include "mfcz/czd.hpp"
#include "mfcz/operators.hpp"
#include "mfcz/rng.hpp"
#include "mfcz/sparse.hpp"
#include "mfcz/tolerances.hpp"
#include "mfcz/weights.hpp"

namespace mfcz {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms residual in log-log coordinates
};

/// Ordinary least squares on (log x, log y). Needs >= 3 positive points.
FitResult fit_exponent(const std::vector<double>& xs, const std::vector<double>& ys);

// --- test corpus generators (seed-deterministic) ---

/// n_freq disjoint equal-halfwidth cubes at randomly chosen stride slots in
/// the representable band.
MultiFrequencyOperator random_operator(const Grid& g, int n_freq,
                                       std::int64_t halfwidth,
                                       ProfileShape shape, Rng& rng);

/// Heavy-tailed spike train, normalized to ||f||_1 = 1.
SampledFunction random_spiky_function(const Grid& g, int spikes, Rng& rng);

/// Spikes over a smooth random background, normalized to ||f||_1 = 1.
SampledFunction random_test_function(const Grid& g, Rng& rng);

// --- scaling experiments ---

struct ScalingPoint {
  std::int64_t n = 0;
  double statistic = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

struct ScalingResult {
  std::vector<ScalingPoint> points;
  FitResult fit;
};

/// Per N: max over trials of weak_l1(Tf)/||f||_1 for random operators and
/// spiky L1-normalized inputs; log-log slope fitted over the N sweep.
ScalingResult run_weak11_experiment(const Grid& g,
                                    const std::vector<std::int64_t>& ns,
                                    int trials, std::uint64_t seed);

/// Per N: best over sign draws of ||T_eps f_N||_p / ||f_N||_p, 1 < p < 2.
ScalingResult run_lower_bound_experiment(const Grid& g, double p,
                                         const std::vector<std::int64_t>& ns,
                                         int sign_trials, std::uint64_t seed);

/// Per N: max over trials of ||Tf||_p / ||f||_p (lower estimates of the
/// strong (p,p) norm), over both corpus kinds.
ScalingResult run_strong_experiment(const Grid& g, double p,
                                    const std::vector<std::int64_t>& ns,
                                    int trials, std::uint64_t seed);

// --- weighted checks ---

struct WeightedCheckReport {
  double p = 0.0;
  double r = 0.0;
  double ap_char = 0.0;   // [w]_{A_{p/r}}
  double exponent = 0.0;  // max(1, 1/(p-r))
  double ratio = 0.0;     // normalized by ap_char^exponent * ||f||_{L^p(w)}
};

WeightedCheckReport check_sparse_weighted(const SparseFamily& s,
                                          const SampledFunction& f,
                                          const Weight& w, double p, double r);

/// sparse_dominate + check_sparse_weighted composed on ||Tf||_{L^p(w)}.
WeightedCheckReport check_main_theorem(const MultiFrequencyOperator& t,
                                       const SampledFunction& f, const Weight& w,
                                       double p, double r);

// --- full verification ---

struct VerifyConfig {
  int grid_log2 = 12;
  std::uint64_t seed = 7;
  std::string out_dir;  // empty: no CSV bundle
  Tolerances tol;
  int czd_functions = 8;      // per N value; 8 x 7 = 56 triples
  int domination_pairs = 20;  // per (N, r) cell
  int mt_pairs = 5;           // per N value
  int weak11_trials = 10;
  int lower_trials = 20;
};

struct CriterionResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<CriterionResult> criteria;
  std::map<std::string, std::string> tables;  // csv name -> serialized body
  double elapsed_seconds = 0.0;

  bool all_pass() const;
};

enum class Suite {
  Czd,
  Domination,
  MtBound,
  Scaling,
  Weights,
  Weighted,
  Determinism,
};

/// Runs the selected suites, aggregates one result per covered criterion,
/// and (when out_dir is set) writes the CSV bundle. Deterministic in the
/// seed.
VerificationReport run_suites(const VerifyConfig& cfg,
                              const std::vector<Suite>& suites);

/// All suites; the acceptance gate.
VerificationReport run_full_verification(const VerifyConfig& cfg);

}  // namespace mfcz
