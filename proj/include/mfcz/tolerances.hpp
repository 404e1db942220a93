#pragma once

#include <string>

namespace mfcz {

/// Every PASS/FAIL ceiling of the verification suites. Defaults are the
/// frozen values calibrated once on the reference grid 2^12 (seed 7) and
/// mirrored in config/tolerances.cfg; a tolerances file can override them
/// for recalibration experiments.
struct Tolerances {
  // decomposition: exact and near-exact bounds
  double czd_cancellation_rel = 1e-8;
  double czd_identity_rel = 1e-10;
  // decomposition: monitored constants, frozen corpus ceilings
  double czd_good_l2_ceiling = 2.0;
  double czd_local_l2_ceiling = 3.0;
  int czd_overlap_ceiling = 6;

  // pointwise domination
  double domination_slope_lo = -0.1;
  double domination_slope_hi = 0.05;

  // grand maximal pointwise bound (s = 1/2, r = 2)
  double mt_bound_ceiling = 1.0;

  // scaling experiments
  double weak11_slope_max = 0.6;
  double lower_bound_slope_min = 0.17;
  double strong_slope_margin = 0.1;  // allowed excess over |1/p - 1/2|

  // weight characteristics
  double weights_scale_invariance = 1e-12;

  // weighted sparse bound and the composite main-theorem check
  double sparse_weighted_ceiling = 2.0;
  double sparse_weighted_trend_max = 0.1;
  double main_theorem_n_slope_max = 0.05;
  double main_theorem_w_slope_max = 0.1;
};

/// key = value file, '#' comments; unknown keys are rejected so stale
/// configs fail loudly.
Tolerances load_tolerances(const std::string& path);

}  // namespace mfcz
