#pragma once

#include <vector>

#include "mfcz/dyadic.hpp"
#include "mfcz/grid.hpp"
#include "mfcz/operators.hpp"

namespace mfcz {

/// Measured constants of the decomposition, one per theorem bullet.
struct PropertyReport {
  int overlap_multiplicity = 0;       // max pointwise count of {3Q}
  double packing_constant = 0.0;      // sum|Q| * lambda N^{-1/2} / ||f||_1
  double good_l2_constant = 0.0;      // ||g||_2^2 / (||f||_1 lambda N^{1/2})
  double per_cube_mass_constant = 0.0;  // max_Q ||f||_{L1(Q)} / (|Q| lambda N^{-1/2})
  double local_l2_constant = 0.0;     // max_Q ||f - b_Q||_{L2(Q)} / (lambda |Q|^{1/2})
  double cancellation_residual = 0.0;  // max_{Q,j} |hat(b_Q)(xi_j)| / ||f||_1
};

/// Bad part b_Q, stored on its support 3Q only (cells in wrapped order).
struct BadPart {
  DyadicInterval cube;
  CellRange support;
  std::vector<cplx> values;
};

struct CZDecomposition {
  SampledFunction f;
  double lambda;
  FrequencySet theta;
  CubeSet cubes;
  std::vector<BadPart> bad_parts;
  SampledFunction good;
  PropertyReport report;
};

/// Multi-frequency Calderon-Zygmund decomposition at height lambda:
/// stopping cubes of |f| at threshold lambda N^{-1/2}; on each cube the bad
/// part is f chi_Q minus the minimum-L2-norm span element
/// p_Q = sum_k c_k e^{2 pi i xi_k x} chi_{3Q} matching the N moments
/// hat(f chi_Q)(xi_j), solved through the Hermitian Gram system with
/// relative eigenvalue cutoff 1e-10.
CZDecomposition mf_czd(const SampledFunction& f, double lambda,
                       const FrequencySet& theta);

/// Recomputes every report field from the stored parts, on a code path
/// independent of the constructor (direct quadrature sums throughout).
PropertyReport verify_czd(const CZDecomposition& d);

}  // namespace mfcz
