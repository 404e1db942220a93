#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mfcz/dyadic.hpp"
#include "mfcz/grid.hpp"
#include "mfcz/operators.hpp"

namespace mfcz {

/// One cube of a sparse family: a grid-aligned interval (here always the
/// triple 3Q of a dyadic Q) plus its disjoint witness set E_Q.
struct SparseCube {
  CellRange cells;
  std::vector<std::int64_t> witness;  // sorted cell indices, subset of cells
  DyadicInterval source;              // the dyadic Q with cells == 3Q
};

struct SparseFamily {
  Grid grid;
  std::vector<SparseCube> cubes;
  // sparsity parameter as an exact rational, eta = eta_num / eta_den
  int eta_num = 1;
  int eta_den = 6;

  double eta() const {
    return static_cast<double>(eta_num) / static_cast<double>(eta_den);
  }
};

struct DominationParams {
  double r = 1.0;        // averaging exponent, >= 1
  double s = 0.5;        // in (0,1), the |Tf|^s trick exponent
  double c_t = 1.0;      // N^{|1/r-1/2|} + ||omega||_Dini
  int max_depth = 0;     // 0 means grid level count
  double bracket_lo = 1.0;
  double bracket_hi = 1048576.0;  // 2^20
  int bisect_iters = 16;
};

/// Params for an operator: C_T = N^{|1/r - 1/2|} + ||omega||_Dini.
DominationParams make_domination_params(const MultiFrequencyOperator& t,
                                        double r, double s = 0.5);

/// A_{r,S} f(x) = sum_{Q in S, Q ni x} (|Q|^-1 int_Q |f|^r)^{1/r}.
SampledFunction sparse_apply(const SparseFamily& s, const SampledFunction& f,
                             double r);

struct EtaReport {
  bool pass = false;
  double worst_ratio = 0.0;      // min over cubes of |E_Q| / |Q|
  bool witnesses_disjoint = false;
  bool witnesses_inside = false;
};

/// Exact verification of the sparsity invariants. Families without stored
/// witnesses are refused (invalid_argument).
EtaReport check_eta_sparse(const SparseFamily& s);

/// Grand maximal truncated operator. Global form (no q0):
///   M_T f(x) = max over base-lattice dyadic Q ni x of
///              max_{xi in Q} |T(f chi_{complement of 3Q})(xi)|.
/// Local form (q0 given): Q ranges over dyadic subcubes of q0 and the
/// truncation is f chi_{3Q0 minus 3Q}; output vanishes outside q0.
SampledFunction grand_maximal(const MultiFrequencyOperator& t,
                              const SampledFunction& f,
                              std::optional<DyadicInterval> q0 = {});

struct MtBoundReport {
  double max_ratio = 0.0;     // max_x  M_T f / rhs, 0/0 counted as 0
  double weak_norm_surrogate = 0.0;  // N^{|1/r - 1/2|}
  double dini = 0.0;
  bool unbounded = false;     // rhs vanished where the left side did not
};

/// Pointwise bound of the grand maximal operator:
/// rhs(x) = (||omega||_Dini + N^{|1/r-1/2|}) M_r f(x) + (M |Tf|^s)(x)^{1/s}.
MtBoundReport check_mt_pointwise_bound(const MultiFrequencyOperator& t,
                                       const SampledFunction& f,
                                       const DominationParams& params);

struct DominationNode {
  int level = 0;
  std::int64_t offset = 0;
  double c_n = 0.0;
  double avg_r = 0.0;
  int children = 0;
};

struct DominationTrace {
  std::vector<DominationNode> nodes;
  int max_depth_used = 0;
};

/// Sparse domination by the local recursion on the root cube of the torus
/// (whose triple covers the entire torus). Every output family is exactly
/// 1/6-sparse with stored witnesses. Throws runtime_error when the recursion
/// exceeds max_depth or the bisection bracket cannot achieve |E| <= |Q0|/8.
SparseFamily sparse_dominate(const MultiFrequencyOperator& t,
                             const SampledFunction& f,
                             const DominationParams& params,
                             DominationTrace* trace = nullptr);

struct DominationCheck {
  double max_ratio = 0.0;   // max_{A>0} |Tf| / (N^{|1/r-1/2|} A_{r,S}|f|)
  double zero_set_sup = 0.0;  // sup |Tf| over {A == 0}
  bool zero_set_ok = true;    // zero_set_sup <= 1e-8 * sup|f|
};

DominationCheck check_domination(const MultiFrequencyOperator& t,
                                 const SampledFunction& f,
                                 const SparseFamily& s, double r, int n_freq);

}  // namespace mfcz
