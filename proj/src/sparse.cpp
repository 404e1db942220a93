#include "mfcz/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mfcz {

namespace {

// T(f chi_in)(i) for the out cells, by direct segment convolution with the
// operator's discrete weights. Ranges may wrap; base-lattice cube cells
// never do, so out indexing stays contiguous at the call sites.
std::vector<cplx> conv_segment(const MultiFrequencyOperator& t,
                               const SampledFunction& f, const CellRange& in,
                               const CellRange& out) {
  const std::int64_t m = f.grid.size();
  const std::vector<cplx>& w = t.conv_weights();
  std::vector<cplx> result(static_cast<std::size_t>(out.length));
  for (std::int64_t a = 0; a < out.length; ++a) {
    const std::int64_t i = (out.start + a) % m;
    cplx acc = 0.0;
    for (std::int64_t b = 0; b < in.length; ++b) {
      const std::int64_t y = (in.start + b) % m;
      acc += w[static_cast<std::size_t>(((i - y) % m + m) % m)] *
             f.samples[static_cast<std::size_t>(y)];
    }
    result[static_cast<std::size_t>(a)] = acc;
  }
  return result;
}

// val(Q) = max_{xi in Q} |ref(xi) - T(f chi_{3Q})(xi)| for every dyadic
// subcube Q of the base cube; ref is T(f chi_{3Q0}) (local) or Tf (global)
// on the base cube's cells. Cubes whose triple covers the torus truncate
// nothing and get an exact zero.
struct SubtreeVals {
  int base_level = 0;
  std::int64_t base_offset = 0;
  std::vector<std::vector<double>> val;  // val[d][j], depth d below base
};

SubtreeVals subtree_vals(const MultiFrequencyOperator& t,
                         const SampledFunction& f, const DyadicInterval& base,
                         const std::vector<cplx>& ref) {
  const Grid& g = f.grid;
  const std::int64_t base_start = cells_of(base, g).start;
  SubtreeVals tree{base.level, base.offset, {}};
  const int depth_count = g.log2_size() - base.level + 1;
  tree.val.resize(static_cast<std::size_t>(depth_count));
  for (int d = 0; d < depth_count; ++d) {
    const std::int64_t count = std::int64_t{1} << d;
    auto& level_vals = tree.val[static_cast<std::size_t>(d)];
    level_vals.assign(static_cast<std::size_t>(count), 0.0);
    if (d == 0) continue;  // the base cube truncates itself away exactly
    for (std::int64_t j = 0; j < count; ++j) {
      const DyadicInterval q{base.level + d, base.offset * count + j};
      const CellRange own = cells_of(q, g);
      const CellRange triple = triple_cells_of(q, g);
      if (triple.length == g.size()) continue;  // nothing truncated
      const std::vector<cplx> u = conv_segment(t, f, triple, own);
      double best = 0.0;
      for (std::int64_t a = 0; a < own.length; ++a) {
        const std::size_t ref_index =
            static_cast<std::size_t>(own.start + a - base_start);
        best = std::max(best,
                        std::abs(ref[ref_index] - u[static_cast<std::size_t>(a)]));
      }
      level_vals[static_cast<std::size_t>(j)] = best;
    }
  }
  return tree;
}

// Chain maximum: out[cell] = max over Q containing the cell of val(Q).
std::vector<double> chain_max(const SubtreeVals& tree, const Grid& g) {
  const int depth_count = static_cast<int>(tree.val.size());
  std::vector<double> running = tree.val[0];
  for (int d = 1; d < depth_count; ++d) {
    std::vector<double> next(tree.val[static_cast<std::size_t>(d)].size());
    for (std::size_t j = 0; j < next.size(); ++j) {
      next[j] = std::max(tree.val[static_cast<std::size_t>(d)][j], running[j / 2]);
    }
    running = std::move(next);
  }
  const std::int64_t cells_per_leaf =
      g.size() >> (tree.base_level + depth_count - 1);
  if (cells_per_leaf != 1) {
    throw std::logic_error("chain_max: tree does not reach cell level");
  }
  return running;  // one value per cell of the base cube
}

double ratio_power(double r, int n_freq) {
  return std::pow(static_cast<double>(n_freq), std::abs(1.0 / r - 0.5));
}

}  // namespace

DominationParams make_domination_params(const MultiFrequencyOperator& t,
                                        double r, double s) {
  if (r < 1.0) throw std::invalid_argument("domination params: r must be >= 1");
  if (s <= 0.0 || s >= 1.0) {
    throw std::invalid_argument("domination params: s must be in (0,1)");
  }
  DominationParams p;
  p.r = r;
  p.s = s;
  p.c_t = ratio_power(r, t.frequency_count()) + dini_norm(t.modulus());
  p.max_depth = t.grid().log2_size();
  return p;
}

SampledFunction sparse_apply(const SparseFamily& s, const SampledFunction& f,
                             double r) {
  if (s.grid != f.grid) throw std::invalid_argument("sparse_apply: grid mismatch");
  if (r < 1.0) throw std::invalid_argument("sparse_apply: r must be >= 1");
  const std::int64_t m = f.grid.size();
  std::vector<double> out(static_cast<std::size_t>(m), 0.0);
  for (const SparseCube& q : s.cubes) {
    const double avg = average_cells(f, q.cells, r);
    for (std::int64_t k = 0; k < q.cells.length; ++k) {
      out[static_cast<std::size_t>((q.cells.start + k) % m)] += avg;
    }
  }
  SampledFunction result = SampledFunction::zeros(f.grid);
  for (std::int64_t i = 0; i < m; ++i) {
    result.samples[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)];
  }
  return result;
}

EtaReport check_eta_sparse(const SparseFamily& s) {
  const std::int64_t m = s.grid.size();
  EtaReport rep;
  rep.witnesses_disjoint = true;
  rep.witnesses_inside = true;
  rep.worst_ratio = 1.0;
  bool ratios_ok = true;
  std::vector<std::int64_t> all;
  for (const SparseCube& q : s.cubes) {
    if (q.witness.empty()) {
      throw std::invalid_argument(
          "check_eta_sparse: family has no stored witnesses; verification refused");
    }
    for (const std::int64_t cell : q.witness) {
      if (!q.cells.contains(cell, m)) rep.witnesses_inside = false;
      all.push_back(cell);
    }
    // exact rational comparison |E_Q| * den >= num * |Q|
    const auto e_cells = static_cast<std::int64_t>(q.witness.size());
    if (e_cells * s.eta_den < static_cast<std::int64_t>(s.eta_num) * q.cells.length) {
      ratios_ok = false;
    }
    rep.worst_ratio = std::min(rep.worst_ratio,
                               static_cast<double>(e_cells) /
                                   static_cast<double>(q.cells.length));
  }
  std::sort(all.begin(), all.end());
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i] == all[i - 1]) {
      rep.witnesses_disjoint = false;
      break;
    }
  }
  rep.pass = rep.witnesses_disjoint && rep.witnesses_inside && ratios_ok;
  return rep;
}

SampledFunction grand_maximal(const MultiFrequencyOperator& t,
                              const SampledFunction& f,
                              std::optional<DyadicInterval> q0) {
  if (f.grid != t.grid()) throw std::invalid_argument("grand_maximal: grid mismatch");
  const Grid& g = f.grid;
  const DyadicInterval base = q0.value_or(DyadicInterval{0, 0});
  const CellRange base_cells = cells_of(base, g);

  std::vector<cplx> ref;
  if (!q0.has_value()) {
    // global: reference is Tf, truncation complement of 3Q
    const SampledFunction tf = apply(t, f);
    ref.assign(tf.samples.begin(), tf.samples.end());
  } else {
    const CellRange triple = triple_cells_of(base, g);
    if (triple.length == g.size()) {
      const SampledFunction tf = apply(t, f);
      ref.resize(static_cast<std::size_t>(base_cells.length));
      for (std::int64_t a = 0; a < base_cells.length; ++a) {
        ref[static_cast<std::size_t>(a)] =
            tf.samples[static_cast<std::size_t>(base_cells.start + a)];
      }
    } else {
      ref = conv_segment(t, f, triple, base_cells);
    }
  }

  const SubtreeVals tree = subtree_vals(t, f, base, ref);
  const std::vector<double> mt = chain_max(tree, g);
  SampledFunction out = SampledFunction::zeros(g);
  for (std::int64_t a = 0; a < base_cells.length; ++a) {
    out.samples[static_cast<std::size_t>(base_cells.start + a)] =
        mt[static_cast<std::size_t>(a)];
  }
  return out;
}

MtBoundReport check_mt_pointwise_bound(const MultiFrequencyOperator& t,
                                       const SampledFunction& f,
                                       const DominationParams& params) {
  MtBoundReport rep;
  rep.dini = dini_norm(t.modulus());
  rep.weak_norm_surrogate = ratio_power(params.r, t.frequency_count());

  const SampledFunction lhs = grand_maximal(t, f);
  const SampledFunction m_r = maximal_function(f, params.r);
  const SampledFunction tf = apply(t, f);
  const SampledFunction m_s = maximal_function(tf, params.s);

  const double coeff = rep.dini + rep.weak_norm_surrogate;
  for (std::size_t i = 0; i < lhs.samples.size(); ++i) {
    const double left = lhs.samples[i].real();
    const double right = coeff * m_r.samples[i].real() + m_s.samples[i].real();
    if (right == 0.0) {
      if (left > 0.0) rep.unbounded = true;
      continue;
    }
    rep.max_ratio = std::max(rep.max_ratio, left / right);
  }
  return rep;
}

namespace {

struct RecursionContext {
  const MultiFrequencyOperator& op;
  const SampledFunction& f;
  const DominationParams& params;
  SparseFamily& family;
  DominationTrace* trace;
};

void dominate_node(RecursionContext& ctx, const DyadicInterval& q0, int depth) {
  const Grid& g = ctx.f.grid;
  const int max_depth =
      ctx.params.max_depth > 0 ? ctx.params.max_depth : g.log2_size();
  if (depth > max_depth) {
    throw std::runtime_error(
        "sparse_dominate: recursion exceeded max depth at level " +
        std::to_string(q0.level) + ", offset " + std::to_string(q0.offset));
  }

  const CellRange own = cells_of(q0, g);
  const CellRange triple = triple_cells_of(q0, g);
  const std::int64_t m0 = own.length;
  const double avg_r = average_cells(ctx.f, triple, ctx.params.r);

  SparseCube cube{triple, {}, q0};

  if (avg_r == 0.0) {
    // f vanishes on 3Q0: nothing to dominate below this node
    cube.witness.reserve(static_cast<std::size_t>(m0));
    for (std::int64_t a = 0; a < m0; ++a) cube.witness.push_back(own.start + a);
    ctx.family.cubes.push_back(std::move(cube));
    if (ctx.trace) {
      ctx.trace->nodes.push_back({q0.level, q0.offset, 0.0, 0.0, 0});
      ctx.trace->max_depth_used = std::max(ctx.trace->max_depth_used, depth);
    }
    return;
  }

  // reference g0 = T(f chi_{3Q0}) on Q0
  std::vector<cplx> ref;
  if (triple.length == g.size()) {
    const SampledFunction tf = apply(ctx.op, ctx.f);
    ref.resize(static_cast<std::size_t>(m0));
    for (std::int64_t a = 0; a < m0; ++a) {
      ref[static_cast<std::size_t>(a)] =
          tf.samples[static_cast<std::size_t>(own.start + a)];
    }
  } else {
    ref = conv_segment(ctx.op, ctx.f, triple, own);
  }

  const SubtreeVals tree = subtree_vals(ctx.op, ctx.f, q0, ref);
  const std::vector<double> mt = chain_max(tree, g);

  // E(c) = {|f| > c avg} u {M_{T,Q0} f > c C_T avg} u {|T(f chi_3Q0)| > c C_T avg};
  // a single score per cell turns membership into one comparison.
  const double c_t_avg = ctx.params.c_t * avg_r;
  std::vector<double> score(static_cast<std::size_t>(m0));
  for (std::int64_t a = 0; a < m0; ++a) {
    const auto i = static_cast<std::size_t>(own.start + a);
    const double from_f = std::abs(ctx.f.samples[i]) / avg_r;
    const double from_mt = mt[static_cast<std::size_t>(a)] / c_t_avg;
    const double from_local = std::abs(ref[static_cast<std::size_t>(a)]) / c_t_avg;
    score[static_cast<std::size_t>(a)] =
        std::max(from_f, std::max(from_mt, from_local));
  }
  auto excess_count = [&score, m0](double c) {
    std::int64_t count = 0;
    for (std::int64_t a = 0; a < m0; ++a) {
      if (score[static_cast<std::size_t>(a)] > c) ++count;
    }
    return count;
  };
  auto feasible = [&excess_count, m0](double c) {
    return 8 * excess_count(c) <= m0;
  };

  double c_n = ctx.params.bracket_lo;
  if (!feasible(c_n)) {
    double lo = ctx.params.bracket_lo;
    double hi = ctx.params.bracket_hi;
    if (!feasible(hi)) {
      throw std::runtime_error(
          "sparse_dominate: bisection bracket cannot satisfy |E| <= |Q0|/8");
    }
    for (int it = 0; it < ctx.params.bisect_iters; ++it) {
      const double mid = std::sqrt(lo * hi);
      if (feasible(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    c_n = hi;
  }

  std::vector<char> in_e(static_cast<std::size_t>(m0), 0);
  std::vector<std::int64_t> e_prefix(static_cast<std::size_t>(m0) + 1, 0);
  for (std::int64_t a = 0; a < m0; ++a) {
    in_e[static_cast<std::size_t>(a)] = score[static_cast<std::size_t>(a)] > c_n;
    e_prefix[static_cast<std::size_t>(a + 1)] =
        e_prefix[static_cast<std::size_t>(a)] + in_e[static_cast<std::size_t>(a)];
  }
  const std::int64_t e_total = e_prefix[static_cast<std::size_t>(m0)];

  // stopping cubes of chi_E at height 1/4, relative to Q0's lattice
  std::vector<DyadicInterval> selected;
  std::vector<DyadicInterval> stack{q0};
  while (!stack.empty()) {
    const DyadicInterval q = stack.back();
    stack.pop_back();
    const CellRange qc = cells_of(q, g);
    const std::int64_t lo_idx = qc.start - own.start;
    const std::int64_t count = e_prefix[static_cast<std::size_t>(lo_idx + qc.length)] -
                               e_prefix[static_cast<std::size_t>(lo_idx)];
    if (q.level > q0.level && 4 * count > qc.length) {
      selected.push_back(q);
    } else if (count > 0 && q.level < g.log2_size()) {
      stack.push_back(q.child(1));
      stack.push_back(q.child(0));
    }
  }
  std::sort(selected.begin(), selected.end(),
            [](const DyadicInterval& a, const DyadicInterval& b) {
              return a.left() < b.left();
            });

  // structural invariants of the recursion step
  std::int64_t child_cells = 0;
  std::int64_t child_e = 0;
  for (const DyadicInterval& p : selected) {
    const CellRange pc = cells_of(p, g);
    const std::int64_t lo_idx = pc.start - own.start;
    const std::int64_t count = e_prefix[static_cast<std::size_t>(lo_idx + pc.length)] -
                               e_prefix[static_cast<std::size_t>(lo_idx)];
    if (2 * count > pc.length) {
      throw std::runtime_error("sparse_dominate: |P_j n E| > |P_j|/2");
    }
    if (4 * count <= pc.length) {
      throw std::runtime_error("sparse_dominate: selected cube below height 1/4");
    }
    const double val_p =
        tree.val[static_cast<std::size_t>(p.level - q0.level)]
                [static_cast<std::size_t>(p.offset -
                                          (q0.offset << (p.level - q0.level)))];
    if (val_p > c_n * c_t_avg * (1.0 + 1e-9)) {
      throw std::runtime_error(
          "sparse_dominate: stopping-cube truncation bound violated");
    }
    child_cells += pc.length;
    child_e += count;
  }
  if (2 * child_cells > m0) {
    throw std::runtime_error("sparse_dominate: sum |P_j| > |Q0|/2");
  }
  if (child_e != e_total) {
    throw std::runtime_error("sparse_dominate: E not covered by stopping cubes");
  }

  // witness = Q0 minus the selected cubes; off-children cells satisfy the
  // local claim |T(f chi_3Q0)| <= c_n C_T avg_r by construction of E
  std::vector<char> in_child(static_cast<std::size_t>(m0), 0);
  for (const DyadicInterval& p : selected) {
    const CellRange pc = cells_of(p, g);
    for (std::int64_t a = 0; a < pc.length; ++a) {
      in_child[static_cast<std::size_t>(pc.start - own.start + a)] = 1;
    }
  }
  cube.witness.reserve(static_cast<std::size_t>(m0 - child_cells));
  for (std::int64_t a = 0; a < m0; ++a) {
    if (!in_child[static_cast<std::size_t>(a)]) {
      cube.witness.push_back(own.start + a);
      if (in_e[static_cast<std::size_t>(a)]) {
        throw std::runtime_error("sparse_dominate: E leaked outside stopping cubes");
      }
    }
  }
  ctx.family.cubes.push_back(std::move(cube));
  if (ctx.trace) {
    ctx.trace->nodes.push_back(
        {q0.level, q0.offset, c_n, avg_r, static_cast<int>(selected.size())});
    ctx.trace->max_depth_used = std::max(ctx.trace->max_depth_used, depth);
  }

  for (const DyadicInterval& p : selected) {
    dominate_node(ctx, p, depth + 1);
  }
}

}  // namespace

SparseFamily sparse_dominate(const MultiFrequencyOperator& t,
                             const SampledFunction& f,
                             const DominationParams& params,
                             DominationTrace* trace) {
  if (f.grid != t.grid()) {
    throw std::invalid_argument("sparse_dominate: grid mismatch");
  }
  if (params.r < 1.0) {
    throw std::invalid_argument("sparse_dominate: r must be >= 1");
  }
  SparseFamily family{f.grid, {}, 1, 6};
  RecursionContext ctx{t, f, params, family, trace};
  // On the torus the root's triple covers everything, so the global
  // partition degenerates to the single root cube.
  dominate_node(ctx, DyadicInterval{0, 0}, 0);
  return family;
}

DominationCheck check_domination(const MultiFrequencyOperator& t,
                                 const SampledFunction& f,
                                 const SparseFamily& s, double r, int n_freq) {
  const SampledFunction tf = apply(t, f);
  const SampledFunction a = sparse_apply(s, f, r);
  const double scale = ratio_power(r, n_freq);
  const double f_sup = sup_norm(f);
  DominationCheck check;
  for (std::size_t i = 0; i < tf.samples.size(); ++i) {
    const double num = std::abs(tf.samples[i]);
    const double den = a.samples[i].real();
    if (den > 0.0) {
      check.max_ratio = std::max(check.max_ratio, num / (scale * den));
    } else {
      check.zero_set_sup = std::max(check.zero_set_sup, num);
    }
  }
  check.zero_set_ok = check.zero_set_sup <= 1e-8 * f_sup;
  return check;
}

}  // namespace mfcz
