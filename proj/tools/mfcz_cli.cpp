// Command-line front end: every experiment and verification suite, with
// deterministic CSV emission. Exit codes: 0 all pass, 1 violation found,
// 2 usage or configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfcz/czd.hpp"
#include "mfcz/experiments.hpp"
#include "mfcz/sparse.hpp"

namespace {

struct CommonOpts {
  int grid_log2 = 12;
  std::uint64_t seed = 7;
  std::string out_dir;
  std::string tolerances_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--grid", opts.grid_log2, "log2 of the grid size")
      ->check(CLI::Range(4, 24));
  cmd->add_option("--seed", opts.seed, "base seed for every random draw");
  cmd->add_option("--out", opts.out_dir, "output directory for CSV reports");
  cmd->add_option("--tolerances", opts.tolerances_path,
                  "key = value file overriding the frozen ceilings");
}

mfcz::VerifyConfig make_config(const CommonOpts& opts) {
  mfcz::VerifyConfig cfg;
  cfg.grid_log2 = opts.grid_log2;
  cfg.seed = opts.seed;
  cfg.out_dir = opts.out_dir;
  if (!opts.tolerances_path.empty()) {
    cfg.tol = mfcz::load_tolerances(opts.tolerances_path);
  }
  return cfg;
}

void write_table(const std::string& out_dir, const std::string& name,
                 const mfcz::CsvTable& table) {
  if (out_dir.empty()) return;
  std::filesystem::create_directories(out_dir);
  table.write((std::filesystem::path(out_dir) / name).string());
}

int print_report(const mfcz::VerificationReport& report) {
  for (const mfcz::CriterionResult& c : report.criteria) {
    std::printf("%s  %-34s value=%s bound=%s  %s\n", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), mfcz::CsvTable::num(c.value).c_str(),
                mfcz::CsvTable::num(c.bound).c_str(), c.detail.c_str());
  }
  std::printf("%s (%.1f s)\n", report.all_pass() ? "ALL PASS" : "VIOLATION FOUND",
              report.elapsed_seconds);
  return report.all_pass() ? 0 : 1;
}

int run_czd(const CommonOpts& opts, int n_freq, double lambda) {
  const mfcz::Grid g(opts.grid_log2);
  mfcz::Rng rng(opts.seed);
  const mfcz::SampledFunction f = mfcz::random_test_function(g, rng);
  const mfcz::MultiFrequencyOperator t =
      mfcz::random_operator(g, n_freq, 3, mfcz::ProfileShape::CosineSquared, rng);
  const mfcz::CZDecomposition d = mfcz::mf_czd(f, lambda, t.frequency_set());
  const mfcz::PropertyReport rep = mfcz::verify_czd(d);

  mfcz::CsvTable table({"seed", "grid_log2", "n_freq", "lambda", "n_cubes",
                        "overlap_multiplicity", "packing_constant",
                        "good_l2_constant", "per_cube_mass_constant",
                        "local_l2_constant", "cancellation_residual"});
  table.add_row({mfcz::CsvTable::num(static_cast<std::int64_t>(opts.seed)),
                 mfcz::CsvTable::num(static_cast<std::int64_t>(opts.grid_log2)),
                 mfcz::CsvTable::num(static_cast<std::int64_t>(n_freq)),
                 mfcz::CsvTable::num(lambda),
                 mfcz::CsvTable::num(static_cast<std::int64_t>(d.cubes.cubes.size())),
                 mfcz::CsvTable::num(static_cast<std::int64_t>(rep.overlap_multiplicity)),
                 mfcz::CsvTable::num(rep.packing_constant),
                 mfcz::CsvTable::num(rep.good_l2_constant),
                 mfcz::CsvTable::num(rep.per_cube_mass_constant),
                 mfcz::CsvTable::num(rep.local_l2_constant),
                 mfcz::CsvTable::num(rep.cancellation_residual)});
  write_table(opts.out_dir, "czd_run.csv", table);
  std::printf("czd: %zu cubes, packing=%s mass=%s cancel=%s overlap=%d\n",
              d.cubes.cubes.size(), mfcz::CsvTable::num(rep.packing_constant).c_str(),
              mfcz::CsvTable::num(rep.per_cube_mass_constant).c_str(),
              mfcz::CsvTable::num(rep.cancellation_residual).c_str(),
              rep.overlap_multiplicity);
  const bool ok = rep.packing_constant <= 1.0 && rep.per_cube_mass_constant <= 2.0 &&
                  rep.cancellation_residual <= 1e-8;
  return ok ? 0 : 1;
}

int run_dominate(const CommonOpts& opts, int n_freq, double r) {
  const mfcz::Grid g(opts.grid_log2);
  mfcz::Rng rng(opts.seed);
  const mfcz::MultiFrequencyOperator t =
      mfcz::random_operator(g, n_freq, 3, mfcz::ProfileShape::CosineSquared, rng);
  const mfcz::SampledFunction f = mfcz::random_test_function(g, rng);
  mfcz::DominationTrace trace;
  const mfcz::SparseFamily s =
      mfcz::sparse_dominate(t, f, mfcz::make_domination_params(t, r), &trace);
  const mfcz::EtaReport eta = mfcz::check_eta_sparse(s);
  const mfcz::DominationCheck check = mfcz::check_domination(t, f, s, r, n_freq);

  mfcz::CsvTable table({"seed", "grid_log2", "n_freq", "r", "operator", "max_ratio",
                        "node_count", "depth", "eta_worst", "zero_set_ok"});
  table.add_row({mfcz::CsvTable::num(static_cast<std::int64_t>(opts.seed)),
                 mfcz::CsvTable::num(static_cast<std::int64_t>(opts.grid_log2)),
                 mfcz::CsvTable::num(static_cast<std::int64_t>(n_freq)),
                 mfcz::CsvTable::num(r), t.descriptor(),
                 mfcz::CsvTable::num(check.max_ratio),
                 mfcz::CsvTable::num(static_cast<std::int64_t>(trace.nodes.size())),
                 mfcz::CsvTable::num(static_cast<std::int64_t>(trace.max_depth_used)),
                 mfcz::CsvTable::num(eta.worst_ratio),
                 check.zero_set_ok ? "1" : "0"});
  write_table(opts.out_dir, "dominate.csv", table);

  mfcz::CsvTable nodes({"node", "level", "offset", "c_n", "avg_r", "children"});
  for (std::size_t i = 0; i < trace.nodes.size(); ++i) {
    const mfcz::DominationNode& node = trace.nodes[i];
    nodes.add_row({mfcz::CsvTable::num(static_cast<std::int64_t>(i)),
                   mfcz::CsvTable::num(static_cast<std::int64_t>(node.level)),
                   mfcz::CsvTable::num(node.offset), mfcz::CsvTable::num(node.c_n),
                   mfcz::CsvTable::num(node.avg_r),
                   mfcz::CsvTable::num(static_cast<std::int64_t>(node.children))});
  }
  write_table(opts.out_dir, "dominate_nodes.csv", nodes);

  std::printf("dominate: ratio=%s nodes=%zu depth=%d eta_worst=%s\n",
              mfcz::CsvTable::num(check.max_ratio).c_str(), trace.nodes.size(),
              trace.max_depth_used, mfcz::CsvTable::num(eta.worst_ratio).c_str());
  return (eta.pass && check.zero_set_ok) ? 0 : 1;
}

int run_scaling(const CommonOpts& opts, const std::string& kind, double p,
                int trials) {
  const mfcz::Grid g(opts.grid_log2);
  const mfcz::VerifyConfig cfg = make_config(opts);
  mfcz::ScalingResult result;
  double bound = 0.0;
  bool pass = false;
  if (kind == "weak11") {
    result = mfcz::run_weak11_experiment(g, {4, 8, 16, 32, 64, 128, 256}, trials,
                                         opts.seed);
    bound = cfg.tol.weak11_slope_max;
    pass = result.fit.slope <= bound;
  } else if (kind == "lower") {
    result = mfcz::run_lower_bound_experiment(g, p, {8, 16, 32, 64, 128, 256},
                                              trials, opts.seed);
    bound = cfg.tol.lower_bound_slope_min;
    pass = result.fit.slope >= bound;
  } else if (kind == "strong") {
    result = mfcz::run_strong_experiment(g, p, {4, 8, 16, 32, 64, 128, 256},
                                         trials, opts.seed);
    bound = std::abs(1.0 / p - 0.5) + cfg.tol.strong_slope_margin;
    pass = result.fit.slope <= bound;
  } else {
    throw CLI::ValidationError("--kind must be weak11, strong, or lower");
  }
  mfcz::CsvTable table({"N", "statistic", "trials", "seed"});
  for (const mfcz::ScalingPoint& pt : result.points) {
    table.add_row({mfcz::CsvTable::num(pt.n), mfcz::CsvTable::num(pt.statistic),
                   mfcz::CsvTable::num(static_cast<std::int64_t>(pt.trials)),
                   mfcz::CsvTable::num(static_cast<std::int64_t>(pt.seed))});
  }
  write_table(opts.out_dir, "scaling_" + kind + ".csv", table);
  std::printf("scaling %s: slope=%s (bound %s) residual=%s -> %s\n", kind.c_str(),
              mfcz::CsvTable::num(result.fit.slope).c_str(),
              mfcz::CsvTable::num(bound).c_str(),
              mfcz::CsvTable::num(result.fit.residual).c_str(),
              pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

int run_weights_cmd(const CommonOpts& opts, const std::vector<double>& alphas) {
  const mfcz::Grid g(opts.grid_log2);
  mfcz::CsvTable chars({"alpha", "p", "ap_char", "rh_char"});
  for (const double alpha : alphas) {
    const mfcz::Weight w = mfcz::power_weight(g, alpha);
    chars.add_row({mfcz::CsvTable::num(alpha), mfcz::CsvTable::num(2.0),
                   mfcz::CsvTable::num(mfcz::ap_characteristic(w, 2.0)),
                   mfcz::CsvTable::num(mfcz::rh_characteristic(w, 2.0))});
    mfcz::CsvTable corpus({"index", "x", "w"});
    for (std::int64_t i = 0; i < g.size(); ++i) {
      corpus.add_row({mfcz::CsvTable::num(i), mfcz::CsvTable::num(g.point(i)),
                      mfcz::CsvTable::num(w.samples()[static_cast<std::size_t>(i)])});
    }
    write_table(opts.out_dir, "weight_alpha_" + mfcz::CsvTable::num(alpha) + ".csv",
                corpus);
  }
  write_table(opts.out_dir, "weights_char.csv", chars);

  mfcz::VerifyConfig cfg = make_config(opts);
  cfg.out_dir.clear();
  const mfcz::VerificationReport rep =
      mfcz::run_suites(cfg, {mfcz::Suite::Weights});
  return print_report(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-frequency Calderon-Zygmund laboratory"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value configuration file");

  CommonOpts opts;
  int n_freq = 16;
  double lambda = 8.0;
  double r = 1.0;
  double p = 4.0 / 3.0;
  int trials = 10;
  std::vector<double> alphas{-0.5, 0.0, 0.5, 0.9};
  std::string kind = "weak11";

  CLI::App* czd = app.add_subcommand("czd", "run and verify one decomposition");
  add_common(czd, opts);
  czd->add_option("--n-freq", n_freq, "frequency count N");
  czd->add_option("--lambda", lambda, "decomposition height");

  CLI::App* dominate =
      app.add_subcommand("dominate", "build and check one sparse family");
  add_common(dominate, opts);
  dominate->add_option("--n-freq", n_freq, "frequency count N");
  dominate->add_option("--r", r, "averaging exponent");

  CLI::App* mt = app.add_subcommand("mt-bound", "grand maximal pointwise bound suite");
  add_common(mt, opts);

  CLI::App* scaling =
      app.add_subcommand("scaling", "weak-(1,1), strong-(p,p) or lower-bound sweep");
  add_common(scaling, opts);
  scaling->add_option("--kind", kind, "weak11 | strong | lower");
  scaling->add_option("--p", p, "Lebesgue exponent");
  scaling->add_option("--trials", trials, "trials per N");

  CLI::App* weights =
      app.add_subcommand("weights", "weight characteristics and oracle checks");
  add_common(weights, opts);
  weights->add_option("--alpha", alphas, "power weight exponents");

  CLI::App* weighted =
      app.add_subcommand("weighted", "weighted sparse and main theorem suites");
  add_common(weighted, opts);

  CLI::App* verify = app.add_subcommand("verify", "full verification suite");
  add_common(verify, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (czd->parsed()) return run_czd(opts, n_freq, lambda);
    if (dominate->parsed()) return run_dominate(opts, n_freq, r);
    if (mt->parsed()) {
      return print_report(run_suites(make_config(opts), {mfcz::Suite::MtBound}));
    }
    if (scaling->parsed()) return run_scaling(opts, kind, p, trials);
    if (weights->parsed()) return run_weights_cmd(opts, alphas);
    if (weighted->parsed()) {
      return print_report(run_suites(make_config(opts), {mfcz::Suite::Weighted}));
    }
    if (verify->parsed()) {
      return print_report(mfcz::run_full_verification(make_config(opts)));
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
