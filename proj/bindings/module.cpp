// pybind11 surface: the main operations of every module, value-converted
// via STL casters (complex vectors cross as lists/arrays).

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mfcz/czd.hpp"
#include "mfcz/experiments.hpp"
#include "mfcz/sparse.hpp"

namespace py = pybind11;
using namespace mfcz;

PYBIND11_MODULE(_mfcz, m) {
  m.doc() = "multi-frequency Calderon-Zygmund laboratory on the discrete torus";

  // --- grid ---
  py::class_<Grid>(m, "Grid")
      .def(py::init<int>(), py::arg("log2_size"))
      .def_property_readonly("log2_size", &Grid::log2_size)
      .def_property_readonly("size", &Grid::size)
      .def_property_readonly("spacing", &Grid::spacing)
      .def("point", &Grid::point)
      .def("__eq__", [](const Grid& a, const Grid& b) { return a == b; })
      .def("__repr__", [](const Grid& g) {
        return "Grid(log2_size=" + std::to_string(g.log2_size()) + ")";
      });
  m.def("make_grid", &make_grid, py::arg("log2_size"));

  py::class_<SampledFunction>(m, "SampledFunction")
      .def(py::init<Grid, std::vector<cplx>>(), py::arg("grid"), py::arg("samples"))
      .def_static("zeros", &SampledFunction::zeros)
      .def_readonly("grid", &SampledFunction::grid)
      .def_readonly("samples", &SampledFunction::samples);

  py::class_<Spectrum>(m, "Spectrum")
      .def(py::init<Grid, std::vector<cplx>>(), py::arg("grid"),
           py::arg("coefficients"))
      .def_static("zeros", &Spectrum::zeros)
      .def_readonly("grid", &Spectrum::grid)
      .def_readonly("coefficients", &Spectrum::coefficients)
      .def("coeff", &Spectrum::coeff)
      .def("set_coeff", &Spectrum::set_coeff);

  m.def("forward_transform", &forward_transform);
  m.def("inverse_transform", &inverse_transform);
  m.def("lp_norm", py::overload_cast<const SampledFunction&, double>(&lp_norm),
        py::arg("f"), py::arg("p"));
  m.def("lp_norm",
        py::overload_cast<const SampledFunction&, double, const Weight&>(&lp_norm),
        py::arg("f"), py::arg("p"), py::arg("w"));
  m.def("sup_norm", &sup_norm);
  m.def("weak_l1_quasinorm", &weak_l1_quasinorm);

  // --- dyadic ---
  py::class_<DyadicInterval>(m, "DyadicInterval")
      .def(py::init([](int level, std::int64_t offset) {
             return DyadicInterval{level, offset};
           }),
           py::arg("level"), py::arg("offset"))
      .def_readonly("level", &DyadicInterval::level)
      .def_readonly("offset", &DyadicInterval::offset)
      .def("measure", &DyadicInterval::measure)
      .def("left", &DyadicInterval::left)
      .def("parent", &DyadicInterval::parent)
      .def("child", &DyadicInterval::child)
      .def("contains", &DyadicInterval::contains);

  py::class_<CellRange>(m, "CellRange")
      .def(py::init([](std::int64_t start, std::int64_t length) {
             return CellRange{start, length};
           }),
           py::arg("start"), py::arg("length"))
      .def_readonly("start", &CellRange::start)
      .def_readonly("length", &CellRange::length);

  py::class_<CubeSet>(m, "CubeSet")
      .def_readonly("cubes", &CubeSet::cubes)
      .def_readonly("pairwise_disjoint", &CubeSet::pairwise_disjoint)
      .def_readonly("total_measure", &CubeSet::total_measure);

  m.def("average", &average, py::arg("f"), py::arg("q"), py::arg("r") = 1.0);
  m.def("maximal_function", &maximal_function, py::arg("f"), py::arg("t") = 1.0);
  m.def("stopping_cubes", &stopping_cubes, py::arg("f"), py::arg("threshold"));

  // --- weights ---
  py::class_<Weight>(m, "Weight")
      .def(py::init<Grid, std::vector<double>>(), py::arg("grid"), py::arg("samples"))
      .def_property_readonly("grid", &Weight::grid)
      .def_property_readonly("samples", &Weight::samples);
  m.def("ap_characteristic", &ap_characteristic, py::arg("w"), py::arg("p"));
  m.def("rh_characteristic", &rh_characteristic, py::arg("w"), py::arg("p"));
  m.def("power_weight", &power_weight, py::arg("grid"), py::arg("alpha"));
  m.def("random_ap_weight", &random_ap_weight, py::arg("grid"), py::arg("roughness"),
        py::arg("seed"));

  // --- operators ---
  py::enum_<ProfileShape>(m, "ProfileShape")
      .value("Flat", ProfileShape::Flat)
      .value("CosineSquared", ProfileShape::CosineSquared)
      .value("GaussianTruncated", ProfileShape::GaussianTruncated);

  py::class_<DiniModulus>(m, "DiniModulus")
      .def_static("linear", &DiniModulus::linear, py::arg("scale"))
      .def_static("power", &DiniModulus::power, py::arg("scale"), py::arg("exponent"))
      .def("__call__", &DiniModulus::operator())
      .def_property_readonly("scale", &DiniModulus::scale)
      .def_property_readonly("exponent", &DiniModulus::exponent);
  m.def("dini_norm", &dini_norm);

  py::class_<FrequencySet>(m, "FrequencySet")
      .def_static("of", &FrequencySet::of, py::arg("frequencies"), py::arg("grid"))
      .def_readonly("frequencies", &FrequencySet::frequencies)
      .def("size", &FrequencySet::size);

  py::class_<MultiFrequencyOperator>(m, "MultiFrequencyOperator")
      .def_property_readonly("grid", &MultiFrequencyOperator::grid)
      .def_property_readonly("frequency_set", &MultiFrequencyOperator::frequency_set)
      .def_property_readonly("frequency_count",
                             &MultiFrequencyOperator::frequency_count)
      .def_property_readonly("multiplier", &MultiFrequencyOperator::multiplier)
      .def_property_readonly("modulus", &MultiFrequencyOperator::modulus)
      .def("descriptor", &MultiFrequencyOperator::descriptor);

  m.def("build_multiplier_operator", &build_multiplier_operator, py::arg("grid"),
        py::arg("centers"), py::arg("halfwidth"), py::arg("shape"));
  m.def("random_sign_operator", &random_sign_operator, py::arg("grid"), py::arg("n"),
        py::arg("signs"));
  m.def("apply", &apply, py::arg("t"), py::arg("f"));
  m.def("apply_truncated", &apply_truncated, py::arg("t"), py::arg("f"),
        py::arg("excluded"));
  m.def("kernel_slice", &kernel_slice, py::arg("t"), py::arg("x_cell"));
  m.def("dirichlet_function", &dirichlet_function, py::arg("grid"), py::arg("n"));

  py::class_<DiniProbeReport>(m, "DiniProbeReport")
      .def_readonly("max_ratio", &DiniProbeReport::max_ratio)
      .def_readonly("declared_constant", &DiniProbeReport::declared_constant)
      .def_readonly("pass_", &DiniProbeReport::pass)
      .def_readonly("pairs_sampled", &DiniProbeReport::pairs_sampled);
  m.def("dini_regularity_probe", &dini_regularity_probe, py::arg("t"),
        py::arg("sample_pairs"), py::arg("seed"),
        py::arg("declared_constant") = std::nullopt);

  // --- czd ---
  py::class_<PropertyReport>(m, "PropertyReport")
      .def_readonly("overlap_multiplicity", &PropertyReport::overlap_multiplicity)
      .def_readonly("packing_constant", &PropertyReport::packing_constant)
      .def_readonly("good_l2_constant", &PropertyReport::good_l2_constant)
      .def_readonly("per_cube_mass_constant", &PropertyReport::per_cube_mass_constant)
      .def_readonly("local_l2_constant", &PropertyReport::local_l2_constant)
      .def_readonly("cancellation_residual", &PropertyReport::cancellation_residual);

  py::class_<BadPart>(m, "BadPart")
      .def_readonly("cube", &BadPart::cube)
      .def_readonly("support", &BadPart::support)
      .def_readonly("values", &BadPart::values);

  py::class_<CZDecomposition>(m, "CZDecomposition")
      .def_readonly("f", &CZDecomposition::f)
      .def_readonly("lambda_", &CZDecomposition::lambda)
      .def_readonly("cubes", &CZDecomposition::cubes)
      .def_readonly("bad_parts", &CZDecomposition::bad_parts)
      .def_readonly("good", &CZDecomposition::good)
      .def_readonly("report", &CZDecomposition::report);

  m.def("mf_czd", &mf_czd, py::arg("f"), py::arg("lambda_"), py::arg("theta"));
  m.def("verify_czd", &verify_czd);

  // --- sparse ---
  py::class_<SparseCube>(m, "SparseCube")
      .def_readonly("cells", &SparseCube::cells)
      .def_readonly("witness", &SparseCube::witness)
      .def_readonly("source", &SparseCube::source);

  py::class_<SparseFamily>(m, "SparseFamily")
      .def_readonly("grid", &SparseFamily::grid)
      .def_readonly("cubes", &SparseFamily::cubes)
      .def_property_readonly("eta", &SparseFamily::eta);

  py::class_<DominationParams>(m, "DominationParams")
      .def(py::init<>())
      .def_readwrite("r", &DominationParams::r)
      .def_readwrite("s", &DominationParams::s)
      .def_readwrite("c_t", &DominationParams::c_t)
      .def_readwrite("max_depth", &DominationParams::max_depth);
  m.def("make_domination_params", &make_domination_params, py::arg("t"), py::arg("r"),
        py::arg("s") = 0.5);

  py::class_<EtaReport>(m, "EtaReport")
      .def_readonly("pass_", &EtaReport::pass)
      .def_readonly("worst_ratio", &EtaReport::worst_ratio)
      .def_readonly("witnesses_disjoint", &EtaReport::witnesses_disjoint)
      .def_readonly("witnesses_inside", &EtaReport::witnesses_inside);

  py::class_<MtBoundReport>(m, "MtBoundReport")
      .def_readonly("max_ratio", &MtBoundReport::max_ratio)
      .def_readonly("weak_norm_surrogate", &MtBoundReport::weak_norm_surrogate)
      .def_readonly("dini", &MtBoundReport::dini)
      .def_readonly("unbounded", &MtBoundReport::unbounded);

  py::class_<DominationNode>(m, "DominationNode")
      .def_readonly("level", &DominationNode::level)
      .def_readonly("offset", &DominationNode::offset)
      .def_readonly("c_n", &DominationNode::c_n)
      .def_readonly("avg_r", &DominationNode::avg_r)
      .def_readonly("children", &DominationNode::children);

  py::class_<DominationTrace>(m, "DominationTrace")
      .def(py::init<>())
      .def_readonly("nodes", &DominationTrace::nodes)
      .def_readonly("max_depth_used", &DominationTrace::max_depth_used);

  py::class_<DominationCheck>(m, "DominationCheck")
      .def_readonly("max_ratio", &DominationCheck::max_ratio)
      .def_readonly("zero_set_sup", &DominationCheck::zero_set_sup)
      .def_readonly("zero_set_ok", &DominationCheck::zero_set_ok);

  m.def("sparse_apply", &sparse_apply, py::arg("s"), py::arg("f"), py::arg("r"));
  m.def("check_eta_sparse", &check_eta_sparse);
  m.def(
      "grand_maximal",
      [](const MultiFrequencyOperator& t, const SampledFunction& f,
         std::optional<DyadicInterval> q0) { return grand_maximal(t, f, q0); },
      py::arg("t"), py::arg("f"), py::arg("q0") = std::nullopt);
  m.def("check_mt_pointwise_bound", &check_mt_pointwise_bound, py::arg("t"),
        py::arg("f"), py::arg("params"));
  m.def(
      "sparse_dominate",
      [](const MultiFrequencyOperator& t, const SampledFunction& f,
         const DominationParams& params) {
        DominationTrace trace;
        SparseFamily family = sparse_dominate(t, f, params, &trace);
        return py::make_tuple(family, trace);
      },
      py::arg("t"), py::arg("f"), py::arg("params"));
  m.def("check_domination", &check_domination, py::arg("t"), py::arg("f"),
        py::arg("s"), py::arg("r"), py::arg("n_freq"));

  // --- experiments ---
  py::class_<FitResult>(m, "FitResult")
      .def_readonly("slope", &FitResult::slope)
      .def_readonly("intercept", &FitResult::intercept)
      .def_readonly("residual", &FitResult::residual);
  m.def("fit_exponent", &fit_exponent, py::arg("xs"), py::arg("ys"));

  py::class_<ScalingPoint>(m, "ScalingPoint")
      .def_readonly("n", &ScalingPoint::n)
      .def_readonly("statistic", &ScalingPoint::statistic)
      .def_readonly("trials", &ScalingPoint::trials)
      .def_readonly("seed", &ScalingPoint::seed);

  py::class_<ScalingResult>(m, "ScalingResult")
      .def_readonly("points", &ScalingResult::points)
      .def_readonly("fit", &ScalingResult::fit);

  m.def("run_weak11_experiment", &run_weak11_experiment, py::arg("grid"),
        py::arg("ns"), py::arg("trials"), py::arg("seed"));
  m.def("run_lower_bound_experiment", &run_lower_bound_experiment, py::arg("grid"),
        py::arg("p"), py::arg("ns"), py::arg("sign_trials"), py::arg("seed"));
  m.def("run_strong_experiment", &run_strong_experiment, py::arg("grid"), py::arg("p"),
        py::arg("ns"), py::arg("trials"), py::arg("seed"));

  py::class_<WeightedCheckReport>(m, "WeightedCheckReport")
      .def_readonly("p", &WeightedCheckReport::p)
      .def_readonly("r", &WeightedCheckReport::r)
      .def_readonly("ap_char", &WeightedCheckReport::ap_char)
      .def_readonly("exponent", &WeightedCheckReport::exponent)
      .def_readonly("ratio", &WeightedCheckReport::ratio);
  m.def("check_sparse_weighted", &check_sparse_weighted, py::arg("s"), py::arg("f"),
        py::arg("w"), py::arg("p"), py::arg("r"));
  m.def("check_main_theorem", &check_main_theorem, py::arg("t"), py::arg("f"),
        py::arg("w"), py::arg("p"), py::arg("r"));

  py::class_<Tolerances>(m, "Tolerances").def(py::init<>());
  m.def("load_tolerances", &load_tolerances, py::arg("path"));

  py::class_<VerifyConfig>(m, "VerifyConfig")
      .def(py::init<>())
      .def_readwrite("grid_log2", &VerifyConfig::grid_log2)
      .def_readwrite("seed", &VerifyConfig::seed)
      .def_readwrite("out_dir", &VerifyConfig::out_dir)
      .def_readwrite("tol", &VerifyConfig::tol)
      .def_readwrite("czd_functions", &VerifyConfig::czd_functions)
      .def_readwrite("domination_pairs", &VerifyConfig::domination_pairs)
      .def_readwrite("mt_pairs", &VerifyConfig::mt_pairs)
      .def_readwrite("weak11_trials", &VerifyConfig::weak11_trials)
      .def_readwrite("lower_trials", &VerifyConfig::lower_trials);

  py::class_<CriterionResult>(m, "CriterionResult")
      .def_readonly("name", &CriterionResult::name)
      .def_readonly("pass_", &CriterionResult::pass)
      .def_readonly("value", &CriterionResult::value)
      .def_readonly("bound", &CriterionResult::bound)
      .def_readonly("detail", &CriterionResult::detail);

  py::class_<VerificationReport>(m, "VerificationReport")
      .def_readonly("criteria", &VerificationReport::criteria)
      .def_readonly("tables", &VerificationReport::tables)
      .def_readonly("elapsed_seconds", &VerificationReport::elapsed_seconds)
      .def("all_pass", &VerificationReport::all_pass);

  m.def("run_full_verification", &run_full_verification, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
}
