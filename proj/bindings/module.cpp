#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "groupfx/effects.hpp"
#include "groupfx/limits.hpp"
#include "groupfx/pipeline.hpp"
#include "groupfx/regression.hpp"

namespace py = pybind11;
using namespace groupfx;

namespace {

std::vector<std::vector<double>> matrix_rows(const Matrix& m) {
  std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  return rows;
}

Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("matrix needs at least one row");
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw std::invalid_argument("ragged matrix rows");
    for (size_t j = 0; j < rows[i].size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  }
  return m;
}

DfConvention df_from_string(const std::string& name) {
  if (name == "paper") return DfConvention::paper;
  if (name == "conventional") return DfConvention::conventional;
  throw std::invalid_argument("df convention must be 'paper' or 'conventional'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "least squares group effects of strongly correlated predictors";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<NotPositiveDefiniteError>(m, "NotPositiveDefiniteError", PyExc_ArithmeticError);
  py::register_exception<RankDeficientError>(m, "RankDeficientError", PyExc_ArithmeticError);

  py::class_<Matrix>(m, "Matrix")
      .def(py::init(&matrix_from_rows), py::arg("rows"))
      .def_property_readonly("shape",
                             [](const Matrix& mm) { return py::make_tuple(mm.rows(), mm.cols()); })
      .def("to_rows", &matrix_rows)
      .def("__getitem__",
           [](const Matrix& mm, std::pair<int, int> ij) { return mm(ij.first, ij.second); });

  py::class_<SymMatrix>(m, "SymMatrix")
      .def(py::init([](const std::vector<std::vector<double>>& rows, double tol) {
             return SymMatrix::from_matrix(matrix_from_rows(rows), tol);
           }),
           py::arg("rows"), py::arg("tol") = 0.0)
      .def_property_readonly("order", &SymMatrix::order)
      .def("to_rows", [](const SymMatrix& s) { return matrix_rows(s.to_matrix()); })
      .def("__getitem__",
           [](const SymMatrix& s, std::pair<int, int> ij) { return s(ij.first, ij.second); });

  py::class_<EigenResult>(m, "EigenResult")
      .def_readonly("values", &EigenResult::values)
      .def_property_readonly("vectors", [](const EigenResult& e) { return matrix_rows(e.vectors); });

  py::class_<OlsSolution>(m, "OlsSolution")
      .def_readonly("coefficients", &OlsSolution::coefficients)
      .def_readonly("unscaled_covariance", &OlsSolution::unscaled_covariance)
      .def_readonly("residuals", &OlsSolution::residuals);

  m.def("sym_eigen", &sym_eigen, py::arg("m"));
  m.def("invert_spd", &invert_spd, py::arg("m"));
  m.def("cholesky_lower", &cholesky_lower, py::arg("m"));
  m.def(
      "ols_solve",
      [](const std::vector<std::vector<double>>& x, const Vector& y) {
        return ols_solve(matrix_from_rows(x), y);
      },
      py::arg("x_rows"), py::arg("y"));
  m.def("rayleigh_quotient", &rayleigh_quotient, py::arg("m"), py::arg("x"));

  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](std::vector<std::string> names, const std::vector<std::vector<double>>& x_rows,
                       Vector y, std::string response_name) {
             Dataset d;
             d.predictor_names = std::move(names);
             d.response_name = std::move(response_name);
             d.x = matrix_from_rows(x_rows);
             d.y = std::move(y);
             validate_dataset(d);
             return d;
           }),
           py::arg("predictor_names"), py::arg("x_rows"), py::arg("y"), py::arg("response_name") = "y")
      .def_readonly("predictor_names", &Dataset::predictor_names)
      .def_readonly("response_name", &Dataset::response_name)
      .def_readonly("y", &Dataset::y)
      .def_property_readonly("x", [](const Dataset& d) { return matrix_rows(d.x); })
      .def_property_readonly("n", &Dataset::n)
      .def("to_csv", &to_csv);

  py::class_<Standardization>(m, "Standardization")
      .def_readonly("means", &Standardization::means)
      .def_readonly("scales", &Standardization::scales)
      .def_readonly("response_mean", &Standardization::response_mean);

  py::class_<StandardizedDataset>(m, "StandardizedDataset")
      .def_readonly("predictor_names", &StandardizedDataset::predictor_names)
      .def_readonly("y", &StandardizedDataset::y)
      .def_property_readonly("x", [](const StandardizedDataset& d) { return matrix_rows(d.x); });

  m.def("hald_dataset", &hald_dataset);
  m.def(
      "load_csv",
      [](const std::string& text, const std::string& response_name) {
        std::istringstream in(text);
        return load_csv(in, response_name);
      },
      py::arg("text"), py::arg("response_name"), "parse CSV text");
  m.def("load_csv_file", &load_csv_file, py::arg("path"), py::arg("response_name"));
  m.def("standardize", &standardize, py::arg("dataset"));

  py::class_<CorrelationStructure>(m, "CorrelationStructure")
      .def_readonly("r", &CorrelationStructure::r)
      .def_readonly("names", &CorrelationStructure::names);

  py::class_<GroupArrangement>(m, "GroupArrangement")
      .def(py::init([](std::vector<int> members, std::vector<int> signs) {
             GroupArrangement g;
             g.member_indices = std::move(members);
             g.signs = signs.empty() ? std::vector<int>(g.member_indices.size(), 1) : std::move(signs);
             if (g.signs.size() != g.member_indices.size())
               throw std::invalid_argument("signs must match member_indices");
             return g;
           }),
           py::arg("member_indices"), py::arg("signs") = std::vector<int>{})
      .def_readonly("member_indices", &GroupArrangement::member_indices)
      .def_readonly("signs", &GroupArrangement::signs)
      .def_readonly("r_min", &GroupArrangement::r_min)
      .def_readonly("achieved_apc", &GroupArrangement::achieved_apc)
      .def_readonly("negative_pairs", &GroupArrangement::negative_pairs);

  py::class_<PartitionedCorrelation>(m, "PartitionedCorrelation")
      .def_readonly("r11", &PartitionedCorrelation::r11)
      .def_readonly("r22", &PartitionedCorrelation::r22)
      .def_property_readonly("r12", [](const PartitionedCorrelation& p) { return matrix_rows(p.r12); })
      .def_readonly("schur", &PartitionedCorrelation::schur)
      .def_readonly("cross_term", &PartitionedCorrelation::cross_term);

  m.def("correlation_matrix", &correlation_matrix, py::arg("standardized"));
  m.def("make_correlation_structure", &make_correlation_structure, py::arg("r"), py::arg("names"));
  m.def("detect_groups", &detect_groups, py::arg("correlation"), py::arg("threshold") = 0.8);
  m.def("apc_arrange", &apc_arrange, py::arg("correlation"), py::arg("group"));
  m.def("partition", &partition, py::arg("correlation"), py::arg("arrangement"));

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("predictor_names", &FitResult::predictor_names)
      .def_readonly("coefficients", &FitResult::coefficients)
      .def_readonly("unscaled_covariance", &FitResult::unscaled_covariance)
      .def_readonly("cross_product", &FitResult::cross_product)
      .def_readonly("sigma2_hat", &FitResult::sigma2_hat)
      .def_readonly("df", &FitResult::df)
      .def_readonly("rss", &FitResult::rss)
      .def_readonly("std_errors", &FitResult::std_errors)
      .def_readonly("t_values", &FitResult::t_values)
      .def_readonly("p_values", &FitResult::p_values)
      .def_readonly("residuals", &FitResult::residuals)
      .def_readonly("exact_fit", &FitResult::exact_fit);

  py::class_<RawCoefficients>(m, "RawCoefficients")
      .def_readonly("intercept", &RawCoefficients::intercept)
      .def_readonly("slopes", &RawCoefficients::slopes);

  m.def(
      "fit_standardized",
      [](const StandardizedDataset& sd, const std::string& df) {
        return fit_standardized(sd, df_from_string(df));
      },
      py::arg("standardized"), py::arg("df") = "paper");
  m.def("destandardize", &destandardize, py::arg("fit"), py::arg("standardization"));
  m.def("t_tail_prob", &t_tail_prob, py::arg("t"), py::arg("df"));

  py::enum_<EffectScale>(m, "EffectScale")
      .value("standardized", EffectScale::standardized)
      .value("raw", EffectScale::raw);

  py::class_<GroupEffectSpec>(m, "GroupEffectSpec")
      .def(py::init([](GroupArrangement g, Vector w) {
             return GroupEffectSpec{std::move(g), std::move(w)};
           }),
           py::arg("arrangement"), py::arg("weights"))
      .def_readonly("arrangement", &GroupEffectSpec::arrangement)
      .def_readonly("weights", &GroupEffectSpec::weights);

  py::class_<EffectEstimate>(m, "EffectEstimate")
      .def_readonly("estimate", &EffectEstimate::estimate)
      .def_readonly("std_error", &EffectEstimate::std_error)
      .def_readonly("t_value", &EffectEstimate::t_value)
      .def_readonly("p_value", &EffectEstimate::p_value)
      .def_readonly("variance_floor", &EffectEstimate::variance_floor)
      .def_readonly("weights_used", &EffectEstimate::weights_used)
      .def_readonly("scale", &EffectEstimate::scale)
      .def_readonly("exact_fit", &EffectEstimate::exact_fit);

  m.def("weighted_effect", &weighted_effect, py::arg("fit"), py::arg("spec"));
  m.def("variability_weights", &variability_weights, py::arg("standardization"), py::arg("group"));
  m.def("variability_weighted_effect", &variability_weighted_effect, py::arg("raw"), py::arg("fit"),
        py::arg("standardization"), py::arg("arrangement"));
  m.def("variance_floor", &variance_floor, py::arg("q"), py::arg("sigma2"));

  py::class_<LimitTracePoint>(m, "LimitTracePoint")
      .def_readonly("rho", &LimitTracePoint::rho)
      .def_readonly("lambda1", &LimitTracePoint::lambda1)
      .def_readonly("eigvec_gap", &LimitTracePoint::eigvec_gap)
      .def_readonly("quad_form", &LimitTracePoint::quad_form)
      .def_readonly("perturbation_norm", &LimitTracePoint::perturbation_norm)
      .def_readonly("var_ratio", &LimitTracePoint::var_ratio);

  py::class_<SimulationReport>(m, "SimulationReport")
      .def_readonly("q", &SimulationReport::q)
      .def_readonly("n", &SimulationReport::n)
      .def_readonly("rho", &SimulationReport::rho)
      .def_readonly("sigma", &SimulationReport::sigma)
      .def_readonly("n_reps", &SimulationReport::n_reps)
      .def_readonly("seed", &SimulationReport::seed)
      .def_readonly("empirical_var", &SimulationReport::empirical_var)
      .def_readonly("theoretical_var", &SimulationReport::theoretical_var)
      .def_readonly("ratio", &SimulationReport::ratio)
      .def_readonly("per_coefficient_var", &SimulationReport::per_coefficient_var);

  m.def("equicorrelation_matrix", &equicorrelation_matrix, py::arg("q"), py::arg("rho"));
  m.def("limit_trace", &limit_trace, py::arg("q"), py::arg("rho_grid"));
  m.def(
      "random_correlated_design",
      [](int n, const SymMatrix& target, uint64_t seed) {
        return matrix_rows(random_correlated_design(n, target, seed));
      },
      py::arg("n"), py::arg("target"), py::arg("seed"));
  m.def("simulate_group_effect", &simulate_group_effect, py::arg("q"), py::arg("n"), py::arg("rho"),
        py::arg("beta_prime"), py::arg("sigma"), py::arg("n_reps"), py::arg("seed"));

  py::class_<ArrangedDataset>(m, "ArrangedDataset")
      .def_readonly("data", &ArrangedDataset::data)
      .def_readonly("groups", &ArrangedDataset::groups)
      .def_readonly("legend", &ArrangedDataset::legend);

  m.def("arrange_dataset", &arrange_dataset, py::arg("dataset"), py::arg("threshold") = 0.8,
        py::arg("rename") = false);
  m.def("arrange_dataset_groups", &arrange_dataset_groups, py::arg("dataset"), py::arg("groups"));

#ifdef VERSION_INFO
#define GROUPFX_STR2(x) #x
#define GROUPFX_STR(x) GROUPFX_STR2(x)
  m.attr("__version__") = GROUPFX_STR(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
