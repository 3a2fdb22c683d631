#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "munu/analytic.hpp"
#include "munu/arith.hpp"
#include "munu/errors.hpp"
#include "munu/experiments.hpp"
#include "munu/report.hpp"
#include "munu/stepfn.hpp"

namespace py = pybind11;
using namespace munu;

namespace {

std::string profile_csv(const StepProfile& p) {
    std::ostringstream ss;
    write_profile_csv(p, ss);
    return ss.str();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact and numerical studies of f_n(x) = sum_{k<=n} mu(k) nu(x/k), "
              "nu(x) = floor(x) mod 2, and the associated eta/Dirichlet identities.";

    py::register_exception<resource_error>(m, "ResourceError", PyExc_RuntimeError);
    py::register_exception<accuracy_error>(m, "AccuracyError", PyExc_RuntimeError);
    py::register_exception<near_zero_error>(m, "NearZeroError", PyExc_RuntimeError);

    py::class_<MobiusTable>(m, "MobiusTable")
        .def_readonly("limit", &MobiusTable::limit)
        .def("mu", &MobiusTable::mu, py::arg("k"))
        .def("__len__", [](const MobiusTable& t) { return t.limit; })
        .def("__repr__", [](const MobiusTable& t) {
            return "MobiusTable(limit=" + std::to_string(t.limit) + ")";
        });

    m.def("mobius_sieve",
          [](std::uint64_t n, std::uint64_t segment_size, std::uint64_t max_table_bytes,
             unsigned threads) {
              SieveOptions opt;
              if (segment_size) opt.segment_size = segment_size;
              if (max_table_bytes) opt.max_table_bytes = max_table_bytes;
              opt.threads = threads;
              return mobius_sieve(n, opt);
          },
          py::arg("n"), py::arg("segment_size") = 0, py::arg("max_table_bytes") = 0,
          py::arg("threads") = 1, "Dense table of mu(1..n).");
    m.def("mobius_oracle", &mobius_oracle, py::arg("k"),
          "mu(k) by trial division; cross-check for the sieve.");
    m.def("mertens", &mertens, py::arg("table"), py::arg("n"));
    m.def("squarefree_count", &squarefree_count, py::arg("table"), py::arg("n"));
    m.def("nu", &nu, py::arg("x"), "floor(x) mod 2, exact for every representable x >= 0.");
    m.def("abs_mobius_partial", &abs_mobius_partial, py::arg("table"), py::arg("n"),
          py::arg("sigma"));
    m.def("save_mobius_cache", &save_mobius_cache, py::arg("table"), py::arg("path"));
    m.def("load_mobius_cache", &load_mobius_cache, py::arg("path"));

    py::class_<StepProfile>(m, "StepProfile")
        .def_readonly("n", &StepProfile::n)
        .def_readonly("m_lo", &StepProfile::m_lo)
        .def_readonly("m_hi", &StepProfile::m_hi)
        .def_readonly("values", &StepProfile::values)
        .def("at", &StepProfile::at, py::arg("m"))
        .def("csv", &profile_csv, "CSV text with header m,f_n_of_m.");

    py::class_<SupScanResult>(m, "SupScanResult")
        .def_readonly("n", &SupScanResult::n)
        .def_readonly("x_max", &SupScanResult::x_max)
        .def_readonly("sup_abs", &SupScanResult::sup_abs)
        .def_readonly("argmax_abs", &SupScanResult::argmax_abs)
        .def_readonly("sup_one_plus", &SupScanResult::sup_one_plus)
        .def_readonly("argmax_one_plus", &SupScanResult::argmax_one_plus)
        .def_readonly("max_abs_jump", &SupScanResult::max_abs_jump)
        .def_readonly("argmax_jump", &SupScanResult::argmax_jump);

    py::class_<StepEvaluator>(m, "StepEvaluator")
        .def(py::init<const MobiusTable&>(), py::arg("table"),
             py::keep_alive<1, 2>())
        .def_property_readonly("limit", &StepEvaluator::limit)
        .def("f_value", &StepEvaluator::value, py::arg("n"), py::arg("x"),
             "f_n(x), blocked exact evaluation.")
        .def("f_value_at", &StepEvaluator::value_at, py::arg("n"), py::arg("m"))
        .def("f_value_naive", &StepEvaluator::value_naive, py::arg("n"), py::arg("m"))
        .def("f_limit", &StepEvaluator::limit_value, py::arg("x"),
             "f_{floor(x)}(x): 0 on [0,1), 1 on [1,2), -1 on [2, inf).")
        .def("profile", &StepEvaluator::profile, py::arg("n"), py::arg("m_lo"),
             py::arg("m_hi"), py::arg("threads") = 1)
        .def("sup_scan", &StepEvaluator::sup_scan, py::arg("n"), py::arg("x_max"),
             py::arg("threads") = 1);

    py::enum_<EtaMethod>(m, "EtaMethod")
        .value("accelerated_series", EtaMethod::accelerated_series)
        .value("mellin_truncated", EtaMethod::mellin_truncated);

    py::class_<EtaEval>(m, "EtaEval")
        .def_readonly("value", &EtaEval::value)
        .def_readonly("abs_error_bound", &EtaEval::abs_error_bound)
        .def_readonly("method", &EtaEval::method)
        .def_readonly("terms", &EtaEval::terms);

    m.def("eta_series", &eta_series, py::arg("s"), py::arg("tol") = kDefaultEtaTol);
    m.def("eta_mellin_truncated", &eta_mellin_truncated, py::arg("s"), py::arg("X"));
    m.def("mobius_partial_dirichlet", &mobius_partial_dirichlet, py::arg("table"),
          py::arg("n"), py::arg("s"));
    m.def("zeta_inverse_ref", &zeta_inverse_ref, py::arg("s"),
          py::arg("tol") = kDefaultEtaTol);
    m.def("log_gamma", &log_gamma, py::arg("z"));

    py::class_<StepIntegral>(m, "StepIntegral")
        .def_readonly("value", &StepIntegral::value)
        .def_readonly("tail_bound", &StepIntegral::tail_bound);
    m.def("truncated_step_integral", &truncated_step_integral, py::arg("ev"),
          py::arg("n"), py::arg("s"), py::arg("X"), py::arg("threads") = 1);

    py::class_<ResidualRecord>(m, "ResidualRecord")
        .def_readonly("n", &ResidualRecord::n)
        .def_readonly("s", &ResidualRecord::s)
        .def_readonly("lhs", &ResidualRecord::lhs)
        .def_readonly("rigorous_bound", &ResidualRecord::rigorous_bound)
        .def_readonly("windowed_bound", &ResidualRecord::windowed_bound)
        .def_readonly("x_max", &ResidualRecord::x_max);
    m.def("dirichlet_residual", &dirichlet_residual, py::arg("ev"), py::arg("n"),
          py::arg("s"), py::arg("x_max"), py::arg("eta_tol") = kDefaultEtaTol,
          py::arg("threads") = 1);

    py::class_<ScaledMellinCheck>(m, "ScaledMellinCheck")
        .def_readonly("lhs", &ScaledMellinCheck::lhs)
        .def_readonly("rhs", &ScaledMellinCheck::rhs)
        .def_readonly("agreement_bound", &ScaledMellinCheck::agreement_bound);
    m.def("scaled_mellin_check", &scaled_mellin_check, py::arg("theta"), py::arg("s"),
          py::arg("X"), py::arg("eta_tol") = kDefaultEtaTol);

    py::class_<Assertion>(m, "Assertion")
        .def_readonly("name", &Assertion::name)
        .def_readonly("lhs", &Assertion::lhs)
        .def_readonly("rhs", &Assertion::rhs)
        .def_readonly("passed", &Assertion::pass);

    py::class_<StudyReport>(m, "StudyReport")
        .def_readonly("study", &StudyReport::study)
        .def_readonly("columns", &StudyReport::columns)
        .def_readonly("rows", &StudyReport::rows)
        .def_readonly("assertions", &StudyReport::assertions)
        .def_property_readonly("passed", &StudyReport::pass)
        .def("csv", &StudyReport::csv_string)
        .def("summary_json", [](const StudyReport& r) { return r.summary_json().dump(2); });

    m.def("make_s_grid", &make_s_grid, py::arg("sigmas"), py::arg("ts"));
    m.def("verify_limit_values", &verify_limit_values, py::arg("ev"), py::arg("m_max"),
          py::arg("samples") = 1000, py::arg("seed") = 12345);
    m.def("verify_integral_identity", &verify_integral_identity, py::arg("ev"),
          py::arg("n_set"), py::arg("s_grid"), py::arg("X"),
          py::arg("eta_tol") = kDefaultEtaTol);
    m.def("residual_suite", &residual_suite, py::arg("ev"), py::arg("n_set"),
          py::arg("s_grid"), py::arg("window_factor") = 10.0,
          py::arg("eta_tol") = kDefaultEtaTol, py::arg("threads") = 1);
    m.def("convergence_study", &convergence_study, py::arg("table"), py::arg("s"),
          py::arg("n_grid"), py::arg("eta_tol") = kDefaultEtaTol);

    py::class_<GrowthFit>(m, "GrowthFit")
        .def_readonly("points", &GrowthFit::points)
        .def_readonly("exponent", &GrowthFit::exponent)
        .def_readonly("intercept", &GrowthFit::intercept)
        .def_readonly("r_squared", &GrowthFit::r_squared)
        .def_readonly("window_factor", &GrowthFit::window_factor)
        .def_readonly("has_fit", &GrowthFit::has_fit);
    py::class_<GrowthStudy>(m, "GrowthStudy")
        .def_readonly("fit", &GrowthStudy::fit)
        .def_readonly("report", &GrowthStudy::report);
    m.def("fit_loglog", &fit_loglog, py::arg("points"), py::arg("window_factor"));
    m.def("growth_study", &growth_study, py::arg("ev"), py::arg("n_grid"),
          py::arg("window_factor") = 10.0, py::arg("threads") = 1);
    m.def("bound_sweep", &bound_sweep, py::arg("ev"), py::arg("n_grid"),
          py::arg("sigma_set"), py::arg("X") = 10000, py::arg("threads") = 1);
}
