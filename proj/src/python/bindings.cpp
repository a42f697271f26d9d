#include "eigenrank/config.h"
#include "eigenrank/eri.h"
#include "eigenrank/error.h"
#include "eigenrank/lowrank.h"
#include "eigenrank/pipeline.h"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace eigenrank;
using namespace pybind11::literals;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Eigenfunction products of elliptic operators on boxes: spectra, "
              "low-rank tails and Coulomb-integral fitting.";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

    py::enum_<Boundary>(m, "Boundary")
        .value("dirichlet", Boundary::dirichlet)
        .value("periodic", Boundary::periodic);
    py::enum_<OperatorKind>(m, "OperatorKind")
        .value("schrodinger", OperatorKind::schrodinger)
        .value("laplacian", OperatorKind::laplacian);
    py::enum_<Norm>(m, "Norm").value("l2", Norm::l2).value("hm1", Norm::hm1);

    py::class_<Grid>(m, "Grid")
        .def_property_readonly("dimension", &Grid::dimension)
        .def_property_readonly("boundary", &Grid::boundary)
        .def_property_readonly("size", &Grid::size)
        .def_property_readonly("quadrature_weight", &Grid::quadrature_weight)
        .def("points", &Grid::points)
        .def("length", &Grid::length)
        .def("spacing", &Grid::spacing)
        .def("coordinate", &Grid::coordinate)
        .def("__repr__", [](const Grid &g) {
            return "<Grid d=" + std::to_string(g.dimension()) + " nodes=" +
                   std::to_string(g.size()) + " " + std::string(to_string(g.boundary())) + ">";
        });
    m.def(
        "make_grid",
        [](std::vector<double> lengths, std::vector<int> points, Boundary b) {
            return make_grid(static_cast<int>(lengths.size()), lengths, points, b);
        },
        py::arg("lengths"), py::arg("points"), py::arg("boundary") = Boundary::dirichlet);

    py::class_<CoefficientSpec>(m, "CoefficientSpec")
        .def_static("constant", &CoefficientSpec::constant, py::arg("a0") = 1.0,
                    py::arg("v0") = 0.0)
        .def_static("harmonic", &CoefficientSpec::harmonic, py::arg("a0") = 1.0,
                    py::arg("v_scale") = 1.0)
        .def_static("random_fourier", &CoefficientSpec::random_fourier, py::arg("seed"),
                    py::arg("cutoff") = 4, py::arg("a0") = 1.0, py::arg("delta") = 0.3,
                    py::arg("v0") = 0.0, py::arg("v_delta") = 0.0);

    py::class_<CoefficientField>(m, "CoefficientField")
        .def_readonly("a_min", &CoefficientField::a_min)
        .def_readonly("a_max", &CoefficientField::a_max)
        .def_readonly("v_sup", &CoefficientField::v_sup)
        .def_readonly("v_node", &CoefficientField::v_node)
        .def_readonly("a_face", &CoefficientField::a_face);
    m.def("sample_coefficients", &sample_coefficients, py::arg("spec"), py::arg("grid"));

    py::class_<DiscreteOperator>(m, "DiscreteOperator")
        .def_readonly("grid", &DiscreteOperator::grid)
        .def_readonly("kind", &DiscreteOperator::kind)
        .def_readonly("matrix", &DiscreteOperator::matrix)
        .def_readonly("gershgorin_lower", &DiscreteOperator::gershgorin_lower)
        .def_readonly("gershgorin_upper", &DiscreteOperator::gershgorin_upper)
        .def("apply", [](const DiscreteOperator &op, const Vec &u) {
            return op.apply(GridFunction(op.grid, u)).values;
        });
    m.def("assemble_schrodinger", &assemble_schrodinger, py::arg("field"), py::arg("grid"));
    m.def("assemble_laplacian", &assemble_laplacian, py::arg("grid"));

    py::class_<SpectralBasis>(m, "SpectralBasis")
        .def_readonly("grid", &SpectralBasis::grid)
        .def_readonly("kind", &SpectralBasis::kind)
        .def_readonly("values", &SpectralBasis::values)
        .def_readonly("vectors", &SpectralBasis::vectors)
        .def_readonly("residuals", &SpectralBasis::residuals)
        .def_readonly("iterative", &SpectralBasis::iterative)
        .def_property_readonly("count", &SpectralBasis::count)
        .def_property_readonly("complete", &SpectralBasis::complete);
    m.def(
        "lowest_eigenpairs",
        [](const DiscreteOperator &op, int count, double tol, std::size_t dense_cap) {
            EigenSolveOptions o;
            o.tol = tol;
            o.dense_cap = dense_cap;
            py::gil_scoped_release release;
            return lowest_eigenpairs(op, count, o);
        },
        py::arg("op"), py::arg("m"), py::arg("tol") = 1e-9, py::arg("dense_cap") = 5000);
    m.def("orthonormality_error", &orthonormality_error);
    m.def("weyl_cap", &weyl_cap);
    m.def("weyl_fit", [](const SpectralBasis &b, int k_min, int k_max) {
        const WeylFit w = weyl_fit(b, b.grid.dimension(), k_min, k_max);
        return py::dict("exponent"_a = w.exponent, "constant"_a = w.constant,
                        "max_rel_dev"_a = w.max_rel_dev);
    });

    py::class_<ProductCoefficients>(m, "ProductCoefficients")
        .def_readonly("n", &ProductCoefficients::n)
        .def_readonly("m", &ProductCoefficients::m)
        .def_readonly("complete", &ProductCoefficients::complete)
        .def_readonly("coeffs", &ProductCoefficients::coeffs)
        .def_readonly("product_norms", &ProductCoefficients::product_norms)
        .def("__call__", &ProductCoefficients::operator(), py::arg("i"), py::arg("j"),
             py::arg("k"));
    m.def("pair_index", &pair_index);
    m.def("expansion_coefficients", &expansion_coefficients, py::arg("source"),
          py::arg("target"), py::arg("n"), py::arg("m"),
          py::call_guard<py::gil_scoped_release>());
    m.def("quadratic_form_value", &quadratic_form_value);

    m.def("tail_l2", &tail_l2, py::arg("coeffs"), py::arg("i"), py::arg("j"), py::arg("r"));
    m.def("tail_hm1", &tail_hm1, py::arg("coeffs"), py::arg("laplacian"), py::arg("i"),
          py::arg("j"), py::arg("r"));
    m.def("cutoff_l2", &cutoff_l2, py::arg("eps"), py::arg("n"), py::arg("max_sup"),
          py::arg("dimension"), py::arg("calib") = 1.0);
    m.def("cutoff_hm1", &cutoff_hm1, py::arg("eps"), py::arg("n"), py::arg("max_sup"),
          py::arg("dimension"), py::arg("calib") = 1.0);
    m.def(
        "oracle_rank_l2",
        [](const SpectralBasis &b, int n, double eps) { return oracle_rank_l2(b, n, eps); },
        py::arg("source"), py::arg("n"), py::arg("eps"));
    m.def(
        "oracle_rank_hm1",
        [](const ProductCoefficients &c, const SpectralBasis &lap, int n, double eps) {
            return oracle_rank_hm1(c, lap, n, eps);
        },
        py::arg("coeffs"), py::arg("laplacian"), py::arg("n"), py::arg("eps"));
    m.def("empirical_rank", [](const ProductCoefficients &c, int n, double eps) {
        return TailTable::l2(c).empirical_rank(n, eps);
    });

    py::class_<GreenSolver>(m, "GreenSolver")
        .def(py::init<const DiscreteOperator &>(), py::arg("laplacian"))
        .def("solve", [](const GreenSolver &g, const Vec &rho) {
            return green_apply(GridFunction(g.grid(), rho), g).values;
        });
    m.def("exact_eri", &exact_eri);
    m.def("fitted_eri", &fitted_eri);

    py::class_<ERIResult>(m, "ERIResult")
        .def_readonly("n", &ERIResult::n)
        .def_readonly("r", &ERIResult::r)
        .def_readonly("eps", &ERIResult::eps)
        .def_readonly("max_abs_error", &ERIResult::max_abs_error)
        .def_readonly("certificate", &ERIResult::certificate)
        .def_readonly("bound_violations", &ERIResult::bound_violations)
        .def_readonly("exact_ops", &ERIResult::exact_ops)
        .def_readonly("fitted_ops", &ERIResult::fitted_ops)
        .def_property_readonly("cost_ratio", &ERIResult::cost_ratio);
    m.def(
        "eri_benchmark",
        [](int n, double eps, const SpectralBasis &l, const SpectralBasis &lap,
           const ProductCoefficients &c, const GreenSolver &g, double calib,
           std::uint64_t seed) {
            ERIOptions o;
            o.calib = calib;
            o.seed = seed;
            return eri_benchmark(n, eps, l, lap, c, g, o);
        },
        py::arg("n"), py::arg("eps"), py::arg("basis_l"), py::arg("basis_lap"),
        py::arg("lap_coeffs"), py::arg("green"), py::arg("calib") = 1.0, py::arg("seed") = 1);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_readwrite("name", &ExperimentConfig::name)
        .def_readwrite("output_dir", &ExperimentConfig::output_dir)
        .def("to_json", [](const ExperimentConfig &c) { return to_json(c).dump(); });
    m.def("parse_config", [](const std::string &text) { return parse_config(text); });
    m.def("load_config", &load_config);
    m.def("preset", [](const std::string &name) { return preset(name); });
    m.def("preset_names", &preset_names);

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("name", &CheckResult::name)
        .def_readonly("passed", &CheckResult::passed)
        .def_readonly("value", &CheckResult::value)
        .def_readonly("limit", &CheckResult::limit)
        .def_readonly("detail", &CheckResult::detail);
    py::class_<RunResult>(m, "RunResult")
        .def_readonly("exit_code", &RunResult::exit_code)
        .def_readonly("checks", &RunResult::checks)
        .def_readonly("files", &RunResult::files);
    py::class_<Experiment>(m, "Experiment")
        .def(py::init<ExperimentConfig>())
        .def_property_readonly("grid", &Experiment::grid)
        .def("run",
             [](Experiment &e, const std::string &command, const std::filesystem::path &out) {
                 return run(e, command_from_string(command), out);
             },
             py::arg("command"), py::arg("out_dir"));
}
