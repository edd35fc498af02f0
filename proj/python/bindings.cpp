#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "elemnorm/elemop.hpp"
#include "elemnorm/tgm.hpp"

namespace py = pybind11;
using namespace elemnorm;

namespace {

OptimizerConfig make_config(int restarts, std::uint64_t seed, int threads) {
    OptimizerConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.parallel = threads != 1;
    cfg.threads = threads;
    cfg.validate();
    return cfg;
}

ElementaryOperator make_operator(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    return ElementaryOperator(a, b);
}

}  // namespace

PYBIND11_MODULE(_elemnorm, m) {
    m.doc() = "Norms of elementary operators on matrix algebras";

    static py::exception<Error> error(m, "ElemnormError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    py::class_<Certificate>(m, "Certificate")
        .def_readonly("xi", &Certificate::xi)
        .def_readonly("eta", &Certificate::eta)
        .def_readonly("x", &Certificate::x);

    py::class_<NormReport>(m, "NormReport")
        .def_readonly("value", &NormReport::value)
        .def_property_readonly("method", [](const NormReport& r) { return std::string(to_string(r.method)); })
        .def_readonly("certificate", &NormReport::certificate)
        .def_readonly("restarts_used", &NormReport::restarts_used)
        .def_readonly("converged", &NormReport::converged)
        .def_readonly("seed", &NormReport::seed)
        .def_readonly("converged_fraction", &NormReport::converged_fraction)
        .def_readonly("per_restart_values", &NormReport::per_restart_values)
        .def("__repr__", [](const NormReport& r) {
            return "NormReport(value=" + std::to_string(r.value) + ", method=" + to_string(r.method) + ")";
        });

    py::class_<ElementaryOperator>(m, "ElementaryOperator")
        .def(py::init(&make_operator), py::arg("a"), py::arg("b"))
        .def_property_readonly("dim", &ElementaryOperator::dim)
        .def_property_readonly("length", &ElementaryOperator::length)
        .def_property_readonly("a", [](const ElementaryOperator& t) { return t.a().matrices(); })
        .def_property_readonly("b", [](const ElementaryOperator& t) { return t.b().matrices(); })
        .def("__call__", [](const ElementaryOperator& t, const Matrix& x) { return elemnorm::apply(t, x); });

    py::class_<GrowthRow>(m, "GrowthRow")
        .def_readonly("k", &GrowthRow::k)
        .def_readonly("norm", &GrowthRow::norm)
        .def_readonly("k_bound", &GrowthRow::k_bound)
        .def_readonly("step_bound", &GrowthRow::step_bound)
        .def_readonly("k_bound_ok", &GrowthRow::k_bound_ok)
        .def_readonly("step_bound_ok", &GrowthRow::step_bound_ok);

    py::class_<GrowthTable>(m, "GrowthTable")
        .def_readonly("rows", &GrowthTable::rows)
        .def_readonly("cb", &GrowthTable::cb)
        .def_readonly("cb_bound", &GrowthTable::cb_bound)
        .def_property_readonly("all_ok", &GrowthTable::all_ok);

    m.def("tgm", [](const Matrix& x, const Matrix& y) { return tgm(PsdMatrix(x), PsdMatrix(y)); },
          py::arg("x"), py::arg("y"));
    m.def("sharp_mean",
          [](const Matrix& x, const Matrix& y) {
              const SharpMean s = sharp_mean(PsdMatrix(x), PsdMatrix(y));
              return py::make_tuple(s.mean.matrix(), s.regularization);
          },
          py::arg("x"), py::arg("y"));
    m.def("s1_vector_norm", &s1_vector_norm, py::arg("vectors"));

    m.def("norm_tgm",
          [](const ElementaryOperator& t, int restarts, std::uint64_t seed, int threads) {
              return norm_tgm(t, make_config(restarts, seed, threads));
          },
          py::arg("op"), py::arg("restarts") = 64, py::arg("seed") = 0, py::arg("threads") = 1);
    m.def("norm_s1",
          [](const ElementaryOperator& t, int restarts, std::uint64_t seed, int threads) {
              return norm_s1(t, make_config(restarts, seed, threads));
          },
          py::arg("op"), py::arg("restarts") = 64, py::arg("seed") = 0, py::arg("threads") = 1);
    m.def("oracle_norm_unitary",
          [](const ElementaryOperator& t, int restarts, std::uint64_t seed, int threads) {
              return oracle_norm_unitary(t, make_config(restarts, seed, threads));
          },
          py::arg("op"), py::arg("restarts") = 64, py::arg("seed") = 0, py::arg("threads") = 1);
    m.def("knorm",
          [](const ElementaryOperator& t, Index k, const std::string& method, int restarts,
             std::uint64_t seed, int threads) {
              const OptimizerConfig cfg = make_config(restarts, seed, threads);
              if (method == "amplify") {
                  return knorm(t, k, cfg);
              }
              if (method == "factorial") {
                  return knorm_factorial(t, k, cfg);
              }
              throw Error(ErrorCode::InvalidInput, "method must be 'amplify' or 'factorial'");
          },
          py::arg("op"), py::arg("k"), py::arg("method") = "amplify", py::arg("restarts") = 64,
          py::arg("seed") = 0, py::arg("threads") = 1);
    m.def("cb_norm",
          [](const ElementaryOperator& t, int restarts, std::uint64_t seed, int threads) {
              return cb_norm(t, make_config(restarts, seed, threads));
          },
          py::arg("op"), py::arg("restarts") = 64, py::arg("seed") = 0, py::arg("threads") = 1);
    m.def("growth_check",
          [](const ElementaryOperator& t, Index k_max, double slack, int restarts, std::uint64_t seed) {
              return growth_check(t, k_max, make_config(restarts, seed, 1), slack);
          },
          py::arg("op"), py::arg("k_max"), py::arg("slack") = 1e-5, py::arg("restarts") = 64,
          py::arg("seed") = 0);
    m.def("haagerup_upper_bound", &haagerup_upper_bound, py::arg("op"), py::arg("balance") = false);
    m.def("functional_norm",
          [](const ElementaryOperator& t, const Vector& xi, const Vector& eta) {
              return functional_norm(t, UnitVector(xi), UnitVector(eta));
          },
          py::arg("op"), py::arg("xi"), py::arg("eta"));
    m.def("linearly_independent",
          [](const std::vector<Matrix>& b) {
              return linearly_independent(CoefficientTuple(b, Orientation::Column)).independent;
          },
          py::arg("b"));
    m.def("equality_gap",
          [](const ElementaryOperator& t, int restarts, std::uint64_t seed) {
              return haagerup_equality_gap(t.a(), t.b(), make_config(restarts, seed, 1)).gap;
          },
          py::arg("op"), py::arg("restarts") = 64, py::arg("seed") = 0);

    m.def("transpose_operator", &transpose_operator, py::arg("n"));
    m.def("first_row_transpose_operator", &first_row_transpose_operator, py::arg("n"));
    m.def("random_operator",
          [](Index n, Index l, std::uint64_t seed) {
              auto rng = keyed_rng(seed, 0);
              return random_operator(n, l, rng);
          },
          py::arg("n"), py::arg("l"), py::arg("seed") = 0);
}
