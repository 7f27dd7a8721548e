#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "subrk/errors.hpp"
#include "subrk/harness.hpp"
#include "subrk/heisenberg_kernel.hpp"
#include "subrk/lie_words.hpp"
#include "subrk/operator_algebra.hpp"
#include "subrk/riemannian_kernel.hpp"
#include "subrk/special_functions.hpp"
#include "subrk/subelliptic_kernel.hpp"

namespace py = pybind11;
using namespace subrk;

namespace {

Space space_of(const std::string& s) {
    if (s == "su2") return Space::su2;
    if (s == "sphere") return Space::sphere;
    throw UsageError("space must be 'su2' or 'sphere'");
}

ConvergenceConfig convergence_config(const std::vector<double>& t_grid, double rel_tol, bool cross_check) {
    ConvergenceConfig c;
    if (!t_grid.empty()) c.t_grid = t_grid;
    c.rel_tol = rel_tol;
    c.cross_check = cross_check;
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Heat kernels and Hermite functions on SU(2), CR spheres and Heisenberg groups";

    static py::exception<Error> base(m, "SubrkError");
    static py::exception<UsageError> usage(m, "UsageError", base.ptr());
    static py::exception<DomainError> domain(m, "DomainError", base.ptr());
    static py::exception<NumericalError> numerical(m, "NumericalError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const UsageError& e) {
            PyErr_SetString(usage.ptr(), e.what());
        } catch (const DomainError& e) {
            PyErr_SetString(domain.ptr(), e.what());
        } catch (const NumericalError& e) {
            PyErr_SetString(numerical.ptr(), e.what());
        } catch (const Error& e) {
            PyErr_SetString(base.ptr(), e.what());
        }
    });

    m.def("acos_sq_derivs", &acos_sq_derivs, py::arg("x"), py::arg("n_max"),
          "d^k/dx^k arccos(x)^2 for k = 0..n_max, x in (-1, 1]");
    m.def("acosh_sq_derivs", &acosh_sq_derivs, py::arg("x"), py::arg("n_max"),
          "d^k/dx^k arccosh(x)^2 for k = 0..n_max, x >= 1");

    m.def("q_su2", [](double t, double x) { return q_su2(t, x); }, py::arg("t"), py::arg("x"),
          "Riemannian kernel on SU(2) at x = cos(distance)");
    m.def(
        "q_su2_deriv",
        [](double t, double x, int order) {
            return q_su2_derivs(t, x, order).value(static_cast<std::size_t>(order));
        },
        py::arg("t"), py::arg("x"), py::arg("order"));
    m.def(
        "q_sphere",
        [](double t, int d, double x, int order) {
            return q_sphere(t, d, x, order).value(static_cast<std::size_t>(order));
        },
        py::arg("t"), py::arg("d"), py::arg("x"), py::arg("order") = 0,
        "Riemannian kernel on S^{2d+1} (or its x-derivative)");

    m.def(
        "p",
        [](const std::string& space, double r, double z, double t, int d) {
            SubellipticPoint pt{r, z, t, d};
            return space_of(space) == Space::su2 ? p_su2(pt) : p_sphere(pt);
        },
        py::arg("space"), py::arg("r"), py::arg("z"), py::arg("t"), py::arg("d") = 1,
        "subelliptic heat kernel p_t(r, z)");
    m.def(
        "p_derivs",
        [](const std::string& space, double r, double z, double t, int n_r, int n_z, int d) {
            return p_derivs(space_of(space), {r, z, t, d}, n_r, n_z);
        },
        py::arg("space"), py::arg("r"), py::arg("z"), py::arg("t"), py::arg("n_r"), py::arg("n_z"),
        py::arg("d") = 1);
    m.def(
        "p_contour",
        [](const std::string& space, double r, double z, double t, int d) {
            ContourValue v = p_contour(space_of(space), {r, z, t, d});
            return py::make_tuple(v.value, v.err);
        },
        py::arg("space"), py::arg("r"), py::arg("z"), py::arg("t"), py::arg("d") = 1,
        "(value, error estimate) by the shifted contour");

    m.def(
        "h",
        [](int d, double t, double r, double z) { return h_kernel({d, t}, r, z); }, py::arg("d"), py::arg("t"),
        py::arg("r"), py::arg("z"), "Heisenberg heat kernel h_t(r, z) on H^{2d+1}");
    m.def(
        "h_derivs",
        [](int d, double t, double r, double z, int n_r, int n_z) { return h_derivs({d, t}, r, z, n_r, n_z); },
        py::arg("d"), py::arg("t"), py::arg("r"), py::arg("z"), py::arg("n_r"), py::arg("n_z"));

    m.def(
        "parse_word",
        [](const std::string& alphabet, const std::string& word, int d) {
            return LieWord::parse(parse_alphabet(alphabet), d, word).to_string();
        },
        py::arg("alphabet"), py::arg("word"), py::arg("d") = 1, "canonical comma form of a word");
    m.def(
        "hermite",
        [](const std::string& space, const std::string& word, double t, const std::vector<cplx>& point, int d) {
            Alphabet a = parse_alphabet(space);
            if (a == Alphabet::su2) d = 1;
            return hermite(a, LieWord::parse(a, d, word), t, point);
        },
        py::arg("space"), py::arg("word"), py::arg("t"), py::arg("point"), py::arg("d") = 1,
        "Hermite function K_w(t, point) = (w p_t)(point) / p_t(point)");

    m.def(
        "converge_su2",
        [](const std::string& word, double r, double theta, double z, const std::vector<double>& t_grid,
           double rel_tol) {
            return to_json(converge_su2(LieWord::su2(word), r, theta, z, convergence_config(t_grid, rel_tol, true)));
        },
        py::arg("word"), py::arg("r"), py::arg("theta"), py::arg("z"), py::arg("t_grid") = std::vector<double>{},
        py::arg("rel_tol") = 0.05, "convergence report as a JSON string");
    m.def(
        "converge_sphere",
        [](const std::string& word, int d, const std::vector<cplx>& w, double z, const std::vector<double>& t_grid,
           double rel_tol, bool cross_check) {
            return to_json(converge_sphere(LieWord::parse(Alphabet::sphere, d, word), w, z,
                                           convergence_config(t_grid, rel_tol, cross_check)));
        },
        py::arg("word"), py::arg("d"), py::arg("w"), py::arg("z"), py::arg("t_grid") = std::vector<double>{},
        py::arg("rel_tol") = 0.05, py::arg("cross_check") = true, "convergence report as a JSON string");
    m.def("default_t_grid", &default_t_grid);

    m.def(
        "lemma_suite", [](int max_order) { return to_json(lemma_suite({max_order})); }, py::arg("max_order") = 4,
        "lemma suite report as a JSON string");
    m.def(
        "property_suite",
        [](bool include_normalization) {
            PropertyConfig c;
            c.include_normalization = include_normalization;
            return to_json(property_suite(c));
        },
        py::arg("include_normalization") = true, "property suite report as a JSON string");
    m.def("su2_mass", [](double t) { return su2_mass(t); }, py::arg("t"));
}
