#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>

#include "adhesion/acceptance.hpp"
#include "adhesion/convexkit.hpp"
#include "adhesion/fields.hpp"
#include "adhesion/flow.hpp"
#include "adhesion/riemann3.hpp"

namespace py = pybind11;
using namespace adhesion;

namespace {

using P2 = std::array<double, 2>;

Vec2 v(P2 a) { return {a[0], a[1]}; }
P2 p(Vec2 a) { return {a.x, a.y}; }

py::object parse_json(const std::string& s) { return py::module_::import("json").attr("loads")(s); }

// 1D values on lo..hi, or a 2D array on [lo, hi]^2
ScalarField field_of(py::array_t<double, py::array::c_style | py::array::forcecast> a, double lo, double hi) {
    if (a.ndim() == 1) {
        Grid g = Grid::line(lo, hi, int(a.shape(0)));
        return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
    }
    if (a.ndim() == 2) {
        Grid g = Grid::box({lo, lo}, {hi, hi}, int(a.shape(0)), int(a.shape(1)));
        return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
    }
    throw py::value_error("expected a 1D or 2D array");
}

py::array_t<double> array_of(const ScalarField& f) {
    std::vector<py::ssize_t> shape;
    if (f.grid.dim == 1)
        shape = {f.grid.n[0]};
    else
        shape = {f.grid.n[0], f.grid.n[1]};
    py::array_t<double> out(shape);
    std::copy(f.values.begin(), f.values.end(), out.mutable_data());
    return out;
}

std::vector<Vec2> points(const std::vector<P2>& a) {
    std::vector<Vec2> r;
    r.reserve(a.size());
    for (auto& x : a) r.push_back(v(x));
    return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "adhesion dynamics core";

    py::class_<PotentialSpec>(m, "PotentialSpec")
        .def_static("zero", &PotentialSpec::zero, py::arg("dim") = 2)
        .def_static("linear", [](P2 a, int dim) { return PotentialSpec::linear(v(a), dim); }, py::arg("v"),
                    py::arg("dim") = 2)
        .def_static("min_of", [](const std::vector<P2>& a, int dim) { return PotentialSpec::min_of(points(a), dim); },
                    py::arg("vectors"), py::arg("dim") = 2)
        .def_static("quadratic", &PotentialSpec::quadratic, py::arg("base"), py::arg("lambda_"),
                    py::arg("radius") = 4.0)
        .def_static("from_json", &PotentialSpec::from_json)
        .def("to_json", &PotentialSpec::to_json)
        .def_readonly("dim", &PotentialSpec::dim)
        .def_readonly("K", &PotentialSpec::K)
        .def_readonly("lambda_", &PotentialSpec::lambda)
        .def("__repr__", [](const PotentialSpec& s) { return "PotentialSpec(" + s.to_json() + ")"; });

    m.def("eval_phi", [](const PotentialSpec& s, P2 y) { return eval_phi(s, v(y)); });
    m.def("hopf_lax_u", [](const PotentialSpec& s, P2 x, double t) { return hopf_lax_u(s, v(x), t); });
    m.def("hopf_lax_w", [](const PotentialSpec& s, P2 x, double t) { return hopf_lax_w(s, v(x), t); });
    m.def("cole_hopf_u", [](const PotentialSpec& s, P2 x, double t, double eps) {
        ViscousParams vp;
        vp.eps = eps;
        return cole_hopf_u(s, v(x), t, vp);
    });
    m.def("cole_hopf_grad", [](const PotentialSpec& s, P2 x, double t, double eps) {
        ViscousParams vp;
        vp.eps = eps;
        return p(cole_hopf_grad(s, v(x), t, vp));
    });

    m.def("has_exact_flow", &has_exact_flow);
    m.def("exact_flow", [](const PotentialSpec& s, P2 y, double t) { return p(exact_flow(s, v(y), t)); });
    m.def("exact_transport", [](const PotentialSpec& s, P2 y, double t) { return p(exact_transport(s, v(y), t)); });
    m.def(
        "viscous_paths",
        [](const PotentialSpec& s, const std::vector<P2>& seeds, const std::vector<double>& times, double eps) {
            ViscousParams vp;
            vp.eps = eps;
            auto b = integrate_viscous(s, points(seeds), times, vp);
            py::array_t<double> out({py::ssize_t(b.n_seeds()), py::ssize_t(b.n_times()), py::ssize_t(2)});
            double* d = out.mutable_data();
            for (auto& x : b.positions) *d++ = x.x, *d++ = x.y;
            return out;
        },
        py::arg("spec"), py::arg("seeds"), py::arg("times"), py::arg("eps"));

    m.def("convexify", [](py::array_t<double> a, double lo, double hi) { return array_of(convexify(field_of(a, lo, hi))); },
          py::arg("values"), py::arg("lo"), py::arg("hi"));

    py::class_<ThreeSectorProblem>(m, "ThreeSectorProblem")
        .def_property_readonly("v", [](const ThreeSectorProblem& q) { return std::vector<P2>{p(q.v[0]), p(q.v[1]), p(q.v[2])}; })
        .def_property_readonly("b", [](const ThreeSectorProblem& q) { return p(q.b); })
        .def_readonly("sticky", &ThreeSectorProblem::sticky)
        .def_readonly("area", &ThreeSectorProblem::area)
        .def_property_readonly("xi", [](const ThreeSectorProblem& q) { return q.xi; });

    m.def("build", [](P2 a, P2 b, P2 c) { return build(v(a), v(b), v(c)); });
    m.def("locate", [](const ThreeSectorProblem& q, P2 x, double t) { return locate(q, v(x), t).to_string(); });
    m.def("exact_X", [](const ThreeSectorProblem& q, P2 y, double t) { return p(exact_X(q, v(y), t)); });
    m.def("exact_T", [](const ThreeSectorProblem& q, P2 y, double t) { return p(exact_T(q, v(y), t)); });
    m.def("t_star", [](const ThreeSectorProblem& q, P2 y) { return t_star(q, v(y)); });
    m.def(
        "riemann3_report",
        [](const ThreeSectorProblem& q, double t, int oracle_n, std::uint64_t seed) {
            OracleOptions oo;
            oo.n = oracle_n;
            oo.bins = std::max(8, oracle_n / 2);
            return parse_json(riemann3_report(q, t, oracle_n > 0 ? &oo : nullptr, 2000, seed).to_json());
        },
        py::arg("problem"), py::arg("t"), py::arg("oracle_n") = 0, py::arg("seed") = 1);

    m.def(
        "run_acceptance",
        [](const std::vector<int>& only, std::uint64_t seed) {
            py::list out;
            for (auto& r : run_acceptance(only, seed)) {
                py::dict d;
                d["id"] = r.id;
                d["title"] = r.title;
                d["pass"] = r.pass;
                d["detail"] = r.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("only") = std::vector<int>{}, py::arg("seed") = 1);
}
