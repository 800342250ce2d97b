#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "floqcert/eigcert.hpp"
#include "floqcert/errors.hpp"
#include "floqcert/hilbert.hpp"
#include "floqcert/problems.hpp"
#include "floqcert/version.hpp"

namespace py = pybind11;
using namespace floqcert;

namespace {

// Heavy calls release the GIL; pybind11 reacquires it inside each Python callback,
// so callback systems work with any worker count but gain nothing past 1.
DdeSystem py_scalar_dde(std::function<cplx(double)> a, std::function<cplx(double)> b) {
    return scalar_dde(std::move(a), std::move(b));
}

py::dict cert_dict(const Certification& c) {
    py::dict d;
    d["lambdas"] = c.lambdas;
    d["condV"] = c.condV;
    d["uhat_norm"] = c.uhat_norm;
    d["C_A"] = c.C_A;
    d["nu"] = c.nus;
    d["xi"] = c.xis;
    d["eps"] = c.epss;
    d["omega"] = c.omegas;
    d["k_min"] = c.k_min;
    d["radius"] = c.radius;
    d["delta"] = c.delta;
    d["verdict"] = to_string(c.verdict);
    d["stable"] = c.stable;
    d["notes"] = c.notes;
    return d;
}

py::dict bound_dict(const FundamentalBound& b) {
    py::dict d;
    d["value"] = b.value;
    d["provenance"] = to_string(b.provenance);
    d["iterations"] = b.iterations;
    d["history"] = b.history;
    d["resolved"] = b.resolved;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "FloqcertError", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

    m.def("collocation_points", [](int N) { return collocation_points(N).points(); }, py::arg("N"));
    m.def("diff_matrix", &diff_matrix, py::arg("N"));
    m.def("little_l_N", &little_l_N, py::arg("N"), py::arg("t"));
    m.def("little_l_N_norm", &little_l_N_norm, py::arg("N"));
    m.def("tilde_scale", &tilde_scale, py::arg("k"));

    m.def("problem_names", &problem_names);

    py::class_<DdeSystem>(m, "DdeSystem").def_readonly("dim", &DdeSystem::dim);
    m.def("scalar_dde", &py_scalar_dde, py::arg("a"), py::arg("b"),
          "Scalar DDE y'(t) = a(t) y(t) + b(t) y(t-2) on [-1,1] from two Python callables.");
    m.def(
        "registry_dde", [](const std::string& name, const Params& p, double period) { return make_dde(name, p, period).sys; },
        py::arg("name"), py::arg("params") = Params{}, py::arg("period") = 2.0);

    py::class_<MonodromyMatrix>(m, "MonodromyMatrix")
        .def_property_readonly("degree", &MonodromyMatrix::degree)
        .def_property_readonly("dim", &MonodromyMatrix::dim)
        .def_property_readonly("matrix", &MonodromyMatrix::matrix)
        .def_property_readonly("eigenvalues", [](const MonodromyMatrix& M) { return M.eigen().values; })
        .def_property_readonly("spectral_radius", &spectral_radius);

    m.def("build_monodromy", &build_monodromy, py::arg("sys"), py::arg("N"), py::call_guard<py::gil_scoped_release>());

    m.def(
        "fundamental_bound",
        [](const DdeSystem& sys, int N, int workers) {
            FundamentalBound b;
            {
                py::gil_scoped_release release;
                b = default_fundamental_bound(sys, N, workers);
            }
            return bound_dict(b);
        },
        py::arg("sys"), py::arg("N"), py::arg("workers") = 1);

    m.def(
        "bootstrap_homogeneous",
        [](const std::string& name, const Params& p, int N, double period) {
            auto [A, dim] = make_homogeneous(name, p, period);
            FundamentalBound b;
            {
                py::gil_scoped_release release;
                b = bootstrap_bound(A, dim, N);
            }
            return bound_dict(b);
        },
        py::arg("name"), py::arg("params") = Params{}, py::arg("N") = 50, py::arg("period") = 2.0);

    m.def(
        "certify",
        [](const DdeSystem& sys, int N, double delta, double ellipse_s, std::optional<double> A_E,
           std::optional<double> B_E, std::optional<double> C_lambda, std::optional<double> C_A, int workers) {
            RegularityEllipse ell(ellipse_s);
            EllipseData data;
            if (C_lambda) data.C_lambda = *C_lambda;
            if (A_E) data.A_E = *A_E;
            if (B_E) data.B_E = *B_E;
            if (!C_lambda && !(A_E && B_E)) throw InvalidArgument("certify needs A_E and B_E, or C_lambda");
            Certification c;
            {
                py::gil_scoped_release release;
                auto M = build_monodromy(sys, N);
                FundamentalBound bound;
                if (C_A) {
                    bound.value = *C_A;
                    bound.provenance = BoundProvenance::UserSupplied;
                } else {
                    bound = default_fundamental_bound(sys, N, workers);
                }
                c = certify(sys, M, bound, ell, data, delta, CertifyOptions{workers});
            }
            return cert_dict(c);
        },
        py::arg("sys"), py::arg("N"), py::arg("delta"), py::arg("ellipse_s"), py::arg("A_E") = py::none(),
        py::arg("B_E") = py::none(), py::arg("C_lambda") = py::none(), py::arg("C_A") = py::none(),
        py::arg("workers") = 1);

    m.def(
        "certify_registry",
        [](const std::string& name, const Params& p, int N, double delta, double ellipse_s, double period, int workers) {
            Certification c;
            {
                py::gil_scoped_release release;
                auto prob = make_dde(name, p, period);
                RegularityEllipse ell(ellipse_s);
                EllipseData data = prob.ellipse ? prob.ellipse(ell, delta) : estimate_ellipse_data(prob.sys, ell, delta);
                auto M = build_monodromy(prob.sys, N);
                c = certify(prob.sys, M, default_fundamental_bound(prob.sys, N, workers), ell, data, delta,
                            CertifyOptions{workers});
            }
            return cert_dict(c);
        },
        py::arg("name"), py::arg("params") = Params{}, py::arg("N") = 64, py::arg("delta") = 0.2,
        py::arg("ellipse_s") = 0.5, py::arg("period") = 2.0, py::arg("workers") = 0);

    m.def(
        "solve_registry",
        [](const std::string& name, const Params& p, int N) {
            auto prob = make_ivp(name, p);
            auto sol = solve_ivp(prob.ivp, N);
            double err = 0.0;
            if (prob.ivp.dim == 1) {
                err = scalar_growth_constant([A = prob.ivp.A](double t) { return A(t)(0, 0); }).value;
                err = apost_certificate(prob.ivp, sol, err).err_sup;
                if (prob.constant_a)
                    err = std::min(err, constant_coeff_certificate(*prob.constant_a,
                                                                   [u = prob.ivp.u](double t) { return u(t)[0]; },
                                                                   prob.ivp.y0[0], sol));
            } else {
                err = apost_certificate(prob.ivp, sol, bootstrap_bound(prob.ivp.A, prob.ivp.dim, N).value).err_sup;
            }
            py::dict d;
            d["nodes"] = sol.grid.points();
            d["values"] = sol.values;
            d["err_sup"] = err;
            return d;
        },
        py::arg("name"), py::arg("params") = Params{}, py::arg("N") = 32);

    m.def("bauer_fike", &bauer_fike_matrix, py::arg("A"), py::arg("B"));
}
