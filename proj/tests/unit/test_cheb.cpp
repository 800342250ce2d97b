#include <doctest.h>

#include <cmath>
#include <random>

#include "floqcert/cheb.hpp"
#include "floqcert/errors.hpp"
#include "oracles.hpp"

using namespace floqcert;

namespace {

ChebPoly poly_from(const std::function<cplx(double)>& f, int N) { return interpolate(f, N); }

double sampled_sup(const std::function<cplx(double)>& f, int n = 1000) {
    double m = 0.0;
    for (double t : oracle::linspace(-1, 1, n)) m = std::max(m, std::abs(f(t)));
    return m;
}

}  // namespace

TEST_CASE("grid nodes") {
    CHECK_THROWS_AS(collocation_points(0), InvalidArgument);
    auto g1 = collocation_points(1);
    CHECK(g1[0] == 1.0);
    CHECK(g1[1] == -1.0);
    auto g2 = collocation_points(2);
    CHECK(std::abs(g2[1]) < 1e-16);
    auto g4 = collocation_points(4);
    CHECK(g4[1] == doctest::Approx(0.7071067811865476).epsilon(1e-15));
    for (int N : {1, 5, 16, 73, 184}) {
        auto g = collocation_points(N);
        CHECK(g[0] == 1.0);
        CHECK(g[N] == -1.0);
        for (int j = 0; j <= N; ++j) {
            CHECK(std::abs(g[j] - std::cos(oracle::pi * j / N)) < 4e-16);
            if (j > 0) CHECK(g[j] < g[j - 1]);
        }
    }
}

TEST_CASE("differentiation matrix") {
    RMatrix D1 = diff_matrix(1);
    CHECK(D1(0, 0) == doctest::Approx(0.5));
    CHECK(D1(0, 1) == doctest::Approx(-0.5));
    CHECK(D1(1, 0) == doctest::Approx(0.5));
    CHECK(D1(1, 1) == doctest::Approx(-0.5));

    SUBCASE("matches explicit Lagrange derivative") {
        for (int N : {2, 3, 7, 12}) {
            RMatrix diff = diff_matrix(N) - oracle::lagrange_diff(N);
            CHECK(diff.cwiseAbs().maxCoeff() < 1e-11 * N * N);
        }
    }
    SUBCASE("row sums vanish") {
        for (int N = 1; N <= 64; ++N) CHECK(diff_matrix(N).rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("cubic differentiated exactly at N=5") {
        auto g = collocation_points(5);
        RVector v(6), dv(6);
        for (int j = 0; j <= 5; ++j) {
            v[j] = std::pow(g[j], 3);
            dv[j] = 3 * g[j] * g[j];
        }
        CHECK((diff_matrix(5) * v - dv).cwiseAbs().maxCoeff() < 1e-13);
    }
    SUBCASE("exact on random polynomials of degree <= N") {
        std::mt19937 rng(7);
        std::normal_distribution<double> nd;
        for (int N : {4, 16, 40, 64}) {
            RVector a(N + 1);
            for (auto& x : a) x = nd(rng);
            auto g = collocation_points(N);
            RVector v(N + 1), dv(N + 1);
            for (int j = 0; j <= N; ++j) {
                double t = g[j];
                v[j] = 0;
                dv[j] = 0;
                // Chebyshev series and its derivative via U_{k-1}
                for (int k = 0; k <= N; ++k) {
                    v[j] += a[k] * oracle::cheb_T(k, t);
                    if (k > 0) {
                        double d;
                        if (std::abs(t) == 1.0) d = std::pow(t, k + 1) * k * k;
                        else d = k * std::sin(k * std::acos(t)) / std::sqrt(1 - t * t);
                        dv[j] += a[k] * d;
                    }
                }
            }
            RVector err = diff_matrix(N) * v - dv;
            CHECK(err.cwiseAbs().maxCoeff() < 1e-10 * dv.cwiseAbs().maxCoeff());
        }
    }
    SUBCASE("nilpotent for small N") {
        std::mt19937 rng(3);
        std::normal_distribution<double> nd;
        for (int N = 1; N <= 10; ++N) {
            RVector v(N + 1);
            for (auto& x : v) x = nd(rng);
            RVector w = v;
            RMatrix D = diff_matrix(N);
            for (int i = 0; i <= N; ++i) w = D * w;
            // rounding D's entries once already leaves eps*|D|^(N+1)
            double floor = 1e-8;
            if (N > 6) floor = 100 * kEps * std::pow(D.norm(), N + 1);
            CHECK(w.cwiseAbs().maxCoeff() < floor * v.norm());
        }
    }
}

TEST_CASE("coefficient transform") {
    SUBCASE("basis function T_3") {
        auto p = poly_from([](double t) { return oracle::cheb_T(3, t); }, 5);
        auto c = cheb_coeffs(p);
        for (int k = 0; k <= 5; ++k) CHECK(std::abs(c.coeffs(k, 0) - (k == 3 ? 1.0 : 0.0)) < 1e-15);
    }
    SUBCASE("constant") {
        auto c = cheb_coeffs(poly_from([](double) { return 1.0; }, 9));
        CHECK(std::abs(c.coeffs(0, 0) - 1.0) < 1e-15);
        CHECK(c.coeffs.col(0).tail(9).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("agrees with the cosine-sum matrix") {
        std::mt19937 rng(11);
        std::normal_distribution<double> nd;
        for (int N : {1, 2, 3, 8, 31, 64, 100}) {
            CVector v(N + 1);
            for (auto& x : v) x = cplx(nd(rng), nd(rng));
            auto c = cheb_coeffs(ChebPoly(collocation_points(N), v));
            CHECK((c.coeffs.col(0) - oracle::cosine_sum_coeffs(v)).cwiseAbs().maxCoeff() < 1e-13 * v.norm());
        }
    }
    SUBCASE("roundtrip on random complex data") {
        std::mt19937 rng(5);
        std::normal_distribution<double> nd;
        for (int N : {1, 4, 64, 185}) {
            CMatrix v(N + 1, 3);
            for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = cplx(nd(rng), nd(rng));
            auto back = cheb_values(cheb_coeffs(ChebPoly(collocation_points(N), v)));
            double rel = (back.values - v).cwiseAbs().maxCoeff() / v.cwiseAbs().maxCoeff();
            CHECK(rel < 100 * kEps * (N + 1));
            CMatrix a = v;
            auto fwd = cheb_coeffs(cheb_values(ChebCoeffs{a}));
            CHECK((fwd.coeffs - a).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff() < 100 * kEps * (N + 1));
        }
        CVector v(65);
        for (auto& x : v) x = cplx(nd(rng), nd(rng));
        auto back = cheb_values(cheb_coeffs(ChebPoly(collocation_points(64), v)));
        CHECK((back.values.col(0) - v).cwiseAbs().maxCoeff() < 1e-13 * v.norm());
    }
}

TEST_CASE("barycentric evaluation") {
    SUBCASE("node reproduction") {
        auto p = poly_from([](double t) { return std::exp(t); }, 12);
        for (int j = 0; j <= 12; ++j) CHECK(bary_eval(p, p.grid[j], 0) == p.values(j, 0));
    }
    SUBCASE("reproduces polynomials at random points") {
        std::mt19937 rng(13);
        std::normal_distribution<double> nd;
        std::uniform_real_distribution<double> ud(-1, 1);
        for (int N : {3, 10, 32, 64}) {
            CVector a(N + 1);
            for (auto& x : a) x = cplx(nd(rng), nd(rng));
            auto p = poly_from([&](double t) { return oracle::eval_series(a, t); }, N);
            for (int i = 0; i < 100; ++i) {
                double t = ud(rng);
                cplx exact = oracle::eval_series(a, t);
                CHECK(std::abs(bary_eval(p, t, 0) - exact) < 1e-12 * std::max(1.0, a.cwiseAbs().sum()));
            }
        }
    }
    SUBCASE("vector-valued matches componentwise") {
        ChebGrid g(6);
        CMatrix v(7, 2);
        for (int j = 0; j <= 6; ++j) {
            v(j, 0) = g[j] * g[j];
            v(j, 1) = cplx(0, g[j]);
        }
        ChebPoly p(g, v);
        CVector r = bary_eval(p, 0.3);
        CHECK(std::abs(r[0] - 0.09) < 1e-15);
        CHECK(std::abs(r[1] - cplx(0, 0.3)) < 1e-15);
    }
    SUBCASE("sin 2t at N=100 stays accurate") {
        auto p = poly_from([](double t) { return std::sin(2 * t); }, 100);
        double err = 0;
        for (double t : oracle::linspace(-1, 1, 2001)) err = std::max(err, std::abs(bary_eval(p, t, 0) - std::sin(2 * t)));
        CHECK(err < 1e-12);
    }
    SUBCASE("I_5 sin 2t sampled error") {
        auto p = poly_from([](double t) { return std::sin(2 * t); }, 5);
        double err = sampled_sup([&](double t) { return std::sin(2 * t) - bary_eval(p, t, 0); });
        CHECK(err == doctest::Approx(0.00067538).epsilon(1e-6 / 0.00067538));
    }
}

TEST_CASE("coefficient sup bound") {
    ChebCoeffs t3{CMatrix::Zero(6, 1)};
    t3.coeffs(3, 0) = 1.0;
    CHECK(sup_norm_bound(t3) == doctest::Approx(1.0));

    ChebCoeffs p{CMatrix::Zero(6, 1)};
    p.coeffs(0, 0) = 2.0;
    p.coeffs(4, 0) = -3.0;
    CHECK(sup_norm_bound(p) == doctest::Approx(5.0));
    auto vals = cheb_values(p);
    double fine = sampled_sup([&](double t) { return bary_eval(vals, t, 0); }, 4001);
    CHECK(fine == doctest::Approx(5.0).epsilon(1e-6));

    auto q = poly_from([](double t) { return std::sin(2 * t); }, 5);
    double qs = sampled_sup([&](double t) { return bary_eval(q, t, 0); });
    CHECK(sup_norm_bound(cheb_coeffs(q)) >= qs);
}

TEST_CASE("adaptive sup norm") {
    SUBCASE("sin 2t interpolation residual") {
        auto p = poly_from([](double t) { return std::sin(2 * t); }, 5);
        auto r = adaptive_sup_norm([&](double t) { return std::sin(2 * t) - bary_eval(p, t, 0); });
        CHECK(r.degree == 31);
        CHECK(r.resolved);
        CHECK(std::abs(r.bound - 0.00070975) < 1e-6);
    }
    SUBCASE("zero") {
        auto r = adaptive_sup_norm([](double) { return cplx(0.0); });
        CHECK(r.bound == 0.0);
        CHECK(r.degree == kAdaptiveStartDegree);
    }
    SUBCASE("t squared") {
        auto r = adaptive_sup_norm([](double t) { return cplx(t * t); });
        CHECK(std::abs(r.bound - 1.0) < 1e-12);
    }
    SUBCASE("non-analytic input is flagged") {
        auto r = adaptive_sup_norm([](double t) { return cplx(std::abs(t)); });
        CHECK_FALSE(r.resolved);
        CHECK(r.degree == kAdaptiveMaxDegree);
        CHECK(r.bound >= 1.0);
    }
    SUBCASE("dominates sampled maxima") {
        std::vector<std::function<cplx(double)>> fs = {
            [](double t) { return std::exp(3 * t); },
            [](double t) { return cplx(std::cos(20 * t), std::sin(7 * t)); },
            [](double t) { return 1.0 / (1.0 + 25 * t * t); },
            [](double t) { return std::sin(3 * oracle::pi * t) + 1.0; },
        };
        for (auto& f : fs) {
            auto r = adaptive_sup_norm(f);
            CHECK(r.resolved);
            CHECK(r.bound >= sampled_sup(f));
        }
    }
    SUBCASE("matrix entrywise bound") {
        MatrixFn A = [](double t) {
            CMatrix m(2, 2);
            m << 0, 1, -10 - 9 * std::cos(oracle::pi * t), -1;
            return m;
        };
        auto r = matrix_sup_bound(A, 2);
        CHECK(r.bound == doctest::Approx(std::sqrt(363.0)).epsilon(1e-12));
    }
}

TEST_CASE("node polynomial") {
    for (int N = 1; N <= 20; ++N) {
        double expected = ((N % 2) ? -1.0 : 1.0) * N * std::ldexp(1.0, 2 - N);
        CHECK(std::abs(little_l_N(N, -1.0) - expected) <= 1e-13 * std::abs(expected));
        CHECK(little_l_N(N, 1.0) == 0.0);
        CHECK(little_l_N_norm(N) == doctest::Approx(N * std::ldexp(1.0, 2 - N)));
    }
    CHECK(little_l_N(1, -1.0) == -2.0);
    CHECK(std::abs(little_l_N(3, 0.5)) < 1e-15);

    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ud(-1, 1);
    for (int N = 1; N <= 12; ++N)
        for (int i = 0; i < 50; ++i) {
            double t = ud(rng);
            CHECK(std::abs(little_l_N(N, t) - oracle::node_product(N, t)) < 1e-12);
        }
    for (int N : {4, 9, 15}) {
        for (int j = 0; j < N; ++j) CHECK(std::abs(little_l_N(N, std::cos(oracle::pi * j / N))) < 1e-14);
        for (double t : oracle::linspace(-1, 1, 1000)) CHECK(std::abs(little_l_N(N, t)) <= little_l_N_norm(N) * (1 + 1e-12));
    }
}
