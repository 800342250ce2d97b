#include "floqcert/eigcert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "floqcert/errors.hpp"
#include "floqcert/hilbert.hpp"
#include "floqcert/parallel.hpp"

namespace floqcert {

RegularityEllipse::RegularityEllipse(double s_minor) : s(s_minor) {
    if (!(s_minor > 0.0)) throw InvalidArgument("ellipse semiminor axis must be positive");
    S = std::sqrt(1.0 + s * s);
    eta = std::log(S + s);
}

const char* to_string(ConstantProvenance p) {
    switch (p) {
        case ConstantProvenance::UserSupplied: return "caller-supplied";
        case ConstantProvenance::NumericEstimate: return "numeric-estimate";
    }
    return "unknown";
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "stable";
        case Verdict::NotProven: return "not-stable";
        case Verdict::Unverifiable: return "inconclusive";
    }
    return "unknown";
}

CMatrix gamma_matrix(const MonodromyMatrix& M) {
    const int N = M.degree(), d = M.dim();
    const CMatrix& V = M.eigen().vectors;
    const ChebGrid grid(N);
    CMatrix G(V.rows(), V.cols());
    for (Eigen::Index k = 0; k < V.cols(); ++k) {
        ChebCoeffs c = cheb_coeffs(unstack(grid, V.col(k), d));
        for (int j = 0; j <= N; ++j) c.coeffs.row(j) *= tilde_scale(j);
        for (int j = 0; j <= N; ++j)
            for (int s = 0; s < d; ++s) G(j * d + s, k) = c.coeffs(j, s);
    }
    return G;
}

double cond_vhat(const CMatrix& Gamma) {
    Eigen::BDCSVD<CMatrix> svd(Gamma);
    const auto& sv = svd.singularValues();
    double smax = sv(0), smin = sv(sv.size() - 1);
    if (!(smin >= 1e3 * kEps * smax)) {
        std::ostringstream msg;
        msg << "Gamma is numerically singular (sigma_min=" << smin << ", sigma_max=" << smax << ")";
        throw SingularGamma(msg.str());
    }
    return std::sqrt((smax * smax + 1.0) * (1.0 / (smin * smin) + 1.0));
}

NuTable nu_table(const DdeSystem& sys, const MonodromyMatrix& M, double C_A, int workers) {
    const int N = M.degree(), d = M.dim();
    const ChebGrid grid(N);
    const int l = (N + 1) * d;

    // Node values of \tilde T_j e_s in column j*d + s; U_N applied to them is the collocation solution.
    CMatrix F = CMatrix::Zero(l, l);
    for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j) {
            double v = cheb_tilde(j, grid[i]);
            for (int s = 0; s < d; ++s) F(i * d + s, j * d + s) = v;
        }
    const CMatrix sol = M.matrix() * F;
    const double a_sup = matrix_sup_bound(sys.A, d).bound;

    NuTable out{RMatrix::Zero(N + 1, d), true};
    std::vector<char> ok(l, 1);
    parallel_for(l, worker_count(workers), [&](int col) {
        const int j = col / d, s = col % d;
        LinearIVP ivp;
        ivp.dim = d;
        ivp.A = sys.A;
        ivp.u = [&B = sys.B, j, s](double t) { return CVector(B(t).col(s) * cheb_tilde(j, t)); };
        ivp.y0 = CVector::Zero(d);
        ivp.y0[s] = cheb_tilde(j, 1.0);
        auto cert = apost_certificate(ivp, unstack(grid, sol.col(col), d), C_A, a_sup);
        out.nu(j, s) = h1_bound_from_sup(cert.err_sup, cert.deriv_err_sup);
        ok[col] = cert.resolved;
    });
    out.resolved = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
    return out;
}

std::vector<double> eps_sequence(const RegularityEllipse& ell, const EllipseData& data, double delta, int N,
                                 int dim) {
    if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
    double pre;
    if (data.C_lambda)
        pre = 8.0 * std::sqrt(static_cast<double>(dim)) * *data.C_lambda / std::sinh(ell.eta);
    else if (dim == 1)
        pre = 8.0 / std::sinh(ell.eta) * std::exp(data.A_E + data.B_E / delta);
    else
        throw InvalidArgument("systems need C_lambda");
    std::vector<double> eps(N);
    for (int k = 1; k <= N; ++k) eps[k - 1] = pre * k * std::exp(-k * ell.eta);
    return eps;
}

Certification certify(const DdeSystem& sys, const MonodromyMatrix& M, const FundamentalBound& C_A,
                      const RegularityEllipse& ell, const EllipseData& data, double delta,
                      const CertifyOptions& opts) {
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
    if (sys.dim != M.dim()) throw InvalidArgument("system and monodromy dimensions differ");
    const int N = M.degree(), d = M.dim();

    Certification c;
    c.delta = delta;
    c.C_A = C_A.value;
    c.lambdas = M.eigen().values;
    c.condV = cond_vhat(gamma_matrix(M));
    c.uhat_norm = uhat_norm_bound(sys, C_A.value);
    NuTable nt = nu_table(sys, M, C_A.value, opts.workers);
    c.nus = nt.nu;
    c.epss = eps_sequence(ell, data, delta, N, d);

    const double lam1 = std::abs(c.lambdas[0]);
    double acc = nt.nu.row(0).squaredNorm();
    c.radius = INFINITY;
    for (int k = 1; k <= N; ++k) {
        acc += nt.nu.row(k).squaredNorm();
        double xi = std::sqrt(acc);
        double eps = c.epss[k - 1];
        double omega = eps * (c.uhat_norm + lam1 * c.condV) + (1.0 + eps) * xi;
        c.xis.push_back(xi);
        c.omegas.push_back(omega);
        if (c.condV * omega < c.radius) {
            c.radius = c.condV * omega;
            c.k_min = k;
        }
    }

    if (c.radius >= 1.0)
        c.verdict = Verdict::Unverifiable;
    else if (lam1 + c.radius < 1.0)
        c.verdict = Verdict::Stable;
    else
        c.verdict = Verdict::NotProven;
    c.stable = c.verdict == Verdict::Stable;

    c.notes.push_back(std::string("C_A provenance: ") + to_string(C_A.provenance));
    c.notes.push_back(std::string("ellipse constants: ") + to_string(data.provenance));
    if (!C_A.resolved) c.notes.push_back("C_A computed from an unresolved sup norm");
    if (!nt.resolved) c.notes.push_back("some nu entries rely on unresolved sup norms");
    return c;
}

double bauer_fike_matrix(const CMatrix& A, const CMatrix& B) {
    if (A.rows() != A.cols() || B.rows() != A.rows() || B.cols() != A.cols())
        throw InvalidArgument("Bauer-Fike needs square matrices of equal size");
    Eigen::ComplexEigenSolver<CMatrix> es(A, true);
    if (es.info() != Eigen::Success) throw EigFailure("eigensolver did not converge");
    Eigen::JacobiSVD<CMatrix> sv(es.eigenvectors());
    const auto& s = sv.singularValues();
    double smin = s(s.size() - 1);
    double cond = smin > 0.0 ? s(0) / smin : INFINITY;
    if (!(cond <= 1.0 / kEps)) throw NotDiagonalizable("eigenvector matrix is numerically singular");
    double diff = Eigen::JacobiSVD<CMatrix>(B - A).singularValues()(0);
    return cond * diff;
}

EllipseData estimate_ellipse_data(const DdeSystem& sys, const RegularityEllipse& ell, double delta) {
    if (!sys.A_analytic || !sys.B_analytic) throw InvalidArgument("numeric ellipse data needs analytic coefficients");
    if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
    constexpr int kBoundary = 720;
    constexpr int kOrder = 64;
    constexpr double kInflate = 1.1;
    const auto w = clenshaw_curtis_weights(kOrder);
    const int d = sys.dim;

    double a_max = 0.0, b_max = 0.0, growth_max = 0.0;
    for (int i = 0; i < kBoundary; ++i) {
        double th = 2.0 * kPi * i / kBoundary;
        cplx z(ell.S * std::cos(th), ell.s * std::sin(th));
        cplx half = (z + 1.0) / 2.0;
        cplx ia = 0.0, ib = 0.0;
        double growth = 0.0;
        for (int j = 0; j <= kOrder; ++j) {
            cplx wz = -1.0 + half * (1.0 + std::cos(kPi * j / kOrder));
            CMatrix Az = sys.A_analytic(wz), Bz = sys.B_analytic(wz);
            if (d == 1) {
                ia += w[j] * Az(0, 0);
                ib += w[j] * Bz(0, 0);
            } else {
                growth += w[j] * (Az.norm() + Bz.norm() / delta);
            }
        }
        a_max = std::max(a_max, std::abs(ia * half));
        b_max = std::max(b_max, std::abs(ib * half));
        growth_max = std::max(growth_max, growth * std::abs(half));
    }

    EllipseData out;
    out.provenance = ConstantProvenance::NumericEstimate;
    if (d == 1) {
        out.A_E = kInflate * a_max;
        out.B_E = kInflate * b_max;
    } else {
        out.C_lambda = std::exp(kInflate * growth_max);
    }
    return out;
}

}  // namespace floqcert
