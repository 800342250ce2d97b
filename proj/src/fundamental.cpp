#include "floqcert/fundamental.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "floqcert/errors.hpp"
#include "floqcert/parallel.hpp"

namespace floqcert {

const char* to_string(BoundProvenance p) {
    switch (p) {
        case BoundProvenance::APriori: return "a-priori";
        case BoundProvenance::Bootstrap: return "bootstrap";
        case BoundProvenance::UserSupplied: return "user-supplied";
    }
    return "unknown";
}

FundamentalBound apriori_bound(const MatrixFn& A, int dim) {
    auto alpha = matrix_sup_bound(A, dim);
    FundamentalBound b;
    b.value = std::exp(2.0 * alpha.bound);
    b.history = {b.value};
    b.resolved = alpha.resolved;
    return b;
}

namespace {

MatrixFn adjoint(const MatrixFn& A) {
    return [A](double t) { return CMatrix(-A(t).transpose()); };
}

ChebPoly solve_columns(const MatrixFn& A, int dim, int N) {
    CollocationOperator op(A, dim, N);
    CMatrix rhs = CMatrix::Zero(dim * (N + 1), dim);
    rhs.bottomRows(dim).setIdentity();
    CMatrix cols = op.solve(rhs);
    CMatrix vals(N + 1, dim * dim);
    for (int j = 0; j <= N; ++j)
        for (int s = 0; s < dim; ++s)
            for (int r = 0; r < dim; ++r) vals(j, s * dim + r) = cols(j * dim + r, s);
    return ChebPoly(op.grid(), vals);
}

ChebPoly column(const ChebPoly& M, int dim, int s) {
    return ChebPoly(M.grid, M.values.middleCols(s * dim, dim));
}

}  // namespace

FundamentalPair fundamental_solutions(const MatrixFn& A, int dim, int N) {
    return {solve_columns(A, dim, N), solve_columns(adjoint(A), dim, N)};
}

double matrix_poly_sup(const ChebPoly& M, int dim) {
    return poly_sup_bound(M, [dim](const CVector& v) {
        Eigen::Map<const CMatrix> m(v.data(), dim, dim);
        return Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
    });
}

FundamentalBound bootstrap_bound(const MatrixFn& A, int dim, int N, const BootstrapOptions& opts) {
    FundamentalBound out = apriori_bound(A, dim);
    out.provenance = BoundProvenance::Bootstrap;
    const MatrixFn At = adjoint(A);
    auto pair = fundamental_solutions(A, dim, N);
    auto phi_sup = matrix_poly_sup(pair.Phi, dim);
    auto psi_sup = matrix_poly_sup(pair.Psi, dim);
    double a_sup = matrix_sup_bound(A, dim).bound;

    std::vector<LinearIVP> ivps(2 * dim);
    for (int s = 0; s < dim; ++s) {
        CVector e = CVector::Zero(dim);
        e[s] = 1.0;
        VectorFn zero = [dim](double) { return CVector(CVector::Zero(dim)); };
        ivps[s] = LinearIVP{dim, A, zero, e};
        ivps[dim + s] = LinearIVP{dim, At, zero, e};
    }

    double C = out.value;
    for (int it = 0; it < opts.max_iters; ++it) {
        std::vector<double> nu(2 * dim);
        std::vector<char> ok(2 * dim, 1);
        parallel_for(2 * dim, opts.workers, [&](int i) {
            const ChebPoly& M = i < dim ? pair.Phi : pair.Psi;
            auto cert = apost_certificate(ivps[i], column(M, dim, i % dim), C, a_sup);
            nu[i] = cert.err_sup;
            ok[i] = cert.resolved;
        });
        double xi = 0.0, omega = 0.0;
        for (int s = 0; s < dim; ++s) {
            xi += nu[s] * nu[s];
            omega += nu[dim + s] * nu[dim + s];
            out.resolved = out.resolved && ok[s] && ok[dim + s];
        }
        double next = (std::sqrt(xi) + phi_sup) * (std::sqrt(omega) + psi_sup);
        out.history.push_back(next);
        out.iterations = it + 1;
        if (next > 10.0 * C) {
            std::ostringstream msg;
            msg << "bootstrap bound grew from " << C << " to " << next << " at N=" << N << "; raise N";
            throw Diverged(msg.str());
        }
        bool settled = std::abs(next - C) < opts.rel_tol * C;
        C = next;
        if (settled) break;
    }
    out.value = *std::min_element(out.history.begin(), out.history.end());
    return out;
}

}  // namespace floqcert
