#include "floqcert/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "floqcert/errors.hpp"
#include "floqcert/hilbert.hpp"

namespace floqcert {

DdeSystem scalar_dde(ScalarFn a, ScalarFn b) {
    DdeSystem sys;
    sys.dim = 1;
    sys.A = [a = std::move(a)](double t) { return CMatrix(CMatrix::Constant(1, 1, a(t))); };
    sys.B = [b = std::move(b)](double t) { return CMatrix(CMatrix::Constant(1, 1, b(t))); };
    return sys;
}

Eigendecomposition sorted_eigen(const CMatrix& U) {
    Eigen::ComplexEigenSolver<CMatrix> es(U, true);
    if (es.info() != Eigen::Success) throw EigFailure("eigensolver did not converge");
    const CVector& lam = es.eigenvalues();
    std::vector<int> idx(lam.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
        double ai = std::abs(lam[i]), aj = std::abs(lam[j]);
        if (ai != aj) return ai > aj;
        if (lam[i].real() != lam[j].real()) return lam[i].real() > lam[j].real();
        if (lam[i].imag() != lam[j].imag()) return lam[i].imag() > lam[j].imag();
        return i < j;
    });
    Eigendecomposition out{CVector(lam.size()), CMatrix(U.rows(), U.cols())};
    for (std::size_t k = 0; k < idx.size(); ++k) {
        out.values[k] = lam[idx[k]];
        out.vectors.col(k) = es.eigenvectors().col(idx[k]).normalized();
    }
    return out;
}

MonodromyMatrix::MonodromyMatrix(int N, int dim, CMatrix U)
    : N_(N), dim_(dim), U_(std::move(U)), cache_(std::make_shared<Cache>()) {}

const Eigendecomposition& MonodromyMatrix::eigen() const {
    std::call_once(cache_->once, [this] { cache_->value = sorted_eigen(U_); });
    return *cache_->value;
}

MonodromyMatrix build_monodromy(const DdeSystem& sys, int N) {
    const int d = sys.dim;
    CollocationOperator op(sys.A, d, N);
    CMatrix MB = node_block_diagonal(sys.B, d, op.grid());
    MB.block(N * d, 0, d, d) += CMatrix::Identity(d, d);
    return MonodromyMatrix(N, d, op.solve(MB));
}

double spectral_radius(const MonodromyMatrix& M) { return std::abs(M.eigen().values[0]); }

std::vector<ChebPoly> step_history(const MonodromyMatrix& M, const ChebPoly& f, int k) {
    if (f.degree() != M.degree() || f.dim() != M.dim())
        throw InvalidArgument("history polynomial must match the monodromy degree and dimension");
    std::vector<ChebPoly> out;
    CVector x = stack(f);
    for (int i = 0; i < k; ++i) {
        x = M.matrix() * x;
        out.push_back(unstack(f.grid, x, M.dim()));
    }
    return out;
}

double uhat_norm_bound(const DdeSystem& sys, double C_A) {
    if (sys.dim == 1) {
        double a = adaptive_sup_norm([&](double t) { return sys.A(t)(0, 0); }).bound;
        double b = adaptive_sup_norm([&](double t) { return sys.B(t)(0, 0); }).bound;
        double c0 = b;
        double c1 = 2.3 * (1.0 + a) + kPi * b;
        double c2 = kPi * std::sqrt(2.0) * a * b;
        return c0 + c1 * C_A + c2 * C_A * C_A;
    }
    double A = matrix_sup_bound(sys.A, sys.dim).bound;
    double B = matrix_sup_bound(sys.B, sys.dim).bound;
    double a2 = 1.0 + A * A;
    double c = kPointwiseConstant;
    return std::sqrt(2.0 * kPi * sys.dim) *
           (c * std::sqrt(a2) * C_A + B * std::sqrt(c * c + kPi * a2 * C_A * C_A / 2.0));
}

}  // namespace floqcert
