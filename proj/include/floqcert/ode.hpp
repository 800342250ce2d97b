#pragma once

#include <optional>
#include <vector>

#include <Eigen/LU>

#include "floqcert/cheb.hpp"

namespace floqcert {

/// y' = A(t) y + u(t) on [-1,1], y(-1) = y0.
struct LinearIVP {
    int dim = 1;
    MatrixFn A;
    VectorFn u;
    CVector y0;
};

LinearIVP scalar_ivp(ScalarFn a, ScalarFn u, cplx y0);

struct SystemMatrices {
    CMatrix hatD;
    CMatrix hatMA;
    CVector hatu;
};

SystemMatrices build_system_matrices(const LinearIVP& ivp, int N);

/// Block-diagonal A(t_0), ..., A(t_{N-1}), 0.
CMatrix node_block_diagonal(const MatrixFn& A, int dim, const ChebGrid& grid);

/// LU-factored collocation operator hatD - hatM_A, reusable across right-hand sides.
class CollocationOperator {
public:
    CollocationOperator(const MatrixFn& A, int dim, int N);

    int degree() const { return grid_.degree(); }
    int dim() const { return dim_; }
    const ChebGrid& grid() const { return grid_; }
    const RMatrix& D() const { return D_; }
    const CMatrix& matrix() const { return op_; }

    /// Solve with one step of iterative refinement.
    CMatrix solve(const CMatrix& rhs) const;

    /// Right-hand side stacking u(t_0..t_{N-1}) and y0.
    CVector rhs(const VectorFn& u, const CVector& y0) const;

    ChebPoly solve_ivp(const VectorFn& u, const CVector& y0) const;

private:
    int dim_;
    ChebGrid grid_;
    RMatrix D_;
    CMatrix op_;
    Eigen::PartialPivLU<CMatrix> lu_;
};

ChebPoly solve_ivp(const LinearIVP& ivp, int N);

/// Node values (N+1) x d reshaped from a stacked vector, component index fastest.
ChebPoly unstack(const ChebGrid& grid, const CVector& v, int dim);
CVector stack(const ChebPoly& p);

struct CertifiedSolution {
    ChebPoly p;
    CVector residual;
    double err_sup = 0.0;
    double deriv_err_sup = 0.0;
    double C_A_used = 0.0;
    /// False when some adaptive sup-norm hit the degree cap.
    bool resolved = true;
};

/// Uniform error bounds for y - p and y' - p'. A_sup overrides the computed bound on sup |A|_F.
CertifiedSolution apost_certificate(const LinearIVP& ivp, const ChebPoly& p, double C_A,
                                    std::optional<double> A_sup = std::nullopt);

/// Sharper bound for scalar a(t) = a0.
double constant_coeff_certificate(cplx a0, const ScalarFn& u, cplx y0, const ChebPoly& p);

struct GrowthConstant {
    double value = 1.0;
    double integral = 0.0;
    double quadrature_diff = 0.0;
    int evaluations = 0;
};

/// Weights on [-1,1] for nodes cos(pi j/n), j = 0..n; n even.
std::vector<double> clenshaw_curtis_weights(int n);

/// exp of the integral of max(Re a, 0) over [-1,1], inflated by the quadrature difference.
GrowthConstant scalar_growth_constant(const ScalarFn& a);

}  // namespace floqcert
