#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "floqcert/ode.hpp"

namespace floqcert {

/// y'(t) = A(t) y(t) + B(t) y(t-2), coefficients 2-periodic.
struct DdeSystem {
    int dim = 1;
    MatrixFn A;
    MatrixFn B;
    /// Continuations off [-1,1]; only needed for numerically estimated ellipse constants.
    ComplexMatrixFn A_analytic;
    ComplexMatrixFn B_analytic;
};

DdeSystem scalar_dde(ScalarFn a, ScalarFn b);

struct Eigendecomposition {
    /// Sorted by descending modulus, then descending real part, then descending imaginary part.
    CVector values;
    /// Matching eigenvectors, unit Euclidean norm.
    CMatrix vectors;
};

Eigendecomposition sorted_eigen(const CMatrix& U);

class MonodromyMatrix {
public:
    MonodromyMatrix(int N, int dim, CMatrix U);

    int degree() const { return N_; }
    int dim() const { return dim_; }
    const CMatrix& matrix() const { return U_; }

    /// Computed on first use; later calls return the same decomposition.
    const Eigendecomposition& eigen() const;

private:
    struct Cache {
        std::once_flag once;
        std::optional<Eigendecomposition> value;
    };
    int N_;
    int dim_;
    CMatrix U_;
    std::shared_ptr<Cache> cache_;
};

MonodromyMatrix build_monodromy(const DdeSystem& sys, int N);

double spectral_radius(const MonodromyMatrix& M);

/// Method-of-steps segments U_N f, U_N^2 f, ..., U_N^k f.
std::vector<ChebPoly> step_history(const MonodromyMatrix& M, const ChebPoly& f, int k);

/// Bound on the norm of the monodromy operator on H^1.
double uhat_norm_bound(const DdeSystem& sys, double C_A);

}  // namespace floqcert
