#pragma once

#include <vector>

#include "floqcert/ode.hpp"

namespace floqcert {

enum class BoundProvenance { APriori, Bootstrap, UserSupplied };

const char* to_string(BoundProvenance p);

/// Bound C_A on |Phi_A(t) Phi_A(s)^{-1}| over [-1,1].
struct FundamentalBound {
    double value = 1.0;
    BoundProvenance provenance = BoundProvenance::APriori;
    int iterations = 0;
    std::vector<double> history;
    bool resolved = true;
};

FundamentalBound apriori_bound(const MatrixFn& A, int dim);

struct BootstrapOptions {
    int max_iters = 8;
    double rel_tol = 1e-3;
    int workers = 1;
};

/// Collocation fundamental matrices Phi_N (y' = A y) and Psi_N (z' = -A^T z), columns from e_s.
/// Components are stored column-major: component s*d + r holds entry (r, s).
struct FundamentalPair {
    ChebPoly Phi;
    ChebPoly Psi;
};

FundamentalPair fundamental_solutions(const MatrixFn& A, int dim, int N);

/// Bound on sup_t |M(t)|_2 for a d x d matrix polynomial stored as above.
double matrix_poly_sup(const ChebPoly& M, int dim);

FundamentalBound bootstrap_bound(const MatrixFn& A, int dim, int N, const BootstrapOptions& opts = {});

}  // namespace floqcert
