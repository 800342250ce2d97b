#pragma once

#include <vector>

#include "floqcert/types.hpp"

namespace floqcert {

/// Chebyshev extreme points t_j = cos(pi j / N), j = 0..N, descending.
class ChebGrid {
public:
    explicit ChebGrid(int N);

    int degree() const { return N_; }
    int size() const { return N_ + 1; }
    double operator[](int j) const { return points_[j]; }
    const std::vector<double>& points() const { return points_; }

private:
    int N_;
    std::vector<double> points_;
};

/// Polynomial stored by node values; column s is component s.
struct ChebPoly {
    ChebGrid grid;
    CMatrix values;

    ChebPoly(ChebGrid g, CMatrix v);

    int degree() const { return grid.degree(); }
    int dim() const { return static_cast<int>(values.cols()); }
};

/// Coefficients in the T_k basis; row k, column s.
struct ChebCoeffs {
    CMatrix coeffs;

    int degree() const { return static_cast<int>(coeffs.rows()) - 1; }
    int dim() const { return static_cast<int>(coeffs.cols()); }
};

ChebGrid collocation_points(int N);

RMatrix diff_matrix(int N);

ChebCoeffs cheb_coeffs(const ChebPoly& p);
ChebPoly cheb_values(const ChebCoeffs& c);

/// Node values of a callable on the degree-N grid.
ChebPoly interpolate(const ScalarFn& f, int N);

CVector bary_eval(const ChebPoly& p, double t);
cplx bary_eval(const ChebPoly& p, double t, int component);

/// Sum of |a_k|; for d > 1 the Euclidean combination of the per-component sums.
double sup_norm_bound(const ChebCoeffs& c);

/// Sup bound for a polynomial from values on a finer Chebyshev grid of degree M = oversample*n:
/// sup|p| <= sec(pi n / 2M) max_j |p(x_j)|, n the degree after trimming a negligible tail whose
/// coefficient sum is added back. norm must be dominated by the Euclidean norm.
using ValueNorm = std::function<double(const CVector&)>;
double poly_sup_bound(const ChebPoly& p, const ValueNorm& norm, int oversample = 32);
double poly_sup_bound(const ChebPoly& p, int oversample = 32);

struct SupNormEstimate {
    double bound = 0.0;
    int degree = 0;
    bool resolved = true;
};

inline constexpr int kAdaptiveStartDegree = 15;
inline constexpr int kAdaptiveMaxDegree = 4095;

SupNormEstimate adaptive_sup_norm(const ScalarFn& f);

/// Runs the scalar procedure on each component of f independently, sharing evaluations.
std::vector<SupNormEstimate> adaptive_sup_norm(const VectorFn& f, int dim);

/// Bound on sup_t |A(t)|_F from entrywise coefficient sums.
SupNormEstimate matrix_sup_bound(const MatrixFn& A, int dim);

/// Monic node polynomial (t - t_0)...(t - t_{N-1}) in closed trigonometric form.
double little_l_N(int N, double t);
double little_l_N_norm(int N);

}  // namespace floqcert
