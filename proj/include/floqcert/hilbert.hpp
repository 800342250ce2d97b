#pragma once

#include "floqcert/cheb.hpp"

namespace floqcert {

/// Pointwise evaluation constant: |f(t)| <= 0.9062 ||f||_{H^1}.
inline constexpr double kPointwiseConstant = 0.9062;

struct H1Norm {
    double l2 = 0.0;
    double h1 = 0.0;
};

/// L^2-normalized Chebyshev polynomial \hat T_k.
double cheb_hat(int k, double t);
/// H^1-normalized Chebyshev polynomial \tilde T_k = \hat T_k / (1+k).
double cheb_tilde(int k, double t);

/// Multiplier taking the T_k coefficient to the \tilde T_k coefficient.
double tilde_scale(int k);

/// Norms of the polynomial with T_k coefficients c (all components summed).
H1Norm h1_norm(const ChebCoeffs& c);

double pointwise_bound(double h1);

/// Upper bound on ||f||_{H^1} from sup norms of f and f'.
double h1_bound_from_sup(double f_sup, double fdot_sup);

}  // namespace floqcert
