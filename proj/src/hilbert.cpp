#include "floqcert/hilbert.hpp"

#include <algorithm>
#include <cmath>

#include "floqcert/errors.hpp"

namespace floqcert {

namespace {

double hat_scale(int k) { return k == 0 ? std::sqrt(kPi) : std::sqrt(kPi / 2.0); }

}  // namespace

double cheb_hat(int k, double t) {
    if (k < 0) throw InvalidArgument("Chebyshev index must be >= 0");
    double Tk = std::cos(k * std::acos(std::clamp(t, -1.0, 1.0)));
    return Tk / hat_scale(k);
}

double cheb_tilde(int k, double t) { return cheb_hat(k, t) / (1.0 + k); }

double tilde_scale(int k) { return hat_scale(k) * (1.0 + k); }

H1Norm h1_norm(const ChebCoeffs& c) {
    double l2 = 0.0, h1 = 0.0;
    for (Eigen::Index k = 0; k < c.coeffs.rows(); ++k) {
        double w = hat_scale(static_cast<int>(k));
        double row = c.coeffs.row(k).squaredNorm() * w * w;
        l2 += row;
        h1 += row * (1.0 + k) * (1.0 + k);
    }
    return {std::sqrt(l2), std::sqrt(h1)};
}

double pointwise_bound(double h1) { return kPointwiseConstant * h1; }

double h1_bound_from_sup(double f_sup, double fdot_sup) {
    return std::sqrt(2.0 * kPi * (f_sup * f_sup + fdot_sup * fdot_sup));
}

}  // namespace floqcert
