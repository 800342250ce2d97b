#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace floqcert {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Scalar coefficient on [-1,1].
using ScalarFn = std::function<cplx(double)>;
/// Matrix-valued coefficient t -> A(t).
using MatrixFn = std::function<CMatrix(double)>;
/// Vector-valued forcing t -> u(t).
using VectorFn = std::function<CVector(double)>;
/// Analytic continuation of a matrix coefficient off the real axis.
using ComplexMatrixFn = std::function<CMatrix(cplx)>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEps = 2.220446049250313e-16;

}  // namespace floqcert
