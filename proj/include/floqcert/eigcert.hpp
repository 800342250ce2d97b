#pragma once

#include <optional>
#include <string>
#include <vector>

#include "floqcert/fundamental.hpp"
#include "floqcert/monodromy.hpp"

namespace floqcert {

/// Ellipse with foci +-1, semiminor s, semimajor S = sqrt(1+s^2), e^eta = S + s.
struct RegularityEllipse {
    double s = 0.5;
    double S = 0.0;
    double eta = 0.0;

    explicit RegularityEllipse(double s_minor);
};

enum class ConstantProvenance { UserSupplied, NumericEstimate };

const char* to_string(ConstantProvenance p);

/// Scalar case uses A_E, B_E; when C_lambda is set the systems form is used instead.
struct EllipseData {
    double A_E = 0.0;
    double B_E = 0.0;
    std::optional<double> C_lambda;
    ConstantProvenance provenance = ConstantProvenance::UserSupplied;
};

/// Eigenvectors of U_N in the \tilde T basis, rows ordered (k, s) with s fastest.
CMatrix gamma_matrix(const MonodromyMatrix& M);

double cond_vhat(const CMatrix& Gamma);

/// nu(j, s) bounds the H^1 distance between U and U_N applied to \tilde T_j e_s.
struct NuTable {
    RMatrix nu;
    bool resolved = true;
};

NuTable nu_table(const DdeSystem& sys, const MonodromyMatrix& M, double C_A, int workers = 0);

/// epsilon_k for k = 1..N (index k-1).
std::vector<double> eps_sequence(const RegularityEllipse& ell, const EllipseData& data, double delta, int N,
                                 int dim);

enum class Verdict { Stable, NotProven, Unverifiable };

const char* to_string(Verdict v);

struct Certification {
    CVector lambdas;
    double condV = 0.0;
    double uhat_norm = 0.0;
    double C_A = 0.0;
    RMatrix nus;
    std::vector<double> xis;
    std::vector<double> epss;
    std::vector<double> omegas;
    /// 1-based k attaining min omega_k.
    int k_min = 0;
    double radius = 0.0;
    double delta = 0.0;
    Verdict verdict = Verdict::NotProven;
    bool stable = false;
    std::vector<std::string> notes;
};

struct CertifyOptions {
    int workers = 0;
};

Certification certify(const DdeSystem& sys, const MonodromyMatrix& M, const FundamentalBound& C_A,
                      const RegularityEllipse& ell, const EllipseData& data, double delta,
                      const CertifyOptions& opts = {});

/// cond_2(V) |B - A|_2 with A = V Lambda V^{-1}.
double bauer_fike_matrix(const CMatrix& A, const CMatrix& B);

/// Samples the ellipse boundary and integrates along segments from -1; not rigorous, inflated by 10%.
EllipseData estimate_ellipse_data(const DdeSystem& sys, const RegularityEllipse& ell, double delta);

}  // namespace floqcert
