#include "floqcert/cheb.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/FFT>

#include "floqcert/errors.hpp"

namespace floqcert {

ChebGrid::ChebGrid(int N) : N_(N) {
    if (N < 1) throw InvalidArgument("Chebyshev grid needs degree N >= 1");
    points_.resize(N + 1);
    // sin form is exactly antisymmetric about the midpoint
    for (int j = 0; j <= N; ++j) points_[j] = std::sin(kPi * (N - 2 * j) / (2.0 * N));
    points_[0] = 1.0;
    points_[N] = -1.0;
}

ChebPoly::ChebPoly(ChebGrid g, CMatrix v) : grid(std::move(g)), values(std::move(v)) {
    if (values.rows() != grid.size())
        throw InvalidArgument("node value rows must equal N+1");
}

ChebGrid collocation_points(int N) { return ChebGrid(N); }

RMatrix diff_matrix(int N) {
    if (N < 1) throw InvalidArgument("diff_matrix needs N >= 1");
    RMatrix D = RMatrix::Zero(N + 1, N + 1);
    auto c = [N](int j) { return (j == 0 || j == N) ? 2.0 : 1.0; };
    for (int i = 0; i <= N; ++i) {
        for (int j = 0; j <= N; ++j) {
            if (i == j) continue;
            double dx = -2.0 * std::sin(kPi * (i + j) / (2.0 * N)) * std::sin(kPi * (i - j) / (2.0 * N));
            double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            D(i, j) = sign * c(i) / (c(j) * dx);
        }
        D(i, i) = -D.row(i).sum();
    }
    return D;
}

namespace {

CVector coeffs_of_column(const CVector& v, Eigen::FFT<double>& fft) {
    const int N = static_cast<int>(v.size()) - 1;
    std::vector<cplx> ext(2 * N), out;
    for (int j = 0; j <= N; ++j) ext[j] = v[j];
    for (int j = 1; j < N; ++j) ext[2 * N - j] = v[j];
    fft.fwd(out, ext);
    CVector a(N + 1);
    for (int k = 0; k <= N; ++k) a[k] = out[k] / static_cast<double>(N);
    a[0] *= 0.5;
    a[N] *= 0.5;
    return a;
}

CVector values_of_column(const CVector& a, Eigen::FFT<double>& fft) {
    const int N = static_cast<int>(a.size()) - 1;
    std::vector<cplx> ext(2 * N), out;
    ext[0] = 2.0 * a[0];
    ext[N] = 2.0 * a[N];
    for (int k = 1; k < N; ++k) {
        ext[k] = a[k];
        ext[2 * N - k] = a[k];
    }
    fft.fwd(out, ext);
    CVector v(N + 1);
    for (int j = 0; j <= N; ++j) v[j] = 0.5 * out[j];
    return v;
}

}  // namespace

ChebCoeffs cheb_coeffs(const ChebPoly& p) {
    Eigen::FFT<double> fft;
    ChebCoeffs c{CMatrix(p.values.rows(), p.values.cols())};
    for (Eigen::Index s = 0; s < p.values.cols(); ++s)
        c.coeffs.col(s) = coeffs_of_column(p.values.col(s), fft);
    return c;
}

ChebPoly cheb_values(const ChebCoeffs& c) {
    if (c.coeffs.rows() < 2) throw InvalidArgument("coefficient vector needs degree >= 1");
    Eigen::FFT<double> fft;
    CMatrix v(c.coeffs.rows(), c.coeffs.cols());
    for (Eigen::Index s = 0; s < c.coeffs.cols(); ++s) v.col(s) = values_of_column(c.coeffs.col(s), fft);
    return ChebPoly(ChebGrid(c.degree()), std::move(v));
}

ChebPoly interpolate(const ScalarFn& f, int N) {
    ChebGrid g(N);
    CMatrix v(N + 1, 1);
    for (int j = 0; j <= N; ++j) v(j, 0) = f(g[j]);
    return ChebPoly(std::move(g), std::move(v));
}

namespace {

// Second barycentric formula; returns the node index on an exact hit.
template <typename Accumulate>
void barycentric(const ChebGrid& g, double t, Accumulate&& acc, int& hit, double& denom) {
    const int N = g.degree();
    hit = -1;
    denom = 0.0;
    for (int j = 0; j <= N; ++j) {
        double diff = t - g[j];
        if (std::abs(diff) <= 2.0 * kEps) {
            hit = j;
            return;
        }
        double w = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == N) w *= 0.5;
        double q = w / diff;
        denom += q;
        acc(j, q);
    }
}

}  // namespace

CVector bary_eval(const ChebPoly& p, double t) {
    CVector num = CVector::Zero(p.dim());
    int hit;
    double denom;
    barycentric(p.grid, t, [&](int j, double q) { num += q * p.values.row(j).transpose(); }, hit, denom);
    if (hit >= 0) return p.values.row(hit).transpose();
    return num / denom;
}

cplx bary_eval(const ChebPoly& p, double t, int component) {
    cplx num = 0.0;
    int hit;
    double denom;
    barycentric(p.grid, t, [&](int j, double q) { num += q * p.values(j, component); }, hit, denom);
    if (hit >= 0) return p.values(hit, component);
    return num / denom;
}

double sup_norm_bound(const ChebCoeffs& c) {
    double sq = 0.0;
    for (Eigen::Index s = 0; s < c.coeffs.cols(); ++s) {
        double b = c.coeffs.col(s).cwiseAbs().sum();
        sq += b * b;
    }
    return std::sqrt(sq);
}

double poly_sup_bound(const ChebPoly& p, const ValueNorm& norm, int oversample) {
    if (oversample < 2) throw InvalidArgument("oversample must be >= 2");
    ChebCoeffs c = cheb_coeffs(p);
    const int N = p.degree();
    RVector block = c.coeffs.rowwise().norm();
    double total = block.sum();
    int n = N;
    double tail = 0.0;
    while (n > 0 && tail + block[n] <= 1e-13 * total) tail += block[n--];
    const int M = oversample * std::max(n, 1);
    ChebCoeffs padded{CMatrix::Zero(M + 1, p.dim())};
    padded.coeffs.topRows(n + 1) = c.coeffs.topRows(n + 1);
    ChebPoly fine = cheb_values(padded);
    double m = 0.0;
    for (int j = 0; j <= M; ++j) m = std::max(m, norm(fine.values.row(j).transpose()));
    return m / std::cos(kPi * n / (2.0 * M)) + tail;
}

double poly_sup_bound(const ChebPoly& p, int oversample) {
    return poly_sup_bound(p, [](const CVector& v) { return v.norm(); }, oversample);
}

std::vector<SupNormEstimate> adaptive_sup_norm(const VectorFn& f, int dim) {
    std::vector<SupNormEstimate> out(dim);
    std::vector<bool> done(dim, false);
    int remaining = dim;
    Eigen::FFT<double> fft;
    for (int M = kAdaptiveStartDegree;; M = 2 * (M + 1) - 1) {
        ChebGrid g(M);
        CMatrix vals(M + 1, dim);
        for (int j = 0; j <= M; ++j) vals.row(j) = f(g[j]).transpose();
        for (int s = 0; s < dim; ++s) {
            if (done[s]) continue;
            CVector a = coeffs_of_column(vals.col(s), fft);
            double amax = a.cwiseAbs().maxCoeff();
            double tail = a.tail(4).cwiseAbs().maxCoeff();
            bool ok = tail < 10.0 * kEps * std::max(1.0, amax);
            if (ok || M >= kAdaptiveMaxDegree) {
                out[s] = {a.cwiseAbs().sum(), M, ok};
                done[s] = true;
                --remaining;
            }
        }
        if (remaining == 0) break;
    }
    return out;
}

SupNormEstimate adaptive_sup_norm(const ScalarFn& f) {
    VectorFn wrapped = [&f](double t) {
        CVector v(1);
        v[0] = f(t);
        return v;
    };
    return adaptive_sup_norm(wrapped, 1)[0];
}

SupNormEstimate matrix_sup_bound(const MatrixFn& A, int dim) {
    VectorFn flat = [&A, dim](double t) {
        CMatrix m = A(t);
        return CVector(Eigen::Map<const CVector>(m.data(), dim * dim));
    };
    auto parts = adaptive_sup_norm(flat, dim * dim);
    SupNormEstimate r;
    double sq = 0.0;
    for (const auto& e : parts) {
        sq += e.bound * e.bound;
        r.degree = std::max(r.degree, e.degree);
        r.resolved = r.resolved && e.resolved;
    }
    r.bound = std::sqrt(sq);
    return r;
}

double little_l_N(int N, double t) {
    if (N < 1) throw InvalidArgument("little_l_N needs N >= 1");
    double theta = std::acos(std::clamp(t, -1.0, 1.0));
    double st = std::sin(theta);
    double scale = std::ldexp(1.0, -(N - 1));
    if (std::abs(st) < 1e-8) {
        if (t > 0) return 0.0;
        double sign = (N % 2 == 0) ? 1.0 : -1.0;
        return sign * N * std::ldexp(1.0, 2 - N);
    }
    return (t - 1.0) * std::sin(N * theta) * scale / st;
}

double little_l_N_norm(int N) { return N * std::ldexp(1.0, 2 - N); }

}  // namespace floqcert
