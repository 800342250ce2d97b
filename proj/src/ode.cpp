#include "floqcert/ode.hpp"

#include <algorithm>
#include <cmath>

#include "floqcert/errors.hpp"

namespace floqcert {

LinearIVP scalar_ivp(ScalarFn a, ScalarFn u, cplx y0) {
    LinearIVP ivp;
    ivp.dim = 1;
    ivp.A = [a = std::move(a)](double t) {
        CMatrix m(1, 1);
        m(0, 0) = a(t);
        return m;
    };
    ivp.u = [u = std::move(u)](double t) {
        CVector v(1);
        v[0] = u(t);
        return v;
    };
    ivp.y0 = CVector::Constant(1, y0);
    return ivp;
}

namespace {

CMatrix hat_d(const RMatrix& D, int dim) {
    const int N = static_cast<int>(D.rows()) - 1;
    const int l = dim * (N + 1);
    CMatrix H = CMatrix::Zero(l, l);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j <= N; ++j)
            for (int s = 0; s < dim; ++s) H(i * dim + s, j * dim + s) = D(i, j);
    for (int s = 0; s < dim; ++s) H(N * dim + s, N * dim + s) = 1.0;
    return H;
}

}  // namespace

CMatrix node_block_diagonal(const MatrixFn& A, int dim, const ChebGrid& grid) {
    const int N = grid.degree();
    CMatrix M = CMatrix::Zero(dim * (N + 1), dim * (N + 1));
    for (int j = 0; j < N; ++j) {
        CMatrix a = A(grid[j]);
        if (a.rows() != dim || a.cols() != dim) throw InvalidArgument("coefficient matrix has wrong size");
        M.block(j * dim, j * dim, dim, dim) = a;
    }
    return M;
}

SystemMatrices build_system_matrices(const LinearIVP& ivp, int N) {
    ChebGrid grid(N);
    SystemMatrices s;
    s.hatD = hat_d(diff_matrix(N), ivp.dim);
    s.hatMA = node_block_diagonal(ivp.A, ivp.dim, grid);
    s.hatu = CVector(ivp.dim * (N + 1));
    for (int j = 0; j < N; ++j) s.hatu.segment(j * ivp.dim, ivp.dim) = ivp.u(grid[j]);
    s.hatu.tail(ivp.dim) = ivp.y0;
    return s;
}

CollocationOperator::CollocationOperator(const MatrixFn& A, int dim, int N)
    : dim_(dim), grid_(N), D_(diff_matrix(N)) {
    if (dim < 1) throw InvalidArgument("dimension must be >= 1");
    op_ = hat_d(D_, dim) - node_block_diagonal(A, dim, grid_);
    lu_.compute(op_);
    double rc = lu_.rcond();
    if (!(rc > kEps)) throw SingularSystem("collocation matrix is numerically singular (rcond " + std::to_string(rc) + ")");
}

CMatrix CollocationOperator::solve(const CMatrix& rhs) const {
    CMatrix x = lu_.solve(rhs);
    CMatrix r = rhs - op_ * x;
    x += lu_.solve(r);
    return x;
}

CVector CollocationOperator::rhs(const VectorFn& u, const CVector& y0) const {
    const int N = degree();
    CVector b(dim_ * (N + 1));
    for (int j = 0; j < N; ++j) b.segment(j * dim_, dim_) = u(grid_[j]);
    b.tail(dim_) = y0;
    return b;
}

ChebPoly CollocationOperator::solve_ivp(const VectorFn& u, const CVector& y0) const {
    CVector v = solve(rhs(u, y0));
    return unstack(grid_, v, dim_);
}

ChebPoly solve_ivp(const LinearIVP& ivp, int N) {
    CollocationOperator op(ivp.A, ivp.dim, N);
    return op.solve_ivp(ivp.u, ivp.y0);
}

ChebPoly unstack(const ChebGrid& grid, const CVector& v, int dim) {
    CMatrix vals(grid.size(), dim);
    for (int j = 0; j < grid.size(); ++j)
        for (int s = 0; s < dim; ++s) vals(j, s) = v[j * dim + s];
    return ChebPoly(grid, std::move(vals));
}

CVector stack(const ChebPoly& p) {
    CVector v(p.values.size());
    for (Eigen::Index j = 0; j < p.values.rows(); ++j)
        for (Eigen::Index s = 0; s < p.values.cols(); ++s) v[j * p.values.cols() + s] = p.values(j, s);
    return v;
}

namespace {

double euclid(const std::vector<SupNormEstimate>& parts, bool& resolved) {
    double sq = 0.0;
    for (const auto& e : parts) {
        sq += e.bound * e.bound;
        resolved = resolved && e.resolved;
    }
    return std::sqrt(sq);
}

// One unit of roundoff on the magnitudes entering the computed initial residual.
double residual_rounding(const RMatrix& D, const CMatrix& values, double rest) {
    const int N = static_cast<int>(D.rows()) - 1;
    double mag = (D.row(N).cwiseAbs() * values.cwiseAbs()).norm() + rest;
    return kEps * mag;
}

double forcing_residual(const VectorFn& u, const ChebPoly& p, bool& resolved) {
    const int d = p.dim();
    const int N = p.degree();
    CMatrix nodes(N + 1, d);
    for (int j = 0; j <= N; ++j) nodes.row(j) = u(p.grid[j]).transpose();
    ChebPoly Iu(p.grid, nodes);
    VectorFn r = [&](double t) -> CVector { return u(t) - bary_eval(Iu, t); };
    return euclid(adaptive_sup_norm(r, d), resolved);
}

}  // namespace

CertifiedSolution apost_certificate(const LinearIVP& ivp, const ChebPoly& p, double C_A, std::optional<double> A_sup) {
    const int d = ivp.dim;
    const int N = p.degree();
    if (p.dim() != d) throw InvalidArgument("polynomial dimension does not match the problem");
    CertifiedSolution out{p, CVector::Zero(d)};
    out.C_A_used = C_A;

    RMatrix D = diff_matrix(N);
    CVector pdot_end = (D.row(N) * p.values).transpose();
    CVector Ay0 = ivp.A(-1.0) * ivp.y0;
    CVector u_end = ivp.u(-1.0);
    out.residual = pdot_end - Ay0 - u_end;
    double rounding = residual_rounding(D, p.values, Ay0.norm() + u_end.norm());

    bool resolved = true;
    CMatrix Ap(N + 1, d);
    for (int j = 0; j <= N; ++j) Ap.row(j) = (ivp.A(p.grid[j]) * p.values.row(j).transpose()).transpose();
    ChebPoly IAp(p.grid, Ap);
    VectorFn ap_res = [&](double t) -> CVector { return ivp.A(t) * bary_eval(p, t) - bary_eval(IAp, t); };
    double ap_term = euclid(adaptive_sup_norm(ap_res, d), resolved);
    double u_term = forcing_residual(ivp.u, p, resolved);

    double a_sup;
    if (A_sup) {
        a_sup = *A_sup;
    } else {
        auto est = matrix_sup_bound(ivp.A, d);
        a_sup = est.bound;
        resolved = resolved && est.resolved;
    }

    double bracket = ap_term + u_term + out.residual.norm() + rounding;
    out.err_sup = 2.0 * C_A * bracket;
    out.deriv_err_sup = (2.0 * a_sup * C_A + 1.0) * bracket;
    out.resolved = resolved;
    return out;
}

double constant_coeff_certificate(cplx a0, const ScalarFn& u, cplx y0, const ChebPoly& p) {
    const int N = p.degree();
    RMatrix D = diff_matrix(N);
    cplx pdot_end = (D.row(N) * p.values.col(0))(0);
    double Rp = std::abs(pdot_end - a0 * y0 - u(-1.0));
    Rp += residual_rounding(D, p.values, std::abs(a0 * y0) + std::abs(u(-1.0)));
    bool resolved = true;
    VectorFn uv = [&u](double t) {
        CVector v(1);
        v[0] = u(t);
        return v;
    };
    double u_term = forcing_residual(uv, p, resolved);
    double re = a0.real();
    double base = (kPi * (std::abs(a0) + 1.0) + 4.0) / (2.0 * N * N);
    if (re > 0) {
        double g = std::exp(2.0 * re);
        return 2.0 * g * u_term + base * g * Rp;
    }
    double c = std::min(base * std::exp(-2.0 * re), kPi / (2.0 * N));
    return 2.0 * u_term + c * Rp;
}

std::vector<double> clenshaw_curtis_weights(int n) {
    if (n < 2 || n % 2) throw InvalidArgument("Clenshaw-Curtis order must be even and >= 2");
    std::vector<double> out(n + 1);
    for (int j = 0; j <= n; ++j) {
        double c = (j == 0 || j == n) ? 1.0 : 2.0;
        double s = 0.0;
        for (int k = 1; k <= n / 2; ++k) {
            double b = (k == n / 2) ? 1.0 : 2.0;
            s += b / (4.0 * k * k - 1.0) * std::cos(2.0 * k * j * kPi / n);
        }
        out[j] = c / n * (1.0 - s);
    }
    return out;
}

namespace {

constexpr int kPanelOrder = 16;

const std::vector<double>& cc_weights() {
    static const std::vector<double> w = clenshaw_curtis_weights(kPanelOrder);
    return w;
}

struct Panel {
    double a, b, value;
};

}  // namespace

GrowthConstant scalar_growth_constant(const ScalarFn& a) {
    constexpr int kBudget = 1 << 15;
    constexpr double kTol = 1e-10;
    GrowthConstant out;
    const auto& w = cc_weights();
    auto quad = [&](double lo, double hi) {
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo), s = 0.0;
        for (int j = 0; j <= kPanelOrder; ++j) {
            double t = mid + half * std::cos(kPi * j / kPanelOrder);
            s += w[j] * std::max(a(t).real(), 0.0);
        }
        out.evaluations += kPanelOrder + 1;
        return s * half;
    };

    std::vector<Panel> active{{-1.0, 1.0, quad(-1.0, 1.0)}};
    double frozen = 0.0, frozen_diff = 0.0;
    while (true) {
        std::vector<Panel> next;
        double total = frozen, diff = frozen_diff;
        std::vector<std::pair<Panel, double>> refined;
        for (const auto& p : active) {
            double m = 0.5 * (p.a + p.b);
            Panel l{p.a, m, quad(p.a, m)}, r{m, p.b, quad(m, p.b)};
            double d = std::abs(l.value + r.value - p.value);
            total += l.value + r.value;
            diff += d;
            refined.push_back({l, d});
            refined.push_back({r, d});
        }
        double scale = std::max(1.0, std::abs(total));
        if (diff <= kTol * scale) {
            out.integral = total;
            out.quadrature_diff = diff;
            break;
        }
        if (out.evaluations >= kBudget)
            throw NonConverged("growth-constant quadrature did not settle within 2^15 evaluations");
        // panels whose split changed nothing measurable stay frozen at the finer value
        for (std::size_t i = 0; i < refined.size(); i += 2) {
            double d = refined[i].second;
            if (d <= 1e-3 * kTol * scale) {
                frozen += refined[i].first.value + refined[i + 1].first.value;
                frozen_diff += d;
            } else {
                next.push_back(refined[i].first);
                next.push_back(refined[i + 1].first);
            }
        }
        active = std::move(next);
    }
    out.value = std::exp(out.integral + out.quadrature_diff);
    return out;
}

}  // namespace floqcert
