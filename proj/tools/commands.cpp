#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>

#include <Eigen/Core>

#include "floqcert/errors.hpp"
#include "floqcert/parallel.hpp"
#include "floqcert/version.hpp"

namespace floqcert::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <class F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json versions() {
    return {{"floqcert", kVersion},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)}};
}

json bound_json(const FundamentalBound& b) {
    return {{"value", b.value},
            {"provenance", to_string(b.provenance)},
            {"iterations", b.iterations},
            {"history", b.history},
            {"resolved", b.resolved}};
}

json base_report(const char* command, const RunConfig& c) {
    return {{"command", command}, {"config", config_to_json(c)}, {"versions", versions()}};
}

void write_report(const fs::path& out, const json& r) {
    fs::create_directories(out);
    std::ofstream f(out / "report.json");
    f << r.dump(2) << '\n';
    if (!f) throw StageError("output", "cannot write " + (out / "report.json").string());
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) throw InvalidArgument(std::string("unknown key '") + it.key() + "' in " + where);
}

FundamentalBound user_bound(double v) {
    FundamentalBound b;
    b.value = v;
    b.history = {v};
    b.provenance = BoundProvenance::UserSupplied;
    return b;
}

FundamentalBound fallback_bound(const MatrixFn& A, int dim, std::vector<std::string>& notes, const std::string& why) {
    notes.push_back("bootstrap failed (" + why + "); using the a priori bound");
    return apriori_bound(A, dim);
}

}  // namespace

RunConfig config_from_json(const json& j) {
    check_keys(j, {"problem", "params", "N", "delta", "ellipse_s", "period", "tol", "workers", "bounds", "chart"},
               "config");
    RunConfig c;
    if (j.contains("problem")) c.problem = j.at("problem").get<std::string>();
    if (j.contains("params"))
        for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it) c.params[it.key()] = it.value().get<double>();
    if (j.contains("N")) c.N = j.at("N").get<int>();
    if (j.contains("delta")) c.delta = j.at("delta").get<double>();
    if (j.contains("ellipse_s")) c.ellipse_s = j.at("ellipse_s").get<double>();
    if (j.contains("period")) c.period = j.at("period").get<double>();
    if (j.contains("tol") && !j.at("tol").is_null()) c.tol = j.at("tol").get<double>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    if (j.contains("bounds")) {
        const json& b = j.at("bounds");
        check_keys(b, {"C_A", "A_E", "B_E", "C_lambda"}, "bounds");
        auto opt = [&](const char* k, std::optional<double>& dst) {
            if (b.contains(k) && !b.at(k).is_null()) dst = b.at(k).get<double>();
        };
        opt("C_A", c.bounds.C_A);
        opt("A_E", c.bounds.A_E);
        opt("B_E", c.bounds.B_E);
        opt("C_lambda", c.bounds.C_lambda);
    }
    if (j.contains("chart")) {
        const json& ch = j.at("chart");
        check_keys(ch, {"x", "y", "x_range", "y_range", "resolution"}, "chart");
        if (ch.contains("x")) c.chart.x = ch.at("x").get<std::string>();
        if (ch.contains("y")) c.chart.y = ch.at("y").get<std::string>();
        if (ch.contains("x_range")) c.chart.x_range = ch.at("x_range").get<std::array<double, 2>>();
        if (ch.contains("y_range")) c.chart.y_range = ch.at("y_range").get<std::array<double, 2>>();
        if (ch.contains("resolution")) c.chart.resolution = ch.at("resolution").get<std::array<int, 2>>();
    }
    return c;
}

json config_to_json(const RunConfig& c) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    return {{"problem", c.problem},
            {"params", c.params},
            {"N", c.N},
            {"delta", c.delta},
            {"ellipse_s", c.ellipse_s},
            {"period", c.period},
            {"tol", opt(c.tol)},
            {"workers", c.workers},
            {"bounds",
             {{"C_A", opt(c.bounds.C_A)}, {"A_E", opt(c.bounds.A_E)}, {"B_E", opt(c.bounds.B_E)},
              {"C_lambda", opt(c.bounds.C_lambda)}}},
            {"chart",
             {{"x", c.chart.x}, {"y", c.chart.y}, {"x_range", c.chart.x_range}, {"y_range", c.chart.y_range},
              {"resolution", c.chart.resolution}}}};
}

void validate(const RunConfig& c) {
    problem_kind(c.problem);
    if (c.N < 1) throw InvalidArgument("N must be >= 1");
    if (!(c.delta > 0.0 && c.delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
    if (!(c.ellipse_s > 0.0)) throw InvalidArgument("ellipse_s must be positive");
    if (!(c.period > 0.0)) throw InvalidArgument("period must be positive");
    if (c.tol && !(*c.tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (c.chart.resolution[0] < 2 || c.chart.resolution[1] < 2) throw InvalidArgument("chart resolution must be >= 2");
}

json cmd_solve(const RunConfig& c, const fs::path& out) {
    stage("config", [&] { validate(c); return 0; });
    if (problem_kind(c.problem) != ProblemKind::Ivp) throw StageError("config", "solve needs an initial value problem");
    if (c.period != 2.0) throw StageError("config", "initial value problems are posed on [-1,1]");
    const IvpProblem prob = stage("problem", [&] { return make_ivp(c.problem, c.params); });
    const LinearIVP& ivp = prob.ivp;
    std::vector<std::string> notes;

    int N = c.N;
    json attempts = json::array();
    std::optional<CertifiedSolution> cert;
    FundamentalBound C;
    double general = 0.0;
    std::optional<double> constant;
    while (true) {
        C = stage("fundamental-bound", [&] {
            if (c.bounds.C_A) return user_bound(*c.bounds.C_A);
            if (ivp.dim == 1) {
                FundamentalBound f;
                auto g = scalar_growth_constant([A = ivp.A](double t) { return A(t)(0, 0); });
                f.value = g.value;
                f.history = {g.value};
                return f;
            }
            try {
                return bootstrap_bound(ivp.A, ivp.dim, N, {8, 1e-3, worker_count(c.workers)});
            } catch (const Diverged& e) {
                return fallback_bound(ivp.A, ivp.dim, notes, e.what());
            }
        });
        ChebPoly p = stage("collocation", [&] { return solve_ivp(ivp, N); });
        cert = stage("certificate", [&] { return apost_certificate(ivp, p, C.value); });
        general = cert->err_sup;
        if (prob.constant_a) {
            // both are bounds on |y - p|; report the sharper one
            constant = stage("certificate", [&] {
                return constant_coeff_certificate(*prob.constant_a, [u = ivp.u](double t) { return u(t)[0]; },
                                                  ivp.y0[0], cert->p);
            });
            cert->err_sup = std::min(cert->err_sup, *constant);
        }
        attempts.push_back({{"N", N}, {"err_sup", cert->err_sup}});
        if (!c.tol || cert->err_sup <= *c.tol || N >= 512) break;
        N = std::min(2 * N, 512);
    }

    json r = base_report("solve", c);
    r["N"] = N;
    r["attempts"] = attempts;
    r["tol_met"] = !c.tol || cert->err_sup <= *c.tol;
    r["err_sup"] = cert->err_sup;
    r["deriv_err_sup"] = cert->deriv_err_sup;
    r["resolved"] = cert->resolved;
    r["C_A"] = bound_json(C);
    r["err_sup_general"] = general;
    if (constant) r["err_sup_constant_coeff"] = *constant;
    if (prob.exact) {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            double t = -1.0 + 2.0 * i / 999.0;
            worst = std::max(worst, (prob.exact(t) - bary_eval(cert->p, t)).norm());
        }
        r["actual_error"] = worst;
    }
    r["notes"] = notes;

    fs::create_directories(out);
    std::ofstream csv(out / "solution.csv");
    csv << "t";
    for (int s = 0; s < ivp.dim; ++s) csv << ",y" << s << "_re,y" << s << "_im";
    csv << '\n';
    for (int j = 0; j <= N; ++j) {
        csv << num(cert->p.grid[j]);
        for (int s = 0; s < ivp.dim; ++s) csv << ',' << num(cert->p.values(j, s).real()) << ',' << num(cert->p.values(j, s).imag());
        csv << '\n';
    }
    r["files"] = {"report.json", "solution.csv"};
    write_report(out, r);
    return r;
}

json cmd_certify(const RunConfig& c, const fs::path& out) {
    stage("config", [&] { validate(c); return 0; });
    if (problem_kind(c.problem) != ProblemKind::Dde) throw StageError("config", "certify needs a delay problem");
    const DdeProblem prob = stage("problem", [&] { return make_dde(c.problem, c.params, c.period); });
    const DdeSystem& sys = prob.sys;
    std::vector<std::string> notes;

    FundamentalBound C = stage("fundamental-bound", [&] {
        if (c.bounds.C_A) return user_bound(*c.bounds.C_A);
        try {
            return default_fundamental_bound(sys, c.N, c.workers);
        } catch (const Diverged& e) {
            return fallback_bound(sys.A, sys.dim, notes, e.what());
        }
    });
    MonodromyMatrix M = stage("monodromy", [&] {
        auto m = build_monodromy(sys, c.N);
        m.eigen();
        return m;
    });

    const RegularityEllipse ell(c.ellipse_s);
    std::string source;
    EllipseData data = stage("ellipse", [&] {
        EllipseData d;
        bool user = c.bounds.C_lambda || (sys.dim == 1 && c.bounds.A_E && c.bounds.B_E);
        if (user) {
            source = "user";
            d.A_E = c.bounds.A_E.value_or(0.0);
            d.B_E = c.bounds.B_E.value_or(0.0);
            d.C_lambda = c.bounds.C_lambda;
        } else if (prob.ellipse) {
            source = "closed-form";
            d = prob.ellipse(ell, c.delta);
        } else {
            source = "numeric-estimate";
            d = estimate_ellipse_data(sys, ell, c.delta);
        }
        return d;
    });

    Certification cert = stage("certify", [&] {
        CertifyOptions o;
        o.workers = c.workers;
        return certify(sys, M, C, ell, data, c.delta, o);
    });

    json r = base_report("certify", c);
    json eig = json::array();
    for (Eigen::Index k = 0; k < cert.lambdas.size(); ++k) {
        if (std::abs(cert.lambdas[k]) < c.delta) break;
        eig.push_back({{"value", cjson(cert.lambdas[k])}, {"abs", std::abs(cert.lambdas[k])}, {"radius", cert.radius}});
    }
    json nus = json::array();
    for (Eigen::Index j = 0; j < cert.nus.rows(); ++j) {
        json row = json::array();
        for (Eigen::Index s = 0; s < cert.nus.cols(); ++s) row.push_back(cert.nus(j, s));
        nus.push_back(row);
    }
    for (const auto& n : cert.notes) notes.push_back(n);
    r["N"] = c.N;
    r["dim"] = sys.dim;
    r["spectral_radius"] = std::abs(cert.lambdas[0]);
    r["eigenvalues_above_delta"] = eig;
    r["radius"] = cert.radius;
    r["verdict"] = to_string(cert.verdict);
    r["stable"] = cert.stable;
    r["C_A"] = bound_json(C);
    r["ellipse"] = {{"s", ell.s},
                    {"S", ell.S},
                    {"eta", ell.eta},
                    {"A_E", data.A_E},
                    {"B_E", data.B_E},
                    {"C_lambda", data.C_lambda ? json(*data.C_lambda) : json(nullptr)},
                    {"source", source},
                    {"provenance", source == "numeric-estimate" ? "numeric-estimate" : "rigorous"}};
    r["ledger"] = {{"condV", cert.condV}, {"uhat_norm", cert.uhat_norm}, {"k_min", cert.k_min},
                   {"nu", nus},           {"xi", cert.xis},              {"eps", cert.epss},
                   {"omega", cert.omegas}};
    r["notes"] = notes;
    r["files"] = {"report.json"};
    write_report(out, r);
    return r;
}

unsigned char chart_grey(double rho) {
    if (!std::isfinite(rho) || rho < 0.0) return 0;
    double l = rho > 0.0 ? std::log10(rho) : -2.0;
    if (rho < 1.0) {
        double f = std::min(-l, 2.0) / 2.0;
        return static_cast<unsigned char>(128 + std::lround(127 * f));
    }
    double f = std::min(l, 2.0) / 2.0;
    return static_cast<unsigned char>(127 - std::lround(127 * f));
}

json cmd_chart(const RunConfig& c, const fs::path& out) {
    stage("config", [&] { validate(c); return 0; });
    if (problem_kind(c.problem) != ProblemKind::Dde) throw StageError("config", "chart needs a delay problem");
    stage("problem", [&] {
        Params p = c.params;
        p[c.chart.x] = c.chart.x_range[0];
        p[c.chart.y] = c.chart.y_range[0];
        return make_dde(c.problem, p, c.period);
    });
    const int nx = c.chart.resolution[0], ny = c.chart.resolution[1];
    const auto [x0, x1] = c.chart.x_range;
    const auto [y0, y1] = c.chart.y_range;
    std::vector<double> rho(static_cast<std::size_t>(nx) * ny, std::numeric_limits<double>::quiet_NaN());
    auto xy = [&](int idx) {
        int row = idx / nx, col = idx % nx;
        return std::pair{x0 + (x1 - x0) * col / (nx - 1), y1 - (y1 - y0) * row / (ny - 1)};
    };
    parallel_for(nx * ny, worker_count(c.workers), [&](int idx) {
        auto [x, y] = xy(idx);
        try {
            Params p = c.params;
            p[c.chart.x] = x;
            p[c.chart.y] = y;
            rho[idx] = spectral_radius(build_monodromy(make_dde(c.problem, p, c.period).sys, c.N));
        } catch (const std::exception&) {
        }
    });

    fs::create_directories(out);
    std::ofstream csv(out / "chart.csv");
    csv << "x,y,rho\n";
    std::ofstream pgm(out / "chart.pgm", std::ios::binary);
    pgm << "P5\n" << nx << ' ' << ny << "\n255\n";
    int stable = 0, unstable = 0, failed = 0;
    for (int idx = 0; idx < nx * ny; ++idx) {
        auto [x, y] = xy(idx);
        csv << num(x) << ',' << num(y) << ',' << (std::isnan(rho[idx]) ? "nan" : num(rho[idx])) << '\n';
        char g = static_cast<char>(chart_grey(rho[idx]));
        pgm.write(&g, 1);
        if (std::isnan(rho[idx]))
            ++failed;
        else if (rho[idx] < 1.0)
            ++stable;
        else
            ++unstable;
    }
    json r = base_report("chart", c);
    r["pixels"] = {{"stable", stable}, {"unstable", unstable}, {"failed", failed}};
    r["files"] = {"report.json", "chart.csv", "chart.pgm"};
    write_report(out, r);
    return r;
}

json cmd_bound(const RunConfig& c, const fs::path& out) {
    stage("config", [&] { validate(c); return 0; });
    auto [A, dim] = stage("problem", [&] { return make_homogeneous(c.problem, c.params, c.period); });
    FundamentalBound b = stage("bootstrap", [&, &A = A, &dim = dim] {
        return bootstrap_bound(A, dim, c.N, {8, 1e-3, worker_count(c.workers)});
    });
    json r = base_report("bound", c);
    r["dim"] = dim;
    r["bound"] = bound_json(b);
    r["files"] = {"report.json"};
    write_report(out, r);
    return r;
}

}  // namespace floqcert::cli
