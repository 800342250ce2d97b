#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "floqcert/errors.hpp"
#include "floqcert/version.hpp"

namespace cli = floqcert::cli;

namespace {

struct Flags {
    std::string config;
    std::string out = ".";
    std::optional<std::string> problem;
    std::optional<int> n;
    std::optional<double> delta, ellipse_s, period, tol, c_a;
    std::optional<int> workers;
    std::vector<std::string> params;
    std::optional<std::string> x, y;
    std::vector<double> x_range, y_range;
    std::vector<int> resolution;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--problem", f.problem, "registry problem name");
    sub->add_option("--n", f.n, "collocation degree N");
    sub->add_option("--delta", f.delta, "eigenvalue floor in (0,1)");
    sub->add_option("--ellipse-s", f.ellipse_s, "regularity ellipse semiminor axis");
    sub->add_option("--period", f.period, "period and delay of the physical problem");
    sub->add_option("--param", f.params, "problem parameter k=v (repeatable)");
    sub->add_option("--workers", f.workers, "worker threads");
}

cli::RunConfig build_config(const Flags& f) {
    cli::RunConfig c;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        c = cli::config_from_json(nlohmann::json::parse(in));
    }
    if (f.problem) c.problem = *f.problem;
    if (f.n) c.N = *f.n;
    if (f.delta) c.delta = *f.delta;
    if (f.ellipse_s) c.ellipse_s = *f.ellipse_s;
    if (f.period) c.period = *f.period;
    if (f.tol) c.tol = *f.tol;
    if (f.c_a) c.bounds.C_A = *f.c_a;
    if (f.workers) c.workers = *f.workers;
    for (const auto& kv : f.params) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw floqcert::InvalidArgument("--param expects k=v, got '" + kv + "'");
        c.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    if (f.x) c.chart.x = *f.x;
    if (f.y) c.chart.y = *f.y;
    if (f.x_range.size() == 2) c.chart.x_range = {f.x_range[0], f.x_range[1]};
    if (f.y_range.size() == 2) c.chart.y_range = {f.y_range[0], f.y_range[1]};
    if (f.resolution.size() == 2) c.chart.resolution = {f.resolution[0], f.resolution[1]};
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified Floquet multipliers for periodic delay equations"};
    app.set_version_flag("--version", floqcert::kVersion);
    app.require_subcommand(1);
    Flags f;

    auto* solve = app.add_subcommand("solve", "solve an initial value problem with an error certificate");
    add_common(solve, f);
    solve->add_option("--tol", f.tol, "double N (up to 512) until the certificate is below tol");
    solve->add_option("--C-A", f.c_a, "user-supplied fundamental solution bound");

    auto* certify = app.add_subcommand("certify", "certify the large Floquet multipliers of a delay problem");
    add_common(certify, f);
    certify->add_option("--C-A", f.c_a, "user-supplied fundamental solution bound");

    auto* chart = app.add_subcommand("chart", "stability chart over a parameter plane");
    add_common(chart, f);
    chart->add_option("--x", f.x, "horizontal parameter");
    chart->add_option("--y", f.y, "vertical parameter");
    chart->add_option("--x-range", f.x_range, "xmin xmax")->expected(2);
    chart->add_option("--y-range", f.y_range, "ymin ymax")->expected(2);
    chart->add_option("--resolution", f.resolution, "nx ny")->expected(2);

    auto* bound = app.add_subcommand("bound", "bootstrap a bound on the fundamental solution");
    add_common(bound, f);

    CLI11_PARSE(app, argc, argv);

    try {
        cli::RunConfig c = build_config(f);
        nlohmann::json r;
        if (solve->parsed()) r = cli::cmd_solve(c, f.out);
        if (certify->parsed()) r = cli::cmd_certify(c, f.out);
        if (chart->parsed()) r = cli::cmd_chart(c, f.out);
        if (bound->parsed()) r = cli::cmd_bound(c, f.out);
        std::cout << f.out << "/report.json\n";
        if (r.contains("verdict")) std::cout << "verdict: " << r["verdict"].get<std::string>() << '\n';
        return 0;
    } catch (const cli::StageError& e) {
        std::cerr << "floqcert: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "floqcert: config: " << e.what() << '\n';
        return 2;
    }
}
