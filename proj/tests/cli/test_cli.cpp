#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"

using namespace floqcert;
using namespace floqcert::cli;
namespace fs = std::filesystem;

namespace {

fs::path root() { return fs::temp_directory_path() / "floqcert_cli_test"; }

fs::path scratch(const std::string& name) {
    fs::path p = root() / name;
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

RunConfig config(const std::string& problem, int N) {
    RunConfig c;
    c.problem = problem;
    c.N = N;
    c.workers = 2;
    return c;
}

double rho_at(const fs::path& csv, double x, double y) {
    std::ifstream f(csv);
    std::string line;
    std::getline(f, line);
    while (std::getline(f, line)) {
        double a, b;
        char comma;
        std::istringstream row(line);
        row >> a >> comma >> b >> comma;
        std::string r;
        row >> r;
        if (std::abs(a - x) < 1e-12 && std::abs(b - y) < 1e-12) return std::stod(r);
    }
    return -1.0;
}

}  // namespace

TEST_CASE("solve reports") {
    auto zero = cmd_solve(config("zero", 8), scratch("zero"));
    CHECK(zero["err_sup"].get<double>() == 0.0);

    auto rot = cmd_solve(config("rotation", 32), scratch("rotation"));
    CHECK(rot["actual_error"].get<double>() < 1e-10);
    CHECK(rot["err_sup"].get<double>() >= rot["actual_error"].get<double>());

    auto ex1 = cmd_solve(config("example1", 20), scratch("example1"));
    double err = ex1["err_sup"].get<double>(), act = ex1["actual_error"].get<double>();
    CHECK(err >= act);
    CHECK(err <= 100 * act);

    RunConfig c = config("example3", 16);
    c.tol = 1e-8;
    fs::path out = scratch("example3");
    auto ex3 = cmd_solve(c, out);
    CHECK(ex3["tol_met"].get<bool>());
    CHECK(ex3["N"].get<int>() > 16);
    CHECK(ex3["err_sup"].get<double>() <= 1e-8);
    CHECK(fs::exists(out / "solution.csv"));
    CHECK(fs::exists(out / "report.json"));
}

TEST_CASE("certify reports") {
    RunConfig c = config("intro_dde", 184);
    c.delta = 0.2;
    c.ellipse_s = 0.5;
    auto r = cmd_certify(c, scratch("intro"));
    CHECK(r["verdict"] == "stable");
    CHECK(r["radius"].get<double>() < 0.09);
    CHECK(r["ellipse"]["provenance"] == "rigorous");
    CHECK(r["eigenvalues_above_delta"].size() >= 3);
    CHECK(r["ledger"]["omega"].size() == 184);
    CHECK(r["config"]["N"] == 184);

    RunConfig m = config("delayed_mathieu", 73);
    m.delta = 0.3;
    auto rm = cmd_certify(m, scratch("mathieu"));
    CHECK(rm["eigenvalues_above_delta"].size() == 2);
    CHECK(rm["C_A"]["provenance"] == "bootstrap");

    RunConfig z = config("scalar_constant", 64);
    z.ellipse_s = 2.0;
    auto rz = cmd_certify(z, scratch("zero-dde"));
    CHECK(rz["spectral_radius"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rz["verdict"] == "not-stable");

    RunConfig bad = config("example1", 10);
    CHECK_THROWS_AS(cmd_certify(bad, scratch("bad")), StageError);
    try {
        cmd_certify(bad, scratch("bad"));
    } catch (const StageError& e) {
        CHECK(e.stage == "config");
    }
}

TEST_CASE("numeric ellipse constants are tagged") {
    RunConfig c = config("intro_dde", 64);
    c.bounds.A_E = 2.33;
    c.bounds.B_E = 8.2;
    auto r = cmd_certify(c, scratch("user-bounds"));
    CHECK(r["ellipse"]["source"] == "user");
    CHECK(r["ellipse"]["B_E"].get<double>() == 8.2);
}

TEST_CASE("stability charts") {
    RunConfig c = config("intro_dde", 24);
    c.chart.x_range = {-1.5, -0.7};
    c.chart.y_range = {0.0, 2.0};
    c.chart.resolution = {5, 5};
    fs::path a = scratch("chart-a"), b = scratch("chart-b");
    auto r = cmd_chart(c, a);
    c.workers = 1;
    cmd_chart(c, b);
    CHECK(slurp(a / "chart.csv") == slurp(b / "chart.csv"));
    CHECK(slurp(a / "chart.pgm") == slurp(b / "chart.pgm"));
    std::string pgm = slurp(a / "chart.pgm");
    CHECK(pgm.rfind("P5\n5 5\n255\n", 0) == 0);
    CHECK(pgm.size() == std::string("P5\n5 5\n255\n").size() + 25);
    double rho = rho_at(a / "chart.csv", -1.1, 1.0);
    CHECK(rho == doctest::Approx(0.9369).epsilon(1e-3));
    CHECK(r["pixels"]["failed"] == 0);

    RunConfig m = config("delayed_mathieu", 30);
    m.chart.x = "b";
    m.chart.y = "c";
    m.chart.x_range = {0.0, 1.0};
    m.chart.y_range = {0.0, 2.0};
    m.chart.resolution = {3, 3};
    cmd_chart(m, scratch("chart-m"));
    CHECK(rho_at(root() / "chart-m" / "chart.csv", 0.5, 1.0) < 1.0);

    RunConfig z = config("scalar_constant", 16);
    z.chart.x_range = {-1.0, 1.0};
    z.chart.y_range = {-1.0, 1.0};
    z.chart.resolution = {3, 3};
    cmd_chart(z, scratch("chart-z"));
    CHECK(rho_at(root() / "chart-z" / "chart.csv", 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chart grey levels") {
    CHECK(chart_grey(0.01) == 255);
    CHECK(chart_grey(0.5) >= 128);
    CHECK(chart_grey(0.999) == 128);
    CHECK(chart_grey(1.0) == 127);
    CHECK(chart_grey(100.0) == 0);
    CHECK(chart_grey(std::nan("")) == 0);
    for (double r = 0.02; r < 1; r += 0.05) CHECK(chart_grey(r) >= chart_grey(r + 0.05 < 1 ? r + 0.05 : 0.999));
}

TEST_CASE("bound reports") {
    auto r = cmd_bound(config("mathieu_homogeneous", 50), scratch("bound-m"));
    CHECK(r["bound"]["value"].get<double>() == doctest::Approx(19.587).epsilon(0.02));
    CHECK(r["bound"]["history"][0].get<double>() == doctest::Approx(3.5387e16).epsilon(1e-4));
    auto z = cmd_bound(config("scalar_constant", 10), scratch("bound-z"));
    CHECK(z["bound"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    auto d = cmd_bound(config("delayed_mathieu", 50), scratch("bound-d"));
    CHECK(d["bound"]["value"].get<double>() == doctest::Approx(5.12).epsilon(0.05));
}

TEST_CASE("period rescaling") {
    RunConfig phys = config("custom", 40);
    phys.period = 4.0;
    phys.params = {{"a0", -0.3}, {"a1", 0.2}, {"b0", 0.25}, {"b2", 0.1}, {"w", 1.3}};
    RunConfig unit = config("custom", 40);
    unit.params = {{"a0", -0.6}, {"a1", 0.4}, {"b0", 0.5}, {"b2", 0.2}, {"w", 2.6}};
    auto a = cmd_certify(phys, scratch("resc-a"));
    auto b = cmd_certify(unit, scratch("resc-b"));
    REQUIRE(a["eigenvalues_above_delta"].size() == b["eigenvalues_above_delta"].size());
    for (std::size_t k = 0; k < a["eigenvalues_above_delta"].size(); ++k)
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(a["eigenvalues_above_delta"][k]["value"][i].get<double>() -
                           b["eigenvalues_above_delta"][k]["value"][i].get<double>()) < 1e-10);
    CHECK(a["radius"].get<double>() == doctest::Approx(b["radius"].get<double>()).epsilon(1e-6));
}

TEST_CASE("config round trip") {
    RunConfig c = config("delayed_mathieu", 73);
    c.params = {{"b", 0.5}, {"c", 1.0}};
    c.tol = 1e-9;
    c.bounds.C_lambda = 4121;
    c.chart.resolution = {10, 20};
    auto j = config_to_json(c);
    CHECK(config_to_json(config_from_json(j)) == j);
    j["bogus"] = 1;
    CHECK_THROWS(config_from_json(j));
    RunConfig bad = config("intro_dde", 10);
    bad.delta = 1.0;
    CHECK_THROWS(validate(bad));
}
