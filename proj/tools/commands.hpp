#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "floqcert/problems.hpp"

namespace floqcert::cli {

/// Failure inside a named pipeline stage; the message is prefixed with the stage.
struct StageError : std::runtime_error {
    std::string stage;
    StageError(std::string st, const std::string& what) : std::runtime_error(st + ": " + what), stage(std::move(st)) {}
};

struct UserBounds {
    std::optional<double> C_A, A_E, B_E, C_lambda;
};

struct ChartConfig {
    std::string x = "a";
    std::string y = "b";
    std::array<double, 2> x_range{-3.0, 3.0};
    std::array<double, 2> y_range{-2.0, 4.0};
    std::array<int, 2> resolution{300, 300};
};

struct RunConfig {
    std::string problem = "intro_dde";
    Params params;
    int N = 64;
    double delta = 0.2;
    double ellipse_s = 0.5;
    double period = 2.0;
    /// solve: raise N by doubling until err_sup <= tol.
    std::optional<double> tol;
    int workers = 0;
    UserBounds bounds;
    ChartConfig chart;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

/// Checks the invariants every command relies on.
void validate(const RunConfig& c);

/// Each command writes its files into out and returns the report it wrote as report.json.
nlohmann::json cmd_solve(const RunConfig& c, const std::filesystem::path& out);
nlohmann::json cmd_certify(const RunConfig& c, const std::filesystem::path& out);
nlohmann::json cmd_chart(const RunConfig& c, const std::filesystem::path& out);
nlohmann::json cmd_bound(const RunConfig& c, const std::filesystem::path& out);

/// Grey level of a chart pixel: 128..255 for rho < 1, 127..0 otherwise, 0 for NaN.
unsigned char chart_grey(double rho);

}  // namespace floqcert::cli
