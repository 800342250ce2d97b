#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "floqcert/eigcert.hpp"

namespace floqcert {

using Params = std::map<std::string, double>;

enum class ProblemKind { Dde, Ivp, Homogeneous };

struct DdeProblem {
    DdeSystem sys;
    /// Closed-form ellipse constants; empty when only a numeric estimate is available.
    std::function<EllipseData(const RegularityEllipse&, double delta)> ellipse;
};

struct IvpProblem {
    LinearIVP ivp;
    /// Exact solution when known.
    VectorFn exact;
    /// Set for scalar problems with constant a.
    std::optional<cplx> constant_a;
};

std::vector<std::string> problem_names();
ProblemKind problem_kind(const std::string& name);

/// Coefficients given on [-T/2, T/2] with delay T are mapped to [-1,1] with delay 2.
DdeSystem rescale(const DdeSystem& sys, double period);

DdeProblem make_dde(const std::string& name, const Params& params, double period = 2.0);
IvpProblem make_ivp(const std::string& name, const Params& params);

/// Coefficient A of y' = A y for the bound command; DDE problems contribute their A.
std::pair<MatrixFn, int> make_homogeneous(const std::string& name, const Params& params, double period = 2.0);

/// C_A for certification: the growth constant for scalar systems, the bootstrap otherwise.
FundamentalBound default_fundamental_bound(const DdeSystem& sys, int N, int workers = 0);

}  // namespace floqcert
