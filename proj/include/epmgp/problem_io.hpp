#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "epmgp/ep.hpp"
#include "epmgp/gaussian.hpp"

namespace epmgp {

// A problem file: mean, covariance, constraints, optional per-factor
// powers. Bounds accept JSON numbers, the literals "inf" / "-inf", or
// null meaning unbounded on that side.
struct ProblemSpec {
    Gaussian prior;
    PolyhedralRegion region;
    std::vector<double> alphas;  // empty = all ones
};

ProblemSpec parse_problem_json(const std::string& text);
ProblemSpec load_problem_file(const std::string& path);

std::string solve_result_json(const EpState& state);

}  // namespace epmgp
