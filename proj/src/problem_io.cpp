#include "epmgp/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "epmgp/errors.hpp"

namespace epmgp {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_bound(const json& j, const std::string& field, double unbounded) {
    if (j.is_null()) return unbounded;
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
        throw ValidationError(field, field + " must be a number, \"inf\", \"-inf\", or null");
    }
    throw ValidationError(field, field + " must be a number, \"inf\", \"-inf\", or null");
}

Vector parse_vector(const json& j, const std::string& field) {
    if (!j.is_array()) throw ValidationError(field, field + " must be an array of numbers");
    Vector v;
    v.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) throw ValidationError(field, field + " must contain only numbers");
        v.push_back(x.get<double>());
    }
    return v;
}

}  // namespace

ProblemSpec parse_problem_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("json", std::string("problem file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("json", "problem file must be a JSON object");
    if (!j.contains("mean")) throw ValidationError("mean", "missing field mean");
    if (!j.contains("cov")) throw ValidationError("cov", "missing field cov");
    if (!j.contains("constraints")) throw ValidationError("constraints", "missing field constraints");

    const Vector mean = parse_vector(j["mean"], "mean");
    const std::size_t n = mean.size();

    const json& jc = j["cov"];
    if (!jc.is_array() || jc.size() != n)
        throw ValidationError("cov", "cov must be an n x n array of rows");
    Matrix cov(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector row = parse_vector(jc[i], "cov");
        if (row.size() != n) throw ValidationError("cov", "cov rows must have length n");
        for (std::size_t k = 0; k < n; ++k) cov(i, k) = row[k];
    }

    const json& jcs = j["constraints"];
    if (!jcs.is_array() || jcs.empty())
        throw ValidationError("constraints", "constraints must be a non-empty array");
    std::vector<BoxConstraint> cs;
    cs.reserve(jcs.size());
    std::size_t idx = 0;
    for (const auto& c : jcs) {
        const std::string where = "constraints[" + std::to_string(idx) + "]";
        if (!c.is_object()) throw ValidationError(where, where + " must be an object");
        if (!c.contains("direction"))
            throw ValidationError(where + ".direction", "missing constraint direction");
        Vector dir = parse_vector(c["direction"], where + ".direction");
        const double lo = c.contains("lower") ? parse_bound(c["lower"], where + ".lower", -kInf)
                                              : -kInf;
        const double hi = c.contains("upper") ? parse_bound(c["upper"], where + ".upper", kInf)
                                              : kInf;
        cs.emplace_back(std::move(dir), lo, hi);
        ++idx;
    }

    std::vector<double> alphas;
    if (j.contains("alphas") && !j["alphas"].is_null()) {
        alphas = parse_vector(j["alphas"], "alphas");
        if (alphas.size() != cs.size())
            throw ValidationError("alphas", "alphas length must match constraints");
        for (double a : alphas)
            if (!(a > 0.0)) throw ValidationError("alphas", "alphas must be positive");
    }

    return {Gaussian(mean, std::move(cov)), PolyhedralRegion(std::move(cs)), std::move(alphas)};
}

ProblemSpec load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("problem", "cannot open problem file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_json(ss.str());
}

std::string solve_result_json(const EpState& state) {
    json j;
    j["logZ"] = state.log_z;
    j["Z"] = std::exp(state.log_z);
    j["mu"] = state.mu;
    json sigma = json::array();
    for (std::size_t i = 0; i < state.sigma.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < state.sigma.cols(); ++k) row.push_back(state.sigma(i, k));
        sigma.push_back(std::move(row));
    }
    j["sigma"] = std::move(sigma);
    j["sweeps"] = state.sweeps;
    j["converged"] = state.converged;
    return j.dump(2) + "\n";
}

}  // namespace epmgp
