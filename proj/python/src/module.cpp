// Python bindings for the core operations: solving problems, querying the
// ground-truth oracles, interval moments, and region condition metrics.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <optional>

#include "epmgp/ep.hpp"
#include "epmgp/errors.hpp"
#include "epmgp/gaussian.hpp"
#include "epmgp/oracles.hpp"
#include "epmgp/trunc_moments.hpp"

namespace py = pybind11;
using namespace epmgp;

namespace {

using PyMatrix = std::vector<std::vector<double>>;
using PyConstraint = std::tuple<std::vector<double>, std::optional<double>, std::optional<double>>;

Matrix to_matrix(const PyMatrix& rows) {
    const std::size_t n = rows.size();
    const std::size_t m = n ? rows.front().size() : 0;
    Matrix out(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != m) throw ValidationError("cov", "matrix rows have ragged lengths");
        for (std::size_t j = 0; j < m; ++j) out(i, j) = rows[i][j];
    }
    return out;
}

PyMatrix from_matrix(const Matrix& a) {
    PyMatrix out(a.rows(), std::vector<double>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[i][j] = a(i, j);
    return out;
}

PolyhedralRegion to_region(const std::vector<PyConstraint>& constraints) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<BoxConstraint> cs;
    cs.reserve(constraints.size());
    for (const auto& [dir, lo, hi] : constraints)
        cs.emplace_back(dir, lo.value_or(-inf), hi.value_or(inf));
    return PolyhedralRegion(std::move(cs));
}

py::dict state_to_dict(const EpState& s) {
    py::dict d;
    d["logZ"] = s.log_z;
    d["Z"] = std::exp(s.log_z);
    d["mu"] = s.mu;
    d["sigma"] = from_matrix(s.sigma);
    d["sweeps"] = s.sweeps;
    d["converged"] = s.converged;
    d["oscillated"] = s.oscillated;
    return d;
}

py::dict oracle_to_dict(const OracleEstimate& e) {
    py::dict d;
    d["value"] = e.value;
    d["stderr"] = e.std_error;
    d["method"] = to_string(e.method);
    d["samples"] = e.samples;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gaussian probabilities over polyhedral regions by expectation propagation";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NotPositiveDefinite>(m, "NotPositiveDefiniteError", PyExc_ValueError);
    py::register_exception<TailUnderflow>(m, "TailUnderflowError", PyExc_ArithmeticError);
    py::register_exception<NotReducible>(m, "NotReducibleError", PyExc_ValueError);
    py::register_exception<Unsupported>(m, "UnsupportedError", PyExc_ValueError);

    m.def(
        "solve",
        [](const std::vector<double>& mean, const PyMatrix& cov,
           const std::vector<PyConstraint>& constraints, std::optional<std::vector<double>> alphas,
           double tol, int max_sweeps, double damping, bool sequential_refresh) {
            Gaussian prior(mean, to_matrix(cov));
            PolyhedralRegion region = to_region(constraints);
            EpConfig config;
            config.tol = tol;
            config.max_sweeps = max_sweeps;
            config.damping = damping;
            config.sequential_refresh = sequential_refresh;
            if (alphas) config.alphas = *alphas;
            const EpState state = config.alphas.empty() ? run_epmgp(prior, region, config)
                                                        : run_power_ep(prior, region, config);
            return state_to_dict(state);
        },
        py::arg("mean"), py::arg("cov"), py::arg("constraints"), py::arg("alphas") = py::none(),
        py::arg("tol") = 1e-10, py::arg("max_sweeps") = 200, py::arg("damping") = 1.0,
        py::arg("sequential_refresh") = false,
        "Approximate log Z, posterior mean and covariance for\n"
        "P(all lower_i < c_i . x < upper_i) under x ~ N(mean, cov).\n"
        "Constraints are (direction, lower, upper) tuples; None means unbounded.");

    m.def(
        "mc_rejection",
        [](const std::vector<double>& mean, const PyMatrix& cov,
           const std::vector<PyConstraint>& constraints, long long n_samples, uint64_t seed) {
            return oracle_to_dict(
                mc_rejection(Gaussian(mean, to_matrix(cov)), to_region(constraints), n_samples,
                             seed));
        },
        py::arg("mean"), py::arg("cov"), py::arg("constraints"), py::arg("n_samples") = 1000000,
        py::arg("seed") = 0);

    m.def(
        "genz_qmc",
        [](const std::vector<double>& mean, const PyMatrix& cov,
           const std::vector<PyConstraint>& constraints, long long n_points, int n_shifts,
           uint64_t seed) {
            return oracle_to_dict(genz_qmc(Gaussian(mean, to_matrix(cov)),
                                           to_region(constraints), n_points, n_shifts, seed));
        },
        py::arg("mean"), py::arg("cov"), py::arg("constraints"), py::arg("n_points") = 500000,
        py::arg("n_shifts") = 8, py::arg("seed") = 0);

    m.def(
        "orthant_analytic",
        [](const PyMatrix& correlations) {
            return oracle_to_dict(orthant_analytic(to_matrix(correlations)));
        },
        py::arg("correlations"));

    m.def(
        "univariate_exact",
        [](double mu, double sig2, std::optional<double> lower, std::optional<double> upper) {
            constexpr double inf = std::numeric_limits<double>::infinity();
            return oracle_to_dict(
                univariate_exact(mu, sig2, lower.value_or(-inf), upper.value_or(inf)));
        },
        py::arg("mu"), py::arg("sig2"), py::arg("lower") = py::none(),
        py::arg("upper") = py::none());

    m.def(
        "truncated_moments",
        [](double mu, double sig2, std::optional<double> lower, std::optional<double> upper) {
            constexpr double inf = std::numeric_limits<double>::infinity();
            const TruncatedMoments t =
                truncated_moments(mu, sig2, lower.value_or(-inf), upper.value_or(inf));
            py::dict d;
            d["zhat"] = t.zhat;
            d["muhat"] = t.muhat;
            d["sighat2"] = t.sighat2;
            d["log_zhat"] = t.log_zhat;
            return d;
        },
        py::arg("mu"), py::arg("sig2"), py::arg("lower") = py::none(),
        py::arg("upper") = py::none());

    m.def(
        "region_metrics",
        [](const std::vector<double>& mean, const PyMatrix& cov,
           const std::vector<PyConstraint>& constraints) {
            const RegionMetrics r =
                region_metrics(Gaussian(mean, to_matrix(cov)), to_region(constraints));
            py::dict d;
            d["condK"] = r.cond_k;
            d["condCprime"] = r.cond_cprime;
            d["gramFro"] = r.gram_fro;
            d["gramL1"] = r.gram_l1;
            return d;
        },
        py::arg("mean"), py::arg("cov"), py::arg("constraints"));

    m.def(
        "whiten",
        [](const std::vector<double>& mean, const PyMatrix& cov,
           const std::vector<PyConstraint>& constraints) {
            auto [dist, region] = whiten(Gaussian(mean, to_matrix(cov)), to_region(constraints));
            py::list out;
            for (const auto& c : region.constraints())
                out.append(py::make_tuple(c.direction(), c.lower(), c.upper()));
            py::dict d;
            d["mean"] = dist.mean();
            d["cov"] = from_matrix(dist.cov());
            d["constraints"] = out;
            return d;
        },
        py::arg("mean"), py::arg("cov"), py::arg("constraints"));

    m.attr("__version__") = "0.1.0";
}
