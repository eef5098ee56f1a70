#include "epmgp/studies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <thread>

#include "epmgp/errors.hpp"
#include "epmgp/generators.hpp"

namespace epmgp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

// Stream key tags; the Gaussian tag deliberately excludes the study kind so
// rect and poly studies at the same (seed, n, case) share Gaussians.
constexpr uint64_t kTagGaussian = 1;
constexpr uint64_t kTagRegion = 2;
constexpr uint64_t kTagOracle = 3;
constexpr uint64_t kTagCorrelation = 4;

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, count > 0 ? count : 1);
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t)
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

double quantile(std::vector<double> sorted, double p) {
    if (sorted.empty()) return 0.0;
    std::sort(sorted.begin(), sorted.end());
    const double idx = p * (sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(idx);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = idx - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

double rel_error_from_logs(double log_z_ep, double log_z_oracle) {
    return std::fabs(std::expm1(log_z_ep - log_z_oracle));
}

// Studies prefer the lattice oracle; regions it cannot reduce fall back to
// rejection sampling, extending the sample budget once (4x) if the first
// run misses the 1e-4 relative stderr target.
OracleEstimate study_oracle(const Gaussian& prior, const PolyhedralRegion& region,
                            const StudyConfig& config, uint64_t oracle_seed) {
    if (region.size() <= prior.dim()) {
        try {
            return genz_qmc(prior, region, config.qmc_points, config.qmc_shifts, oracle_seed);
        } catch (const NotReducible&) {
        }
    }
    OracleEstimate est = mc_rejection(prior, region, config.mc_samples, oracle_seed);
    if (est.value > 0.0 && est.std_error > 1e-4 * est.value)
        est = mc_rejection(prior, region, 4 * config.mc_samples, oracle_seed);
    return est;
}

struct Cell {
    std::string id;
    int n;
    int m;
};

std::string kind_name(StudyKind k) {
    switch (k) {
        case StudyKind::rect: return "rect";
        case StudyKind::poly: return "poly";
        case StudyKind::polyM: return "polyM";
    }
    return "?";
}

std::string kind_name(PathologyKind k) {
    switch (k) {
        case PathologyKind::redundancy: return "redundancy";
        case PathologyKind::extramass: return "extramass";
        case PathologyKind::rotated: return "rotated";
    }
    return "?";
}

CellAggregate aggregate_cell(const Cell& cell, const std::vector<CaseResult>& rows) {
    CellAggregate agg;
    agg.cell_id = "agg-" + cell.id;
    agg.n = cell.n;
    agg.m = cell.m;
    agg.cases = static_cast<int>(rows.size());
    std::vector<double> errs, rel_se;
    for (const auto& r : rows) {
        errs.push_back(r.rel_error);
        const double z = std::exp(r.log_z_oracle);
        rel_se.push_back(z > 0.0 ? r.oracle_stderr / z : kInf);
    }
    agg.rel_err_median = quantile(errs, 0.5);
    agg.rel_err_q25 = quantile(errs, 0.25);
    agg.rel_err_q75 = quantile(errs, 0.75);
    agg.oracle_rel_stderr_median = quantile(rel_se, 0.5);
    return agg;
}

void fill_case(CaseResult& row, const Gaussian& prior, const PolyhedralRegion& region,
               const EpState& state, const OracleEstimate& oracle) {
    const RegionMetrics metrics = region_metrics(prior, region);
    row.log_z_ep = state.log_z;
    row.log_z_oracle = std::log(oracle.value);
    row.rel_error = rel_error_from_logs(row.log_z_ep, row.log_z_oracle);
    row.cond_k = metrics.cond_k;
    row.cond_cprime = metrics.cond_cprime;
    row.gram_fro = metrics.gram_fro;
    row.gram_l1 = metrics.gram_l1;
    row.sweeps = state.sweeps;
    row.converged = state.converged;
    row.oracle_method = oracle.method;
    row.oracle_stderr = oracle.std_error;
}

}  // namespace

StudyKind study_kind_from_string(const std::string& s) {
    if (s == "rect") return StudyKind::rect;
    if (s == "poly") return StudyKind::poly;
    if (s == "polyM") return StudyKind::polyM;
    throw ValidationError("kind", "unknown study kind '" + s + "'");
}

PathologyKind pathology_kind_from_string(const std::string& s) {
    if (s == "redundancy") return PathologyKind::redundancy;
    if (s == "extramass") return PathologyKind::extramass;
    if (s == "rotated") return PathologyKind::rotated;
    throw ValidationError("kind", "unknown pathology kind '" + s + "'");
}

StudyResult run_study(const StudyConfig& config) {
    if (config.cases_per_cell < 1)
        throw ValidationError("cases", "cases_per_cell must be >= 1");

    std::vector<Cell> cells;
    if (config.kind == StudyKind::polyM) {
        if (config.dims.empty()) throw ValidationError("dims", "polyM needs one dimension");
        const int n = config.dims.front();
        for (int m : config.m_list)
            cells.push_back({kind_name(config.kind) + "-n" + std::to_string(n) + "-m" +
                                 std::to_string(m),
                             n, m});
    } else {
        for (int n : config.dims)
            cells.push_back({kind_name(config.kind) + "-n" + std::to_string(n), n, n});
    }

    const RngStream root(config.seed);
    const std::size_t per_cell = static_cast<std::size_t>(config.cases_per_cell);
    const std::size_t total = cells.size() * per_cell;
    std::vector<CaseResult> rows(total);

    parallel_for(total, config.threads, [&](std::size_t job) {
        const Cell& cell = cells[job / per_cell];
        const std::size_t idx = job % per_cell;
        const auto n = static_cast<std::size_t>(cell.n);
        const auto m = static_cast<std::size_t>(cell.m);

        RngStream gauss_stream = root.child(kTagGaussian, n, idx);
        const Gaussian prior = gen_gaussian(n, gauss_stream);

        RngStream region_stream =
            root.child(kTagRegion, static_cast<uint64_t>(config.kind) * 1000 + m, idx);
        const PolyhedralRegion region =
            config.kind == StudyKind::rect
                ? gen_rect_region(prior, region_stream, config.region_scale)
                : gen_poly_region(prior, m, region_stream, config.region_scale);

        const EpState state = run_epmgp(prior, region, config.ep);
        const uint64_t oracle_seed = mix64(config.seed ^ mix64(kTagOracle ^ mix64(job)));
        const OracleEstimate oracle = study_oracle(prior, region, config, oracle_seed);

        CaseResult& row = rows[job];
        char buf[32];
        std::snprintf(buf, sizeof buf, "%03zu", idx);
        row.case_id = cell.id + "-" + buf;
        row.n = cell.n;
        row.m = cell.m;
        row.seed = config.seed;
        fill_case(row, prior, region, state, oracle);
    });

    StudyResult result;
    result.rows = std::move(rows);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        std::vector<CaseResult> cell_rows(result.rows.begin() + c * per_cell,
                                          result.rows.begin() + (c + 1) * per_cell);
        result.aggregates.push_back(aggregate_cell(cells[c], cell_rows));
    }
    return result;
}

StudyResult run_orthant_study(const std::vector<int>& dims, int cases_per_cell, uint64_t seed,
                              const EpConfig& ep, int threads) {
    for (int n : dims)
        if (n != 2 && n != 3)
            throw ValidationError("dims", "orthant study supports dims 2 and 3 only");
    if (cases_per_cell < 1) throw ValidationError("cases", "cases_per_cell must be >= 1");

    const RngStream root(seed);
    const std::size_t per_cell = static_cast<std::size_t>(cases_per_cell);
    const std::size_t total = dims.size() * per_cell;
    std::vector<CaseResult> rows(total);

    parallel_for(total, threads, [&](std::size_t job) {
        const auto n = static_cast<std::size_t>(dims[job / per_cell]);
        const std::size_t idx = job % per_cell;

        RngStream stream = root.child(kTagCorrelation, n, idx);
        const Gaussian raw = gen_gaussian(n, stream);
        Matrix corr(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                corr(i, j) = raw.cov()(i, j) / std::sqrt(raw.cov()(i, i) * raw.cov()(j, j));
        symmetrize(corr);
        for (std::size_t i = 0; i < n; ++i) corr(i, i) = 1.0;
        const Gaussian prior(Vector(n, 0.0), corr);

        std::vector<BoxConstraint> cs;
        for (std::size_t i = 0; i < n; ++i) {
            Vector e(n, 0.0);
            e[i] = 1.0;
            cs.emplace_back(std::move(e), 0.0, kInf);
        }
        const PolyhedralRegion region{std::move(cs)};

        const EpState state = run_epmgp(prior, region, ep);
        const OracleEstimate oracle = orthant_analytic(corr);

        CaseResult& row = rows[job];
        char buf[32];
        std::snprintf(buf, sizeof buf, "%03zu", idx);
        row.case_id = "orthant-n" + std::to_string(n) + "-" + buf;
        row.n = static_cast<int>(n);
        row.m = static_cast<int>(n);
        row.seed = seed;
        fill_case(row, prior, region, state, oracle);
    });

    StudyResult result;
    result.rows = std::move(rows);
    for (std::size_t c = 0; c < dims.size(); ++c) {
        Cell cell{"orthant-n" + std::to_string(dims[c]), dims[c], dims[c]};
        std::vector<CaseResult> cell_rows(result.rows.begin() + c * per_cell,
                                          result.rows.begin() + (c + 1) * per_cell);
        result.aggregates.push_back(aggregate_cell(cell, cell_rows));
    }
    return result;
}

PolyhedralRegion pathology_region(PathologyKind kind, double sweep_value) {
    std::vector<BoxConstraint> cs;
    switch (kind) {
        case PathologyKind::redundancy: {
            const int k = static_cast<int>(sweep_value);
            if (k < 1) throw ValidationError("sweep", "redundancy needs k >= 1");
            for (int copy = 0; copy < k; ++copy) {
                cs.emplace_back(Vector{1.0, 0.0}, -1.0, 1.0);
                cs.emplace_back(Vector{0.0, 1.0}, -1.0, 1.0);
            }
            break;
        }
        case PathologyKind::extramass: {
            const double w = sweep_value;
            if (!(w >= 1.0)) throw ValidationError("sweep", "extramass needs half-width w >= 1");
            // Two half-width-w boxes whose intersection is exactly [-1,1]^2.
            cs.emplace_back(Vector{1.0, 0.0}, -1.0, 2.0 * w - 1.0);
            cs.emplace_back(Vector{0.0, 1.0}, -1.0, 2.0 * w - 1.0);
            cs.emplace_back(Vector{1.0, 0.0}, -(2.0 * w - 1.0), 1.0);
            cs.emplace_back(Vector{0.0, 1.0}, -(2.0 * w - 1.0), 1.0);
            break;
        }
        case PathologyKind::rotated: {
            const int r = static_cast<int>(sweep_value);
            if (r < 1) throw ValidationError("sweep", "rotated needs box count r >= 1");
            // Box j is a square of half-width 1/max(|cos|,|sin|) rotated by
            // j*pi/(2r): every face touches the target square's boundary,
            // so no constraint is redundant.
            for (int j = 0; j < r; ++j) {
                const double theta = j * kPi / (2.0 * r);
                const double c = std::cos(theta), s = std::sin(theta);
                const double h = 1.0 / std::max(std::fabs(c), std::fabs(s));
                cs.emplace_back(Vector{c, s}, -h, h);
                cs.emplace_back(Vector{-s, c}, -h, h);
            }
            break;
        }
    }
    return PolyhedralRegion(std::move(cs));
}

double unit_box_log_mass() {
    return 2.0 * std::log(univariate_exact(0.0, 1.0, -1.0, 1.0).value);
}

PathologyRow solve_pathology_case(PathologyKind kind, double sweep_value, double alpha,
                                  const EpConfig& ep) {
    const PolyhedralRegion region = pathology_region(kind, sweep_value);
    const Gaussian prior = Gaussian::standard(2);
    EpConfig config = ep;
    config.alphas.assign(region.size(), alpha);
    const EpState state = run_power_ep(prior, region, config);

    PathologyRow row;
    row.sweep_value = sweep_value;
    row.alpha = alpha;
    row.log_z_ep = state.log_z;
    row.log_z_true = unit_box_log_mass();
    row.signed_rel_error = std::expm1(state.log_z - row.log_z_true);
    row.sweeps = state.sweeps;
    row.converged = state.converged;
    row.oscillated = state.oscillated;
    return row;
}

std::vector<PathologyRow> run_pathology(PathologyKind kind, const std::vector<double>& sweep,
                                        const EpConfig& ep) {
    std::vector<PathologyRow> rows;
    rows.reserve(sweep.size());
    for (double v : sweep) rows.push_back(solve_pathology_case(kind, v, 1.0, ep));
    return rows;
}

AlphaSweepResult run_alpha_sweep(PathologyKind kind, const std::vector<double>& sweep,
                                 const std::vector<double>& alpha_grid, const EpConfig& ep) {
    for (double a : alpha_grid)
        if (!(a > 0.0)) throw ValidationError("grid", "alpha grid must be positive");

    AlphaSweepResult result;
    for (double v : sweep) {
        for (double a : alpha_grid)
            result.rows.push_back(solve_pathology_case(kind, v, a, ep));

        // Golden-section search for the error-free correction on [1, 2v].
        auto objective = [&](double a) {
            return std::fabs(solve_pathology_case(kind, v, a, ep).signed_rel_error);
        };
        const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = 1.0, hi = std::max(2.0 * v, 1.0 + 1e-6);
        double x1 = hi - ratio * (hi - lo);
        double x2 = lo + ratio * (hi - lo);
        double f1 = objective(x1), f2 = objective(x2);
        double best_alpha = f1 < f2 ? x1 : x2;
        double best_val = std::min(f1, f2);
        for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = objective(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = objective(x2);
            }
            if (f1 < best_val) {
                best_val = f1;
                best_alpha = x1;
            }
            if (f2 < best_val) {
                best_val = f2;
                best_alpha = x2;
            }
        }
        result.optimal.push_back(solve_pathology_case(kind, v, best_alpha, ep));
    }
    return result;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

const char* bool_str(bool b) { return b ? "true" : "false"; }

void write_common_metadata(std::ostream& os, uint64_t seed, const EpConfig& ep) {
    os << "# generator: epmgp v0.1.0\n";
    os << "# prng: " << kPrngId << "\n";
    os << "# lattice: " << lattice_rule_id() << "\n";
    os << "# seed: " << seed << "\n";
    os << "# ep: tol=" << format_real(ep.tol) << " maxSweeps=" << ep.max_sweeps
       << " damping=" << format_real(ep.damping)
       << " sequentialRefresh=" << bool_str(ep.sequential_refresh) << "\n";
}

void write_case_rows(std::ostream& os, const StudyResult& result) {
    os << "type,caseId,n,m,seed,logZ_ep,logZ_oracle,relError,relErrMedian,relErrQ25,"
          "relErrQ75,condK,condCprime,gramFro,gramL1,sweeps,converged,oracleMethod,"
          "oracleStderr\n";
    for (const auto& r : result.rows) {
        os << "case," << r.case_id << ',' << r.n << ',' << r.m << ',' << r.seed << ','
           << format_real(r.log_z_ep) << ',' << format_real(r.log_z_oracle) << ','
           << format_real(r.rel_error) << ",,,," << format_real(r.cond_k) << ','
           << format_real(r.cond_cprime) << ',' << format_real(r.gram_fro) << ','
           << format_real(r.gram_l1) << ',' << r.sweeps << ',' << bool_str(r.converged)
           << ',' << to_string(r.oracle_method) << ',' << format_real(r.oracle_stderr)
           << '\n';
    }
    for (const auto& a : result.aggregates) {
        os << "agg," << a.cell_id << ',' << a.n << ',' << a.m << ",,,,"
           << ',' << format_real(a.rel_err_median) << ',' << format_real(a.rel_err_q25)
           << ',' << format_real(a.rel_err_q75) << ",,,,," << a.cases << ",,,"
           << format_real(a.oracle_rel_stderr_median) << '\n';
    }
}

}  // namespace

void write_study_csv(std::ostream& os, const StudyConfig& config, const StudyResult& result) {
    os << "# epmgp study\n";
    os << "# kind: " << kind_name(config.kind) << "\n";
    write_common_metadata(os, config.seed, config.ep);
    os << "# region: bounds anchor +- scale*sqrt(n)*U(0,1), scale=" << format_real(config.region_scale)
       << "\n";
    os << "# oracle: qmc points=" << config.qmc_points << " shifts=" << config.qmc_shifts
       << " when m<=n, else mc samples=" << config.mc_samples
       << " (extended 4x when stderr > 1e-4*value)\n";
    os << "# agg rows: type-7 median/q25/q75 of relError per cell; sweeps column holds the case"
          " count, oracleStderr the median relative stderr\n";
    write_case_rows(os, result);
}

void write_orthant_csv(std::ostream& os, uint64_t seed, const EpConfig& ep,
                       const StudyResult& result) {
    os << "# epmgp orthant study\n";
    os << "# kind: orthant\n";
    write_common_metadata(os, seed, ep);
    os << "# oracle: closed-form orthant probability (n = 2, 3)\n";
    write_case_rows(os, result);
}

namespace {

void write_pathology_header(std::ostream& os, PathologyKind kind, const EpConfig& ep,
                            const char* command) {
    os << "# epmgp " << command << "\n";
    os << "# kind: " << kind_name(kind) << "\n";
    write_common_metadata(os, 0, ep);
    os << "# problem: N(0,I) in n=2 over the [-1,1]^2 box; logZ_true = 2*log(Phi(1)-Phi(-1))\n";
    if (kind == PathologyKind::redundancy)
        os << "# construction: region constraints duplicated k times (sweep value k)\n";
    if (kind == PathologyKind::extramass)
        os << "# construction: two boxes of half-width w (sweep value) intersecting in the"
              " unit box\n";
    if (kind == PathologyKind::rotated)
        os << "# construction: r boxes (sweep value r) at angles j*pi/(2r), each a rotated"
              " square of half-width 1/max(|cos|,|sin|) touching the unit box boundary\n";
    os << "type,kind,sweepValue,alpha,logZ_ep,logZ_true,signedRelError,sweeps,converged,"
          "oscillated\n";
}

void write_pathology_row(std::ostream& os, PathologyKind kind, const char* type,
                         const PathologyRow& r) {
    os << type << ',' << kind_name(kind) << ',' << format_real(r.sweep_value) << ','
       << format_real(r.alpha) << ',' << format_real(r.log_z_ep) << ','
       << format_real(r.log_z_true) << ',' << format_real(r.signed_rel_error) << ','
       << r.sweeps << ',' << bool_str(r.converged) << ',' << bool_str(r.oscillated) << '\n';
}

}  // namespace

void write_pathology_csv(std::ostream& os, PathologyKind kind, const EpConfig& ep,
                         const std::vector<PathologyRow>& rows) {
    write_pathology_header(os, kind, ep, "pathology");
    for (const auto& r : rows) write_pathology_row(os, kind, "case", r);
}

void write_alpha_sweep_csv(std::ostream& os, PathologyKind kind, const EpConfig& ep,
                           const AlphaSweepResult& result) {
    write_pathology_header(os, kind, ep, "alpha-sweep");
    for (const auto& r : result.rows) write_pathology_row(os, kind, "case", r);
    for (const auto& r : result.optimal) write_pathology_row(os, kind, "opt", r);
}

}  // namespace epmgp
