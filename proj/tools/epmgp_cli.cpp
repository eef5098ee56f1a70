// Command-line front end: solve single problems, query oracles, and run
// the study / pathology / alpha-sweep experiment suites to CSV.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "epmgp/errors.hpp"
#include "epmgp/oracles.hpp"
#include "epmgp/problem_io.hpp"
#include "epmgp/studies.hpp"

namespace {

using namespace epmgp;

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ValidationError("out", "cannot open output file: " + out_path);
    out << content;
}

std::vector<double> parse_csv_reals(const std::string& s, const std::string& field) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw ValidationError(field, "cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) throw ValidationError(field, "empty list");
    return out;
}

std::vector<int> parse_csv_ints(const std::string& s, const std::string& field) {
    std::vector<int> out;
    for (double v : parse_csv_reals(s, field)) out.push_back(static_cast<int>(v));
    return out;
}

struct SolveOptions {
    std::string problem;
    std::string out;
    std::string alphas;
    double tol = 1e-10;
    int max_sweeps = 200;
    double damping = 1.0;
    bool sequential_refresh = false;
    bool strict = false;
};

int cmd_solve(const SolveOptions& opt) {
    ProblemSpec spec = load_problem_file(opt.problem);
    EpConfig config;
    config.tol = opt.tol;
    config.max_sweeps = opt.max_sweeps;
    config.damping = opt.damping;
    config.sequential_refresh = opt.sequential_refresh;
    config.alphas = spec.alphas;
    if (!opt.alphas.empty()) {
        config.alphas = parse_csv_reals(opt.alphas, "alphas");
        if (config.alphas.size() == 1)
            config.alphas.assign(spec.region.size(), config.alphas.front());
    }
    const EpState state = config.alphas.empty() ? run_epmgp(spec.prior, spec.region, config)
                                                : run_power_ep(spec.prior, spec.region, config);
    write_output(opt.out, solve_result_json(state));
    if (!state.converged) {
        std::cerr << "warning: not converged after " << state.sweeps
                  << " sweeps (maxDelta=" << format_real(state.max_delta) << ")\n";
        if (opt.strict) return 2;
    }
    return 0;
}

struct OracleOptions {
    std::string method;
    std::string problem;
    std::string out;
    long long samples = 1000000;
    long long points = 500000;
    int shifts = 8;
    uint64_t seed = 0;
};

int cmd_oracle(const OracleOptions& opt) {
    ProblemSpec spec = load_problem_file(opt.problem);
    OracleEstimate est;
    if (opt.method == "mc") {
        est = mc_rejection(spec.prior, spec.region, opt.samples, opt.seed);
    } else if (opt.method == "qmc") {
        est = genz_qmc(spec.prior, spec.region, opt.points, opt.shifts, opt.seed);
    } else if (opt.method == "orthant") {
        est = orthant_analytic(spec.prior.cov());
    } else if (opt.method == "exact") {
        if (spec.region.size() != 1 || spec.prior.dim() != 1)
            throw ValidationError("problem", "exact oracle needs a univariate single-constraint problem");
        est = univariate_exact(spec.prior.mean()[0], spec.prior.cov()(0, 0),
                               spec.region[0].lower(), spec.region[0].upper());
    } else {
        throw ValidationError("method", "method must be mc|qmc|orthant|exact");
    }
    nlohmann::json j;
    j["value"] = est.value;
    j["stderr"] = est.std_error;
    j["method"] = to_string(est.method);
    j["samples"] = est.samples;
    j["prng"] = kPrngId;
    if (est.method == OracleMethod::qmc) j["lattice"] = lattice_rule_id();
    write_output(opt.out, j.dump(2) + "\n");
    return 0;
}

struct StudyOptions {
    std::string kind = "rect";
    std::string dims = "2,3,5,10,20";
    std::string m_list = "2,4,8,10,12,16,32,64";
    int cases = 50;
    uint64_t seed = 0;
    double tol = 1e-10;
    int max_sweeps = 200;
    double damping = 1.0;
    int threads = 0;
    std::string out;
};

int cmd_study(const StudyOptions& opt) {
    EpConfig ep;
    ep.tol = opt.tol;
    ep.max_sweeps = opt.max_sweeps;
    ep.damping = opt.damping;

    std::ostringstream os;
    if (opt.kind == "orthant") {
        const StudyResult result = run_orthant_study(parse_csv_ints(opt.dims, "dims"),
                                                     opt.cases, opt.seed, ep, opt.threads);
        write_orthant_csv(os, opt.seed, ep, result);
    } else {
        StudyConfig config;
        config.kind = study_kind_from_string(opt.kind);
        config.dims = parse_csv_ints(opt.dims, "dims");
        config.m_list = parse_csv_ints(opt.m_list, "m-list");
        config.cases_per_cell = opt.cases;
        config.seed = opt.seed;
        config.ep = ep;
        config.threads = opt.threads;
        const StudyResult result = run_study(config);
        write_study_csv(os, config, result);
    }
    write_output(opt.out, os.str());
    return 0;
}

struct PathologyOptions {
    std::string kind;
    std::string sweep;
    std::string grid;  // alpha-sweep only
    double tol = 1e-10;
    int max_sweeps = 1000;
    double damping = 0.5;
    // Heavily duplicated factors stall under the per-sweep schedule, so
    // these runners refresh sequentially unless asked otherwise.
    bool per_sweep_refresh = false;
    std::string out;
};

int cmd_pathology(const PathologyOptions& opt) {
    EpConfig ep;
    ep.tol = opt.tol;
    ep.max_sweeps = opt.max_sweeps;
    ep.damping = opt.damping;
    ep.sequential_refresh = !opt.per_sweep_refresh;
    const PathologyKind kind = pathology_kind_from_string(opt.kind);
    const std::vector<double> sweep = parse_csv_reals(opt.sweep, "sweep");
    std::ostringstream os;
    write_pathology_csv(os, kind, ep, run_pathology(kind, sweep, ep));
    write_output(opt.out, os.str());
    return 0;
}

int cmd_alpha_sweep(const PathologyOptions& opt) {
    EpConfig ep;
    ep.tol = opt.tol;
    ep.max_sweeps = opt.max_sweeps;
    ep.damping = opt.damping;
    ep.sequential_refresh = !opt.per_sweep_refresh;
    const PathologyKind kind = pathology_kind_from_string(opt.kind);
    const std::vector<double> sweep = parse_csv_reals(opt.sweep, "sweep");
    const std::vector<double> grid = parse_csv_reals(opt.grid, "grid");
    std::ostringstream os;
    write_alpha_sweep_csv(os, kind, ep, run_alpha_sweep(kind, sweep, grid, ep));
    write_output(opt.out, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian probabilities over polyhedral regions by expectation propagation"};
    app.require_subcommand(1);

    SolveOptions solve_opt;
    auto* solve = app.add_subcommand("solve", "Approximate log Z for a problem file");
    solve->add_option("--problem", solve_opt.problem, "problem JSON file")->required();
    solve->add_option("--tol", solve_opt.tol, "convergence tolerance");
    solve->add_option("--max-sweeps", solve_opt.max_sweeps, "sweep limit");
    solve->add_option("--damping", solve_opt.damping, "damping factor in (0,1]");
    solve->add_option("--alphas", solve_opt.alphas,
                      "per-factor powers (csv; single value broadcasts)");
    solve->add_flag("--sequential-refresh", solve_opt.sequential_refresh,
                    "refresh the posterior after every factor");
    solve->add_flag("--strict", solve_opt.strict, "exit 2 when not converged");
    solve->add_option("--out", solve_opt.out, "output JSON path (default stdout)");

    OracleOptions oracle_opt;
    auto* oracle = app.add_subcommand("oracle", "Ground-truth estimates");
    oracle->add_option("--method", oracle_opt.method, "mc|qmc|orthant|exact")->required();
    oracle->add_option("--problem", oracle_opt.problem, "problem JSON file")->required();
    oracle->add_option("--samples", oracle_opt.samples, "MC sample count");
    oracle->add_option("--points", oracle_opt.points, "lattice points");
    oracle->add_option("--shifts", oracle_opt.shifts, "random shifts");
    oracle->add_option("--seed", oracle_opt.seed, "PRNG seed");
    oracle->add_option("--out", oracle_opt.out, "output JSON path (default stdout)");

    StudyOptions study_opt;
    auto* study = app.add_subcommand("study", "Random-problem error studies (CSV)");
    study->add_option("--kind", study_opt.kind, "rect|poly|polyM|orthant")->required();
    study->add_option("--dims", study_opt.dims, "dimensions (csv)");
    study->add_option("--m-list", study_opt.m_list, "constraint counts for polyM (csv)");
    study->add_option("--cases", study_opt.cases, "cases per cell");
    study->add_option("--seed", study_opt.seed, "PRNG seed");
    study->add_option("--tol", study_opt.tol, "EP tolerance");
    study->add_option("--max-sweeps", study_opt.max_sweeps, "EP sweep limit");
    study->add_option("--damping", study_opt.damping, "EP damping");
    study->add_option("--threads", study_opt.threads, "worker threads (0 = auto)");
    study->add_option("--out", study_opt.out, "output CSV path (default stdout)");

    PathologyOptions path_opt;
    auto* pathology = app.add_subcommand("pathology", "Unit-box failure constructions (CSV)");
    pathology->add_option("--kind", path_opt.kind, "redundancy|extramass|rotated")->required();
    pathology->add_option("--sweep", path_opt.sweep, "sweep values (csv)")->required();
    pathology->add_option("--tol", path_opt.tol, "EP tolerance");
    pathology->add_option("--max-sweeps", path_opt.max_sweeps, "EP sweep limit");
    pathology->add_option("--damping", path_opt.damping, "EP damping");
    pathology->add_flag("--per-sweep-refresh", path_opt.per_sweep_refresh,
                        "refresh the posterior once per sweep instead of per factor");
    pathology->add_option("--out", path_opt.out, "output CSV path (default stdout)");

    PathologyOptions alpha_opt;
    auto* alpha = app.add_subcommand("alpha-sweep", "Power corrections over pathologies (CSV)");
    alpha->add_option("--kind", alpha_opt.kind, "redundancy|extramass|rotated")->required();
    alpha->add_option("--sweep", alpha_opt.sweep, "sweep values (csv)")->required();
    alpha->add_option("--grid", alpha_opt.grid, "alpha values (csv)")->required();
    alpha->add_option("--tol", alpha_opt.tol, "EP tolerance");
    alpha->add_option("--max-sweeps", alpha_opt.max_sweeps, "EP sweep limit");
    alpha->add_option("--damping", alpha_opt.damping, "EP damping");
    alpha->add_flag("--per-sweep-refresh", alpha_opt.per_sweep_refresh,
                    "refresh the posterior once per sweep instead of per factor");
    alpha->add_option("--out", alpha_opt.out, "output CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(solve_opt);
        if (oracle->parsed()) return cmd_oracle(oracle_opt);
        if (study->parsed()) return cmd_study(study_opt);
        if (pathology->parsed()) return cmd_pathology(path_opt);
        if (alpha->parsed()) return cmd_alpha_sweep(alpha_opt);
    } catch (const ValidationError& e) {
        std::cerr << "error in " << e.field() << ": " << e.what() << "\n";
        return 1;
    } catch (const Unsupported& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
