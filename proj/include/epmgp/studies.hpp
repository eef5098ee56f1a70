#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "epmgp/ep.hpp"
#include "epmgp/gaussian.hpp"
#include "epmgp/oracles.hpp"

namespace epmgp {

enum class StudyKind { rect, poly, polyM };
enum class PathologyKind { redundancy, extramass, rotated };

StudyKind study_kind_from_string(const std::string& s);
PathologyKind pathology_kind_from_string(const std::string& s);

struct StudyConfig {
    StudyKind kind = StudyKind::rect;
    std::vector<int> dims = {2, 3, 5, 10, 20};
    std::vector<int> m_list = {2, 4, 8, 10, 12, 16, 32, 64};  // polyM cells; n fixed at 10
    int cases_per_cell = 50;
    uint64_t seed = 0;
    EpConfig ep;
    double region_scale = 1.0;
    long long qmc_points = 500000;
    int qmc_shifts = 8;
    long long mc_samples = 1000000;
    int threads = 0;  // 0 = hardware concurrency
};

struct CaseResult {
    std::string case_id;
    int n = 0;
    int m = 0;
    uint64_t seed = 0;
    double log_z_ep = 0.0;
    double log_z_oracle = 0.0;
    double rel_error = 0.0;  // |Z_ep - Z_oracle| / Z_oracle
    double cond_k = 0.0;
    double cond_cprime = 0.0;
    double gram_fro = 0.0;
    double gram_l1 = 0.0;
    int sweeps = 0;
    bool converged = false;
    OracleMethod oracle_method = OracleMethod::mc;
    double oracle_stderr = 0.0;
};

struct CellAggregate {
    std::string cell_id;
    int n = 0;
    int m = 0;
    int cases = 0;
    double rel_err_median = 0.0;
    double rel_err_q25 = 0.0;
    double rel_err_q75 = 0.0;
    double oracle_rel_stderr_median = 0.0;
};

struct StudyResult {
    std::vector<CaseResult> rows;
    std::vector<CellAggregate> aggregates;
};

StudyResult run_study(const StudyConfig& config);

// Random correlation matrices (rescaled gen_gaussian covariances), EP on
// the positive orthant against the closed-form oracle; dims within {2, 3}.
StudyResult run_orthant_study(const std::vector<int>& dims, int cases_per_cell, uint64_t seed,
                              const EpConfig& ep = {}, int threads = 0);

struct PathologyRow {
    double sweep_value = 0.0;
    double alpha = 1.0;
    double log_z_ep = 0.0;
    double log_z_true = 0.0;
    double signed_rel_error = 0.0;  // (Z_ep - Z_true) / Z_true
    int sweeps = 0;
    bool converged = false;
    bool oscillated = false;
};

// Deliberately hard constructions over the unit box problem in n = 2:
// redundancy duplicates the box k times, extramass describes it as the
// intersection of two half-width-w boxes, rotated describes it by r
// minimally-sized rotated boxes. log_z_true is the product value of the
// [-1,1]^2 box under N(0, I).
std::vector<PathologyRow> run_pathology(PathologyKind kind, const std::vector<double>& sweep,
                                        const EpConfig& ep);

struct AlphaSweepResult {
    std::vector<PathologyRow> rows;               // one per (sweep value, alpha)
    std::vector<PathologyRow> optimal;            // golden-section best alpha per sweep value
};

AlphaSweepResult run_alpha_sweep(PathologyKind kind, const std::vector<double>& sweep,
                                 const std::vector<double>& alpha_grid, const EpConfig& ep);

// The pathology target problem and its pieces, exposed for tests.
PolyhedralRegion pathology_region(PathologyKind kind, double sweep_value);
double unit_box_log_mass();  // 2 log(Phi(1) - Phi(-1))
PathologyRow solve_pathology_case(PathologyKind kind, double sweep_value, double alpha,
                                  const EpConfig& ep);

// CSV writers: '#' metadata lines, one header row, 17 significant digits,
// byte-stable for fixed inputs.
void write_study_csv(std::ostream& os, const StudyConfig& config, const StudyResult& result);
void write_orthant_csv(std::ostream& os, uint64_t seed, const EpConfig& ep,
                       const StudyResult& result);
void write_pathology_csv(std::ostream& os, PathologyKind kind, const EpConfig& ep,
                         const std::vector<PathologyRow>& rows);
void write_alpha_sweep_csv(std::ostream& os, PathologyKind kind, const EpConfig& ep,
                           const AlphaSweepResult& result);

// %.17g formatting used by every CSV field.
std::string format_real(double v);

}  // namespace epmgp
