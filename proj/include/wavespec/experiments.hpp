#pragma once

#include "wavespec/fbm.hpp"
#include "wavespec/spectra.hpp"
#include "wavespec/stats.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wavespec {

/// One Hurst estimator: a spectra method, a filter, and its settings.
struct EstimatorSpec {
    SpectraMethod method = SpectraMethod::dual;
    std::string filter = "haar";
    std::optional<double> filter_param;
    PrimalConfig primal;
    DualConfig dual;

    std::string label() const;
    std::string settings() const;
};

/// Recommended settings from the simulation study: best dual (haar, xq=2,
/// [10,85]), second best dual (haar, xq=5, [20,95]), best primal NDWT
/// (symmlet4) and best primal DWT (db2), both fitted on levels
/// [2, min(8, J-2)].
EstimatorSpec best_dual_estimator();
EstimatorSpec second_dual_estimator();
EstimatorSpec best_primal_ndwt_estimator(int J);
EstimatorSpec best_primal_dwt_estimator(int J);

struct StudyConfig {
    std::vector<double> h_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    int n = 256;
    int replicates = 25;
    int levels = 0; // 0 means full depth J
    std::vector<EstimatorSpec> estimators;
    std::uint64_t base_seed = 20240901;
    int threads = 0;
};

struct CellResult {
    double h = 0.0;
    int h_index = 0;
    int replicate = 0;
    std::string estimator;
    double h_hat = 0.0;
    double sq_error = 0.0;
    bool ok = false;
    std::string error;
};

struct EstimatorSummary {
    std::string estimator;
    double amse = 0.0;
    double amse_se = 0.0; // Monte-Carlo standard error of the AMSE
    int successes = 0;
    int failures = 0;
    std::map<double, double> mse_by_h;
    std::map<double, double> bias_by_h;
};

struct StudyResult {
    StudyConfig config;
    std::vector<CellResult> cells; // ordered by (h index, replicate, estimator)
    std::vector<EstimatorSummary> summary;
};

/// Simulation study over the H grid. Fields depend only on
/// (base_seed, H index, replicate), so estimator lists can change without
/// perturbing the simulated inputs; cells run in parallel and are gathered
/// in a deterministic order.
StudyResult run_simulation_study(const StudyConfig& cfg);

void write_study_csv(const StudyResult& res, const std::string& path);
std::string study_summary_json(const StudyResult& res);

/// Applies each estimator to an already-built decomposition cache; shared
/// by the study harness and the exact-recovery checks.
std::vector<SpectraFit> estimate_all(const GridR& field, int levels,
                                     const std::vector<EstimatorSpec>& estimators);

struct MixedHResult {
    double h_lo = 0.0, h_hi = 0.0;
    int swap_levels = 0;
    std::vector<double> primal_hat; // paired; replicates with a failed estimate are dropped
    std::vector<double> dual_hat;
    int failures = 0;
    TestResult ttest;
};

/// Mixed-H complementarity experiment: swap the finest detail levels of an
/// H_hi field's NDWT with those from an H_lo field, invert, re-estimate by
/// primal and dual, and paired-t the two estimate streams.
MixedHResult run_mixed_h_experiment(double h_lo, double h_hi, int swap_levels, int replicates,
                                    int n, std::uint64_t seed, int threads = 0);

std::string mixed_result_json(const MixedHResult& res);

struct FeatureSet {
    std::string name;
    std::vector<std::string> features;
};

struct FeatureComparison {
    std::string set_a; // the larger (with-dual) set
    std::string set_b; // the nested baseline
    std::string added_feature;
    TestResult corrected_t; // H1: accuracy(A) > accuracy(B)
    TestResult deviance;    // added-coefficient chi-square(1)
};

struct FeatureStudyResult {
    std::vector<FeatureSet> sets;
    std::vector<CvReport> reports;           // aligned with sets
    std::vector<FeatureComparison> comparisons; // all nested one-feature pairs
};

/// Runs stratified repeated CV per feature set on identical fold splits,
/// then the corrected CV t-test and the deviance test for every pair of
/// sets that differ by exactly one added feature.
FeatureStudyResult run_feature_study(const Dataset& data, const std::vector<FeatureSet>& sets,
                                     int k, int r, std::uint64_t seed);

std::string feature_study_json(const FeatureStudyResult& res);

} // namespace wavespec
