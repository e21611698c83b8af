#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wavespec {

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_ss = 0.0;
};

/// Ordinary least squares line through (x, y); throws EstimationError on
/// fewer than 2 points or degenerate x.
OlsFit ols_fit(std::span<const double> x, std::span<const double> y);

/// Feature matrix (n x p, row-major) with binary labels; the CSV layout is
/// a header of feature names plus a trailing `label` column.
struct Dataset {
    std::vector<std::string> feature_names;
    std::vector<double> features; // n x p row-major
    std::vector<int> labels;
    int n = 0;
    int p = 0;

    double feat(int i, int j) const { return features[static_cast<std::size_t>(i) * p + j]; }
    int feature_index(const std::string& name) const; // -1 when absent
    Dataset select(const std::vector<std::string>& names) const;

    static Dataset read_csv(const std::string& path);
    void write_csv(const std::string& path) const;
};

struct LogisticFit {
    std::vector<double> coef; // intercept first, then one per feature
    double deviance = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Maximum-likelihood logistic regression via IRLS with step-halving.
/// Perfect separation surfaces as converged = false with the iteration-cap
/// coefficients returned.
LogisticFit logistic_fit(const Dataset& data, int max_iter = 100, double tol = 1e-8);

/// Predicted P(label = 1) for one row under a fitted model.
double logistic_predict(const LogisticFit& fit, std::span<const double> row);

struct CvReport {
    int k = 0, r = 0;
    std::vector<double> sensitivity, specificity, accuracy; // one entry per (repetition, fold)
    double mean_sensitivity = 0, sd_sensitivity = 0;
    double mean_specificity = 0, sd_specificity = 0;
    double mean_accuracy = 0, sd_accuracy = 0;
    double n_test = 0, n_train = 0; // average fold sizes
};

/// r repetitions of stratified k-fold CV with a logistic classifier at the
/// given probability threshold (ties classify as positive). Fold
/// assignments depend only on (labels, k, r, seed), so feature sets
/// evaluated with the same seed share identical splits.
CvReport stratified_repeated_cv(const Dataset& data, int k, int r, double threshold,
                                std::uint64_t seed);

enum class TestKind { corrected_cv_t, deviance_chi2, paired_t };

struct TestResult {
    TestKind kind = TestKind::paired_t;
    double statistic = 0.0;
    double p_value = 1.0;
    double df = 0.0;
};

/// One-sided corrected repeated k-fold CV t-test (Bouckaert-Frank variance
/// multiplier 1/(k r) + n_test/n_train), H1: mean(acc_a) > mean(acc_b).
TestResult corrected_cv_ttest(std::span<const double> acc_a, std::span<const double> acc_b, int k,
                              int r, double n_train, double n_test);

/// Chi-square(1) test of the deviance drop from adding exactly one feature.
TestResult deviance_test(const Dataset& data, const std::vector<std::string>& reduced_features,
                         const std::vector<std::string>& full_features);

/// Standard two-sided paired t-test.
TestResult paired_ttest(std::span<const double> x, std::span<const double> y);

std::string test_kind_str(TestKind k);

} // namespace wavespec
