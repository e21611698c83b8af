#pragma once

#include "wavespec/experiments.hpp"
#include "wavespec/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wavespec {

/// Estimator settings behind the six image features. Defaults are the best
/// settings from the simulation study; primal fit ranges clamp to the
/// available levels of smaller images.
struct FeatureConfig {
    int levels = 0; // 0 = full depth J
    EstimatorSpec primal_dwt;  // H_p_dwt and the finest-level DWT entropy
    EstimatorSpec primal_ndwt; // H_p_ndwt and the finest-level NDWT entropy
    EstimatorSpec dual;        // H_d
    EstimatorSpec dual2;       // H_d2

    static FeatureConfig defaults();
    /// Overrides fields from a JSON object (documented key set; unknown
    /// keys are rejected).
    void apply_json(const std::string& json_text);
};

struct FeatureRow {
    std::optional<double> h_p_dwt, h_p_ndwt, h_d, h_d2, e_p_dwt, e_p_ndwt;
    std::vector<std::string> warnings;
};

extern const std::vector<std::string> kFeatureColumns;

/// Computes the six features of one power-of-two grayscale image:
/// primal DWT/NDWT Hurst estimates, two dual estimates, and the
/// finest-level wavelet entropies. Per-feature estimation failures leave
/// the cell empty and add a warning.
FeatureRow extract_features(const GridR& image, const FeatureConfig& cfg);

std::string feature_row_csv(const FeatureRow& row, std::optional<int> label);

} // namespace wavespec
