#pragma once

#include "wavespec/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wavespec {

enum class FilterName { haar, db2, db3, pollen, coif1, symmlet4, conf6 };

/// Orthonormal quadrature-mirror filter pair. `lowpass` is the scaling
/// filter h (sums to sqrt(2), unit energy); `highpass` is derived as
/// g[k] = (-1)^k conj(h[n-1-k]). conf6 carries complex taps.
struct WaveletFilter {
    FilterName name = FilterName::haar;
    double param = 0.0; // pollen rotation angle, radians
    bool complex_taps = false;
    std::vector<cdouble> lowpass;
    std::vector<cdouble> highpass;

    int taps() const { return static_cast<int>(lowpass.size()); }
    std::string label() const;

    /// Real-valued taps; throws std::invalid_argument for conf6.
    std::vector<double> lowpass_real() const;
    std::vector<double> highpass_real() const;
};

FilterName parse_filter_name(const std::string& name);
std::string filter_name_str(FilterName name);

/// Builds one of the seven supported filters. `param` is accepted only for
/// pollen (the angle, defaulting to pi/4) and must be finite.
WaveletFilter make_filter(FilterName name, std::optional<double> param = std::nullopt);
WaveletFilter make_filter(const std::string& name, std::optional<double> param = std::nullopt);

} // namespace wavespec
