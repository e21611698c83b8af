#pragma once

#include "wavespec/spectra.hpp"
#include "wavespec/stats.hpp"
#include "wavespec/transforms.hpp"

#include <string>

namespace wavespec {

/// SpectraFit as JSON: points with the used mask, slope/intercept/H, the
/// method and a configuration echo. Key order is fixed so identical fits
/// serialize byte-identically.
std::string spectra_fit_json(const SpectraFit& fit);

/// Two-column x,y CSV of the fit's plot points (all points, masked or not).
std::string spectra_points_csv(const SpectraFit& fit);

std::string cv_report_json(const CvReport& rep);
std::string test_result_json(const TestResult& res);

/// Decomposition as JSON: metadata, per-level diagonal regions and the
/// approximation; off-diagonal regions included when present. Complex
/// values serialize as [re, im] pairs.
std::string decomposition_json(const DecompositionVar& dec);

} // namespace wavespec
