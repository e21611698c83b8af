#pragma once

#include "wavespec/transforms.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wavespec {

enum class SpectraMethod { primal_dwt, primal_ndwt, dual };

std::string spectra_method_str(SpectraMethod m);

/// Inclusive level range used for the primal fit; level indices are
/// absolute (coarsest possible is 0), as in the decomposition.
struct PrimalConfig {
    int j1 = 2;
    int j2 = 8;
};

/// Dual spectra settings: n_q = xq * L quantiles and the [p1, p2] percent
/// range of quantile probabilities whose intervals enter the fit.
struct DualConfig {
    int xq = 2;
    double p1 = 10.0;
    double p2 = 85.0;
};

/// Per-coefficient diagonal energies |d|^2 pooled over all detail levels.
struct DiagonalEnergies {
    std::vector<int> level;    // entry -> level index j
    std::vector<double> energy;
    int j_min = 0, j_max = 0;  // level range present (j_max is finest)
    std::size_t count_at(int j) const;
};

template <typename T>
DiagonalEnergies diagonal_energies(const Decomposition<T>& dec);
DiagonalEnergies diagonal_energies(const DecompositionVar& dec);

/// Completed quantile structure for the dual spectra:
/// boundaries q_0..q_M, log2 midpoints c_m, per-interval counts, mean
/// levels and level weights. Zero energies are dropped before quantile
/// computation; the dropped count is surfaced.
struct EnergyPool {
    int n_q = 0;                       // interior quantile count, M = n_q + 1 intervals
    std::size_t zeros_excluded = 0;
    std::size_t used_entries = 0;
    std::vector<double> q;             // q_0..q_M (q[0] = min, q[M] = max)
    std::vector<double> prob;          // quantile probability of q_i, i = 1..M-1
    std::vector<double> c;             // c[m-1] = log2((q_{m-1}+q_m)/2), m = 1..M
    std::vector<std::size_t> interval_count;
    std::vector<double> mean_level;    // NaN for empty intervals
    std::vector<std::vector<std::pair<int, double>>> level_weights; // per interval (j, w_j)
};

EnergyPool dual_quantiles(const DiagonalEnergies& entries, int n_q);

struct SpectraFit {
    SpectraMethod method = SpectraMethod::dual;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<char> used;
    double slope = 0.0, intercept = 0.0, h_hat = 0.0;
    bool ok = false;
    std::string error;

    // configuration echo for serialization
    std::string filter;
    int n = 0, levels = 0;
    std::optional<PrimalConfig> primal_cfg;
    std::optional<DualConfig> dual_cfg;
    std::size_t zeros_excluded = 0;
};

/// Primal spectra: points (j, log2 mean energy), OLS over j in [j1, j2],
/// H = -slope/2 - 1. Throws EstimationError if a level inside the fit
/// range has zero total energy.
SpectraFit primal_spectra(const DiagonalEnergies& entries, const PrimalConfig& cfg,
                          SpectraMethod method_label);

/// Dual spectra: points (c_m, mean level), OLS over the intervals whose
/// bounding quantile probabilities lie in [p1, p2] percent,
/// H = -(1/slope + 2)/2. A nonnegative fitted slope is reported in-band
/// (ok = false, fit retained); an empty fit range throws EstimationError.
SpectraFit dual_spectra(const DiagonalEnergies& entries, const DualConfig& cfg);

template <typename T>
SpectraFit primal_spectra(const Decomposition<T>& dec, const PrimalConfig& cfg);
template <typename T>
SpectraFit dual_spectra(const Decomposition<T>& dec, const DualConfig& cfg);
SpectraFit primal_spectra(const DecompositionVar& dec, const PrimalConfig& cfg);
SpectraFit dual_spectra(const DecompositionVar& dec, const DualConfig& cfg);

/// Shannon entropy (base 2) of the normalized energy distribution across
/// one level's diagonal coefficients.
double wavelet_entropy(const DiagonalEnergies& entries, int level);
template <typename T>
double wavelet_entropy(const Decomposition<T>& dec, int level);
double wavelet_entropy(const DecompositionVar& dec, int level);

double primal_h_from_slope(double slope);
double dual_h_from_slope(double slope);

} // namespace wavespec
