#include "wavespec/spectra.hpp"

#include "wavespec/errors.hpp"
#include "wavespec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace wavespec {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string spectra_method_str(SpectraMethod m) {
    switch (m) {
        case SpectraMethod::primal_dwt: return "primal_dwt";
        case SpectraMethod::primal_ndwt: return "primal_ndwt";
        case SpectraMethod::dual: return "dual";
    }
    return "?";
}

std::size_t DiagonalEnergies::count_at(int j) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < level.size(); ++i)
        if (level[i] == j) ++c;
    return c;
}

template <typename T>
DiagonalEnergies diagonal_energies(const Decomposition<T>& dec) {
    if (dec.L < 2) throw std::invalid_argument("decomposition needs at least 2 detail levels");
    DiagonalEnergies out;
    std::size_t total = 0;
    for (const auto& lev : dec.levels) total += lev.hh.size();
    out.level.reserve(total);
    out.energy.reserve(total);
    out.j_max = dec.j_finest();
    out.j_min = dec.j_coarsest();
    for (const auto& lev : dec.levels) {
        for (const T& v : lev.hh.data) {
            out.level.push_back(lev.j);
            out.energy.push_back(energy_of(v));
        }
    }
    return out;
}

DiagonalEnergies diagonal_energies(const DecompositionVar& dec) {
    return std::visit([](const auto& d) { return diagonal_energies(d); }, dec);
}

EnergyPool dual_quantiles(const DiagonalEnergies& entries, int n_q) {
    if (n_q < 1) throw std::invalid_argument("quantile count must be positive");
    EnergyPool pool;
    pool.n_q = n_q;

    std::vector<double> e;
    e.reserve(entries.energy.size());
    for (double v : entries.energy) {
        if (v > 0.0)
            e.push_back(v);
        else
            ++pool.zeros_excluded;
    }
    pool.used_entries = e.size();
    if (e.size() < 2) throw EstimationError("energy pool is empty or degenerate after excluding zeros");
    std::sort(e.begin(), e.end());
    if (e.front() == e.back())
        throw EstimationError("all pooled energies are equal; quantile intervals are undefined");

    const int m_count = n_q + 1; // M intervals
    const std::size_t n = e.size();
    pool.q.resize(static_cast<std::size_t>(m_count) + 1);
    pool.prob.assign(static_cast<std::size_t>(n_q), 0.0);
    pool.q[0] = e.front();
    pool.q[static_cast<std::size_t>(m_count)] = e.back();
    for (int i = 1; i <= n_q; ++i) {
        // type-1 empirical quantile at probability (i - 0.5) / n_q
        const double p = (static_cast<double>(i) - 0.5) / static_cast<double>(n_q);
        std::size_t idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
        if (idx < 1) idx = 1;
        if (idx > n) idx = n;
        pool.q[static_cast<std::size_t>(i)] = e[idx - 1];
        pool.prob[static_cast<std::size_t>(i) - 1] = p;
    }

    pool.c.resize(static_cast<std::size_t>(m_count));
    for (int m = 1; m <= m_count; ++m)
        pool.c[static_cast<std::size_t>(m) - 1] =
            std::log2((pool.q[static_cast<std::size_t>(m) - 1] + pool.q[static_cast<std::size_t>(m)]) / 2.0);

    // Interval membership: I_1 = [q_0, q_1], I_m = (q_{m-1}, q_m] for m >= 2
    // (boundary energies resolve downward, matching the quantile definition).
    pool.interval_count.assign(static_cast<std::size_t>(m_count), 0);
    std::vector<double> level_sum(static_cast<std::size_t>(m_count), 0.0);
    std::vector<std::map<int, std::size_t>> lcount(static_cast<std::size_t>(m_count));
    const auto q_begin = pool.q.begin() + 1; // interior + max boundaries
    for (std::size_t i = 0; i < entries.energy.size(); ++i) {
        const double v = entries.energy[i];
        if (!(v > 0.0)) continue;
        const auto it = std::lower_bound(q_begin, pool.q.end(), v);
        std::size_t m = static_cast<std::size_t>(it - q_begin); // 0-based interval
        if (m >= static_cast<std::size_t>(m_count)) m = static_cast<std::size_t>(m_count) - 1;
        ++pool.interval_count[m];
        level_sum[m] += entries.level[i];
        ++lcount[m][entries.level[i]];
    }

    pool.mean_level.assign(static_cast<std::size_t>(m_count), kNaN);
    pool.level_weights.resize(static_cast<std::size_t>(m_count));
    for (std::size_t m = 0; m < static_cast<std::size_t>(m_count); ++m) {
        if (pool.interval_count[m] == 0) continue;
        pool.mean_level[m] = level_sum[m] / static_cast<double>(pool.interval_count[m]);
        for (const auto& [j, c] : lcount[m])
            pool.level_weights[m].emplace_back(
                j, static_cast<double>(c) / static_cast<double>(pool.interval_count[m]));
    }
    return pool;
}

double primal_h_from_slope(double slope) { return -slope / 2.0 - 1.0; }
double dual_h_from_slope(double slope) { return -0.5 * (1.0 / slope + 2.0); }

SpectraFit primal_spectra(const DiagonalEnergies& entries, const PrimalConfig& cfg,
                          SpectraMethod method_label) {
    if (cfg.j1 >= cfg.j2) throw std::invalid_argument("primal fit range requires j1 < j2");
    if (cfg.j1 < entries.j_min || cfg.j2 > entries.j_max)
        throw std::invalid_argument("primal fit range [" + std::to_string(cfg.j1) + ", " +
                                    std::to_string(cfg.j2) + "] outside decomposition levels");

    const int nlev = entries.j_max - entries.j_min + 1;
    std::vector<double> sum(static_cast<std::size_t>(nlev), 0.0);
    std::vector<std::size_t> cnt(static_cast<std::size_t>(nlev), 0);
    for (std::size_t i = 0; i < entries.energy.size(); ++i) {
        const std::size_t k = static_cast<std::size_t>(entries.level[i] - entries.j_min);
        sum[k] += entries.energy[i];
        ++cnt[k];
    }

    SpectraFit fit;
    fit.method = method_label;
    fit.primal_cfg = cfg;
    std::vector<double> fx, fy;
    for (int j = entries.j_min; j <= entries.j_max; ++j) {
        const std::size_t k = static_cast<std::size_t>(j - entries.j_min);
        const bool in_range = (j >= cfg.j1 && j <= cfg.j2);
        if (cnt[k] == 0 || sum[k] <= 0.0) {
            if (in_range)
                throw EstimationError("level j=" + std::to_string(j) +
                                      " has zero total energy; log2 spectrum undefined");
            continue; // level outside fit range with no mass: no plot point
        }
        const double mean_e = sum[k] / static_cast<double>(cnt[k]);
        fit.x.push_back(static_cast<double>(j));
        fit.y.push_back(std::log2(mean_e));
        fit.used.push_back(in_range ? 1 : 0);
        if (in_range) {
            fx.push_back(fit.x.back());
            fy.push_back(fit.y.back());
        }
    }
    const OlsFit ols = ols_fit(fx, fy);
    fit.slope = ols.slope;
    fit.intercept = ols.intercept;
    fit.h_hat = primal_h_from_slope(ols.slope);
    fit.ok = true;
    return fit;
}

SpectraFit dual_spectra(const DiagonalEnergies& entries, const DualConfig& cfg) {
    if (cfg.p1 < 0.0 || cfg.p2 > 100.0 || cfg.p1 >= cfg.p2)
        throw std::invalid_argument("dual fit range must satisfy 0 <= p1 < p2 <= 100");
    const int L = entries.j_max - entries.j_min + 1;
    const int n_q = cfg.xq * L;
    if (cfg.xq < 1 || n_q < 2) throw std::invalid_argument("xq must give at least 2 quantiles");

    const EnergyPool pool = dual_quantiles(entries, n_q);
    SpectraFit fit;
    fit.method = SpectraMethod::dual;
    fit.dual_cfg = cfg;
    fit.zeros_excluded = pool.zeros_excluded;

    const double lo = cfg.p1 / 100.0, hi = cfg.p2 / 100.0;
    const int m_count = n_q + 1;
    std::vector<double> fx, fy;
    for (int m = 1; m <= m_count; ++m) {
        const std::size_t mi = static_cast<std::size_t>(m) - 1;
        if (pool.interval_count[mi] == 0) continue;
        // interval bounds are the quantiles q_{m-1}, q_m with probabilities
        // (m-1.5)/n_q and (m-0.5)/n_q; the two unbounded end intervals only
        // qualify when the range is extended to 0 / 100.
        bool use;
        if (m == 1)
            use = (cfg.p1 == 0.0) && ((0.5 / n_q) <= hi + 1e-12);
        else if (m == m_count)
            use = (cfg.p2 == 100.0) && (lo <= (n_q - 0.5) / n_q + 1e-12);
        else
            use = (lo <= (m - 1.5) / n_q + 1e-12) && ((m - 0.5) / n_q <= hi + 1e-12);
        fit.x.push_back(pool.c[mi]);
        fit.y.push_back(pool.mean_level[mi]);
        fit.used.push_back(use ? 1 : 0);
        if (use) {
            fx.push_back(pool.c[mi]);
            fy.push_back(pool.mean_level[mi]);
        }
    }
    if (fx.size() < 2) throw EstimationError("dual fit range selects fewer than 2 spectra points");
    const OlsFit ols = ols_fit(fx, fy);
    fit.slope = ols.slope;
    fit.intercept = ols.intercept;
    if (ols.slope >= 0.0) {
        fit.ok = false;
        fit.h_hat = kNaN;
        fit.error = "dual spectra slope is nonnegative; H undefined";
    } else {
        fit.h_hat = dual_h_from_slope(ols.slope);
        fit.ok = true;
    }
    return fit;
}

template <typename T>
SpectraFit primal_spectra(const Decomposition<T>& dec, const PrimalConfig& cfg) {
    SpectraFit fit = primal_spectra(diagonal_energies(dec),cfg,
                                    dec.kind == TransformKind::dwt2d ? SpectraMethod::primal_dwt
                                                                     : SpectraMethod::primal_ndwt);
    fit.filter = dec.filter.label();
    fit.n = dec.n;
    fit.levels = dec.L;
    return fit;
}

template <typename T>
SpectraFit dual_spectra(const Decomposition<T>& dec, const DualConfig& cfg) {
    SpectraFit fit = dual_spectra(diagonal_energies(dec), cfg);
    fit.filter = dec.filter.label();
    fit.n = dec.n;
    fit.levels = dec.L;
    return fit;
}

SpectraFit primal_spectra(const DecompositionVar& dec, const PrimalConfig& cfg) {
    return std::visit([&](const auto& d) { return primal_spectra(d, cfg); }, dec);
}

SpectraFit dual_spectra(const DecompositionVar& dec, const DualConfig& cfg) {
    return std::visit([&](const auto& d) { return dual_spectra(d, cfg); }, dec);
}

double wavelet_entropy(const DiagonalEnergies& entries, int level) {
    if (level < entries.j_min || level > entries.j_max)
        throw std::invalid_argument("no detail level with index j=" + std::to_string(level));
    double total = 0.0;
    for (std::size_t i = 0; i < entries.energy.size(); ++i)
        if (entries.level[i] == level) total += entries.energy[i];
    if (total <= 0.0)
        throw EstimationError("level j=" + std::to_string(level) + " has zero total energy");
    double h = 0.0;
    for (std::size_t i = 0; i < entries.energy.size(); ++i) {
        if (entries.level[i] != level || entries.energy[i] <= 0.0) continue;
        const double p = entries.energy[i] / total;
        h -= p * std::log2(p);
    }
    return h;
}

template <typename T>
double wavelet_entropy(const Decomposition<T>& dec, int level) {
    const Grid<T>& g = dec.diagonal(level);
    double total = 0.0;
    for (const T& v : g.data) total += energy_of(v);
    if (total <= 0.0)
        throw EstimationError("level j=" + std::to_string(level) + " has zero total energy");
    double h = 0.0;
    for (const T& v : g.data) {
        const double e = energy_of(v);
        if (e <= 0.0) continue;
        const double p = e / total;
        h -= p * std::log2(p);
    }
    return h;
}

double wavelet_entropy(const DecompositionVar& dec, int level) {
    return std::visit([&](const auto& d) { return wavelet_entropy(d, level); }, dec);
}

template DiagonalEnergies diagonal_energies(const Decomposition<double>&);
template DiagonalEnergies diagonal_energies(const Decomposition<cdouble>&);
template SpectraFit primal_spectra(const Decomposition<double>&, const PrimalConfig&);
template SpectraFit primal_spectra(const Decomposition<cdouble>&, const PrimalConfig&);
template SpectraFit dual_spectra(const Decomposition<double>&, const DualConfig&);
template SpectraFit dual_spectra(const Decomposition<cdouble>&, const DualConfig&);
template double wavelet_entropy(const Decomposition<double>&, int);
template double wavelet_entropy(const Decomposition<cdouble>&, int);

} // namespace wavespec
