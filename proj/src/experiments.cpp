#include "wavespec/experiments.hpp"

#include "wavespec/errors.hpp"
#include "wavespec/parallel.hpp"
#include "wavespec/rng.hpp"
#include "wavespec/transforms.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace wavespec {

using nlohmann::ordered_json;

std::string EstimatorSpec::settings() const {
    char buf[96];
    if (method == SpectraMethod::dual)
        std::snprintf(buf, sizeof(buf), "xq=%d,p1=%g,p2=%g", dual.xq, dual.p1, dual.p2);
    else
        std::snprintf(buf, sizeof(buf), "j1=%d,j2=%d", primal.j1, primal.j2);
    return buf;
}

std::string EstimatorSpec::label() const {
    std::string f = filter;
    if (filter_param) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "(%.6g)", *filter_param);
        f += buf;
    }
    return spectra_method_str(method) + " " + f + " " + settings();
}

EstimatorSpec best_dual_estimator() {
    EstimatorSpec e;
    e.method = SpectraMethod::dual;
    e.filter = "haar";
    e.dual = {2, 10.0, 85.0};
    return e;
}

EstimatorSpec second_dual_estimator() {
    EstimatorSpec e;
    e.method = SpectraMethod::dual;
    e.filter = "haar";
    e.dual = {5, 20.0, 95.0};
    return e;
}

EstimatorSpec best_primal_ndwt_estimator(int J) {
    EstimatorSpec e;
    e.method = SpectraMethod::primal_ndwt;
    e.filter = "symmlet4";
    e.primal = {2, std::min(8, J - 2)}; // the finest level deviates from the energy law
    return e;
}

EstimatorSpec best_primal_dwt_estimator(int J) {
    EstimatorSpec e;
    e.method = SpectraMethod::primal_dwt;
    e.filter = "db2";
    e.primal = {2, std::min(8, J - 2)};
    return e;
}

std::vector<SpectraFit> estimate_all(const GridR& field, int levels,
                                     const std::vector<EstimatorSpec>& estimators) {
    const int J = ilog2(field.side());
    const int L = levels > 0 ? levels : J;
    // one decomposition per distinct (kind, filter); diagonal regions are all
    // the spectra need
    std::map<std::string, DecompositionVar> cache;
    auto dec_for = [&](const EstimatorSpec& e) -> const DecompositionVar& {
        const TransformKind kind = e.method == SpectraMethod::primal_dwt
                                       ? TransformKind::dwt2d
                                       : TransformKind::ndwt2d_scale_mixing;
        const std::string key = (kind == TransformKind::dwt2d ? "dwt:" : "ndwt:") + e.filter +
                                (e.filter_param ? std::to_string(*e.filter_param) : "");
        auto it = cache.find(key);
        if (it == cache.end()) {
            const WaveletFilter f = make_filter(e.filter, e.filter_param);
            it = cache.emplace(key, decompose(field, f, L, kind, /*diagonal_only=*/true)).first;
        }
        return it->second;
    };

    std::vector<SpectraFit> fits;
    fits.reserve(estimators.size());
    for (const auto& e : estimators) {
        try {
            if (e.method == SpectraMethod::dual)
                fits.push_back(dual_spectra(dec_for(e), e.dual));
            else
                fits.push_back(primal_spectra(dec_for(e), e.primal));
        } catch (const EstimationError& ex) {
            SpectraFit failed;
            failed.method = e.method;
            failed.ok = false;
            failed.error = ex.what();
            fits.push_back(std::move(failed));
        }
    }
    return fits;
}

StudyResult run_simulation_study(const StudyConfig& cfg) {
    if (cfg.replicates < 1) throw std::invalid_argument("study needs at least 1 replicate");
    for (double h : cfg.h_grid)
        if (!(h > 0.0) || !(h < 1.0)) throw std::invalid_argument("H grid values must lie in (0,1)");
    StudyResult res;
    res.config = cfg;
    const std::size_t n_h = cfg.h_grid.size();
    const std::size_t n_est = cfg.estimators.size();
    const std::size_t cells = n_h * static_cast<std::size_t>(cfg.replicates);

    std::vector<FbmGenerator> gens;
    gens.reserve(n_h);
    for (double h : cfg.h_grid) gens.emplace_back(h, cfg.n);

    res.cells.resize(cells * n_est);
    parallel_for(
        cells,
        [&](std::size_t cell) {
            const std::size_t hi = cell / static_cast<std::size_t>(cfg.replicates);
            const int rep = static_cast<int>(cell % static_cast<std::size_t>(cfg.replicates));
            const std::uint64_t seed = derive_seed(cfg.base_seed, hi, static_cast<std::uint64_t>(rep));
            const GridR field = gens[hi].sample(seed);
            const std::vector<SpectraFit> fits = estimate_all(field, cfg.levels, cfg.estimators);
            for (std::size_t e = 0; e < n_est; ++e) {
                CellResult& out = res.cells[cell * n_est + e];
                out.h = cfg.h_grid[hi];
                out.h_index = static_cast<int>(hi);
                out.replicate = rep;
                out.estimator = cfg.estimators[e].label();
                if (fits[e].ok) {
                    out.h_hat = fits[e].h_hat;
                    out.sq_error = (out.h_hat - out.h) * (out.h_hat - out.h);
                    out.ok = true;
                } else {
                    out.error = fits[e].error;
                }
            }
        },
        cfg.threads);

    // summaries, in estimator order
    for (std::size_t e = 0; e < n_est; ++e) {
        EstimatorSummary s;
        s.estimator = cfg.estimators[e].label();
        double sum_sq = 0.0, sum_sq2 = 0.0;
        std::map<double, std::pair<double, int>> mse_acc;
        std::map<double, std::pair<double, int>> bias_acc;
        for (std::size_t cell = 0; cell < cells; ++cell) {
            const CellResult& c = res.cells[cell * n_est + e];
            if (!c.ok) {
                ++s.failures;
                continue;
            }
            ++s.successes;
            sum_sq += c.sq_error;
            sum_sq2 += c.sq_error * c.sq_error;
            auto& m = mse_acc[c.h];
            m.first += c.sq_error;
            ++m.second;
            auto& b = bias_acc[c.h];
            b.first += c.h_hat - c.h;
            ++b.second;
        }
        if (s.successes > 0) {
            const double n = static_cast<double>(s.successes);
            s.amse = sum_sq / n;
            const double var = std::max(0.0, sum_sq2 / n - s.amse * s.amse);
            s.amse_se = std::sqrt(var / n);
            for (const auto& [h, acc] : mse_acc) s.mse_by_h[h] = acc.first / acc.second;
            for (const auto& [h, acc] : bias_acc) s.bias_by_h[h] = acc.first / acc.second;
        }
        res.summary.push_back(std::move(s));
    }
    return res;
}

void write_study_csv(const StudyResult& res, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write study CSV: " + path);
    out << "H,estimator,replicate,H_hat,sq_error,ok,error\n";
    char buf[64];
    for (const auto& c : res.cells) {
        std::snprintf(buf, sizeof(buf), "%.17g", c.h);
        out << buf << ",\"" << c.estimator << "\"," << c.replicate << ",";
        if (c.ok) {
            std::snprintf(buf, sizeof(buf), "%.17g", c.h_hat);
            out << buf << ",";
            std::snprintf(buf, sizeof(buf), "%.17g", c.sq_error);
            out << buf << ",1,\n";
        } else {
            out << ",,0,\"" << c.error << "\"\n";
        }
    }
}

std::string study_summary_json(const StudyResult& res) {
    ordered_json j;
    j["n"] = res.config.n;
    j["replicates"] = res.config.replicates;
    j["base_seed"] = res.config.base_seed;
    j["h_grid"] = res.config.h_grid;
    j["estimators"] = ordered_json::array();
    for (const auto& s : res.summary) {
        ordered_json e;
        e["estimator"] = s.estimator;
        e["amse"] = s.amse;
        e["amse_se"] = s.amse_se;
        e["successes"] = s.successes;
        e["failures"] = s.failures;
        ordered_json mse = ordered_json::object(), bias = ordered_json::object();
        char key[32];
        for (const auto& [h, v] : s.mse_by_h) {
            std::snprintf(key, sizeof(key), "%g", h);
            mse[key] = v;
        }
        for (const auto& [h, v] : s.bias_by_h) {
            std::snprintf(key, sizeof(key), "%g", h);
            bias[key] = v;
        }
        e["mse_by_h"] = mse;
        e["bias_by_h"] = bias;
        j["estimators"].push_back(e);
    }
    return j.dump(2);
}

MixedHResult run_mixed_h_experiment(double h_lo, double h_hi, int swap_levels, int replicates,
                                    int n, std::uint64_t seed, int threads) {
    if (!(h_lo > 0.0) || !(h_lo < h_hi) || !(h_hi < 1.0))
        throw std::invalid_argument("mixed-H experiment requires 0 < H_lo < H_hi < 1");
    const int J = ilog2(n);
    if (!is_pow2(n)) throw std::invalid_argument("side length must be a power of two");
    if (swap_levels < 0 || swap_levels >= J)
        throw std::invalid_argument("swap_levels must lie in [0, L)");

    const FbmGenerator gen_lo(h_lo, n), gen_hi(h_hi, n);
    const WaveletFilter haar = make_filter(FilterName::haar);
    const EstimatorSpec primal = best_primal_ndwt_estimator(J);
    const EstimatorSpec dual = best_dual_estimator();

    struct Pair {
        double primal = 0.0, dual = 0.0;
        bool ok = false;
        std::string error;
    };
    std::vector<Pair> rows(static_cast<std::size_t>(replicates));
    parallel_for(
        static_cast<std::size_t>(replicates),
        [&](std::size_t rep) {
            const GridR lo = gen_lo.sample(derive_seed(seed, rep, 0));
            const GridR hi = gen_hi.sample(derive_seed(seed, rep, 1));
            DecompositionR dec_hi = ndwt2d(hi, haar, J);
            if (swap_levels > 0) {
                const DecompositionR dec_lo = ndwt2d(lo, haar, J);
                for (int s = 0; s < swap_levels; ++s)
                    dec_hi.levels[static_cast<std::size_t>(s)] =
                        dec_lo.levels[static_cast<std::size_t>(s)];
            }
            const GridR mixed = inverse_ndwt2d(dec_hi);
            Pair& out = rows[rep];
            try {
                const std::vector<SpectraFit> fits = estimate_all(mixed, J, {primal, dual});
                if (fits[0].ok && fits[1].ok) {
                    out.primal = fits[0].h_hat;
                    out.dual = fits[1].h_hat;
                    out.ok = true;
                } else {
                    out.error = fits[0].ok ? fits[1].error : fits[0].error;
                }
            } catch (const std::exception& ex) {
                out.error = ex.what();
            }
        },
        threads);

    MixedHResult res;
    res.h_lo = h_lo;
    res.h_hi = h_hi;
    res.swap_levels = swap_levels;
    for (const auto& row : rows) {
        if (!row.ok) {
            ++res.failures;
            continue;
        }
        res.primal_hat.push_back(row.primal);
        res.dual_hat.push_back(row.dual);
    }
    if (res.primal_hat.size() < 2)
        throw EstimationError("mixed-H experiment produced fewer than 2 successful pairs");
    res.ttest = paired_ttest(res.primal_hat, res.dual_hat);
    return res;
}

std::string mixed_result_json(const MixedHResult& res) {
    ordered_json j;
    j["h_lo"] = res.h_lo;
    j["h_hi"] = res.h_hi;
    j["swap_levels"] = res.swap_levels;
    j["replicates_used"] = res.primal_hat.size();
    j["failures"] = res.failures;
    j["primal_h_hat"] = res.primal_hat;
    j["dual_h_hat"] = res.dual_hat;
    j["paired_t"] = {{"statistic", res.ttest.statistic},
                     {"p_value", res.ttest.p_value},
                     {"df", res.ttest.df}};
    return j.dump(2);
}

FeatureStudyResult run_feature_study(const Dataset& data, const std::vector<FeatureSet>& sets,
                                     int k, int r, std::uint64_t seed) {
    FeatureStudyResult res;
    res.sets = sets;
    for (const auto& s : sets) {
        const Dataset sub = data.select(s.features); // validates columns
        res.reports.push_back(stratified_repeated_cv(sub, k, r, 0.5, seed));
    }
    for (std::size_t a = 0; a < sets.size(); ++a) {
        for (std::size_t b = 0; b < sets.size(); ++b) {
            if (a == b || sets[a].features.size() != sets[b].features.size() + 1) continue;
            // b nested in a with exactly one extra feature?
            std::string added;
            bool nested = true;
            for (const auto& f : sets[b].features)
                if (std::find(sets[a].features.begin(), sets[a].features.end(), f) ==
                    sets[a].features.end())
                    nested = false;
            if (!nested) continue;
            for (const auto& f : sets[a].features)
                if (std::find(sets[b].features.begin(), sets[b].features.end(), f) ==
                    sets[b].features.end())
                    added = f;
            FeatureComparison cmp;
            cmp.set_a = sets[a].name;
            cmp.set_b = sets[b].name;
            cmp.added_feature = added;
            cmp.corrected_t =
                corrected_cv_ttest(res.reports[a].accuracy, res.reports[b].accuracy, k, r,
                                   res.reports[a].n_train, res.reports[a].n_test);
            cmp.deviance = deviance_test(data, sets[b].features, sets[a].features);
            res.comparisons.push_back(std::move(cmp));
        }
    }
    return res;
}

std::string feature_study_json(const FeatureStudyResult& res) {
    ordered_json j;
    j["sets"] = ordered_json::array();
    for (std::size_t i = 0; i < res.sets.size(); ++i) {
        const CvReport& r = res.reports[i];
        ordered_json s;
        s["name"] = res.sets[i].name;
        s["features"] = res.sets[i].features;
        s["k"] = r.k;
        s["r"] = r.r;
        s["mean_sensitivity"] = r.mean_sensitivity;
        s["sd_sensitivity"] = r.sd_sensitivity;
        s["mean_specificity"] = r.mean_specificity;
        s["sd_specificity"] = r.sd_specificity;
        s["mean_accuracy"] = r.mean_accuracy;
        s["sd_accuracy"] = r.sd_accuracy;
        s["n_test"] = r.n_test;
        s["n_train"] = r.n_train;
        j["sets"].push_back(s);
    }
    j["comparisons"] = ordered_json::array();
    for (const auto& c : res.comparisons) {
        ordered_json e;
        e["set_a"] = c.set_a;
        e["set_b"] = c.set_b;
        e["added_feature"] = c.added_feature;
        e["corrected_t"] = {{"statistic", c.corrected_t.statistic},
                            {"p_value", c.corrected_t.p_value},
                            {"df", c.corrected_t.df}};
        e["deviance"] = {{"statistic", c.deviance.statistic},
                         {"p_value", c.deviance.p_value},
                         {"df", c.deviance.df}};
        j["comparisons"].push_back(e);
    }
    return j.dump(2);
}

} // namespace wavespec
