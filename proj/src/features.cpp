#include "wavespec/features.hpp"

#include "wavespec/errors.hpp"
#include "wavespec/spectra.hpp"
#include "wavespec/transforms.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <map>

namespace wavespec {

const std::vector<std::string> kFeatureColumns = {"h_p_dwt", "h_p_ndwt", "h_d",
                                                  "h_d2",    "e_p_dwt",  "e_p_ndwt"};

FeatureConfig FeatureConfig::defaults() {
    FeatureConfig cfg;
    cfg.primal_dwt = best_primal_dwt_estimator(10);
    cfg.primal_ndwt = best_primal_ndwt_estimator(10);
    cfg.dual = best_dual_estimator();
    cfg.dual2 = second_dual_estimator();
    return cfg;
}

void FeatureConfig::apply_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    if (!j.is_object()) throw DataError("feature config must be a JSON object");
    auto apply_estimator = [](EstimatorSpec& e, const nlohmann::json& o) {
        for (const auto& [key, val] : o.items()) {
            if (key == "filter")
                e.filter = val.get<std::string>();
            else if (key == "filter_param")
                e.filter_param = val.get<double>();
            else if (key == "j1")
                e.primal.j1 = val.get<int>();
            else if (key == "j2")
                e.primal.j2 = val.get<int>();
            else if (key == "xq")
                e.dual.xq = val.get<int>();
            else if (key == "p1")
                e.dual.p1 = val.get<double>();
            else if (key == "p2")
                e.dual.p2 = val.get<double>();
            else
                throw DataError("unknown estimator config key: " + key);
        }
    };
    for (const auto& [key, val] : j.items()) {
        if (key == "levels")
            levels = val.get<int>();
        else if (key == "primal_dwt")
            apply_estimator(primal_dwt, val);
        else if (key == "primal_ndwt")
            apply_estimator(primal_ndwt, val);
        else if (key == "dual")
            apply_estimator(dual, val);
        else if (key == "dual2")
            apply_estimator(dual2, val);
        else
            throw DataError("unknown feature config key: " + key);
    }
}

FeatureRow extract_features(const GridR& image, const FeatureConfig& cfg) {
    const int n = image.side();
    if (!is_pow2(n)) throw DataError("feature extraction requires a power-of-two image side");
    const int J = ilog2(n);
    const int L = cfg.levels > 0 ? cfg.levels : J;

    FeatureRow row;
    // a constant image has no detail energy anywhere; depending on the
    // filter's rounding the decomposition yields exact zeros or denormal
    // dust, so fail every feature up front instead of estimating on dust
    const auto [mn, mx] = std::minmax_element(image.data.begin(), image.data.end());
    if (*mn == *mx) {
        for (const auto& name : kFeatureColumns)
            row.warnings.push_back(name + ": constant image has zero detail energies");
        return row;
    }
    auto warn = [&](const std::string& what, const std::exception& ex) {
        row.warnings.push_back(what + ": " + ex.what());
    };
    auto clamp_primal = [&](EstimatorSpec e) {
        e.primal.j2 = std::min(e.primal.j2, J - 2); // finest level is excluded from primal fits
        e.primal.j1 = std::min(e.primal.j1, e.primal.j2 - 1);
        return e;
    };

    // DWT side: H estimate plus finest-level entropy off one decomposition
    try {
        const EstimatorSpec e = clamp_primal(cfg.primal_dwt);
        const WaveletFilter f = make_filter(e.filter, e.filter_param);
        const DecompositionVar dec = decompose(image, f, L, TransformKind::dwt2d);
        try {
            const SpectraFit fit = primal_spectra(dec, e.primal);
            if (fit.ok) row.h_p_dwt = fit.h_hat;
        } catch (const EstimationError& ex) {
            warn("h_p_dwt", ex);
        }
        try {
            row.e_p_dwt = wavelet_entropy(dec, J - 1);
        } catch (const EstimationError& ex) {
            warn("e_p_dwt", ex);
        }
    } catch (const EstimationError& ex) {
        warn("h_p_dwt/e_p_dwt", ex);
    }

    try {
        const EstimatorSpec e = clamp_primal(cfg.primal_ndwt);
        const WaveletFilter f = make_filter(e.filter, e.filter_param);
        const DecompositionVar dec =
            decompose(image, f, L, TransformKind::ndwt2d_scale_mixing, /*diagonal_only=*/true);
        try {
            const SpectraFit fit = primal_spectra(dec, e.primal);
            if (fit.ok) row.h_p_ndwt = fit.h_hat;
        } catch (const EstimationError& ex) {
            warn("h_p_ndwt", ex);
        }
        try {
            row.e_p_ndwt = wavelet_entropy(dec, J - 1);
        } catch (const EstimationError& ex) {
            warn("e_p_ndwt", ex);
        }
    } catch (const EstimationError& ex) {
        warn("h_p_ndwt/e_p_ndwt", ex);
    }

    std::map<std::string, DecompositionVar> dual_cache; // both duals usually share haar
    auto dual_feature = [&](const EstimatorSpec& e, const char* name) -> std::optional<double> {
        try {
            const WaveletFilter f = make_filter(e.filter, e.filter_param);
            auto it = dual_cache.find(f.label());
            if (it == dual_cache.end())
                it = dual_cache
                         .emplace(f.label(), decompose(image, f, L, TransformKind::ndwt2d_scale_mixing,
                                                       /*diagonal_only=*/true))
                         .first;
            const SpectraFit fit = dual_spectra(it->second, e.dual);
            if (fit.ok) return fit.h_hat;
            row.warnings.push_back(std::string(name) + ": " + fit.error);
        } catch (const EstimationError& ex) {
            row.warnings.push_back(std::string(name) + ": " + ex.what());
        }
        return std::nullopt;
    };
    row.h_d = dual_feature(cfg.dual, "h_d");
    row.h_d2 = dual_feature(cfg.dual2, "h_d2");
    return row;
}

std::string feature_row_csv(const FeatureRow& row, std::optional<int> label) {
    std::string out;
    char buf[40];
    const std::optional<double> cells[6] = {row.h_p_dwt, row.h_p_ndwt, row.h_d,
                                            row.h_d2,    row.e_p_dwt,  row.e_p_ndwt};
    for (const auto& c : cells) {
        if (c) {
            std::snprintf(buf, sizeof(buf), "%.17g", *c);
            out += buf;
        }
        out += ",";
    }
    if (label)
        out += std::to_string(*label);
    else if (!out.empty())
        out.pop_back(); // no label column: drop the trailing comma
    return out;
}

} // namespace wavespec
