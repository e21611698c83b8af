#include "wavespec/serialize.hpp"

#include <json.hpp>

#include <cstdio>

namespace wavespec {

using nlohmann::ordered_json;

namespace {

ordered_json grid_to_json(const GridR& g) {
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < g.rows; ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < g.cols; ++c) row.push_back(g.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json grid_to_json(const GridC& g) {
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < g.rows; ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < g.cols; ++c)
            row.push_back(ordered_json::array({g.at(r, c).real(), g.at(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::string spectra_fit_json(const SpectraFit& fit) {
    ordered_json j;
    j["method"] = spectra_method_str(fit.method);
    j["filter"] = fit.filter;
    j["n"] = fit.n;
    j["levels"] = fit.levels;
    ordered_json cfg = ordered_json::object();
    if (fit.primal_cfg) {
        cfg["j1"] = fit.primal_cfg->j1;
        cfg["j2"] = fit.primal_cfg->j2;
    }
    if (fit.dual_cfg) {
        cfg["xq"] = fit.dual_cfg->xq;
        cfg["p1"] = fit.dual_cfg->p1;
        cfg["p2"] = fit.dual_cfg->p2;
    }
    j["config"] = cfg;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    if (fit.ok)
        j["h_hat"] = fit.h_hat;
    else
        j["h_hat"] = nullptr;
    j["ok"] = fit.ok;
    j["error"] = fit.error;
    j["zeros_excluded"] = fit.zeros_excluded;
    ordered_json pts = ordered_json::array();
    for (std::size_t i = 0; i < fit.x.size(); ++i)
        pts.push_back(ordered_json{{"x", fit.x[i]}, {"y", fit.y[i]}, {"used", fit.used[i] != 0}});
    j["points"] = pts;
    return j.dump(2);
}

std::string spectra_points_csv(const SpectraFit& fit) {
    std::string out = "x,y\n";
    char buf[80];
    for (std::size_t i = 0; i < fit.x.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", fit.x[i], fit.y[i]);
        out += buf;
    }
    return out;
}

std::string cv_report_json(const CvReport& rep) {
    ordered_json j;
    j["k"] = rep.k;
    j["r"] = rep.r;
    j["n_test"] = rep.n_test;
    j["n_train"] = rep.n_train;
    j["mean_sensitivity"] = rep.mean_sensitivity;
    j["sd_sensitivity"] = rep.sd_sensitivity;
    j["mean_specificity"] = rep.mean_specificity;
    j["sd_specificity"] = rep.sd_specificity;
    j["mean_accuracy"] = rep.mean_accuracy;
    j["sd_accuracy"] = rep.sd_accuracy;
    j["sensitivity"] = rep.sensitivity;
    j["specificity"] = rep.specificity;
    j["accuracy"] = rep.accuracy;
    return j.dump(2);
}

std::string test_result_json(const TestResult& res) {
    ordered_json j;
    j["kind"] = test_kind_str(res.kind);
    j["statistic"] = res.statistic;
    j["p_value"] = res.p_value;
    j["df"] = res.df;
    return j.dump(2);
}

std::string decomposition_json(const DecompositionVar& dec) {
    ordered_json j;
    std::visit(
        [&](const auto& d) {
            j["kind"] = d.kind == TransformKind::dwt2d ? "dwt2d" : "ndwt2d_scale_mixing";
            j["n"] = d.n;
            j["J"] = d.J;
            j["L"] = d.L;
            j["filter"] = d.filter.label();
            j["diagonal_only"] = d.diagonal_only;
            ordered_json levels = ordered_json::array();
            for (const auto& lev : d.levels) {
                ordered_json l;
                l["j"] = lev.j;
                l["hh"] = grid_to_json(lev.hh);
                if (lev.hl.size() > 0) {
                    l["hl"] = grid_to_json(lev.hl);
                    l["lh"] = grid_to_json(lev.lh);
                }
                levels.push_back(std::move(l));
            }
            j["levels"] = levels;
            j["approx"] = grid_to_json(d.approx);
        },
        dec);
    return j.dump();
}

} // namespace wavespec
