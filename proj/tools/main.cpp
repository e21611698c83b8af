#include "wavespec/errors.hpp"
#include "wavespec/experiments.hpp"
#include "wavespec/features.hpp"
#include "wavespec/image_io.hpp"
#include "wavespec/parallel.hpp"
#include "wavespec/rng.hpp"
#include "wavespec/serialize.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace wavespec;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitEstimation = 3;

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct EstimateArgs {
    std::string input;
    std::string method = "dual";
    std::string transform = "ndwt";
    std::string filter = "haar";
    std::optional<double> filter_param;
    int levels = 0;
    int j1 = 2, j2 = 8;
    int xq = 2;
    double p1 = 10.0, p2 = 85.0;
    std::string out = "-";
    std::string points_csv;
};

SpectraFit run_estimate(const EstimateArgs& a) {
    const GridR img = read_image(a.input);
    const int J = ilog2(img.side());
    const int L = a.levels > 0 ? a.levels : J;
    const WaveletFilter f = make_filter(a.filter, a.filter_param);
    if (a.method == "dual") {
        const auto dec = decompose(img, f, L, TransformKind::ndwt2d_scale_mixing, true);
        return dual_spectra(dec, DualConfig{a.xq, a.p1, a.p2});
    }
    const TransformKind kind =
        a.transform == "dwt" ? TransformKind::dwt2d : TransformKind::ndwt2d_scale_mixing;
    const auto dec = decompose(img, f, L, kind, kind == TransformKind::ndwt2d_scale_mixing);
    return primal_spectra(dec, PrimalConfig{a.j1, std::min(a.j2, J - 1)});
}

std::vector<EstimatorSpec> default_study_estimators(int J) {
    return {best_primal_ndwt_estimator(J), best_dual_estimator(), best_primal_dwt_estimator(J)};
}

int run(int argc, char** argv) {
    CLI::App app{"wavespec: Hurst estimation for 2D self-similar signals via primal and dual "
                 "wavelet spectra"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: hardware concurrency)");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Generate a 2D fractional Brownian motion field");
    double sim_h = 0.5;
    int sim_n = 256;
    std::uint64_t sim_seed = 0;
    bool sim_cholesky = false;
    std::string sim_out;
    sim->add_option("-H,--hurst", sim_h, "Hurst exponent in (0,1)")->required();
    sim->add_option("-n,--size", sim_n, "Side length (power of 2)");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_flag("--cholesky", sim_cholesky, "Use the dense Cholesky sampler (n <= 64)");
    sim->add_option("-o,--out", sim_out, "Output file (.f64 exact doubles or .pgm quantized)")
        ->required();

    // ---- transform ----
    auto* tr = app.add_subcommand("transform", "Decompose an image and write the result as JSON");
    std::string tr_in, tr_out = "-", tr_filter = "haar", tr_kind = "ndwt";
    std::optional<double> tr_param;
    int tr_levels = 0;
    bool tr_full = false;
    tr->add_option("-i,--in", tr_in, "Input image (.pgm/.png/.f64)")->required();
    tr->add_option("-o,--out", tr_out, "Output JSON path or - for stdout");
    tr->add_option("--filter", tr_filter, "haar|db2|db3|pollen|coif1|symmlet4|conf6");
    tr->add_option("--param", tr_param, "Pollen angle in radians");
    tr->add_option("--kind", tr_kind, "dwt|ndwt")->check(CLI::IsMember({"dwt", "ndwt"}));
    tr->add_option("-L,--levels", tr_levels, "Detail levels (default: full depth)");
    tr->add_flag("--full", tr_full, "Keep the hl/lh regions (required for inversion)");

    // ---- estimate ----
    auto* est = app.add_subcommand("estimate", "Estimate H for one image");
    EstimateArgs ea;
    est->add_option("-i,--in", ea.input, "Input image (.pgm/.png/.f64)")->required();
    est->add_option("--method", ea.method, "primal|dual")
        ->check(CLI::IsMember({"primal", "dual"}));
    est->add_option("--transform", ea.transform, "dwt|ndwt (primal only)")
        ->check(CLI::IsMember({"dwt", "ndwt"}));
    est->add_option("--filter", ea.filter, "Wavelet filter name");
    est->add_option("--param", ea.filter_param, "Pollen angle in radians");
    est->add_option("-L,--levels", ea.levels, "Detail levels (default: full depth)");
    est->add_option("--j1", ea.j1, "Primal fit: coarsest level");
    est->add_option("--j2", ea.j2, "Primal fit: finest level (clamped to J-1)");
    est->add_option("--xq", ea.xq, "Dual: quantile multiplier (n_q = xq*L)");
    est->add_option("--p1", ea.p1, "Dual: lower percent of the fit range");
    est->add_option("--p2", ea.p2, "Dual: upper percent of the fit range");
    est->add_option("-o,--out", ea.out, "Output JSON path or - for stdout");
    est->add_option("--points-csv", ea.points_csv, "Also write the plot points as CSV");

    // ---- study ----
    auto* st = app.add_subcommand("study", "Run the simulation study over an H grid");
    int st_n = 256, st_reps = 25, st_levels = 0;
    std::uint64_t st_seed = 20240901;
    std::string st_grid = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
    std::string st_prefix;
    st->add_option("-n,--size", st_n, "Side length (power of 2)");
    st->add_option("-r,--replicates", st_reps, "Replicates per H value");
    st->add_option("-L,--levels", st_levels, "Detail levels (default: full depth)");
    st->add_option("--seed", st_seed, "Base seed");
    st->add_option("--h-grid", st_grid, "Comma-separated H values");
    st->add_option("-o,--out-prefix", st_prefix, "Writes <prefix>_cells.csv and <prefix>_summary.json")
        ->required();

    // ---- mixed ----
    auto* mx = app.add_subcommand("mixed", "Mixed-H complementarity experiment");
    double mx_lo = 0.4, mx_hi = 0.6;
    int mx_swap = 3, mx_reps = 100, mx_n = 512;
    std::uint64_t mx_seed = 7;
    std::string mx_out = "-";
    mx->add_option("--h-lo", mx_lo, "Low Hurst exponent");
    mx->add_option("--h-hi", mx_hi, "High Hurst exponent");
    mx->add_option("--swap-levels", mx_swap, "Finest detail levels to swap");
    mx->add_option("-r,--replicates", mx_reps, "Replicates");
    mx->add_option("-n,--size", mx_n, "Side length (power of 2)");
    mx->add_option("--seed", mx_seed, "Base seed");
    mx->add_option("-o,--out", mx_out, "Output JSON path or - for stdout");

    // ---- features ----
    auto* ft = app.add_subcommand("features", "Batch feature extraction over a manifest");
    std::string ft_manifest, ft_out, ft_config;
    int ft_crop = 0, ft_edge = 30;
    std::uint64_t ft_seed = 0;
    ft->add_option("-m,--manifest", ft_manifest, "CSV manifest: path,label[,orientation]")
        ->required();
    ft->add_option("-o,--out", ft_out, "Output features CSV")->required();
    ft->add_option("--config", ft_config, "JSON estimator-settings file");
    ft->add_option("--crop-size", ft_crop, "Crop images to this power-of-two size (0 = no crop)");
    ft->add_option("--edge-offset", ft_edge, "Crop anchor offset in pixels");
    ft->add_option("--seed", ft_seed, "Seed for the crop's vertical placement");

    // ---- classify ----
    auto* cl = app.add_subcommand("classify", "Feature-set comparison study on a features CSV");
    std::string cl_features, cl_sets, cl_out = "-";
    int cl_k = 10, cl_r = 10;
    std::uint64_t cl_seed = 1;
    cl->add_option("-f,--features", cl_features, "Features CSV (with a label column)")->required();
    cl->add_option("--sets", cl_sets,
                   "Feature sets as name:colA+colB;name2:colC (default: built-in comparison sets)");
    cl->add_option("-k", cl_k, "Folds");
    cl->add_option("-r", cl_r, "Repetitions");
    cl->add_option("--seed", cl_seed, "CV seed");
    cl->add_option("-o,--out", cl_out, "Output JSON path or - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }
    if (threads > 0) set_default_threads(threads);

    if (sim->parsed()) {
        const FbmSpec spec{sim_h, sim_n, sim_seed};
        const GridR field = sim_cholesky ? generate_fbm2d_cholesky(spec) : generate_fbm2d(spec);
        if (ends_with(sim_out, ".pgm"))
            write_pgm(sim_out, to_raw_image(field));
        else
            write_grid_f64(sim_out, field);
        return kExitOk;
    }

    if (tr->parsed()) {
        const GridR img = read_image(tr_in);
        const int J = ilog2(img.side());
        const int L = tr_levels > 0 ? tr_levels : J;
        const WaveletFilter f = make_filter(tr_filter, tr_param);
        const TransformKind kind =
            tr_kind == "dwt" ? TransformKind::dwt2d : TransformKind::ndwt2d_scale_mixing;
        const bool diagonal_only = kind == TransformKind::ndwt2d_scale_mixing && !tr_full;
        const DecompositionVar dec = decompose(img, f, L, kind, diagonal_only);
        write_text(tr_out, decomposition_json(dec));
        return kExitOk;
    }

    if (est->parsed()) {
        const SpectraFit fit = run_estimate(ea);
        write_text(ea.out, spectra_fit_json(fit));
        if (!ea.points_csv.empty()) write_text(ea.points_csv, spectra_points_csv(fit));
        return fit.ok ? kExitOk : kExitEstimation;
    }

    if (st->parsed()) {
        StudyConfig cfg;
        cfg.n = st_n;
        cfg.replicates = st_reps;
        cfg.levels = st_levels;
        cfg.base_seed = st_seed;
        cfg.threads = threads;
        cfg.h_grid.clear();
        std::stringstream ss(st_grid);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.h_grid.push_back(std::stod(tok));
        cfg.estimators = default_study_estimators(ilog2(st_n));
        const StudyResult res = run_simulation_study(cfg);
        write_study_csv(res, st_prefix + "_cells.csv");
        write_text(st_prefix + "_summary.json", study_summary_json(res));
        return kExitOk;
    }

    if (mx->parsed()) {
        const MixedHResult res =
            run_mixed_h_experiment(mx_lo, mx_hi, mx_swap, mx_reps, mx_n, mx_seed, threads);
        write_text(mx_out, mixed_result_json(res));
        return kExitOk;
    }

    if (ft->parsed()) {
        FeatureConfig cfg = FeatureConfig::defaults();
        if (!ft_config.empty()) cfg.apply_json(read_text(ft_config));

        // manifest rows: path,label[,orientation]
        std::ifstream in(ft_manifest);
        if (!in) throw DataError("cannot open manifest: " + ft_manifest);
        struct Row {
            std::string path;
            int label;
            Orientation orient;
        };
        std::vector<Row> rows;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::stringstream ls(line);
            std::string path, label, orient;
            std::getline(ls, path, ',');
            std::getline(ls, label, ',');
            std::getline(ls, orient, ',');
            if (path == "path") continue; // optional header
            if (path.empty() || label.empty())
                throw DataError("manifest rows need path,label[,orientation]");
            Row r;
            r.path = path;
            r.label = std::stoi(label);
            r.orient = orient.empty() ? Orientation::auto_detect : parse_orientation(orient);
            rows.push_back(std::move(r));
        }

        std::vector<std::string> out_rows(rows.size());
        std::vector<std::string> row_warnings(rows.size());
        parallel_for(rows.size(), [&](std::size_t i) {
            GridR img = read_image(rows[i].path);
            if (ft_crop > 0) {
                CropSpec cs;
                cs.size = ft_crop;
                cs.edge_offset = ft_edge;
                cs.orientation = rows[i].orient;
                cs.vertical_seed = derive_seed(ft_seed, i);
                img = crop_region(img, cs);
            }
            const FeatureRow fr = extract_features(img, cfg);
            out_rows[i] = feature_row_csv(fr, rows[i].label);
            for (const auto& w : fr.warnings)
                row_warnings[i] += rows[i].path + ": " + w + "\n";
        });
        std::ofstream out(ft_out);
        if (!out) throw DataError("cannot write features CSV: " + ft_out);
        for (const auto& name : kFeatureColumns) out << name << ",";
        out << "label\n";
        for (const auto& r : out_rows) out << r << "\n"; // manifest order
        for (const auto& w : row_warnings) std::cerr << w;
        return kExitOk;
    }

    if (cl->parsed()) {
        const Dataset data = Dataset::read_csv(cl_features);
        std::vector<FeatureSet> sets;
        if (cl_sets.empty()) {
            sets = {
                {"h_p_ndwt", {"h_p_ndwt"}},
                {"h_d2", {"h_d2"}},
                {"h_p_ndwt+h_d2", {"h_p_ndwt", "h_d2"}},
                {"h_p_ndwt+e_p_ndwt", {"h_p_ndwt", "e_p_ndwt"}},
                {"h_p_ndwt+e_p_ndwt+h_d", {"h_p_ndwt", "e_p_ndwt", "h_d"}},
                {"h_p_ndwt+e_p_ndwt+h_d2", {"h_p_ndwt", "e_p_ndwt", "h_d2"}},
            };
        } else {
            std::stringstream ss(cl_sets);
            std::string part;
            while (std::getline(ss, part, ';')) {
                const auto colon = part.find(':');
                if (colon == std::string::npos)
                    throw DataError("feature sets must look like name:colA+colB");
                FeatureSet fs;
                fs.name = part.substr(0, colon);
                std::stringstream cols(part.substr(colon + 1));
                std::string col;
                while (std::getline(cols, col, '+')) fs.features.push_back(col);
                sets.push_back(std::move(fs));
            }
        }
        const FeatureStudyResult res = run_feature_study(data, sets, cl_k, cl_r, cl_seed);
        write_text(cl_out, feature_study_json(res));
        return kExitOk;
    }

    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const EstimationError& e) {
        std::cerr << "estimation error: " << e.what() << "\n";
        return kExitEstimation;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
