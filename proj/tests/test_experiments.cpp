#include "wavespec/experiments.hpp"

#include "wavespec/errors.hpp"
#include "wavespec/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace wavespec;

namespace {

StudyConfig tiny_config() {
    StudyConfig cfg;
    cfg.h_grid = {0.3, 0.7};
    cfg.n = 32;
    cfg.replicates = 3;
    cfg.base_seed = 515;
    cfg.estimators = {best_dual_estimator(), best_primal_ndwt_estimator(5),
                      best_primal_dwt_estimator(5)};
    return cfg;
}

} // namespace

TEST_CASE("study determinism and bookkeeping") {
    const StudyConfig cfg = tiny_config();
    const StudyResult a = run_simulation_study(cfg);
    const StudyResult b = run_simulation_study(cfg);
    REQUIRE(a.cells.size() == 2u * 3u * 3u);
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].h_hat == b.cells[i].h_hat);
        CHECK(a.cells[i].ok == b.cells[i].ok);
        CHECK(a.cells[i].estimator == b.cells[i].estimator);
    }

    SUBCASE("adding an estimator never changes the simulated fields") {
        StudyConfig more = cfg;
        more.estimators.push_back(second_dual_estimator());
        const StudyResult c = run_simulation_study(more);
        // dual-haar cells must be identical with either estimator list
        for (const auto& cell : a.cells) {
            if (cell.estimator != cfg.estimators[0].label()) continue;
            bool found = false;
            for (const auto& other : c.cells) {
                if (other.estimator == cell.estimator && other.h_index == cell.h_index &&
                    other.replicate == cell.replicate) {
                    CHECK(other.h_hat == cell.h_hat);
                    found = true;
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("study results are independent of the thread count") {
    StudyConfig cfg = tiny_config();
    cfg.threads = 1;
    const StudyResult seq = run_simulation_study(cfg);
    cfg.threads = 2;
    const StudyResult par = run_simulation_study(cfg);
    REQUIRE(seq.cells.size() == par.cells.size());
    for (std::size_t i = 0; i < seq.cells.size(); ++i) {
        CHECK(seq.cells[i].h_hat == par.cells[i].h_hat);
        CHECK(seq.cells[i].sq_error == par.cells[i].sq_error);
    }
}

TEST_CASE("AMSE equals the mean of per-H MSEs with equal replicate counts") {
    const StudyResult res = run_simulation_study(tiny_config());
    for (const auto& s : res.summary) {
        if (s.failures > 0) continue;
        double mse_mean = 0.0;
        for (const auto& [h, v] : s.mse_by_h) mse_mean += v;
        mse_mean /= static_cast<double>(s.mse_by_h.size());
        CHECK(std::fabs(s.amse - mse_mean) < 1e-12);
    }
}

TEST_CASE("estimators fed an exact log-linear decomposition have zero error") {
    // the exact-recovery seam the study relies on: every estimator applied
    // to synthetic log-linear energies returns H exactly, so squared errors
    // vanish cell by cell (AMSE would be 0)
    for (double H : {0.2, 0.5, 0.8}) {
        DecompositionR dec;
        dec.kind = TransformKind::ndwt2d_scale_mixing;
        dec.n = 32;
        dec.J = 5;
        dec.L = 5;
        dec.filter = make_filter("haar");
        dec.diagonal_only = true;
        for (int s = 1; s <= 5; ++s) {
            DetailLevel<double> lev;
            lev.j = 5 - s;
            lev.hh = GridR(32, 32, std::sqrt(std::exp2(-(2.0 * H + 2.0) * lev.j)));
            dec.levels.push_back(std::move(lev));
        }
        dec.approx = GridR(32, 32, 0.0);
        const SpectraFit dual = dual_spectra(dec, DualConfig{2, 10, 85});
        const SpectraFit primal = primal_spectra(dec, PrimalConfig{1, 4});
        REQUIRE(dual.ok);
        REQUIRE(primal.ok);
        CHECK((dual.h_hat - H) * (dual.h_hat - H) < 1e-18);
        CHECK((primal.h_hat - H) * (primal.h_hat - H) < 1e-18);
    }
}

TEST_CASE("study CSV and summary JSON are written") {
    const StudyResult res = run_simulation_study(tiny_config());
    const std::string csv = "/tmp/wavespec_study_cells.csv";
    write_study_csv(res, csv);
    std::ifstream in(csv);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "H,estimator,replicate,H_hat,sq_error,ok,error");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == static_cast<int>(res.cells.size()));
    std::remove(csv.c_str());
    CHECK(study_summary_json(res).find("amse") != std::string::npos);
}

TEST_CASE("mixed-H experiment") {
    SUBCASE("swap_levels = 0 leaves both estimators targeting H_hi") {
        const MixedHResult res = run_mixed_h_experiment(0.4, 0.6, 0, 6, 128, 808);
        REQUIRE(res.primal_hat.size() == 6);
        for (std::size_t i = 0; i < res.primal_hat.size(); ++i) {
            CHECK(std::fabs(res.primal_hat[i] - 0.6) < 0.25);
            CHECK(std::fabs(res.dual_hat[i] - 0.6) < 0.25);
        }
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(run_mixed_h_experiment(0.6, 0.4, 1, 4, 64, 1), std::invalid_argument);
        CHECK_THROWS_AS(run_mixed_h_experiment(0.4, 0.6, 9, 4, 64, 1), std::invalid_argument);
    }
    SUBCASE("mixing moves the two spectra apart") {
        const MixedHResult res = run_mixed_h_experiment(0.3, 0.7, 2, 8, 64, 909);
        REQUIRE(res.primal_hat.size() >= 2);
        CHECK(res.ttest.df == doctest::Approx(res.primal_hat.size() - 1.0));
        CHECK(res.ttest.p_value >= 0.0);
        CHECK(res.ttest.p_value <= 1.0);
    }
}

TEST_CASE("feature study") {
    // synthetic features: f_signal separates classes, f_noise does not,
    // f_leak equals the label
    Dataset d;
    d.feature_names = {"f_signal", "f_noise", "f_leak"};
    d.p = 3;
    d.n = 120;
    Philox gen(99);
    for (int i = 0; i < d.n; ++i) {
        const int y = i % 2;
        d.features.push_back((y ? 1.2 : -1.2) + 0.1 * gen.gaussian());
        d.features.push_back(gen.gaussian());
        d.features.push_back(static_cast<double>(y));
        d.labels.push_back(y);
    }

    SUBCASE("duplicated set under two names ties with p = 0.5") {
        const std::vector<FeatureSet> sets = {{"noise", {"f_noise"}},
                                              {"noise_plus", {"f_noise", "f_signal"}},
                                              {"noise_plus_again", {"f_signal", "f_noise"}}};
        const FeatureStudyResult res = run_feature_study(d, sets, 5, 2, 77);
        REQUIRE(res.reports.size() == 3);
        CHECK(res.reports[1].accuracy == res.reports[2].accuracy); // identical fold splits
        // directly comparing the duplicates gives a 0.5 p-value
        const TestResult tie = corrected_cv_ttest(res.reports[1].accuracy, res.reports[2].accuracy,
                                                  5, 2, res.reports[1].n_train, res.reports[1].n_test);
        CHECK(tie.p_value == doctest::Approx(0.5));
        // identical splits, so both supersets compare to "noise" identically
        REQUIRE(res.comparisons.size() == 2);
        for (const auto& cmp : res.comparisons) {
            CHECK(cmp.set_b == "noise");
            CHECK(cmp.added_feature == "f_signal");
            CHECK(cmp.corrected_t.p_value < 0.5);
        }
    }
    SUBCASE("label leak gives accuracy 1 and decisive deviance") {
        const std::vector<FeatureSet> sets = {{"noise", {"f_noise"}},
                                              {"leak", {"f_noise", "f_leak"}}};
        const FeatureStudyResult res = run_feature_study(d, sets, 5, 2, 31);
        CHECK(res.reports[1].mean_accuracy == doctest::Approx(1.0));
        REQUIRE(res.comparisons.size() == 1);
        CHECK(res.comparisons[0].deviance.p_value < 1e-6);
    }
}
