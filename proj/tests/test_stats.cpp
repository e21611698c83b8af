#include "wavespec/stats.hpp"

#include "wavespec/distributions.hpp"
#include "wavespec/errors.hpp"
#include "wavespec/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace wavespec;

namespace {

// Fixture dataset (n = 20, p = 2): deterministic synthetic logistic data.
Dataset fixture_dataset() {
    const double x1[20] = {-1.32, 0.45,  0.87,  -0.22, 1.77, -0.95, 0.13, 2.01, -1.10, 0.66,
                           0.25,  -1.85, 1.34,  0.02,  -0.4, 1.12,  0.78, -0.6, -0.05, 1.93};
    const double x2[20] = {0.3,  -1.2, 0.8,  0.1,  1.5,  -0.7, -0.2, 0.9, -1.4, 0.4,
                           -0.9, 0.2,  1.1,  -0.3, 0.6,  -1.6, 1.3,  0.5, -1.0, 0.7};
    const int y[20] = {0, 1, 1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 0, 1};
    Dataset d;
    d.feature_names = {"x1", "x2"};
    d.n = 20;
    d.p = 2;
    for (int i = 0; i < 20; ++i) {
        d.features.push_back(x1[i]);
        d.features.push_back(x2[i]);
        d.labels.push_back(y[i]);
    }
    return d;
}

// Independent Newton-Raphson oracle: explicit score/Hessian with Gauss
// elimination, no step control, run to tight tolerance.
std::vector<double> newton_logistic_oracle(const Dataset& d) {
    const int q = d.p + 1;
    std::vector<double> beta(static_cast<std::size_t>(q), 0.0);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<double> grad(static_cast<std::size_t>(q), 0.0);
        std::vector<double> hess(static_cast<std::size_t>(q) * q, 0.0);
        for (int i = 0; i < d.n; ++i) {
            std::vector<double> xi(static_cast<std::size_t>(q), 1.0);
            for (int j = 0; j < d.p; ++j) xi[static_cast<std::size_t>(j) + 1] = d.feat(i, j);
            double eta = 0.0;
            for (int a = 0; a < q; ++a) eta += beta[static_cast<std::size_t>(a)] * xi[static_cast<std::size_t>(a)];
            const double mu = 1.0 / (1.0 + std::exp(-eta));
            for (int a = 0; a < q; ++a) {
                grad[static_cast<std::size_t>(a)] += xi[static_cast<std::size_t>(a)] * (d.labels[static_cast<std::size_t>(i)] - mu);
                for (int b = 0; b < q; ++b)
                    hess[static_cast<std::size_t>(a) * q + b] += mu * (1 - mu) * xi[static_cast<std::size_t>(a)] * xi[static_cast<std::size_t>(b)];
            }
        }
        // Gauss elimination with partial pivoting
        std::vector<double> aug(hess);
        std::vector<double> rhs(grad);
        std::vector<double> step(static_cast<std::size_t>(q), 0.0);
        for (int col = 0; col < q; ++col) {
            int piv = col;
            for (int r = col + 1; r < q; ++r)
                if (std::fabs(aug[static_cast<std::size_t>(r) * q + col]) >
                    std::fabs(aug[static_cast<std::size_t>(piv) * q + col]))
                    piv = r;
            for (int c = 0; c < q; ++c)
                std::swap(aug[static_cast<std::size_t>(col) * q + c], aug[static_cast<std::size_t>(piv) * q + c]);
            std::swap(rhs[static_cast<std::size_t>(col)], rhs[static_cast<std::size_t>(piv)]);
            for (int r = col + 1; r < q; ++r) {
                const double f = aug[static_cast<std::size_t>(r) * q + col] / aug[static_cast<std::size_t>(col) * q + col];
                for (int c = col; c < q; ++c)
                    aug[static_cast<std::size_t>(r) * q + c] -= f * aug[static_cast<std::size_t>(col) * q + c];
                rhs[static_cast<std::size_t>(r)] -= f * rhs[static_cast<std::size_t>(col)];
            }
        }
        for (int r = q - 1; r >= 0; --r) {
            double s = rhs[static_cast<std::size_t>(r)];
            for (int c = r + 1; c < q; ++c) s -= aug[static_cast<std::size_t>(r) * q + c] * step[static_cast<std::size_t>(c)];
            step[static_cast<std::size_t>(r)] = s / aug[static_cast<std::size_t>(r) * q + r];
        }
        double delta = 0.0;
        for (int a = 0; a < q; ++a) {
            beta[static_cast<std::size_t>(a)] += step[static_cast<std::size_t>(a)];
            delta = std::max(delta, std::fabs(step[static_cast<std::size_t>(a)]));
        }
        if (delta < 1e-12) break;
    }
    return beta;
}

} // namespace

TEST_CASE("ols_fit") {
    SUBCASE("exact line") {
        const double x[] = {0, 1, 2, 3, 4};
        const double y[] = {1, 3, 5, 7, 9};
        const OlsFit f = ols_fit(x, y);
        CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(f.residual_ss == doctest::Approx(0.0).scale(1).epsilon(1e-13));
    }
    SUBCASE("two points interpolate with zero residual") {
        const double x[] = {1.0, 4.0};
        const double y[] = {2.0, -7.0};
        const OlsFit f = ols_fit(x, y);
        CHECK(f.slope == doctest::Approx(-3.0).epsilon(1e-14));
        CHECK(f.intercept == doctest::Approx(5.0).epsilon(1e-14));
        CHECK(f.residual_ss < 1e-24);
    }
    SUBCASE("matches a raw normal-equations oracle on noisy data") {
        // oracle: solve the 2x2 normal equations built from raw sums
        const int n = 1000;
        Philox gen(99);
        std::vector<double> x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[static_cast<std::size_t>(i)] = 0.01 * i;
            y[static_cast<std::size_t>(i)] = 0.7 * x[static_cast<std::size_t>(i)] - 2.0 + 0.3 * gen.gaussian();
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int i = 0; i < n; ++i) {
            sx += x[static_cast<std::size_t>(i)];
            sy += y[static_cast<std::size_t>(i)];
            sxx += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
            sxy += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
        }
        const double det = n * sxx - sx * sx;
        const double slope = (n * sxy - sx * sy) / det;
        const double intercept = (sy * sxx - sx * sxy) / det;
        const OlsFit f = ols_fit(x, y);
        CHECK(f.slope == doctest::Approx(slope).epsilon(1e-10));
        CHECK(f.intercept == doctest::Approx(intercept).epsilon(1e-10));
    }
    SUBCASE("degenerate x throws") {
        const double x[] = {2.0, 2.0, 2.0};
        const double y[] = {1.0, 2.0, 3.0};
        CHECK_THROWS_AS(ols_fit(x, y), EstimationError);
        const double one_x[] = {1.0};
        const double one_y[] = {1.0};
        CHECK_THROWS_AS(ols_fit(one_x, one_y), EstimationError);
    }
}

TEST_CASE("t and chi-square CDFs match high-precision oracle values") {
    struct Row {
        double x;
        int df;
        double cdf;
    };
    static const Row t_rows[] = {
        {-5, 1, 0.062832958189001183814},   {-3, 2, 0.04773298313335456603},
        {-2.5, 3, 0.043853323504032773625}, {-2, 4, 0.058058261758407797249},
        {-1.5, 5, 0.096951840121236716066}, {-1, 7, 0.17530833141010376328},
        {-0.5, 9, 0.3145356499130132398},   {-0.25, 10, 0.4038241028683070145},
        {0.1, 12, 0.53900221477158707025},  {0.3, 15, 0.61585273273222392752},
        {0.75, 20, 0.76900648759367100585}, {1, 25, 0.83655404365407939232},
        {1.3, 30, 0.89824952073094155086},  {1.7, 40, 0.95155227118821270051},
        {2, 50, 0.97452646563115337624},    {2.4, 60, 0.99024234757196897579},
        {2.9, 80, 0.99759200174448449195},  {3.3, 99, 0.99932761762680041081},
        {4.1, 120, 0.99996224400468976444}, {5.5, 200, 0.99999994240160091559},
    };
    for (const Row& r : t_rows) {
        CAPTURE(r.x);
        CAPTURE(r.df);
        CHECK(std::fabs(student_t_cdf(r.x, r.df) - r.cdf) < 1e-10);
    }
    static const Row chi_rows[] = {
        {0.001, 1, 0.025227120630039611458},          {0.02, 1, 0.1124629160182848922},
        {0.5, 1, 0.52049987781304653768},             {1, 1, 0.68268949213708589717},
        {3.841458820694124, 1, 0.9499999999999999416},{6.6348966010212145, 1, 0.98999999999999999642},
        {10, 1, 0.99843459774199745032},              {15, 1, 0.99989248882327049944},
        {0.1, 2, 0.048770575499285990909},            {1, 2, 0.3934693402873665764},
        {4, 2, 0.86466471676338730811},               {2, 3, 0.427593295529120166},
        {7.5, 4, 0.88829070718395673588},             {1.5, 5, 0.086930185455604539326},
        {9, 6, 0.826421929089963961},                 {4, 8, 0.14287653950145295134},
        {12, 10, 0.71494349968336878135},             {20, 15, 0.82806731062339906914},
        {25, 30, 0.27496811581939996228},             {60, 50, 0.84275797276160839646},
    };
    for (const Row& r : chi_rows) {
        CAPTURE(r.x);
        CAPTURE(r.df);
        CHECK(std::fabs(chi2_cdf(r.x, r.df) - r.cdf) < 1e-10);
    }
}

TEST_CASE("logistic_fit") {
    SUBCASE("constant feature gives log-odds intercept and zero slope") {
        Dataset d;
        d.feature_names = {"c"};
        d.p = 1;
        d.n = 10;
        for (int i = 0; i < 10; ++i) {
            d.features.push_back(1.0);
            d.labels.push_back(i < 3 ? 1 : 0); // pi = 0.3
        }
        const LogisticFit fit = logistic_fit(d);
        CHECK(fit.converged);
        // the constant column is aliased with the intercept and gets a zero
        // coefficient; the intercept carries the log-odds
        CHECK(fit.coef[0] == doctest::Approx(std::log(0.3 / 0.7)).epsilon(1e-6));
        CHECK(fit.coef[1] == doctest::Approx(0.0).scale(1).epsilon(1e-9));
    }
    SUBCASE("labels independent of features give near-null deviance") {
        Philox gen(5);
        Dataset d;
        d.feature_names = {"x"};
        d.p = 1;
        d.n = 400;
        int ones = 0;
        for (int i = 0; i < d.n; ++i) {
            d.features.push_back(gen.gaussian());
            const int y = (gen.next32() & 1) ? 1 : 0;
            ones += y;
            d.labels.push_back(y);
        }
        const double pi = static_cast<double>(ones) / d.n;
        const double null_dev =
            -2.0 * (ones * std::log(pi) + (d.n - ones) * std::log(1 - pi));
        const LogisticFit fit = logistic_fit(d);
        CHECK(fit.converged);
        CHECK(fit.deviance <= null_dev + 1e-9);
        CHECK(fit.deviance > null_dev - 8.0); // within a chi-square(1)-ish drop
    }
    SUBCASE("fixture matches the Newton oracle within 1e-6") {
        const Dataset d = fixture_dataset();
        const LogisticFit fit = logistic_fit(d);
        const std::vector<double> oracle = newton_logistic_oracle(d);
        REQUIRE(fit.converged);
        for (int a = 0; a < 3; ++a)
            CHECK(std::fabs(fit.coef[static_cast<std::size_t>(a)] - oracle[static_cast<std::size_t>(a)]) < 1e-6);
    }
    SUBCASE("score equations hold at the optimum (finite-difference check)") {
        const Dataset d = fixture_dataset();
        const LogisticFit fit = logistic_fit(d);
        // gradient of -deviance/2 (the log-likelihood) has max-norm < 1e-6
        auto loglik = [&](const std::vector<double>& b) {
            double ll = 0.0;
            for (int i = 0; i < d.n; ++i) {
                double eta = b[0];
                for (int j = 0; j < d.p; ++j) eta += b[static_cast<std::size_t>(j) + 1] * d.feat(i, j);
                ll += d.labels[static_cast<std::size_t>(i)] * eta - std::log1p(std::exp(eta));
            }
            return ll;
        };
        for (int a = 0; a < 3; ++a) {
            std::vector<double> hi = fit.coef, lo = fit.coef;
            hi[static_cast<std::size_t>(a)] += 1e-5;
            lo[static_cast<std::size_t>(a)] -= 1e-5;
            const double g = (loglik(hi) - loglik(lo)) / 2e-5;
            CHECK(std::fabs(g) < 1e-6);
        }
    }
    SUBCASE("perfect separation is flagged, coefficients still returned") {
        Dataset d;
        d.feature_names = {"x"};
        d.p = 1;
        d.n = 12;
        for (int i = 0; i < 12; ++i) {
            d.features.push_back(i < 6 ? -1.0 - 0.1 * i : 1.0 + 0.1 * i);
            d.labels.push_back(i < 6 ? 0 : 1);
        }
        const LogisticFit fit = logistic_fit(d);
        CHECK_FALSE(fit.converged);
        CHECK(fit.coef.size() == 2);
        CHECK(std::isfinite(fit.coef[1]));
    }
    SUBCASE("single-class labels are rejected") {
        Dataset d;
        d.feature_names = {"x"};
        d.p = 1;
        d.n = 5;
        for (int i = 0; i < 5; ++i) {
            d.features.push_back(i);
            d.labels.push_back(1);
        }
        CHECK_THROWS_AS(logistic_fit(d), DataError);
    }
}

TEST_CASE("corrected_cv_ttest") {
    SUBCASE("identical vectors: statistic 0, p = 0.5") {
        std::vector<double> a(100, 0.8), b(100, 0.8);
        const TestResult r = corrected_cv_ttest(a, b, 10, 10, 116.1, 12.9);
        CHECK(r.statistic == 0.0);
        CHECK(r.p_value == doctest::Approx(0.5));
    }
    SUBCASE("constant positive difference drives p to 0") {
        std::vector<double> a(100), b(100);
        Philox gen(3);
        for (int i = 0; i < 100; ++i) {
            const double noise = 1e-6 * gen.gaussian();
            b[static_cast<std::size_t>(i)] = 0.7 + noise;
            a[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] + 0.05;
        }
        const TestResult r = corrected_cv_ttest(a, b, 10, 10, 116.1, 12.9);
        CHECK(r.p_value < 1e-10);
    }
    SUBCASE("variance multiplier matches the k=10, r=10, n=129 example") {
        // 1/(k r) + n_test/n_train with n_test = 12.9, n_train = 116.1
        const double mult = 1.0 / 100.0 + 12.9 / 116.1;
        CHECK(mult == doctest::Approx(0.121111).epsilon(1e-4));
        // statistic = dbar / sqrt(mult * s2): feed unit-variance differences
        std::vector<double> a(100), b(100, 0.0);
        Philox gen(8);
        for (auto& v : a) v = gen.gaussian();
        const TestResult r = corrected_cv_ttest(a, b, 10, 10, 116.1, 12.9);
        double dbar = 0.0;
        for (double v : a) dbar += v;
        dbar /= 100.0;
        double s2 = 0.0;
        for (double v : a) s2 += (v - dbar) * (v - dbar);
        s2 /= 99.0;
        CHECK(r.statistic == doctest::Approx(dbar / std::sqrt(mult * s2)).epsilon(1e-12));
        CHECK(r.df == 99.0);
    }
    SUBCASE("mismatched lengths throw") {
        std::vector<double> a(100, 0.5), b(90, 0.5);
        CHECK_THROWS_AS(corrected_cv_ttest(a, b, 10, 10, 116.1, 12.9), std::invalid_argument);
    }
}

TEST_CASE("paired_ttest") {
    SUBCASE("x == y gives p = 1") {
        const std::vector<double> x = {0.1, 0.2, 0.3, 0.4};
        const TestResult r = paired_ttest(x, x);
        CHECK(r.statistic == 0.0);
        CHECK(r.p_value == doctest::Approx(1.0));
    }
    SUBCASE("large constant shift gives p near 0") {
        std::vector<double> x(30), y(30);
        Philox gen(17);
        for (int i = 0; i < 30; ++i) {
            y[static_cast<std::size_t>(i)] = gen.gaussian() * 0.01;
            x[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] + 5.0;
        }
        CHECK(paired_ttest(x, y).p_value < 1e-12);
    }
    SUBCASE("matches the textbook formula on a fixture") {
        const std::vector<double> x = {2.1, 3.4, 1.9, 4.2, 2.8, 3.3};
        const std::vector<double> y = {1.8, 3.1, 2.4, 3.9, 2.2, 3.5};
        const TestResult r = paired_ttest(x, y);
        double dbar = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) dbar += x[i] - y[i];
        dbar /= 6.0;
        double s2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - y[i] - dbar;
            s2 += d * d;
        }
        s2 /= 5.0;
        const double t = dbar / std::sqrt(s2 / 6.0);
        CHECK(r.statistic == doctest::Approx(t).epsilon(1e-10));
        CHECK(r.p_value ==
              doctest::Approx(2.0 * (1.0 - student_t_cdf(std::fabs(t), 5.0))).epsilon(1e-10));
    }
}

TEST_CASE("deviance_test") {
    const Dataset d = fixture_dataset();
    SUBCASE("adding a duplicate feature changes nothing") {
        // duplicate column under a new name
        Dataset dd = d;
        dd.feature_names = {"x1", "x2", "x1_copy"};
        dd.p = 3;
        dd.features.clear();
        for (int i = 0; i < d.n; ++i) {
            dd.features.push_back(d.feat(i, 0));
            dd.features.push_back(d.feat(i, 1));
            dd.features.push_back(d.feat(i, 0));
        }
        const TestResult r = deviance_test(dd, {"x1", "x2"}, {"x1", "x2", "x1_copy"});
        CHECK(r.statistic == doctest::Approx(0.0).scale(1).epsilon(1e-4));
        CHECK(r.p_value > 0.99);
    }
    SUBCASE("adding the label as a feature is decisive") {
        Dataset dd = d;
        dd.feature_names = {"x1", "x2", "leak"};
        dd.p = 3;
        dd.features.clear();
        for (int i = 0; i < d.n; ++i) {
            dd.features.push_back(d.feat(i, 0));
            dd.features.push_back(d.feat(i, 1));
            dd.features.push_back(d.labels[static_cast<std::size_t>(i)]);
        }
        const TestResult r = deviance_test(dd, {"x1", "x2"}, {"x1", "x2", "leak"});
        CHECK(r.statistic > 10.0);
        CHECK(r.p_value < 1e-3);
    }
    SUBCASE("matches two independent oracle fits") {
        const std::vector<double> full_beta = newton_logistic_oracle(d);
        // oracle deviances via direct evaluation
        auto oracle_dev = [&](const Dataset& ds) {
            const std::vector<double> b = newton_logistic_oracle(ds);
            double ll = 0.0;
            for (int i = 0; i < ds.n; ++i) {
                double eta = b[0];
                for (int j = 0; j < ds.p; ++j) eta += b[static_cast<std::size_t>(j) + 1] * ds.feat(i, j);
                ll += ds.labels[static_cast<std::size_t>(i)] * eta - std::log1p(std::exp(eta));
            }
            return -2.0 * ll;
        };
        const double d_full = oracle_dev(d);
        const double d_reduced = oracle_dev(d.select({"x1"}));
        const TestResult r = deviance_test(d, {"x1"}, {"x1", "x2"});
        CHECK(r.statistic == doctest::Approx(d_reduced - d_full).epsilon(1e-6));
        (void)full_beta;
    }
    SUBCASE("deviance nesting invariant") {
        const LogisticFit reduced = logistic_fit(d.select({"x1"}));
        const LogisticFit full = logistic_fit(d.select({"x1", "x2"}));
        CHECK(full.deviance <= reduced.deviance + 1e-8);
    }
    SUBCASE("non-nested sets are rejected") {
        CHECK_THROWS_AS(deviance_test(d, {"x1"}, {"x2", "x1_missing"}), std::invalid_argument);
        CHECK_THROWS_AS(deviance_test(d, {"x1", "x2"}, {"x1", "x2"}), std::invalid_argument);
    }
}
