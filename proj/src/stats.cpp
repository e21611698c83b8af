#include "wavespec/stats.hpp"

#include "wavespec/distributions.hpp"
#include "wavespec/errors.hpp"
#include "wavespec/linalg.hpp"
#include "wavespec/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace wavespec {

OlsFit ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("ols_fit: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw EstimationError("ols_fit needs at least 2 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw EstimationError("ols_fit: degenerate x values");
    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        fit.residual_ss += r * r;
    }
    return fit;
}

int Dataset::feature_index(const std::string& name) const {
    for (int j = 0; j < p; ++j)
        if (feature_names[static_cast<std::size_t>(j)] == name) return j;
    return -1;
}

Dataset Dataset::select(const std::vector<std::string>& names) const {
    Dataset out;
    out.feature_names = names;
    out.n = n;
    out.p = static_cast<int>(names.size());
    out.labels = labels;
    out.features.resize(static_cast<std::size_t>(n) * out.p);
    std::vector<int> idx;
    for (const auto& name : names) {
        const int j = feature_index(name);
        if (j < 0) throw DataError("dataset has no feature column named '" + name + "'");
        idx.push_back(j);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < out.p; ++j)
            out.features[static_cast<std::size_t>(i) * out.p + j] = feat(i, idx[static_cast<std::size_t>(j)]);
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

} // namespace

Dataset Dataset::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("dataset is empty: " + path);
    const auto header = split_csv_line(line);
    int label_col = -1;
    Dataset d;
    for (std::size_t j = 0; j < header.size(); ++j) {
        const std::string name = trim(header[j]);
        if (name == "label")
            label_col = static_cast<int>(j);
        else
            d.feature_names.push_back(name);
    }
    if (label_col < 0) throw DataError("dataset has no 'label' column: " + path);
    d.p = static_cast<int>(d.feature_names.size());

    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw DataError(path + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(header.size()) + " cells");
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const std::string cell = trim(cells[j]);
            if (cell.empty())
                throw DataError(path + ":" + std::to_string(lineno) + ": missing value");
            std::size_t pos = 0;
            double v;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw DataError(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
            if (pos != cell.size())
                throw DataError(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
            if (static_cast<int>(j) == label_col) {
                if (v != 0.0 && v != 1.0)
                    throw DataError(path + ":" + std::to_string(lineno) + ": labels must be 0 or 1");
                d.labels.push_back(static_cast<int>(v));
            } else {
                d.features.push_back(v);
            }
        }
        ++d.n;
    }
    return d;
}

void Dataset::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write dataset: " + path);
    for (const auto& name : feature_names) out << name << ",";
    out << "label\n";
    char buf[40];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", feat(i, j));
            out << buf << ",";
        }
        out << labels[static_cast<std::size_t>(i)] << "\n";
    }
}

namespace {

// Cholesky solve that tolerates rank deficiency: aliased columns (those
// with a vanishing pivot, e.g. a feature collinear with the intercept) get
// a zero step, the way R's glm drops aliased coefficients.
std::vector<double> chol_solve_aliased(std::vector<double> a, std::size_t n,
                                       std::vector<double> b) {
    std::vector<bool> aliased(n, false);
    std::vector<double> base(n);
    for (std::size_t j = 0; j < n; ++j) base[j] = std::max(a[j * n + j], 1e-300);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (d <= 1e-10 * base[j]) {
            aliased[j] = true;
            a[j * n + j] = 1.0;
            for (std::size_t i = j + 1; i < n; ++i) a[i * n + j] = 0.0;
            continue;
        }
        const double lj = std::sqrt(d);
        a[j * n + j] = lj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / lj;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (aliased[i]) {
            b[i] = 0.0;
            continue;
        }
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
        b[i] = s / a[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        if (aliased[ii]) {
            b[ii] = 0.0;
            continue;
        }
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= a[k * n + ii] * b[k];
        b[ii] = s / a[ii * n + ii];
    }
    return b;
}

// Deviance of a logistic model evaluated through the linear predictor,
// computed with log1p for stability at extreme eta.
double deviance_at(const std::vector<double>& eta, const std::vector<int>& y) {
    double d = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        const double e = eta[i];
        // -log(1+exp(-e)) and -e - log(1+exp(-e)) without overflow
        const double log_mu = e >= 0.0 ? -std::log1p(std::exp(-e)) : e - std::log1p(std::exp(e));
        const double log_1mu = e >= 0.0 ? -e - std::log1p(std::exp(-e)) : -std::log1p(std::exp(e));
        d += y[i] ? log_mu : log_1mu;
    }
    return -2.0 * d;
}

} // namespace

LogisticFit logistic_fit(const Dataset& data, int max_iter, double tol) {
    const int n = data.n, p = data.p;
    if (n < p + 1) throw DataError("logistic fit needs n >= p + 1 rows");
    bool has0 = false, has1 = false;
    for (int v : data.labels) (v ? has1 : has0) = true;
    if (!has0 || !has1) throw DataError("labels must contain both classes");

    const int q = p + 1; // intercept + features
    if (q > 64) throw std::invalid_argument("logistic_fit supports at most 63 features");
    std::vector<double> beta(static_cast<std::size_t>(q), 0.0);
    std::vector<double> eta(static_cast<std::size_t>(n), 0.0);
    auto compute_eta = [&](const std::vector<double>& b) {
        for (int i = 0; i < n; ++i) {
            double e = b[0];
            for (int j = 0; j < p; ++j) e += b[static_cast<std::size_t>(j) + 1] * data.feat(i, j);
            eta[static_cast<std::size_t>(i)] = e;
        }
    };
    compute_eta(beta);
    double dev = deviance_at(eta, data.labels);

    LogisticFit fit;
    int it = 0;
    for (; it < max_iter; ++it) {
        // score and information at current beta
        std::vector<double> grad(static_cast<std::size_t>(q), 0.0);
        std::vector<double> info(static_cast<std::size_t>(q) * q, 0.0);
        for (int i = 0; i < n; ++i) {
            const double mu = 1.0 / (1.0 + std::exp(-eta[static_cast<std::size_t>(i)]));
            const double w = mu * (1.0 - mu);
            const double resid = data.labels[static_cast<std::size_t>(i)] - mu;
            double xi[64];
            xi[0] = 1.0;
            for (int j = 0; j < p; ++j) xi[j + 1] = data.feat(i, j);
            for (int a = 0; a < q; ++a) {
                grad[static_cast<std::size_t>(a)] += xi[a] * resid;
                for (int b = a; b < q; ++b)
                    info[static_cast<std::size_t>(a) * q + b] += w * xi[a] * xi[b];
            }
        }
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < a; ++b)
                info[static_cast<std::size_t>(a) * q + b] = info[static_cast<std::size_t>(b) * q + a];

        const std::vector<double> step = chol_solve_aliased(info, static_cast<std::size_t>(q), grad);

        // step-halving if the deviance does not improve
        double scale = 1.0;
        std::vector<double> cand(static_cast<std::size_t>(q));
        double cand_dev = dev;
        for (int half = 0; half < 30; ++half) {
            for (int a = 0; a < q; ++a)
                cand[static_cast<std::size_t>(a)] = beta[static_cast<std::size_t>(a)] + scale * step[static_cast<std::size_t>(a)];
            compute_eta(cand);
            cand_dev = deviance_at(eta, data.labels);
            if (cand_dev <= dev + 1e-12) break;
            scale *= 0.5;
        }
        double max_change = 0.0;
        for (int a = 0; a < q; ++a)
            max_change = std::max(max_change,
                                  std::fabs(cand[static_cast<std::size_t>(a)] - beta[static_cast<std::size_t>(a)]));
        beta = cand;
        dev = cand_dev;
        if (max_change < tol) {
            fit.converged = true;
            ++it;
            break;
        }
    }
    compute_eta(beta);
    fit.coef = beta;
    fit.deviance = deviance_at(eta, data.labels);
    fit.iterations = it;
    return fit;
}

double logistic_predict(const LogisticFit& fit, std::span<const double> row) {
    double e = fit.coef[0];
    for (std::size_t j = 0; j < row.size(); ++j) e += fit.coef[j + 1] * row[j];
    return 1.0 / (1.0 + std::exp(-e));
}

namespace {

void mean_sd(const std::vector<double>& v, double& mean, double& sd) {
    const std::size_t n = v.size();
    mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
}

} // namespace

CvReport stratified_repeated_cv(const Dataset& data, int k, int r, double threshold,
                                std::uint64_t seed) {
    if (k < 2 || r < 1) throw std::invalid_argument("cv requires k >= 2 and r >= 1");
    std::vector<int> class0, class1;
    for (int i = 0; i < data.n; ++i)
        (data.labels[static_cast<std::size_t>(i)] ? class1 : class0).push_back(i);
    if (static_cast<int>(class0.size()) < k || static_cast<int>(class1.size()) < k)
        throw DataError("each class needs at least k members for stratified CV");

    CvReport rep;
    rep.k = k;
    rep.r = r;
    rep.n_test = static_cast<double>(data.n) / k;
    rep.n_train = static_cast<double>(data.n) - rep.n_test;

    for (int rep_i = 0; rep_i < r; ++rep_i) {
        // per class: seeded shuffle, then deal round-robin into folds
        std::vector<int> fold_of(static_cast<std::size_t>(data.n), 0);
        for (int cls = 0; cls < 2; ++cls) {
            std::vector<int> idx = cls ? class1 : class0;
            Philox gen(derive_seed(seed, static_cast<std::uint64_t>(rep_i),
                                   static_cast<std::uint64_t>(cls) + 101));
            for (std::size_t i = idx.size(); i > 1; --i) {
                const std::size_t j = static_cast<std::size_t>(gen.next64() % i);
                std::swap(idx[i - 1], idx[j]);
            }
            for (std::size_t t = 0; t < idx.size(); ++t)
                fold_of[static_cast<std::size_t>(idx[t])] = static_cast<int>(t % static_cast<std::size_t>(k));
        }
        for (int f = 0; f < k; ++f) {
            Dataset train;
            train.feature_names = data.feature_names;
            train.p = data.p;
            std::vector<int> test_rows;
            for (int i = 0; i < data.n; ++i) {
                if (fold_of[static_cast<std::size_t>(i)] == f) {
                    test_rows.push_back(i);
                } else {
                    for (int j = 0; j < data.p; ++j) train.features.push_back(data.feat(i, j));
                    train.labels.push_back(data.labels[static_cast<std::size_t>(i)]);
                    ++train.n;
                }
            }
            const LogisticFit fit = logistic_fit(train);
            int tp = 0, tn = 0, fp = 0, fn = 0;
            std::vector<double> row(static_cast<std::size_t>(data.p));
            for (int i : test_rows) {
                for (int j = 0; j < data.p; ++j) row[static_cast<std::size_t>(j)] = data.feat(i, j);
                const int pred = logistic_predict(fit, row) >= threshold ? 1 : 0;
                const int truth = data.labels[static_cast<std::size_t>(i)];
                if (truth == 1)
                    (pred == 1 ? tp : fn)++;
                else
                    (pred == 0 ? tn : fp)++;
            }
            rep.sensitivity.push_back(tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0);
            rep.specificity.push_back(tn + fp > 0 ? static_cast<double>(tn) / (tn + fp) : 0.0);
            rep.accuracy.push_back(static_cast<double>(tp + tn) /
                                   static_cast<double>(test_rows.size()));
        }
    }
    mean_sd(rep.sensitivity, rep.mean_sensitivity, rep.sd_sensitivity);
    mean_sd(rep.specificity, rep.mean_specificity, rep.sd_specificity);
    mean_sd(rep.accuracy, rep.mean_accuracy, rep.sd_accuracy);
    return rep;
}

TestResult corrected_cv_ttest(std::span<const double> acc_a, std::span<const double> acc_b, int k,
                              int r, double n_train, double n_test) {
    if (acc_a.size() != acc_b.size()) throw std::invalid_argument("accuracy vectors differ in length");
    const std::size_t n = acc_a.size();
    if (n != static_cast<std::size_t>(k) * static_cast<std::size_t>(r) || n < 2)
        throw std::invalid_argument("expected k*r paired accuracies");
    double dbar = 0.0;
    for (std::size_t i = 0; i < n; ++i) dbar += acc_a[i] - acc_b[i];
    dbar /= static_cast<double>(n);
    double s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = acc_a[i] - acc_b[i] - dbar;
        s2 += d * d;
    }
    s2 /= static_cast<double>(n - 1);

    TestResult res;
    res.kind = TestKind::corrected_cv_t;
    res.df = static_cast<double>(n - 1);
    const double mult = 1.0 / static_cast<double>(n) + n_test / n_train;
    if (s2 <= 0.0) {
        res.statistic = dbar == 0.0 ? 0.0
                                    : std::copysign(std::numeric_limits<double>::infinity(), dbar);
        res.p_value = dbar == 0.0 ? 0.5 : (dbar > 0.0 ? 0.0 : 1.0);
        return res;
    }
    res.statistic = dbar / std::sqrt(mult * s2);
    res.p_value = 1.0 - student_t_cdf(res.statistic, res.df);
    return res;
}

TestResult deviance_test(const Dataset& data, const std::vector<std::string>& reduced_features,
                         const std::vector<std::string>& full_features) {
    if (full_features.size() != reduced_features.size() + 1)
        throw std::invalid_argument("deviance test requires exactly one added feature");
    for (const auto& f : reduced_features)
        if (std::find(full_features.begin(), full_features.end(), f) == full_features.end())
            throw std::invalid_argument("feature sets are not nested: missing '" + f + "'");
    const LogisticFit reduced = logistic_fit(data.select(reduced_features));
    const LogisticFit full = logistic_fit(data.select(full_features));
    TestResult res;
    res.kind = TestKind::deviance_chi2;
    res.df = 1.0;
    res.statistic = reduced.deviance - full.deviance;
    res.p_value = 1.0 - chi2_cdf(res.statistic, 1.0);
    return res;
}

TestResult paired_ttest(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("paired t-test: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("paired t-test needs at least 2 pairs");
    double dbar = 0.0;
    for (std::size_t i = 0; i < n; ++i) dbar += x[i] - y[i];
    dbar /= static_cast<double>(n);
    double s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i] - dbar;
        s2 += d * d;
    }
    s2 /= static_cast<double>(n - 1);
    TestResult res;
    res.kind = TestKind::paired_t;
    res.df = static_cast<double>(n - 1);
    if (s2 <= 0.0) {
        res.statistic = dbar == 0.0 ? 0.0
                                    : std::copysign(std::numeric_limits<double>::infinity(), dbar);
        res.p_value = dbar == 0.0 ? 1.0 : 0.0;
        return res;
    }
    res.statistic = dbar / std::sqrt(s2 / static_cast<double>(n));
    res.p_value = 2.0 * (1.0 - student_t_cdf(std::fabs(res.statistic), res.df));
    return res;
}

std::string test_kind_str(TestKind k) {
    switch (k) {
        case TestKind::corrected_cv_t: return "corrected_cv_t";
        case TestKind::deviance_chi2: return "deviance_chi2";
        case TestKind::paired_t: return "paired_t";
    }
    return "?";
}

} // namespace wavespec
