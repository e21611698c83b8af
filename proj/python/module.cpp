#include "wavespec/errors.hpp"
#include "wavespec/experiments.hpp"
#include "wavespec/fbm.hpp"
#include "wavespec/spectra.hpp"
#include "wavespec/stats.hpp"
#include "wavespec/transforms.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <optional>
#include <variant>

namespace py = pybind11;
using namespace wavespec;

namespace {

GridR grid_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2D array");
    GridR g(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)));
    std::copy(arr.data(), arr.data() + g.size(), g.data.begin());
    return g;
}

py::array_t<double> array_from_grid(const GridR& g) {
    py::array_t<double> arr({g.rows, g.cols});
    std::copy(g.data.begin(), g.data.end(), arr.mutable_data());
    return arr;
}

py::array_t<std::complex<double>> array_from_grid(const GridC& g) {
    py::array_t<std::complex<double>> arr({g.rows, g.cols});
    std::copy(g.data.begin(), g.data.end(), arr.mutable_data());
    return arr;
}

py::object array_from_any(const Grid<double>& g) { return py::object(array_from_grid(g)); }
py::object array_from_any(const Grid<cdouble>& g) { return py::object(array_from_grid(g)); }

struct PyDecomposition {
    DecompositionVar dec;

    std::string kind() const {
        return std::visit(
            [](const auto& d) {
                return std::string(d.kind == TransformKind::dwt2d ? "dwt2d"
                                                                  : "ndwt2d_scale_mixing");
            },
            dec);
    }
    int levels() const {
        return std::visit([](const auto& d) { return d.L; }, dec);
    }
    int side() const {
        return std::visit([](const auto& d) { return d.n; }, dec);
    }
    std::vector<int> level_indices() const {
        return std::visit(
            [](const auto& d) {
                std::vector<int> out;
                for (const auto& lev : d.levels) out.push_back(lev.j);
                return out;
            },
            dec);
    }
    py::object diagonal(int j) const {
        return std::visit([&](const auto& d) { return array_from_any(d.diagonal(j)); }, dec);
    }
    py::object approx() const {
        return std::visit([&](const auto& d) { return array_from_any(d.approx); }, dec);
    }
    py::object inverse() const {
        return std::visit(
            [](const auto& d) {
                if (d.kind == TransformKind::dwt2d) return array_from_any(inverse_dwt2d(d));
                return array_from_any(inverse_ndwt2d(d));
            },
            dec);
    }
};

py::dict fit_to_dict(const SpectraFit& fit) {
    py::dict out;
    out["method"] = spectra_method_str(fit.method);
    out["slope"] = fit.slope;
    out["intercept"] = fit.intercept;
    out["h_hat"] = fit.h_hat;
    out["ok"] = fit.ok;
    out["error"] = fit.error;
    out["x"] = fit.x;
    out["y"] = fit.y;
    std::vector<bool> used(fit.used.begin(), fit.used.end());
    out["used"] = used;
    out["zeros_excluded"] = fit.zeros_excluded;
    return out;
}

Dataset dataset_from_arrays(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
    const std::vector<int>& y) {
    if (x.ndim() != 2) throw std::invalid_argument("expected a 2D feature matrix");
    Dataset d;
    d.n = static_cast<int>(x.shape(0));
    d.p = static_cast<int>(x.shape(1));
    if (static_cast<int>(y.size()) != d.n) throw std::invalid_argument("label length mismatch");
    d.features.assign(x.data(), x.data() + d.n * d.p);
    d.labels = y;
    for (int j = 0; j < d.p; ++j) d.feature_names.push_back("f" + std::to_string(j));
    return d;
}

} // namespace

PYBIND11_MODULE(_wavespec, m) {
    m.doc() = "Hurst exponent estimation for 2D self-similar signals via primal and dual "
              "wavelet spectra";

    py::register_exception<DataError>(m, "DataError");
    py::register_exception<EstimationError>(m, "EstimationError");

    py::class_<PyDecomposition>(m, "Decomposition2D")
        .def_property_readonly("kind", &PyDecomposition::kind)
        .def_property_readonly("levels", &PyDecomposition::levels)
        .def_property_readonly("side", &PyDecomposition::side)
        .def_property_readonly("level_indices", &PyDecomposition::level_indices)
        .def("diagonal", &PyDecomposition::diagonal, py::arg("j"),
             "Diagonal detail region at level j")
        .def("approx", &PyDecomposition::approx)
        .def("inverse", &PyDecomposition::inverse, "Reconstruct the original image");

    m.def(
        "dwt2d",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
           const std::string& filter, int levels, std::optional<double> param) {
            const GridR g = grid_from_array(arr);
            const int L = levels > 0 ? levels : ilog2(g.side());
            return PyDecomposition{decompose(g, make_filter(filter, param), L,
                                             TransformKind::dwt2d, false)};
        },
        py::arg("image"), py::arg("filter") = "haar", py::arg("levels") = 0,
        py::arg("param") = std::nullopt, "2D discrete wavelet transform (Mallat, periodic)");

    m.def(
        "ndwt2d",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
           const std::string& filter, int levels, bool diagonal_only,
           std::optional<double> param) {
            const GridR g = grid_from_array(arr);
            const int L = levels > 0 ? levels : ilog2(g.side());
            return PyDecomposition{decompose(g, make_filter(filter, param), L,
                                             TransformKind::ndwt2d_scale_mixing, diagonal_only)};
        },
        py::arg("image"), py::arg("filter") = "haar", py::arg("levels") = 0,
        py::arg("diagonal_only") = false, py::arg("param") = std::nullopt,
        "Scale-mixing 2D non-decimated wavelet transform");

    m.def(
        "primal_spectra",
        [](const PyDecomposition& dec, int j1, int j2) {
            return fit_to_dict(primal_spectra(dec.dec, PrimalConfig{j1, j2}));
        },
        py::arg("decomposition"), py::arg("j1") = 2, py::arg("j2") = 8,
        "Primal wavelet spectra fit; H = -slope/2 - 1");

    m.def(
        "dual_spectra",
        [](const PyDecomposition& dec, int xq, double p1, double p2) {
            return fit_to_dict(dual_spectra(dec.dec, DualConfig{xq, p1, p2}));
        },
        py::arg("decomposition"), py::arg("xq") = 2, py::arg("p1") = 10.0, py::arg("p2") = 85.0,
        "Dual wavelet spectra fit; H = -(1/slope + 2)/2");

    m.def(
        "wavelet_entropy",
        [](const PyDecomposition& dec, int level) { return wavelet_entropy(dec.dec, level); },
        py::arg("decomposition"), py::arg("level"),
        "Shannon entropy of one level's normalized diagonal energies");

    m.def("sigma2_h", &sigma2_H, py::arg("h"), "fBm variance scale sigma^2_H");
    m.def(
        "fbm_cov",
        [](std::pair<double, double> t, std::pair<double, double> s, double h) {
            return fbm_cov({t.first, t.second}, {s.first, s.second}, h);
        },
        py::arg("t"), py::arg("s"), py::arg("h"), "2D fBm covariance on the unit square");

    m.def(
        "generate_fbm2d",
        [](double h, int n, std::uint64_t seed, const std::string& method) {
            const FbmSpec spec{h, n, seed};
            if (method == "cholesky") return array_from_grid(generate_fbm2d_cholesky(spec));
            if (method != "circulant") throw std::invalid_argument("method: circulant|cholesky");
            return array_from_grid(generate_fbm2d(spec));
        },
        py::arg("h"), py::arg("n"), py::arg("seed") = 0, py::arg("method") = "circulant",
        "Exact 2D fractional Brownian motion on the (i/n, j/n) lattice");

    m.def(
        "ols_fit",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            const OlsFit f = ols_fit(x, y);
            return py::make_tuple(f.slope, f.intercept, f.residual_ss);
        },
        py::arg("x"), py::arg("y"), "Least-squares line; returns (slope, intercept, rss)");

    m.def(
        "logistic_fit",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
           const std::vector<int>& y) {
            const LogisticFit fit = logistic_fit(dataset_from_arrays(x, y));
            py::dict out;
            out["coef"] = fit.coef;
            out["deviance"] = fit.deviance;
            out["converged"] = fit.converged;
            return out;
        },
        py::arg("features"), py::arg("labels"),
        "IRLS logistic regression; coef[0] is the intercept");

    m.def(
        "stratified_repeated_cv",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
           const std::vector<int>& y, int k, int r, double threshold, std::uint64_t seed) {
            const CvReport rep = stratified_repeated_cv(dataset_from_arrays(x, y), k, r, threshold, seed);
            py::dict out;
            out["accuracy"] = rep.accuracy;
            out["sensitivity"] = rep.sensitivity;
            out["specificity"] = rep.specificity;
            out["mean_accuracy"] = rep.mean_accuracy;
            out["sd_accuracy"] = rep.sd_accuracy;
            out["mean_sensitivity"] = rep.mean_sensitivity;
            out["mean_specificity"] = rep.mean_specificity;
            out["n_test"] = rep.n_test;
            out["n_train"] = rep.n_train;
            return out;
        },
        py::arg("features"), py::arg("labels"), py::arg("k") = 10, py::arg("r") = 10,
        py::arg("threshold") = 0.5, py::arg("seed") = 0,
        "Repeated stratified k-fold CV with a logistic classifier");

    m.def(
        "corrected_cv_ttest",
        [](const std::vector<double>& a, const std::vector<double>& b, int k, int r,
           double n_train, double n_test) {
            const TestResult res = corrected_cv_ttest(a, b, k, r, n_train, n_test);
            return py::make_tuple(res.statistic, res.p_value);
        },
        py::arg("acc_a"), py::arg("acc_b"), py::arg("k"), py::arg("r"), py::arg("n_train"),
        py::arg("n_test"), "Corrected repeated k-fold CV t-test; returns (t, one-sided p)");

    m.def(
        "paired_ttest",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            const TestResult res = paired_ttest(x, y);
            return py::make_tuple(res.statistic, res.p_value);
        },
        py::arg("x"), py::arg("y"), "Two-sided paired t-test; returns (t, p)");
}
