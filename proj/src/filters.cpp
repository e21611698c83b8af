#include "wavespec/filters.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace wavespec {

namespace {

std::vector<cdouble> to_cvec(const std::vector<double>& v) {
    std::vector<cdouble> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = cdouble(v[i], 0.0);
    return out;
}

std::vector<double> pollen_taps(double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    const double d = 2.0 * std::sqrt(2.0);
    return {(1.0 - c + s) / d, (1.0 + c + s) / d, (1.0 + c - s) / d, (1.0 - c - s) / d};
}

std::vector<double> db2_taps() {
    const double s3 = std::sqrt(3.0), d = 4.0 * std::sqrt(2.0);
    return {(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d};
}

std::vector<double> db3_taps() {
    const double s10 = std::sqrt(10.0);
    const double a = std::sqrt(5.0 + 2.0 * s10);
    const double d = 16.0 * std::sqrt(2.0);
    return {(1.0 + s10 + a) / d,        (5.0 + s10 + 3.0 * a) / d,
            (10.0 - 2.0 * s10 + 2.0 * a) / d, (10.0 - 2.0 * s10 - 2.0 * a) / d,
            (5.0 + s10 - 3.0 * a) / d,  (1.0 + s10 - a) / d};
}

// Least-asymmetric Daubechies, 4 vanishing moments.
std::vector<double> symmlet4_taps() {
    return {0.03222310060383634148,  -0.01260396726200461064, -0.09921954357686891101,
            0.29785779560545097112,  0.80373875180552260386,  0.49761866763210466416,
            -0.02963552764594250993, -0.07576571478900350023};
}

std::vector<double> coif1_taps() {
    return {-0.01565572813577515443, -0.07273261951254328612, 0.38486484686432104121,
            0.85257202021163409664,  0.33789766245800163762,  -0.07273261951254328612};
}

// Symmetric complex orthonormal 6-tap filter: the complex spectral factor of
// the Daubechies-3 half-band polynomial with a reciprocal root pair, phased
// so the taps sum to sqrt(2).
std::vector<cdouble> conf6_taps() {
    return {{-0.06629126073623883041, -0.08558164961018220523},
            {0.11048543456039805069, -0.08558164961018220523},
            {0.66291260736238830413, 0.17116329922036441046},
            {0.66291260736238830413, 0.17116329922036441046},
            {0.11048543456039805069, -0.08558164961018220523},
            {-0.06629126073623883041, -0.08558164961018220523}};
}

std::vector<cdouble> qmf_highpass(const std::vector<cdouble>& h) {
    const int n = static_cast<int>(h.size());
    std::vector<cdouble> g(h.size());
    for (int k = 0; k < n; ++k) {
        const cdouble v = std::conj(h[static_cast<std::size_t>(n - 1 - k)]);
        g[static_cast<std::size_t>(k)] = (k % 2 == 0) ? v : -v;
    }
    return g;
}

} // namespace

FilterName parse_filter_name(const std::string& name) {
    if (name == "haar") return FilterName::haar;
    if (name == "db2") return FilterName::db2;
    if (name == "db3") return FilterName::db3;
    if (name == "pollen") return FilterName::pollen;
    if (name == "coif1") return FilterName::coif1;
    if (name == "symmlet4" || name == "sym4") return FilterName::symmlet4;
    if (name == "conf6") return FilterName::conf6;
    throw std::invalid_argument("unknown wavelet filter: " + name);
}

std::string filter_name_str(FilterName name) {
    switch (name) {
        case FilterName::haar: return "haar";
        case FilterName::db2: return "db2";
        case FilterName::db3: return "db3";
        case FilterName::pollen: return "pollen";
        case FilterName::coif1: return "coif1";
        case FilterName::symmlet4: return "symmlet4";
        case FilterName::conf6: return "conf6";
    }
    return "?";
}

std::string WaveletFilter::label() const {
    if (name == FilterName::pollen) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "pollen(%.6g)", param);
        return buf;
    }
    return filter_name_str(name);
}

std::vector<double> WaveletFilter::lowpass_real() const {
    if (complex_taps) throw std::invalid_argument(label() + " has complex taps");
    std::vector<double> out(lowpass.size());
    for (std::size_t i = 0; i < lowpass.size(); ++i) out[i] = lowpass[i].real();
    return out;
}

std::vector<double> WaveletFilter::highpass_real() const {
    if (complex_taps) throw std::invalid_argument(label() + " has complex taps");
    std::vector<double> out(highpass.size());
    for (std::size_t i = 0; i < highpass.size(); ++i) out[i] = highpass[i].real();
    return out;
}

WaveletFilter make_filter(FilterName name, std::optional<double> param) {
    if (param && name != FilterName::pollen)
        throw std::invalid_argument("filter parameter is only accepted for pollen");
    WaveletFilter f;
    f.name = name;
    switch (name) {
        case FilterName::haar: {
            const double r = std::sqrt(0.5);
            f.lowpass = to_cvec({r, r});
            break;
        }
        case FilterName::db2: f.lowpass = to_cvec(db2_taps()); break;
        case FilterName::db3: f.lowpass = to_cvec(db3_taps()); break;
        case FilterName::pollen: {
            const double phi = param.value_or(M_PI / 4.0);
            if (!std::isfinite(phi)) throw std::invalid_argument("pollen angle must be finite");
            f.param = phi;
            f.lowpass = to_cvec(pollen_taps(phi));
            break;
        }
        case FilterName::coif1: f.lowpass = to_cvec(coif1_taps()); break;
        case FilterName::symmlet4: f.lowpass = to_cvec(symmlet4_taps()); break;
        case FilterName::conf6:
            f.lowpass = conf6_taps();
            f.complex_taps = true;
            break;
    }
    f.highpass = qmf_highpass(f.lowpass);
    return f;
}

WaveletFilter make_filter(const std::string& name, std::optional<double> param) {
    return make_filter(parse_filter_name(name), param);
}

} // namespace wavespec
