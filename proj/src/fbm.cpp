#include "wavespec/fbm.hpp"

#include "wavespec/errors.hpp"
#include "wavespec/fft.hpp"
#include "wavespec/linalg.hpp"
#include "wavespec/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace wavespec {

namespace {

void check_h(double H) {
    if (!(H > 0.0) || !(H < 1.0)) throw std::invalid_argument("H must lie in (0, 1)");
}

// Stein's compactly supported covariance: psi(r) = c0 + c2 r^2 - r^alpha on
// r <= 1, cubic taper on [1, R], zero beyond R (R = 2). Subtracting the
// quadratic part later turns the stationary field into exact fBm.
struct SteinCov {
    double alpha, beta, c0, c2;
    explicit SteinCov(double H) {
        alpha = 2.0 * H;
        constexpr double R = 2.0;
        if (alpha <= 1.5) {
            beta = 0.0;
            c2 = alpha / 2.0;
            c0 = 1.0 - alpha / 2.0;
        } else {
            beta = alpha * (2.0 - alpha) / (3.0 * R * (R * R - 1.0));
            c2 = (alpha - beta * (R - 1.0) * (R - 1.0) * (R + 2.0)) / 2.0;
            c0 = beta * (R - 1.0) * (R - 1.0) * (R - 1.0) + 1.0 - c2;
        }
    }
    double operator()(double r) const {
        constexpr double R = 2.0;
        if (r <= 1.0) return c0 + c2 * r * r - std::pow(r, alpha);
        if (r < R) {
            const double t = R - r;
            return beta * t * t * t / r;
        }
        return 0.0;
    }
};

} // namespace

double sigma2_H(double H) {
    check_h(H);
    return std::pow(2.0, -(1.0 + 2.0 * H)) * std::tgamma(1.0 - H) /
           (M_PI * H * std::tgamma(1.0 + H));
}

double fbm_cov(Point2 t, Point2 s, double H) {
    check_h(H);
    const double nt = std::hypot(t.x, t.y);
    const double ns = std::hypot(s.x, s.y);
    const double nd = std::hypot(t.x - s.x, t.y - s.y);
    const double a = 2.0 * H;
    return 0.5 * sigma2_H(H) * (std::pow(nt, a) + std::pow(ns, a) - std::pow(nd, a));
}

struct FbmGenerator::Impl {
    double H = 0.5;
    int n = 0;
    int m = 0;          // embedding side (power of 2)
    double delta = 0.0; // embedding lattice spacing
    double c2 = 0.0;
    double scale = 0.0; // sigma_H/sqrt(2) * 2^H
    std::vector<double> sqrt_lambda; // m*m nonnegative eigenvalue roots
};

FbmGenerator::FbmGenerator(double H, int n) : impl_(std::make_unique<Impl>()) {
    check_h(H);
    if (!is_pow2(n)) throw std::invalid_argument("side length must be a power of two");
    Impl& im = *impl_;
    im.H = H;
    im.n = n;
    // The simulated region is [0, 1/2]^2 at spacing 1/(2n) so every pairwise
    // distance stays inside the polynomial piece of psi; self-similarity
    // rescales the samples onto [0, 1]^2. The torus period matches the
    // support diameter of psi, which keeps the embedding nonnegative.
    im.delta = 0.5 / static_cast<double>(n);
    const SteinCov cov(H);
    im.c2 = cov.c2;
    im.scale = std::sqrt(sigma2_H(H) / 2.0) * std::pow(2.0, H);
    const double period = cov.alpha <= 1.5 ? 2.0 : 4.0;
    im.m = 1;
    while (im.m * im.delta < period) im.m <<= 1;

    const int m = im.m;
    GridC c(m, m);
    for (int i = 0; i < m; ++i) {
        const int di = i <= m / 2 ? i : m - i; // torus min-image
        for (int j = 0; j < m; ++j) {
            const int dj = j <= m / 2 ? j : m - j;
            const double r = im.delta * std::hypot(static_cast<double>(di), static_cast<double>(dj));
            c.at(i, j) = cdouble(cov(r), 0.0);
        }
    }
    fft2d(c, false);
    double max_l = 0.0, min_l = 0.0;
    for (const cdouble& v : c.data) {
        max_l = std::max(max_l, v.real());
        min_l = std::min(min_l, v.real());
    }
    if (min_l < -1e-9 * max_l)
        throw DataError("circulant embedding is not positive semidefinite (min eigenvalue " +
                        std::to_string(min_l) + ")");
    im.sqrt_lambda.resize(c.data.size());
    for (std::size_t i = 0; i < c.data.size(); ++i)
        im.sqrt_lambda[i] = std::sqrt(std::max(0.0, c.data[i].real()));
}

FbmGenerator::~FbmGenerator() = default;
FbmGenerator::FbmGenerator(FbmGenerator&&) noexcept = default;
FbmGenerator& FbmGenerator::operator=(FbmGenerator&&) noexcept = default;

double FbmGenerator::hurst() const { return impl_->H; }
int FbmGenerator::side() const { return impl_->n; }

GridR FbmGenerator::sample(std::uint64_t seed) const {
    const Impl& im = *impl_;
    const int m = im.m, n = im.n;
    GridC w(m, m);
    Philox noise(derive_seed(seed, 0x66626d32u), 0); // field noise stream
    for (std::size_t i = 0; i < w.data.size(); ++i) {
        const double a = noise.gaussian();
        const double b = noise.gaussian();
        w.data[i] = im.sqrt_lambda[i] * cdouble(a, b);
    }
    fft2d(w, false);

    Philox drift(derive_seed(seed, 0x66626d32u), 1);
    const double w1 = drift.gaussian();
    const double w2 = drift.gaussian();
    const double sq2c2 = std::sqrt(2.0 * im.c2);

    const double inv_m = 1.0 / static_cast<double>(m);
    const double z00 = w.at(0, 0).real() * inv_m;
    GridR out(n, n);
    for (int i = 0; i < n; ++i) {
        const double ti = im.delta * static_cast<double>(i);
        for (int j = 0; j < n; ++j) {
            const double tj = im.delta * static_cast<double>(j);
            const double z = w.at(i, j).real() * inv_m;
            out.at(i, j) = im.scale * (z - z00 + sq2c2 * (ti * w1 + tj * w2));
        }
    }
    out.at(0, 0) = 0.0; // pinned exactly
    return out;
}

GridR generate_fbm2d(const FbmSpec& spec) {
    FbmGenerator gen(spec.H, spec.n);
    return gen.sample(spec.seed);
}

GridR generate_fbm2d_cholesky(const FbmSpec& spec) {
    check_h(spec.H);
    if (!is_pow2(spec.n)) throw std::invalid_argument("side length must be a power of two");
    if (spec.n > 64) throw std::invalid_argument("dense Cholesky path is limited to n <= 64");
    const int n = spec.n;
    const std::size_t npts = static_cast<std::size_t>(n) * n - 1; // all lattice points except the origin
    std::vector<Point2> pts;
    pts.reserve(npts);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == 0 && j == 0) continue;
            pts.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
        }
    std::vector<double> cov(npts * npts);
    for (std::size_t a = 0; a < npts; ++a)
        for (std::size_t b = 0; b <= a; ++b) {
            const double v = fbm_cov(pts[a], pts[b], spec.H);
            cov[a * npts + b] = v;
            cov[b * npts + a] = v;
        }
    if (!cholesky_lower(cov, npts))
        throw DataError("fBm covariance matrix is numerically not positive definite");
    Philox gen(derive_seed(spec.seed, 0x63686f6cu), 0);
    std::vector<double> z(npts);
    for (double& v : z) v = gen.gaussian();
    GridR out(n, n, 0.0);
    std::size_t row = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == 0 && j == 0) continue;
            double s = 0.0;
            for (std::size_t k = 0; k <= row; ++k) s += cov[row * npts + k] * z[k];
            out.at(i, j) = s;
            ++row;
        }
    return out;
}

} // namespace wavespec
