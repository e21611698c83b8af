#include "wavespec/fft.hpp"

#include "wavespec/parallel.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace wavespec {

namespace {

struct Plan {
    std::vector<std::uint32_t> rev;   // bit-reversal permutation
    std::vector<cdouble> w;           // forward twiddles, n/2 entries
};

const Plan& plan_for(std::size_t n) {
    static std::unordered_map<std::size_t, Plan> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    Plan p;
    p.rev.resize(n);
    int lg = 0;
    while ((std::size_t(1) << lg) < n) ++lg;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t r = 0;
        for (int b = 0; b < lg; ++b)
            if (i & (std::size_t(1) << b)) r |= std::uint32_t(1) << (lg - 1 - b);
        p.rev[i] = r;
    }
    p.w.resize(n / 2);
    const double step = -2.0 * M_PI / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k) p.w[k] = cdouble(std::cos(step * k), std::sin(step * k));
    return cache.emplace(n, std::move(p)).first->second;
}

} // namespace

void fft(std::span<cdouble> a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if ((n & (n - 1)) != 0) throw std::invalid_argument("fft length must be a power of two");
    const Plan& plan = plan_for(n);

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = plan.rev[i];
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t k = 0; k < half; ++k) {
                cdouble w = plan.w[k * stride];
                if (inverse) w = std::conj(w);
                const cdouble u = a[base + k];
                const cdouble v = a[base + k + half] * w;
                a[base + k] = u + v;
                a[base + k + half] = u - v;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= scale;
    }
}

void fft2d(GridC& g, bool inverse, int threads) {
    const std::size_t r = static_cast<std::size_t>(g.rows);
    parallel_for(
        r, [&](std::size_t i) { fft(std::span<cdouble>(g.row(static_cast<int>(i)), g.cols), inverse); },
        threads);
    GridC t = transposed(g);
    const std::size_t c = static_cast<std::size_t>(t.rows);
    parallel_for(
        c, [&](std::size_t i) { fft(std::span<cdouble>(t.row(static_cast<int>(i)), t.cols), inverse); },
        threads);
    g = transposed(t);
}

} // namespace wavespec
