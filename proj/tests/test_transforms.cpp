#include "wavespec/transforms.hpp"

#include "wavespec/errors.hpp"
#include "wavespec/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace wavespec;

namespace {

GridR random_grid(int n, std::uint64_t seed) {
    GridR g(n, n);
    Philox gen(seed);
    for (double& v : g.data) v = gen.gaussian();
    return g;
}

template <typename T>
double total_energy(const Decomposition<T>& dec) {
    double e = 0.0;
    for (const auto& lev : dec.levels) {
        for (const T& v : lev.hh.data) e += energy_of(v);
        for (const T& v : lev.hl.data) e += energy_of(v);
        for (const T& v : lev.lh.data) e += energy_of(v);
    }
    for (const T& v : dec.approx.data) e += energy_of(v);
    return e;
}

double grid_energy(const GridR& g) {
    double e = 0.0;
    for (double v : g.data) e += v * v;
    return e;
}

template <typename T>
double max_abs_diff(const Grid<T>& a, const Grid<T>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

const char* kAllFilters[] = {"haar", "db2", "db3", "pollen", "coif1", "symmlet4", "conf6"};

} // namespace

TEST_CASE("dwt2d of a constant grid has zero details") {
    const GridR g(4, 4, 3.25);
    const auto dec = dwt2d(g, make_filter("haar"), 2);
    for (const auto& lev : dec.levels)
        for (double v : lev.hh.data) CHECK(v == 0.0); // exact for haar on constants
    // approximation holds all the mass: N*c for L = J would be 4*3.25
    CHECK(dec.approx.rows == 1);
    CHECK(dec.approx.at(0, 0) == doctest::Approx(4.0 * 3.25).epsilon(1e-13));
}

TEST_CASE("dwt2d Parseval at full depth") {
    for (const char* name : {"haar", "db2", "db3", "pollen", "coif1", "symmlet4"}) {
        const GridR g = random_grid(32, 7);
        const auto dec = dwt2d(g, make_filter(name), 5);
        CAPTURE(name);
        CHECK(std::fabs(total_energy(dec) - grid_energy(g)) / grid_energy(g) < 1e-10);
    }
}

TEST_CASE("dwt2d Parseval with complex conf6 uses |.|^2") {
    const GridR g = random_grid(32, 11);
    const auto dec = dwt2d(to_complex(g), make_filter("conf6"), 5);
    CHECK(std::fabs(total_energy(dec) - grid_energy(g)) / grid_energy(g) < 1e-10);
}

TEST_CASE("dwt2d coefficient counts form the Mallat pyramid") {
    const GridR g = random_grid(64, 3);
    const auto dec = dwt2d(g, make_filter("db2"), 6);
    REQUIRE(dec.levels.size() == 6);
    std::size_t total = dec.approx.size();
    for (const auto& lev : dec.levels) {
        const int side = 1 << lev.j; // diagonal blocks are 2^j x 2^j
        CHECK(lev.hh.rows == side);
        CHECK(lev.hh.cols == side);
        total += lev.hh.size() + lev.hl.size() + lev.lh.size();
    }
    CHECK(total == g.size());
}

TEST_CASE("round trips: inverse(forward(x)) = x for both transforms") {
    for (const char* name : kAllFilters) {
        CAPTURE(name);
        const WaveletFilter f = make_filter(name);
        for (int n : {8, 16, 32, 64}) {
            const GridR x = random_grid(n, 1000 + n);
            const int L = ilog2(n);
            if (f.complex_taps) {
                const GridC xc = to_complex(x);
                CHECK(max_abs_diff(inverse_dwt2d(dwt2d(xc, f, L)), xc) < 1e-8);
                CHECK(max_abs_diff(inverse_ndwt2d(ndwt2d(xc, f, L)), xc) < 1e-8);
            } else {
                CHECK(max_abs_diff(inverse_dwt2d(dwt2d(x, f, L)), x) < 1e-8);
                CHECK(max_abs_diff(inverse_ndwt2d(ndwt2d(x, f, L)), x) < 1e-8);
            }
        }
    }
}

TEST_CASE("dwt2d round trip is near machine precision") {
    const GridR x = random_grid(8, 42);
    CHECK(max_abs_diff(inverse_dwt2d(dwt2d(x, make_filter("db2"), 3)), x) < 1e-10);
    const GridR y = random_grid(32, 43);
    CHECK(max_abs_diff(inverse_dwt2d(dwt2d(y, make_filter("symmlet4"), 5)), y) < 1e-8);
}

TEST_CASE("zeroing details yields a lower-energy low-pass reconstruction") {
    const GridR x = random_grid(32, 5);
    auto dec = dwt2d(x, make_filter("haar"), 3);
    for (auto& lev : dec.levels) {
        lev.hh = GridR(lev.hh.rows, lev.hh.cols, 0.0);
        lev.hl = GridR(lev.hl.rows, lev.hl.cols, 0.0);
        lev.lh = GridR(lev.lh.rows, lev.lh.cols, 0.0);
    }
    const GridR smooth = inverse_dwt2d(dec);
    CHECK(grid_energy(smooth) < grid_energy(x));
    CHECK(grid_energy(smooth) > 0.0);
}

TEST_CASE("ndwt2d regions are all N x N and constants have zero details") {
    const GridR g(16, 16, 2.0);
    const auto dec = ndwt2d(g, make_filter("haar"), 4);
    REQUIRE(dec.levels.size() == 4);
    for (const auto& lev : dec.levels) {
        CHECK(lev.hh.rows == 16);
        CHECK(lev.hh.cols == 16);
        for (double v : lev.hh.data) CHECK(std::fabs(v) < 1e-14);
    }
}

TEST_CASE("ndwt2d diagonal details match an upsampled-cascade oracle on an impulse") {
    // direct a-trous convolution oracle: build the effective 1D filters by
    // explicit cascade convolution, tensor them, and correlate with the
    // impulse image
    const int n = 16, L = 3;
    const WaveletFilter f = make_filter("db2");
    GridR x(n, n, 0.0);
    x.at(5, 9) = 1.0;
    const auto dec = ndwt2d(x, f, L);

    const auto h = f.lowpass_real();
    const auto g = f.highpass_real();
    // effective filters per stage: F_1 = g, F_s = h * up(h)... * up^{s-1}(g)
    std::vector<std::vector<double>> eff;
    std::vector<double> low_acc = {1.0};
    for (int s = 1; s <= L; ++s) {
        const int u = 1 << (s - 1);
        auto upconv = [&](const std::vector<double>& a, const std::vector<double>& taps) {
            std::vector<double> out(a.size() + (taps.size() - 1) * static_cast<std::size_t>(u), 0.0);
            for (std::size_t i = 0; i < a.size(); ++i)
                for (std::size_t m = 0; m < taps.size(); ++m) out[i + m * u] += a[i] * taps[m];
            return out;
        };
        eff.push_back(upconv(low_acc, g));
        low_acc = upconv(low_acc, h);
    }
    for (int s = 1; s <= L; ++s) {
        const auto& fe = eff[static_cast<std::size_t>(s - 1)];
        const auto& hh = dec.levels[static_cast<std::size_t>(s - 1)].hh;
        double worst = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                // analysis inner product with the shifted tensor filter
                double want = 0.0;
                for (std::size_t a = 0; a < fe.size(); ++a)
                    for (std::size_t b = 0; b < fe.size(); ++b) {
                        const int rr = (r + static_cast<int>(a)) & (n - 1);
                        const int cc = (c + static_cast<int>(b)) & (n - 1);
                        if (rr == 5 && cc == 9) want += fe[a] * fe[b];
                    }
                worst = std::max(worst, std::fabs(hh.at(r, c) - want));
            }
        CAPTURE(s);
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("ndwt2d is exactly shift equivariant") {
    const int n = 32, L = 4, s = 5;
    const GridR x = random_grid(n, 77);
    GridR xs(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) xs.at((r + s) & (n - 1), (c + s) & (n - 1)) = x.at(r, c);
    const auto d0 = ndwt2d(x, make_filter("db3"), L);
    const auto d1 = ndwt2d(xs, make_filter("db3"), L);
    for (int lev = 0; lev < L; ++lev) {
        double worst = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                worst = std::max(worst, std::fabs(d1.levels[lev].hh.at((r + s) & (n - 1), (c + s) & (n - 1)) -
                                                  d0.levels[lev].hh.at(r, c)));
        CHECK(worst == 0.0); // periodic handling makes the relation exact
    }
}

TEST_CASE("DWT diagonal coefficients subsample the NDWT diagonal") {
    const int n = 32, L = 4;
    const GridR x = random_grid(n, 123);
    const WaveletFilter f = make_filter("haar");
    const auto dw = dwt2d(x, f, L);
    const auto nd = ndwt2d(x, f, L);
    for (int s = 1; s <= L; ++s) {
        const auto& a = dw.levels[static_cast<std::size_t>(s - 1)].hh;
        const auto& b = nd.levels[static_cast<std::size_t>(s - 1)].hh;
        const int stride = 1 << s;
        double worst = 0.0;
        for (int r = 0; r < a.rows; ++r)
            for (int c = 0; c < a.cols; ++c)
                worst = std::max(worst, std::fabs(a.at(r, c) - b.at(r * stride, c * stride)));
        CAPTURE(s);
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("inverse_ndwt2d reconstructs, also with modified regions") {
    const int n = 64, L = 4;
    const WaveletFilter f = make_filter("haar");
    const GridR x = random_grid(n, 9);
    const GridR y = random_grid(n, 10);

    SUBCASE("plain round trip within 1e-8") {
        const GridR back = inverse_ndwt2d(ndwt2d(x, f, L));
        double rel = 0.0;
        for (std::size_t i = 0; i < x.data.size(); ++i)
            rel = std::max(rel, std::fabs(back.data[i] - x.data[i]));
        CHECK(rel / std::sqrt(grid_energy(x) / x.data.size()) < 1e-8);
    }

    SUBCASE("zeroed details of a constant signal reconstruct the constant") {
        auto dec = ndwt2d(GridR(16, 16, 1.5), f, 3);
        for (auto& lev : dec.levels) {
            lev.hh = GridR(16, 16, 0.0);
            lev.hl = GridR(16, 16, 0.0);
            lev.lh = GridR(16, 16, 0.0);
        }
        const GridR back = inverse_ndwt2d(dec);
        for (double v : back.data) CHECK(v == doctest::Approx(1.5).epsilon(1e-12));
    }

    SUBCASE("swapping finest details mixes the two signals") {
        auto dx = ndwt2d(x, f, L);
        const auto dy = ndwt2d(y, f, L);
        dx.levels[0] = dy.levels[0];
        const GridR mixed = inverse_ndwt2d(dx);
        CHECK(max_abs_diff(mixed, x) > 1e-3);
        CHECK(max_abs_diff(mixed, y) > 1e-3);
        // re-decomposing recovers the injected fine-level diagonal energy
        const auto re = ndwt2d(mixed, f, L);
        double injected = 0.0, recovered = 0.0;
        for (double v : dy.levels[0].hh.data) injected += v * v;
        for (double v : re.levels[0].hh.data) recovered += v * v;
        // measured frame-projection loss for haar at n=64 is ~10%; the
        // average-basis inverse cannot reproduce out-of-range coefficients
        CHECK(std::fabs(recovered - injected) / injected < 0.15);
    }
}

TEST_CASE("transform input validation") {
    const WaveletFilter f = make_filter("haar");
    CHECK_THROWS_AS(dwt2d(GridR(12, 12, 0.0), f, 2), std::invalid_argument);
    CHECK_THROWS_AS(dwt2d(GridR(8, 4, 0.0), f, 2), std::invalid_argument);
    CHECK_THROWS_AS(dwt2d(random_grid(8, 1), f, 4), std::invalid_argument);
    CHECK_THROWS_AS(dwt2d(random_grid(8, 1), f, 0), std::invalid_argument);

    auto dec = dwt2d(random_grid(8, 1), f, 2);
    dec.levels[0].hh = GridR(2, 2, 0.0); // wrong shape
    CHECK_THROWS_AS(inverse_dwt2d(dec), DataError);

    const auto diag = ndwt2d(random_grid(8, 1), f, 2, /*diagonal_only=*/true);
    CHECK_THROWS_AS(inverse_ndwt2d(diag), DataError);

    auto nd = ndwt2d(random_grid(8, 1), f, 2);
    nd.levels[1].hh = GridR(4, 4, 0.0);
    CHECK_THROWS_AS(inverse_ndwt2d(nd), DataError);
}
