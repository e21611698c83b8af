#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace wavespec {

using cdouble = std::complex<double>;

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline int ilog2(int n) {
    int j = 0;
    while ((1 << j) < n) ++j;
    return j;
}

/// Row-major 2D array of real or complex samples.
template <typename T>
struct Grid {
    int rows = 0;
    int cols = 0;
    std::vector<T> data;

    Grid() = default;
    Grid(int r, int c, T fill = T{})
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

    T& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    const T& at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    T* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
    const T* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

    std::size_t size() const { return data.size(); }
    bool square() const { return rows == cols && rows > 0; }

    /// Side length of a square grid; throws otherwise.
    int side() const {
        if (!square()) throw std::invalid_argument("grid is not square");
        return rows;
    }

    bool same_shape(const Grid& o) const { return rows == o.rows && cols == o.cols; }
};

using GridR = Grid<double>;
using GridC = Grid<cdouble>;

template <typename T>
Grid<T> transposed(const Grid<T>& g) {
    Grid<T> t(g.cols, g.rows);
    constexpr int B = 32; // blocked for cache locality
    for (int rb = 0; rb < g.rows; rb += B)
        for (int cb = 0; cb < g.cols; cb += B) {
            const int rmax = std::min(g.rows, rb + B);
            const int cmax = std::min(g.cols, cb + B);
            for (int r = rb; r < rmax; ++r)
                for (int c = cb; c < cmax; ++c) t.at(c, r) = g.at(r, c);
        }
    return t;
}

inline GridC to_complex(const GridR& g) {
    GridC out(g.rows, g.cols);
    for (std::size_t i = 0; i < g.data.size(); ++i) out.data[i] = cdouble(g.data[i], 0.0);
    return out;
}

inline double energy_of(double v) { return v * v; }
inline double energy_of(const cdouble& v) { return std::norm(v); }

} // namespace wavespec
