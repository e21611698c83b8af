#include "wavespec/transforms.hpp"

#include "wavespec/errors.hpp"

#include <stdexcept>

namespace wavespec {

namespace {

template <typename T>
struct Bank {
    std::vector<T> h, g;   // synthesis taps (the filter atoms)
    std::vector<T> ah, ag; // analysis taps = conjugates
};

template <typename T>
Bank<T> make_bank(const WaveletFilter& f);

template <>
Bank<double> make_bank<double>(const WaveletFilter& f) {
    Bank<double> b;
    b.h = f.lowpass_real();
    b.g = f.highpass_real();
    b.ah = b.h;
    b.ag = b.g;
    return b;
}

template <>
Bank<cdouble> make_bank<cdouble>(const WaveletFilter& f) {
    Bank<cdouble> b;
    b.h = f.lowpass;
    b.g = f.highpass;
    b.ah.resize(b.h.size());
    b.ag.resize(b.g.size());
    for (std::size_t i = 0; i < b.h.size(); ++i) {
        b.ah[i] = std::conj(b.h[i]);
        b.ag[i] = std::conj(b.g[i]);
    }
    return b;
}

// ---- decimated stage, along rows, periodic indexing (n is a power of 2) ----

template <typename T>
void analyze_rows_dec(const Grid<T>& x, const std::vector<T>& taps, Grid<T>& out) {
    const int n = x.cols, half = n / 2, nt = static_cast<int>(taps.size());
    const int mask = n - 1;
    for (int r = 0; r < x.rows; ++r) {
        const T* src = x.row(r);
        T* dst = out.row(r);
        for (int t = 0; t < half; ++t) {
            T acc{};
            const int base = 2 * t;
            for (int m = 0; m < nt; ++m) acc += taps[static_cast<std::size_t>(m)] * src[(base + m) & mask];
            dst[t] = acc;
        }
    }
}

// x[i] = sum_t h[(i-2t) mod n] lo[t] + g[(i-2t) mod n] hi[t]
template <typename T>
void synth_rows_dec(const Grid<T>& lo, const Grid<T>& hi, const Bank<T>& bank, Grid<T>& x) {
    const int half = lo.cols, n = 2 * half, nt = static_cast<int>(bank.h.size());
    const int hmask = half - 1;
    for (int r = 0; r < lo.rows; ++r) {
        const T* plo = lo.row(r);
        const T* phi = hi.row(r);
        T* dst = x.row(r);
        for (int i = 0; i < n; ++i) {
            T acc{};
            for (int m = i & 1; m < nt; m += 2) {
                const int t = ((i - m) / 2) & hmask; // (i-m) is even and may wrap
                acc += bank.h[static_cast<std::size_t>(m)] * plo[t] +
                       bank.g[static_cast<std::size_t>(m)] * phi[t];
            }
            dst[i] = acc;
        }
    }
}

// ---- non-decimated stage with taps upsampled by u ----

template <typename T>
void analyze_rows_ndwt(const Grid<T>& x, const std::vector<T>& taps, int u, Grid<T>& out) {
    const int n = x.cols, nt = static_cast<int>(taps.size());
    const int mask = n - 1;
    for (int r = 0; r < x.rows; ++r) {
        const T* src = x.row(r);
        T* dst = out.row(r);
        for (int k = 0; k < n; ++k) {
            T acc{};
            for (int m = 0; m < nt; ++m) acc += taps[static_cast<std::size_t>(m)] * src[(k + u * m) & mask];
            dst[k] = acc;
        }
    }
}

// Average-basis stage inverse: x[i] = (1/2) sum_m h[m] lo[(i-um) mod n] + g[m] hi[(i-um) mod n].
template <typename T>
void synth_rows_ndwt(const Grid<T>& lo, const Grid<T>& hi, const Bank<T>& bank, int u, Grid<T>& x) {
    const int n = lo.cols, nt = static_cast<int>(bank.h.size());
    const int mask = n - 1;
    for (int r = 0; r < lo.rows; ++r) {
        const T* plo = lo.row(r);
        const T* phi = hi.row(r);
        T* dst = x.row(r);
        for (int i = 0; i < n; ++i) {
            T acc{};
            for (int m = 0; m < nt; ++m) {
                const int idx = (i - u * m) & mask;
                acc += bank.h[static_cast<std::size_t>(m)] * plo[idx] +
                       bank.g[static_cast<std::size_t>(m)] * phi[idx];
            }
            dst[i] = acc * 0.5;
        }
    }
}

template <typename T>
void check_input(const Grid<T>& signal, int L) {
    if (!signal.square()) throw std::invalid_argument("transform input must be square");
    if (!is_pow2(signal.rows)) throw std::invalid_argument("side length must be a power of two");
    const int J = ilog2(signal.rows);
    if (L < 1 || L > J) throw std::invalid_argument("detail level count L out of range");
}

} // namespace

template <typename T>
const DetailLevel<T>& Decomposition<T>::level(int j) const {
    const int idx = J - 1 - j;
    if (idx < 0 || idx >= static_cast<int>(levels.size()))
        throw std::invalid_argument("no detail level with index j=" + std::to_string(j));
    return levels[static_cast<std::size_t>(idx)];
}

template <typename T>
Decomposition<T> dwt2d(const Grid<T>& signal, const WaveletFilter& filter, int L) {
    check_input(signal, L);
    const Bank<T> bank = make_bank<T>(filter);
    Decomposition<T> dec;
    dec.kind = TransformKind::dwt2d;
    dec.n = signal.rows;
    dec.J = ilog2(signal.rows);
    dec.L = L;
    dec.filter = filter;

    Grid<T> cur = signal;
    for (int s = 1; s <= L; ++s) {
        const int ns = cur.rows, half = ns / 2;
        Grid<T> rlo(ns, half), rhi(ns, half);
        analyze_rows_dec(cur, bank.ah, rlo);
        analyze_rows_dec(cur, bank.ag, rhi);
        // columns: transpose, filter rows, transpose back
        Grid<T> tlo = transposed(rlo), thi = transposed(rhi);
        Grid<T> ll(half, half), lh(half, half), hl(half, half), hh(half, half);
        analyze_rows_dec(tlo, bank.ah, ll);
        analyze_rows_dec(tlo, bank.ag, lh);
        analyze_rows_dec(thi, bank.ah, hl);
        analyze_rows_dec(thi, bank.ag, hh);
        DetailLevel<T> lev;
        lev.j = dec.J - s;
        lev.hh = transposed(hh);
        lev.hl = transposed(hl);
        lev.lh = transposed(lh);
        dec.levels.push_back(std::move(lev));
        cur = transposed(ll);
    }
    dec.approx = std::move(cur);
    return dec;
}

template <typename T>
Grid<T> inverse_dwt2d(const Decomposition<T>& dec) {
    if (dec.kind != TransformKind::dwt2d) throw std::invalid_argument("decomposition is not a 2D DWT");
    const Bank<T> bank = make_bank<T>(dec.filter);
    Grid<T> cur = dec.approx;
    for (int s = dec.L; s >= 1; --s) {
        const DetailLevel<T>& lev = dec.levels[static_cast<std::size_t>(s - 1)];
        const int half = dec.n >> s;
        if (cur.rows != half || lev.hh.rows != half || lev.hh.cols != half ||
            lev.hl.rows != half || lev.lh.rows != half)
            throw DataError("detail region shape mismatch at level j=" + std::to_string(lev.j));
        // columns first (inverse of the forward order)
        Grid<T> tll = transposed(cur), tlh = transposed(lev.lh);
        Grid<T> thl = transposed(lev.hl), thh = transposed(lev.hh);
        Grid<T> tlo(half, 2 * half), thi(half, 2 * half);
        synth_rows_dec(tll, tlh, bank, tlo);
        synth_rows_dec(thl, thh, bank, thi);
        Grid<T> rlo = transposed(tlo), rhi = transposed(thi);
        Grid<T> next(2 * half, 2 * half);
        synth_rows_dec(rlo, rhi, bank, next);
        cur = std::move(next);
    }
    return cur;
}

template <typename T>
Decomposition<T> ndwt2d(const Grid<T>& signal, const WaveletFilter& filter, int L,
                        bool diagonal_only) {
    check_input(signal, L);
    const Bank<T> bank = make_bank<T>(filter);
    const int n = signal.rows;
    Decomposition<T> dec;
    dec.kind = TransformKind::ndwt2d_scale_mixing;
    dec.n = n;
    dec.J = ilog2(n);
    dec.L = L;
    dec.filter = filter;
    dec.diagonal_only = diagonal_only;

    Grid<T> cur = signal;
    Grid<T> rlo(n, n), rhi(n, n);
    for (int s = 1; s <= L; ++s) {
        const int u = 1 << (s - 1);
        analyze_rows_ndwt(cur, bank.ah, u, rlo);
        analyze_rows_ndwt(cur, bank.ag, u, rhi);
        Grid<T> tlo = transposed(rlo), thi = transposed(rhi);
        Grid<T> tmp(n, n);
        DetailLevel<T> lev;
        lev.j = dec.J - s;
        analyze_rows_ndwt(thi, bank.ag, u, tmp);
        lev.hh = transposed(tmp);
        if (!diagonal_only) {
            analyze_rows_ndwt(thi, bank.ah, u, tmp);
            lev.hl = transposed(tmp);
            analyze_rows_ndwt(tlo, bank.ag, u, tmp);
            lev.lh = transposed(tmp);
        }
        analyze_rows_ndwt(tlo, bank.ah, u, tmp);
        cur = transposed(tmp);
        dec.levels.push_back(std::move(lev));
    }
    dec.approx = std::move(cur);
    return dec;
}

template <typename T>
Grid<T> inverse_ndwt2d(const Decomposition<T>& dec) {
    if (dec.kind != TransformKind::ndwt2d_scale_mixing)
        throw std::invalid_argument("decomposition is not a 2D NDWT");
    if (dec.diagonal_only)
        throw DataError("diagonal-only NDWT decompositions cannot be inverted");
    const Bank<T> bank = make_bank<T>(dec.filter);
    const int n = dec.n;
    Grid<T> cur = dec.approx;
    if (cur.rows != n || cur.cols != n) throw DataError("approximation region shape mismatch");
    for (int s = dec.L; s >= 1; --s) {
        const int u = 1 << (s - 1);
        const DetailLevel<T>& lev = dec.levels[static_cast<std::size_t>(s - 1)];
        for (const Grid<T>* g : {&lev.hh, &lev.hl, &lev.lh})
            if (g->rows != n || g->cols != n)
                throw DataError("detail region shape mismatch at level j=" + std::to_string(lev.j));
        // invert columns: (LL, LH) -> row-lowpass image, (HL, HH) -> row-highpass image
        Grid<T> tll = transposed(cur), tlh = transposed(lev.lh);
        Grid<T> thl = transposed(lev.hl), thh = transposed(lev.hh);
        Grid<T> tlo(n, n), thi(n, n);
        synth_rows_ndwt(tll, tlh, bank, u, tlo);
        synth_rows_ndwt(thl, thh, bank, u, thi);
        Grid<T> rlo = transposed(tlo), rhi = transposed(thi);
        Grid<T> next(n, n);
        synth_rows_ndwt(rlo, rhi, bank, u, next);
        cur = std::move(next);
    }
    return cur;
}

DecompositionVar decompose(const GridR& signal, const WaveletFilter& filter, int L,
                           TransformKind kind, bool diagonal_only) {
    if (filter.complex_taps) {
        const GridC sig = to_complex(signal);
        if (kind == TransformKind::dwt2d) return dwt2d(sig, filter, L);
        return ndwt2d(sig, filter, L, diagonal_only);
    }
    if (kind == TransformKind::dwt2d) return dwt2d(signal, filter, L);
    return ndwt2d(signal, filter, L, diagonal_only);
}

template struct Decomposition<double>;
template struct Decomposition<cdouble>;
template Decomposition<double> dwt2d(const Grid<double>&, const WaveletFilter&, int);
template Decomposition<cdouble> dwt2d(const Grid<cdouble>&, const WaveletFilter&, int);
template Grid<double> inverse_dwt2d(const Decomposition<double>&);
template Grid<cdouble> inverse_dwt2d(const Decomposition<cdouble>&);
template Decomposition<double> ndwt2d(const Grid<double>&, const WaveletFilter&, int, bool);
template Decomposition<cdouble> ndwt2d(const Grid<cdouble>&, const WaveletFilter&, int, bool);
template Grid<double> inverse_ndwt2d(const Decomposition<double>&);
template Grid<cdouble> inverse_ndwt2d(const Decomposition<cdouble>&);

} // namespace wavespec
