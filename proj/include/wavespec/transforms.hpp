#pragma once

#include "wavespec/filters.hpp"
#include "wavespec/grid.hpp"

#include <variant>
#include <vector>

namespace wavespec {

enum class TransformKind { dwt2d, ndwt2d_scale_mixing };

/// One detail level of a 2D decomposition. `hh` is the diagonal region
/// (high-pass along both axes), the only one the spectra consume. `hl`
/// (rows high, columns low) and `lh` are kept when the decomposition has
/// to be invertible and are empty in diagonal-only mode.
template <typename T>
struct DetailLevel {
    int j = 0; // level index; J-1 is finest, decreasing toward coarse
    Grid<T> hh;
    Grid<T> hl;
    Grid<T> lh;
};

template <typename T>
struct Decomposition {
    TransformKind kind = TransformKind::dwt2d;
    int n = 0; // original side length, N = 2^J
    int J = 0;
    int L = 0;
    WaveletFilter filter;
    bool diagonal_only = false;
    std::vector<DetailLevel<T>> levels; // ordered finest (j = J-1) to coarsest (j = J-L)
    Grid<T> approx;

    const DetailLevel<T>& level(int j) const;
    const Grid<T>& diagonal(int j) const { return level(j).hh; }
    int j_finest() const { return J - 1; }
    int j_coarsest() const { return J - L; }
};

using DecompositionR = Decomposition<double>;
using DecompositionC = Decomposition<cdouble>;
using DecompositionVar = std::variant<DecompositionR, DecompositionC>;

/// Mallat-pyramid 2D DWT with decimation and periodic boundary handling.
/// Requires a square input with side 2^J and 1 <= L <= J.
template <typename T>
Decomposition<T> dwt2d(const Grid<T>& signal, const WaveletFilter& filter, int L);

template <typename T>
Grid<T> inverse_dwt2d(const Decomposition<T>& dec);

/// Scale-mixing 2D NDWT: every detail region keeps the full N x N size and
/// level-j coefficients agree with the decimated DWT on the subsampled
/// lattice (the filters are reused with 2^s-upsampled taps and no per-stage
/// rescaling). `diagonal_only` skips the hl/lh regions; such decompositions
/// cannot be inverted.
template <typename T>
Decomposition<T> ndwt2d(const Grid<T>& signal, const WaveletFilter& filter, int L,
                        bool diagonal_only = false);

/// Average-basis reconstruction; exact for unmodified decompositions.
template <typename T>
Grid<T> inverse_ndwt2d(const Decomposition<T>& dec);

/// Dispatches a real image into the real or complex pipeline depending on
/// the filter's taps.
DecompositionVar decompose(const GridR& signal, const WaveletFilter& filter, int L,
                           TransformKind kind, bool diagonal_only = false);

} // namespace wavespec
