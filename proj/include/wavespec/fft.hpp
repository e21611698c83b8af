#pragma once

#include "wavespec/grid.hpp"

#include <span>

namespace wavespec {

/// In-place complex FFT, power-of-two length only. The inverse applies the
/// 1/n scaling so that ifft(fft(x)) == x.
void fft(std::span<cdouble> a, bool inverse);

/// In-place 2D FFT over rows then columns. Row/column passes may run on
/// multiple threads; per-vector work is sequential so results are
/// bit-identical regardless of thread count.
void fft2d(GridC& g, bool inverse, int threads = 0);

} // namespace wavespec
