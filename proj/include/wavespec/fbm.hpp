#pragma once

#include "wavespec/grid.hpp"

#include <cstdint>
#include <memory>

namespace wavespec {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Variance scale of 2D fBm: 2^{-(1+2H)} Gamma(1-H) / (pi H Gamma(1+H)).
double sigma2_H(double H);

/// Covariance of 2D fBm at two points of the unit square:
/// (sigma2_H/2)(|t|^{2H} + |s|^{2H} - |t-s|^{2H}).
double fbm_cov(Point2 t, Point2 s, double H);

struct FbmSpec {
    double H = 0.5;
    int n = 256;             // side length, power of 2
    std::uint64_t seed = 0;
};

/// Exact sampler for 2D fBm on the lattice (i/N, j/N), i, j = 0..N-1, with
/// the origin pinned at zero. The stationary part comes from a circulant
/// embedding of a quadratic-corrected covariance (Stein's construction),
/// so the field is exact in distribution; the embedding eigenvalues are
/// cached per (H, N).
class FbmGenerator {
public:
    FbmGenerator(double H, int n);
    ~FbmGenerator();
    FbmGenerator(FbmGenerator&&) noexcept;
    FbmGenerator& operator=(FbmGenerator&&) noexcept;

    GridR sample(std::uint64_t seed) const;
    double hurst() const;
    int side() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

GridR generate_fbm2d(const FbmSpec& spec);

/// Dense Cholesky sampler over the same lattice; limited to n <= 64 and
/// kept as an independent small-scale oracle.
GridR generate_fbm2d_cholesky(const FbmSpec& spec);

} // namespace wavespec
