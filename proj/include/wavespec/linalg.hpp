#pragma once

#include <cstddef>
#include <vector>

namespace wavespec {

/// In-place lower Cholesky factorization of a dense n x n SPD matrix
/// (row-major). Returns false if a nonpositive pivot is hit.
bool cholesky_lower(std::vector<double>& a, std::size_t n);

/// Solves L L^T x = b given the factor from cholesky_lower.
std::vector<double> cholesky_solve(const std::vector<double>& l, std::size_t n,
                                   const std::vector<double>& b);

/// Solves a small SPD system A x = b; throws std::runtime_error when A is
/// not positive definite.
std::vector<double> solve_spd(std::vector<double> a, std::size_t n, const std::vector<double>& b);

} // namespace wavespec
