#include "wavespec/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace wavespec {

bool cholesky_lower(std::vector<double>& a, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (!(d > 0.0)) return false;
        const double lj = std::sqrt(d);
        a[j * n + j] = lj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / lj;
        }
        for (std::size_t k = j + 1; k < n; ++k) a[j * n + k] = 0.0;
    }
    return true;
}

std::vector<double> cholesky_solve(const std::vector<double>& l, std::size_t n,
                                   const std::vector<double>& b) {
    std::vector<double> x(b);
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * x[k];
        x[i] = s / l[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l[k * n + ii] * x[k];
        x[ii] = s / l[ii * n + ii];
    }
    return x;
}

std::vector<double> solve_spd(std::vector<double> a, std::size_t n, const std::vector<double>& b) {
    if (!cholesky_lower(a, n)) throw std::runtime_error("matrix is not positive definite");
    return cholesky_solve(a, n, b);
}

} // namespace wavespec
