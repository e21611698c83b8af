#pragma once

namespace wavespec {

/// Regularized incomplete beta function I_x(a, b).
double reg_inc_beta(double a, double b, double x);

/// Regularized lower incomplete gamma P(a, x).
double reg_lower_gamma(double a, double x);

double student_t_cdf(double x, double df);
double chi2_cdf(double x, double k);

} // namespace wavespec
