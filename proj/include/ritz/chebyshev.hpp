#pragma once

// Chebyshev polynomials of the first kind and their growth outside [-1, 1].

namespace ritz {

/// T_n(x). Trigonometric form on [-1, 1], hyperbolic form outside (with
/// T_n(-x) = (-1)^n T_n(x) for x < -1). Overflows to +/-infinity for large
/// n * acosh(|x|).
double cheb_eval(unsigned n, double x);

/// n * ln(x + sqrt(x^2 - 1)) = n * acosh(x), the exponent in
/// T_n(x) >= exp(n * acosh(x)) / 2. Throws std::domain_error for x < 1.
double cheb_log_growth(unsigned n, double x);

/// ln T_n(x) for x >= 1 without overflow. Throws std::domain_error for x < 1.
double cheb_log_eval(unsigned n, double x);

/// ln T_n(1 + 2 mu^2) for mu >= 0, using acosh(1 + 2 mu^2) = 2 asinh(mu) so
/// that small mu keeps full relative accuracy.
double cheb_log_eval_gap(unsigned n, double mu);

} // namespace ritz
