#include "ritz/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ritz {

namespace {

// ln cosh(g) for g >= 0
double log_cosh(double g) {
  return g + std::log1p(std::exp(-2.0 * g)) - std::numbers::ln2;
}

} // namespace

double cheb_eval(unsigned n, double x) {
  if (std::abs(x) <= 1.0)
    return std::cos(static_cast<double>(n) * std::acos(x));
  const double g = static_cast<double>(n) * std::acosh(std::abs(x));
  const double t = std::cosh(g);
  return (x < 0.0 && n % 2 == 1) ? -t : t;
}

double cheb_log_growth(unsigned n, double x) {
  if (!(x >= 1.0))
    throw std::domain_error("cheb_log_growth: argument must be >= 1");
  return static_cast<double>(n) * std::acosh(x);
}

double cheb_log_eval(unsigned n, double x) {
  return log_cosh(cheb_log_growth(n, x));
}

double cheb_log_eval_gap(unsigned n, double mu) {
  if (!(mu >= 0.0))
    throw std::domain_error("cheb_log_eval_gap: mu must be non-negative");
  return log_cosh(2.0 * static_cast<double>(n) * std::asinh(mu));
}

} // namespace ritz
