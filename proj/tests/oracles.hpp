#pragma once

// Independent reference implementations used to check the library. None of
// these call into ritz:: numerics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

// Number of eigenvalues of the symmetric tridiagonal (a, b) strictly below x.
inline std::size_t sturm_count(const std::vector<double>& a, const std::vector<double>& b,
                               double x) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double off = i == 0 ? 0.0 : b[i - 1] * b[i - 1];
    q = a[i] - x - (i == 0 ? 0.0 : off / q);
    if (q == 0.0)
      q = -1e-300;
    if (q < 0.0)
      ++count;
  }
  return count;
}

// Eigenvalues by bisection on the Sturm count, descending.
inline std::vector<double> sturm_eigenvalues(const std::vector<double>& a,
                                             const std::vector<double>& b) {
  const std::size_t m = a.size();
  double lo = std::numeric_limits<double>::max(), hi = -lo;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = (i > 0 ? std::abs(b[i - 1]) : 0.0) + (i + 1 < m ? std::abs(b[i]) : 0.0);
    lo = std::min(lo, a[i] - r);
    hi = std::max(hi, a[i] + r);
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < m; ++k) {
    // k-th smallest: smallest x with count(x) > k
    double l = lo - 1.0, h = hi + 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (l + h);
      if (sturm_count(a, b, mid) > k)
        h = mid;
      else
        l = mid;
    }
    out.push_back(0.5 * (l + h));
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// Ritz values from K(A, v, 2) for diagonal A: explicit orthonormal basis
// {q1, q2} of span{v, Av} by Gram-Schmidt (twice), H = Q^T A Q, closed-form
// eigenvalues of the 2x2 H. Descending.
inline std::pair<double, double> krylov2_ritz_values(const std::vector<double>& lambda,
                                                     const std::vector<double>& c) {
  const std::size_t n = lambda.size();
  auto dotp = [&](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += x[i] * y[i];
    return s;
  };
  std::vector<double> q1 = c;
  const double n1 = std::sqrt(dotp(q1, q1));
  for (double& x : q1)
    x /= n1;
  std::vector<double> q2(n);
  for (std::size_t i = 0; i < n; ++i)
    q2[i] = lambda[i] * q1[i];
  for (int pass = 0; pass < 2; ++pass) {
    const double p = dotp(q1, q2);
    for (std::size_t i = 0; i < n; ++i)
      q2[i] -= p * q1[i];
  }
  const double n2 = std::sqrt(dotp(q2, q2));
  for (double& x : q2)
    x /= n2;
  double h11 = 0, h12 = 0, h22 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    h11 += q1[i] * lambda[i] * q1[i];
    h12 += q1[i] * lambda[i] * q2[i];
    h22 += q2[i] * lambda[i] * q2[i];
  }
  const double mean = 0.5 * (h11 + h22);
  const double radius = std::hypot(0.5 * (h11 - h22), h12);
  return {mean + radius, mean - radius};
}

// T_n(x) by the three-term recurrence.
inline double cheb_recurrence(unsigned n, double x) {
  if (n == 0)
    return 1.0;
  double prev = 1.0, cur = x;
  for (unsigned k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

inline double binomial(unsigned n, unsigned k) {
  if (k > n)
    return 0.0;
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// T_n(x) = sum_j C(n, 2j) x^(n-2j) (x^2 - 1)^j, with (x^2 - 1)^j expanded
// binomially: sum_j sum_l C(n, 2j) C(j, l) (-1)^(j-l) x^(n-2j+2l).
inline double cheb_binomial(unsigned n, double x) {
  double sum = 0.0;
  for (unsigned j = 0; 2 * j <= n; ++j)
    for (unsigned l = 0; l <= j; ++l) {
      const double sign = ((j - l) % 2 == 0) ? 1.0 : -1.0;
      sum += binomial(n, 2 * j) * binomial(j, l) * sign * std::pow(x, static_cast<int>(n - 2 * j + 2 * l));
    }
  return sum;
}

// Descending spectrum of size n: random centre and span, gaps at least
// 1e-3 of the span.
inline std::vector<double> random_spectrum(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double span = 0.5 + 4.5 * u(rng);
  const double top = -3.0 + 6.0 * u(rng);
  std::vector<double> gaps(n > 1 ? n - 1 : 0);
  const double floor_gap = 1e-3 * static_cast<double>(gaps.size()) * 1.05;
  for (double& g : gaps) {
    const double w = u(rng);
    g = floor_gap + w * w * w;
  }
  const double total = std::accumulate(gaps.begin(), gaps.end(), 0.0);
  std::vector<double> values{top};
  for (double g : gaps)
    values.push_back(values.back() - span * g / total);
  return values;
}

// Positive overlaps, normalized.
inline std::vector<double> random_overlaps(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> c(n);
  double s = 0.0;
  for (double& x : c) {
    x = u(rng);
    s += x * x;
  }
  for (double& x : c)
    x /= std::sqrt(s);
  return c;
}

// Interior bound epsilon'/(2 nu) from first principles, K' a-priori. nullopt
// when undefined (degenerate primed gap, degenerate tail, n < j). With merge,
// equal primed values (relative 1e-12) become one eigenvalue carrying the
// combined overlap.
inline std::optional<double> interior_bound(const std::vector<double>& lambda,
                                            const std::vector<double>& c, std::size_t alpha,
                                            double shift, std::size_t inner_n,
                                            bool merge = false) {
  std::vector<std::pair<double, double>> primed; // (value, overlap)
  double target_primed = 0.0;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    const double d = lambda[k] - shift;
    primed.push_back({-d * d, c[k]});
    if (k + 1 == alpha)
      target_primed = -d * d;
  }
  const double nu = std::abs(lambda[alpha - 1] - shift);
  if (nu == 0.0)
    return std::nullopt;
  std::sort(primed.begin(), primed.end(),
            [](const auto& x, const auto& y) { return x.first > y.first; });
  if (merge) {
    const double tol = 1e-12 * std::abs(primed.back().first);
    std::vector<std::pair<double, double>> merged;
    for (const auto& [v, w] : primed) {
      if (!merged.empty() && merged.back().first - v <= tol) {
        if (v == target_primed)
          merged.back().first = v;
        merged.back().second = std::hypot(merged.back().second, w);
      } else {
        merged.push_back({v, w});
      }
    }
    primed = std::move(merged);
  }
  const std::size_t n = primed.size();
  std::size_t j = 0;
  while (primed[j].first != target_primed)
    ++j;
  // j is 0-based here
  if (j + 1 >= n)
    return std::nullopt;
  const double lj = primed[j].first, lnext = primed[j + 1].first, lmin = primed[n - 1].first;
  const double scale = std::abs(lmin);
  if (lj - lnext <= 1e-12 * scale || lnext == lmin)
    return std::nullopt;
  if (inner_n < j + 1)
    return std::nullopt;
  double k2 = 1.0;
  for (std::size_t i = 0; i < j; ++i) {
    const double f = (primed[i].first - lmin) / (primed[i].first - lj);
    k2 *= f * f;
  }
  double tail = 0.0;
  for (std::size_t k = j + 1; k < n; ++k)
    tail += primed[k].second * primed[k].second;
  const double tan2 = tail / (primed[j].second * primed[j].second);
  const double gamma = 1.0 + 2.0 * (lj - lnext) / (lnext - lmin);
  const double t = std::cosh(static_cast<double>(inner_n - j - 1) * std::acosh(gamma));
  return (lj - lmin) * k2 * tan2 / (t * t) / (2.0 * nu);
}

// Extremal bound for the top eigenvalue j (1-based) from first principles,
// K a-priori.
inline std::optional<double> extremal_bound(const std::vector<double>& lambda,
                                            const std::vector<double>& c, std::size_t j,
                                            std::size_t n_dim) {
  const std::size_t n = lambda.size();
  if (j < 1 || j >= n || n_dim < j)
    return std::nullopt;
  const double lj = lambda[j - 1], lnext = lambda[j], lmin = lambda[n - 1];
  if (lj == lnext || lnext == lmin)
    return std::nullopt;
  double k2 = 1.0;
  for (std::size_t i = 0; i + 1 < j; ++i) {
    const double f = (lambda[i] - lmin) / (lambda[i] - lj);
    k2 *= f * f;
  }
  double tail = 0.0;
  for (std::size_t k = j; k < n; ++k)
    tail += c[k] * c[k];
  const double tan2 = tail / (c[j - 1] * c[j - 1]);
  const double gamma = 1.0 + 2.0 * (lj - lnext) / (lnext - lmin);
  const double t = std::cosh(static_cast<double>(n_dim - j) * std::acosh(gamma));
  return (lj - lmin) * k2 * tan2 / (t * t);
}

} // namespace oracle
