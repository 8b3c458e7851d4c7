#include "ritz/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace ritz {

namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x))
      throw std::invalid_argument(std::string(what) + " contains a non-finite value");
}

// Solves (T - shift) x = b in place for symmetric tridiagonal T using Gaussian
// elimination with partial pivoting (the dgtsv scheme). Zero pivots are
// replaced by `tiny` so that a shift at an eigenvalue still yields a usable
// (very large) inverse-iteration step.
void shifted_tridiagonal_solve(std::span<const double> alpha, std::span<const double> beta,
                               double shift, double tiny, std::vector<double>& b) {
  const std::size_t n = alpha.size();
  if (n == 1) {
    const double d = alpha[0] - shift;
    b[0] /= (d == 0.0 ? tiny : d);
    return;
  }
  std::vector<double> d(n), du(beta.begin(), beta.end()), dl(beta.begin(), beta.end());
  for (std::size_t i = 0; i < n; ++i)
    d[i] = alpha[i] - shift;
  auto pivot = [&](double v) { return v == 0.0 ? tiny : v; };

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      d[i] = pivot(d[i]);
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
      dl[i] = 0.0;
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < n) {
        dl[i] = du[i + 1];
        du[i + 1] = -fact * dl[i];
      } else {
        dl[i] = 0.0;
      }
      du[i] = temp;
      const double tb = b[i];
      b[i] = b[i + 1];
      b[i + 1] = tb - fact * b[i + 1];
    }
  }
  d[n - 1] = pivot(d[n - 1]);
  b[n - 1] /= d[n - 1];
  b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (std::size_t k = n - 2; k-- > 0;)
    b[k] = (b[k] - du[k] * b[k + 1] - dl[k] * b[k + 2]) / d[k];
}

} // namespace

LanczosDecomposition lanczos_decompose(const LinearOperator& op, std::span<const double> start,
                                       std::size_t max_dim) {
  const std::size_t n = op.dimension();
  if (start.size() != n)
    throw std::invalid_argument("lanczos: start vector dimension does not match operator");
  if (max_dim < 1 || max_dim > n)
    throw std::invalid_argument("lanczos: max_dim must lie in 1.." + std::to_string(n));
  check_finite(start, "lanczos start vector");
  const double start_norm = norm(start);
  if (start_norm == 0.0)
    throw std::invalid_argument("lanczos: zero start vector");

  const double breakdown = breakdown_factor(n) * op.norm_bound();

  LanczosDecomposition out;
  Vector q(start.begin(), start.end());
  for (double& x : q)
    x /= start_norm;
  out.basis.push_back(std::move(q));

  for (std::size_t k = 0;; ++k) {
    const Vector& qk = out.basis[k];
    Vector w = op.apply(qk);
    const double a = dot(qk, w);
    out.alpha.push_back(a);
    if (k + 1 == max_dim)
      break;

    for (std::size_t i = 0; i < n; ++i)
      w[i] -= a * qk[i];
    if (k > 0) {
      const Vector& prev = out.basis[k - 1];
      const double b = out.beta[k - 1];
      for (std::size_t i = 0; i < n; ++i)
        w[i] -= b * prev[i];
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& qi : out.basis) {
        const double c = dot(qi, w);
        for (std::size_t i = 0; i < n; ++i)
          w[i] -= c * qi[i];
      }
    }
    const double b = norm(w);
    if (!(b > breakdown)) {
      out.exhausted = true;
      break;
    }
    for (double& x : w)
      x /= b;
    out.beta.push_back(b);
    out.basis.push_back(std::move(w));
  }
  return out;
}

std::vector<double> tridiagonal_eigenvalues(std::span<const double> alpha,
                                            std::span<const double> beta) {
  const std::size_t n = alpha.size();
  if (n == 0)
    return {};
  if (beta.size() + 1 != n)
    throw std::invalid_argument("tridiagonal_eigenvalues: beta must have length m - 1");
  check_finite(alpha, "tridiagonal diagonal");
  check_finite(beta, "tridiagonal off-diagonal");

  std::vector<double> d(alpha.begin(), alpha.end());
  std::vector<double> e(n, 0.0);
  std::copy(beta.begin(), beta.end(), e.begin());

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const int max_iter = 60;
  const int last = static_cast<int>(n) - 1;

  for (int l = 0; l <= last; ++l) {
    int iter = 0;
    int m;
    for (;;) {
      for (m = l; m < last; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd)
          break;
      }
      if (m == l)
        break;
      if (++iter > max_iter)
        throw std::runtime_error("tridiagonal_eigenvalues: QL iteration did not converge");

      // Wilkinson shift from the leading 2x2 block of the unreduced segment
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i;
      bool underflow = false;
      for (i = m - 1; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow)
        continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

std::vector<RitzSet> ritz_sweep(const LanczosDecomposition& decomposition) {
  const std::size_t m = decomposition.dimension();
  std::vector<RitzSet> sweep;
  sweep.reserve(m);
  const std::span<const double> alpha = decomposition.alpha;
  const std::span<const double> beta = decomposition.beta;
  for (std::size_t n = 1; n <= m; ++n) {
    RitzSet set;
    set.dimension = n;
    set.values = tridiagonal_eigenvalues(alpha.first(n), beta.first(n - 1));
    sweep.push_back(std::move(set));
  }
  return sweep;
}

std::vector<RitzSet> ritz_sweep(const LinearOperator& op, std::span<const double> start,
                                std::size_t max_dim) {
  return ritz_sweep(lanczos_decompose(op, start, max_dim));
}

RitzSet ritz_pairs(const LanczosDecomposition& decomposition, std::size_t n) {
  if (n < 1 || n > decomposition.dimension())
    throw std::invalid_argument("ritz_pairs: section size out of range");
  const std::span<const double> alpha = std::span<const double>(decomposition.alpha).first(n);
  const std::span<const double> beta = std::span<const double>(decomposition.beta).first(n - 1);

  RitzSet set;
  set.dimension = n;
  set.values = tridiagonal_eigenvalues(alpha, beta);

  double tnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(alpha[i]);
    if (i > 0)
      row += beta[i - 1];
    if (i + 1 < n)
      row += beta[i];
    tnorm = std::max(tnorm, row);
  }
  const double tiny = std::max(tnorm, 1.0) * std::numeric_limits<double>::epsilon();
  const std::size_t ambient = decomposition.basis.front().size();

  std::vector<Vector> vectors;
  vectors.reserve(n);
  for (double theta : set.values) {
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i)
      s[i] = 1.0 + 0.37 * static_cast<double>((i * 7) % 11) / 11.0;
    for (int it = 0; it < 3; ++it) {
      shifted_tridiagonal_solve(alpha, beta, theta, tiny, s);
      const double ns = norm(s);
      for (double& x : s)
        x /= ns;
    }
    Vector y(ambient, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < ambient; ++i)
        y[i] += s[k] * decomposition.basis[k][i];
    vectors.push_back(std::move(y));
  }
  set.vectors = std::move(vectors);
  return set;
}

NearestEigenvalue nearest_eigenvalue(double ritz_value, const Spectrum& spectrum) {
  std::size_t best = 0;
  double best_err = std::abs(ritz_value - spectrum[0]);
  for (std::size_t k = 1; k < spectrum.size(); ++k) {
    const double err = std::abs(ritz_value - spectrum[k]);
    if (err < best_err) {
      best_err = err;
      best = k;
    }
  }
  return {ritz_value, best + 1, spectrum[best], best_err};
}

std::vector<NearestEigenvalue> error_to_nearest(std::span<const double> ritz_values,
                                                const Spectrum& spectrum) {
  std::vector<NearestEigenvalue> out;
  out.reserve(ritz_values.size());
  for (double theta : ritz_values)
    out.push_back(nearest_eigenvalue(theta, spectrum));
  return out;
}

} // namespace ritz
