#include "ritz/operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ritz {

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += x[i] * y[i];
  return s;
}

double norm(std::span<const double> x) {
  // scaled to avoid overflow for large entries
  double scale = 0.0;
  for (double v : x)
    scale = std::max(scale, std::abs(v));
  if (scale == 0.0)
    return 0.0;
  double s = 0.0;
  for (double v : x) {
    const double t = v / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty())
    throw std::invalid_argument("spectrum must not be empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw std::invalid_argument("spectrum entry " + std::to_string(i + 1) + " is not finite");
    if (i > 0 && values_[i] > values_[i - 1])
      throw std::invalid_argument("spectrum must be sorted descending (entry " +
                                  std::to_string(i + 1) + ")");
  }
}

double Spectrum::at_rank(std::size_t rank) const {
  if (rank < 1 || rank > values_.size())
    throw std::out_of_range("eigenvalue rank " + std::to_string(rank) + " out of range 1.." +
                            std::to_string(values_.size()));
  return values_[rank - 1];
}

double Spectrum::magnitude() const {
  return std::max(std::abs(values_.front()), std::abs(values_.back()));
}

Spectrum Spectrum::negated() const {
  std::vector<double> v(values_.rbegin(), values_.rend());
  for (double& x : v)
    x = -x;
  return Spectrum(std::move(v));
}

OverlapProfile::OverlapProfile(std::vector<double> magnitudes) : magnitudes_(std::move(magnitudes)) {
  if (magnitudes_.empty())
    throw std::invalid_argument("overlap profile must not be empty");
  for (std::size_t i = 0; i < magnitudes_.size(); ++i) {
    const double m = magnitudes_[i];
    if (!std::isfinite(m) || m < 0.0)
      throw std::invalid_argument("overlap " + std::to_string(i + 1) +
                                  " must be a finite non-negative magnitude");
  }
  const double n = norm(magnitudes_);
  if (n == 0.0)
    throw std::invalid_argument("overlap profile must have a positive entry");
  for (double& m : magnitudes_)
    m /= n;
}

double OverlapProfile::at_rank(std::size_t rank) const {
  if (rank < 1 || rank > magnitudes_.size())
    throw std::out_of_range("overlap rank " + std::to_string(rank) + " out of range");
  return magnitudes_[rank - 1];
}

OverlapProfile OverlapProfile::reversed() const {
  return OverlapProfile(std::vector<double>(magnitudes_.rbegin(), magnitudes_.rend()));
}

LinearOperator LinearOperator::diagonal(Spectrum spectrum) {
  const std::size_t n = spectrum.size();
  const double nb = spectrum.magnitude();
  return LinearOperator(n, Diagonal{std::move(spectrum)}, nb);
}

LinearOperator LinearOperator::dense_symmetric(std::size_t n, std::vector<double> entries) {
  if (n == 0)
    throw std::invalid_argument("dense operator dimension must be positive");
  if (entries.size() != n * n)
    throw std::invalid_argument("dense operator needs n*n entries");
  double nb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = entries[i * n + j];
      if (!std::isfinite(a))
        throw std::invalid_argument("dense operator entries must be finite");
      if (a != entries[j * n + i])
        throw std::invalid_argument("dense operator is not symmetric at (" + std::to_string(i + 1) +
                                    "," + std::to_string(j + 1) + ")");
      row += std::abs(a);
    }
    nb = std::max(nb, row);
  }
  return LinearOperator(n, Dense{std::move(entries)}, nb);
}

Vector LinearOperator::apply(std::span<const double> x) const {
  if (x.size() != dimension_)
    throw std::invalid_argument("apply: operator has dimension " + std::to_string(dimension_) +
                                " but vector has " + std::to_string(x.size()));
  Vector y(dimension_, 0.0);
  if (const auto* d = std::get_if<Diagonal>(&kind_)) {
    for (std::size_t k = 0; k < dimension_; ++k)
      y[k] = d->spectrum[k] * x[k];
  } else {
    const auto& a = std::get<Dense>(kind_).entries;
    for (std::size_t i = 0; i < dimension_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < dimension_; ++j)
        s += a[i * dimension_ + j] * x[j];
      y[i] = s;
    }
  }
  return y;
}

double rayleigh_quotient(std::span<const double> x, const LinearOperator& op) {
  const double nx = norm(x);
  if (nx == 0.0)
    throw std::invalid_argument("rayleigh_quotient: zero vector");
  // normalize first so that huge or tiny vectors do not over/underflow
  Vector u(x.begin(), x.end());
  for (double& v : u)
    v /= nx;
  return dot(u, op.apply(u));
}

double breakdown_factor(std::size_t dimension) {
  return 1e-13 * std::sqrt(static_cast<double>(dimension));
}

std::optional<Vector> orthonormalize_against(std::span<const double> x,
                                             std::span<const Vector> basis) {
  return orthonormalize_against(x, basis, breakdown_factor(x.size()) * norm(x));
}

std::optional<Vector> orthonormalize_against(std::span<const double> x,
                                             std::span<const Vector> basis,
                                             double breakdown_norm) {
  Vector r(x.begin(), x.end());
  // classical Gram-Schmidt, twice is enough
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& b : basis) {
      const double c = dot(b, r);
      for (std::size_t i = 0; i < r.size(); ++i)
        r[i] -= c * b[i];
    }
  }
  const double nr = norm(r);
  if (!(nr > breakdown_norm))
    return std::nullopt;
  for (double& v : r)
    v /= nr;
  return r;
}

} // namespace ritz
