#pragma once

// Vectors, spectra, overlap profiles and the linear operators the Krylov
// machinery acts on. Everything is real symmetric and double precision.
//
// Eigenvalue ranks are 1-based throughout the library (rank 1 is the largest
// eigenvalue), matching how targets are named in experiment configurations.

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace ritz {

using Vector = std::vector<double>;

double dot(std::span<const double> x, std::span<const double> y);
double norm(std::span<const double> x);

/// Eigenvalues sorted in descending order, lambda_1 >= ... >= lambda_N.
class Spectrum {
public:
  /// Throws std::invalid_argument unless values are non-empty, finite and
  /// sorted descending.
  explicit Spectrum(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  /// lambda_rank for a 1-based rank.
  double at_rank(std::size_t rank) const;
  double operator[](std::size_t i) const { return values_[i]; }

  double largest() const { return values_.front(); }
  double smallest() const { return values_.back(); }
  double width() const { return values_.front() - values_.back(); }
  /// max |lambda|, the 2-norm of the operator with this spectrum.
  double magnitude() const;

  /// Spectrum of -A: negated and reversed, still descending.
  Spectrum negated() const;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

private:
  std::vector<double> values_;
};

/// Magnitudes |(z_k, v)| of a start vector against each eigenvector, index
/// aligned with a Spectrum. Always normalized to unit 2-norm.
class OverlapProfile {
public:
  /// Normalizes the magnitudes. Throws std::invalid_argument for negative or
  /// non-finite entries or an all-zero profile.
  explicit OverlapProfile(std::vector<double> magnitudes);

  std::size_t size() const { return magnitudes_.size(); }
  std::span<const double> magnitudes() const { return magnitudes_; }
  double at_rank(std::size_t rank) const;
  double operator[](std::size_t i) const { return magnitudes_[i]; }

  /// Same overlaps in reversed order, aligned with Spectrum::negated().
  OverlapProfile reversed() const;

private:
  std::vector<double> magnitudes_;
};

/// A symmetric operator applied matrix-free. Either diagonal in its eigenbasis
/// (experiments are specified by spectrum) or an explicit dense symmetric
/// matrix.
class LinearOperator {
public:
  static LinearOperator diagonal(Spectrum spectrum);
  /// Row-major n*n entries; throws unless a[i][j] == a[j][i] exactly.
  static LinearOperator dense_symmetric(std::size_t n, std::vector<double> entries);

  std::size_t dimension() const { return dimension_; }

  /// y = A x. Throws std::invalid_argument on dimension mismatch.
  Vector apply(std::span<const double> x) const;

  /// An upper bound on the 2-norm, used to scale tolerances. Exact for the
  /// diagonal kind, the max absolute row sum for dense matrices.
  double norm_bound() const { return norm_bound_; }

  bool is_diagonal() const { return std::holds_alternative<Diagonal>(kind_); }

private:
  struct Diagonal {
    Spectrum spectrum;
  };
  struct Dense {
    std::vector<double> entries;
  };

  LinearOperator(std::size_t n, std::variant<Diagonal, Dense> kind, double norm_bound)
      : dimension_(n), kind_(std::move(kind)), norm_bound_(norm_bound) {}

  std::size_t dimension_;
  std::variant<Diagonal, Dense> kind_;
  double norm_bound_;
};

inline Vector apply(const LinearOperator& op, std::span<const double> x) { return op.apply(x); }

/// (x, A x) / (x, x). Throws std::invalid_argument for a zero vector.
double rayleigh_quotient(std::span<const double> x, const LinearOperator& op);

/// Gram-Schmidt x against an orthonormal basis, performed twice, then
/// normalized. Returns nullopt when the projected residual is below
/// 1e-13 * sqrt(N) * ||x||, i.e. x lies in the span of the basis.
std::optional<Vector> orthonormalize_against(std::span<const double> x,
                                             std::span<const Vector> basis);

/// As above with an explicit absolute breakdown threshold on the residual norm.
std::optional<Vector> orthonormalize_against(std::span<const double> x,
                                             std::span<const Vector> basis,
                                             double breakdown_norm);

/// Relative breakdown factor 1e-13 * sqrt(N) shared by Gram-Schmidt and Lanczos.
double breakdown_factor(std::size_t dimension);

} // namespace ritz
