#pragma once

// Lanczos tridiagonalization with full reorthogonalization, and Ritz value
// extraction for every leading section of the tridiagonal restriction.

#include "ritz/operator.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ritz {

/// Orthonormal basis q_1..q_m of K(A, v, m) with T = Q^T A Q tridiagonal.
struct LanczosDecomposition {
  std::vector<double> alpha; // diagonal of T, length m
  std::vector<double> beta;  // off-diagonal of T, length m - 1, all positive
  std::vector<Vector> basis; // q_1..q_m
  bool exhausted = false;    // Krylov space became invariant before max_dim

  std::size_t dimension() const { return alpha.size(); }
};

struct RitzSet {
  std::vector<double> values; // theta_1 >= ... >= theta_m
  std::size_t dimension = 0;
  std::optional<std::vector<Vector>> vectors; // y_j = Q s_j, on demand only
};

/// Builds K(A, start, m) for m = max_dim, or fewer with exhausted = true when
/// beta drops below 1e-13 * ||A|| * sqrt(N). Every new vector is orthogonalized
/// twice against all previous ones.
LanczosDecomposition lanczos_decompose(const LinearOperator& op, std::span<const double> start,
                                       std::size_t max_dim);

/// Eigenvalues of tridiag(beta, alpha, beta), descending. Implicit QL with
/// Wilkinson shifts, eigenvalues only. Throws std::invalid_argument on
/// non-finite input or mismatched lengths.
std::vector<double> tridiagonal_eigenvalues(std::span<const double> alpha,
                                            std::span<const double> beta);

/// Ritz values of every leading n x n section, n = 1..m.
std::vector<RitzSet> ritz_sweep(const LanczosDecomposition& decomposition);
std::vector<RitzSet> ritz_sweep(const LinearOperator& op, std::span<const double> start,
                                std::size_t max_dim);

/// Ritz pairs of the leading n x n section. Vectors come from inverse iteration
/// on T followed by multiplication with Q.
RitzSet ritz_pairs(const LanczosDecomposition& decomposition, std::size_t n);

struct NearestEigenvalue {
  double ritz_value;
  std::size_t rank; // 1-based rank of the nearest eigenvalue
  double eigenvalue;
  double abs_error;
};

/// For each Ritz value the nearest eigenvalue; ties go to the smaller rank.
std::vector<NearestEigenvalue> error_to_nearest(std::span<const double> ritz_values,
                                                const Spectrum& spectrum);
NearestEigenvalue nearest_eigenvalue(double ritz_value, const Spectrum& spectrum);

} // namespace ritz
