#pragma once

// A-priori and a-posteriori bounds on the error of Ritz values from Krylov
// spaces.
//
// Extremal bounds (Kaniel-Paige-Saad) bound lambda_j - theta_j for the j-th
// largest eigenvalue through a Chebyshev polynomial on [lambda_N, lambda_{j+1}].
// Interior bounds apply the same machinery to the shifted and squared operator
// A' = -(A - shift)^2, whose top eigenvalues are the eigenvalues of A nearest
// the shift, and transfer the result back to A. A' Krylov space K(A', v, n) sits
// inside K(A, v, 2n), so interior bounds are always reported against the
// ambient dimension 2n.
//
// All bound arithmetic is carried out in log space; values below 1e-300 are
// reported as 0.

#include "ritz/operator.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ritz {

enum class BoundForm { exact, asymptotic };

/// How the K prefactor is formed: from eigenvalues (predictive) or from the
/// Ritz values of the same Krylov space (rigorous).
enum class KMode { a_priori, a_posteriori };

/// What to do when the target's eigenvalue of A' is degenerate with a
/// neighbour.
enum class DegeneracyPolicy {
  reject, ///< throw "degenerate primed gap"
  merge,  ///< treat equal A' eigenvalues as one, as the A' Krylov space sees them
  force,  ///< keep the zero gap; the bound then never decays
};

/// Relative tolerance under which two A' eigenvalues count as equal.
inline constexpr double kDegenerateRelTol = 1e-12;
/// Bound values below this are reported as exactly zero.
inline constexpr double kUnderflowClamp = 1e-300;

struct KpsIngredients {
  std::size_t j = 1;
  double gamma_at_lambda_j = 1.0; // 1 + 2 mu^2
  double mu = 0.0;
  double k_factor = 1.0;
  double log_k_factor = 0.0;
  double tan_angle = 0.0;
  double span = 0.0; // lambda_j - lambda_N
  KMode mode = KMode::a_priori;
};

/// Ingredients of the extremal bound for the j-th largest eigenvalue.
///
/// With `ritz_values` (theta_1 >= theta_2 >= ... of the Krylov space the bound is
/// applied to, at least j - 1 of them) K_j is formed a-posteriori as
/// prod_{i<j} max(|theta_i - lambda_N|, |theta_i - lambda_{j+1}|) / |theta_i - lambda_j|,
/// which equals prod (theta_i - lambda_N) / (theta_i - lambda_j) once every
/// theta_i >= lambda_{j+1}. Without them the eigenvalues lambda_i take their place.
///
/// Throws std::invalid_argument when j = N or lambda_{j+1} = lambda_N (no
/// Chebyshev interval), when lambda_j = lambda_{j+1}, or when the start vector
/// has no component along z_j.
KpsIngredients kps_ingredients(const Spectrum& spectrum, const OverlapProfile& overlaps,
                               std::size_t j,
                               std::optional<std::span<const double>> ritz_values = std::nullopt);

/// Same on raw descending values and overlap magnitudes (need not be
/// normalized). `allow_zero_gap` admits lambda_j = lambda_{j+1} with mu = 0.
KpsIngredients kps_ingredients(std::span<const double> values, std::span<const double> overlaps,
                               std::size_t j, std::optional<std::span<const double>> ritz_values,
                               bool allow_zero_gap = false);

/// ln of the bound at Krylov dimension n >= j; -infinity when tan = 0.
double kps_log_bound(const KpsIngredients& ing, std::size_t n, BoundForm form);
/// exp of kps_log_bound with the underflow clamp. Throws for n < j.
double kps_bound(const KpsIngredients& ing, std::size_t n, BoundForm form);

/// Extremal bound for the j-th smallest eigenvalue, i.e. the bound for -A.
/// `ritz_values` are Ritz values of A (descending); they are negated and
/// reversed internally.
double kps_bound_lower_end(const Spectrum& spectrum, const OverlapProfile& overlaps,
                           std::size_t j_from_bottom, std::size_t n, BoundForm form,
                           std::optional<std::span<const double>> ritz_values = std::nullopt);

/// Best extremal bound for the eigenvalue of rank alpha: the smaller of the
/// top-counted bound on A and the bottom-counted bound on -A. Sides that have
/// not started (n below their j) count as +infinity. Throws when neither side
/// is defined for this spectrum.
double extremal_bound(const Spectrum& spectrum, const OverlapProfile& overlaps, std::size_t alpha,
                      std::size_t n, BoundForm form,
                      std::optional<std::span<const double>> ritz_values = std::nullopt);

struct ShiftedSpectrum {
  double shift;
  Spectrum values;               // -(lambda_k - shift)^2, descending
  std::vector<std::size_t> perm; // perm[i]: 1-based A rank of the (i+1)-th A' eigenvalue
  OverlapProfile overlaps;       // overlaps reordered by perm

  /// 1-based A' rank of the eigenvalue with A rank alpha.
  std::size_t position_of(std::size_t alpha) const;
};

/// Stable descending sort of -(lambda - shift)^2: ties keep ascending A rank.
ShiftedSpectrum shift_spectrum(const Spectrum& spectrum, const OverlapProfile& overlaps,
                               double shift);

/// A' eigenvalues with exact (to kDegenerateRelTol) ties merged into one
/// eigenvalue carrying the root-sum-square overlap.
struct CollapsedSpectrum {
  std::vector<double> values;
  std::vector<double> overlaps;
  std::vector<std::vector<std::size_t>> members; // 1-based A' ranks per cluster

  std::size_t cluster_of(std::size_t primed_rank) const;
};
CollapsedSpectrum collapse_degenerate(const ShiftedSpectrum& shifted);

struct InteriorOptions {
  KMode k_mode = KMode::a_priori;
  /// Ritz values of A' from K(A', v, n), descending; required for a_posteriori.
  std::span<const double> primed_ritz_values{};
  DegeneracyPolicy policy = DegeneracyPolicy::reject;
};

struct InteriorBoundResult {
  std::size_t alpha = 0;       // A rank of the target
  std::size_t j = 0;           // A' rank (after merging, if requested)
  double nu = 0.0;             // |lambda_alpha - shift|
  double log_epsilon = 0.0;    // ln of the A' bound on lambda'_j - theta'_j
  double epsilon = 0.0;
  double bound = 0.0;          // epsilon / (2 nu)
  std::size_t inner_dim = 0;   // n of K(A', v, n)
  std::size_t ambient_dim = 0; // 2n
  KMode mode = KMode::a_priori;
  double mu_prime = 0.0;
  double k_factor = 1.0;
  double tan_angle = 0.0;
};

/// Interior bound for the eigenvalue of rank alpha with the given shift.
///
/// Throws std::invalid_argument("shift coincides with target") when nu = 0,
/// std::invalid_argument("degenerate primed gap") under the reject policy when
/// lambda'_j equals lambda'_{j+1}, and propagates kps_ingredients errors. Also
/// throws when inner_n < j.
InteriorBoundResult interior_bound(const Spectrum& spectrum, const OverlapProfile& overlaps,
                                   std::size_t alpha, double shift, std::size_t inner_n,
                                   BoundForm form, const InteriorOptions& options = {});

/// The Ritz value of A recovered from the A' Ritz value theta'_j: on the same
/// side of the shift as lambda_alpha, at distance sqrt(-theta'_j).
double recovered_ritz_value(double target_eigenvalue, double shift, double primed_ritz_value);

struct MuRatio {
  double mu_prime; // from the gaps of the shifted spectrum
  double mu;       // from the gaps of the spectrum of A
  double ratio;    // sqrt((2 shift - l_a - l_{a+1}) / (2 shift - l_{a+1} - l_N))
};

/// Convergence exponents of the interior and extremal bounds for rank alpha.
/// Requires lambda'_{j+1} to come from lambda_{alpha+1} and lambda'_N from
/// lambda_N; throws std::invalid_argument("shift-to-gap correspondence broken")
/// otherwise.
MuRatio mu_ratio(const Spectrum& spectrum, std::size_t alpha, double shift);

enum class BoundFamily { extremal_exact, extremal_asymptotic, interior_exact, interior_asymptotic };

std::string_view to_string(BoundFamily family);
/// Parses "extremal-exact", "extremal-asymptotic", "interior-exact",
/// "interior-asymptotic"; nullopt otherwise.
std::optional<BoundFamily> parse_bound_family(std::string_view name);
bool is_interior(BoundFamily family);
BoundForm form_of(BoundFamily family);

struct CurvePoint {
  std::size_t ambient_dim;
  double value; // +infinity before the bound starts
};

struct BoundCurve {
  BoundFamily family;
  std::size_t target;
  std::optional<double> shift;
  std::vector<CurvePoint> points;
};

/// Evaluates a-priori bounds over ambient dimensions first..last. Interior
/// families need a shift; they are evaluated at even ambient dimensions only,
/// with K(A', v, d/2). An infinite shift stands for the extremal bound of the
/// corresponding end (+inf: top of A, -inf: bottom) at every dimension.
BoundCurve bound_curve(const Spectrum& spectrum, const OverlapProfile& overlaps, std::size_t alpha,
                       BoundFamily family, std::optional<double> shift, std::size_t first,
                       std::size_t last, DegeneracyPolicy policy = DegeneracyPolicy::reject);

/// First ambient dimension at which the curve drops to `threshold` or below.
std::optional<std::size_t> first_dimension_below(const BoundCurve& curve, double threshold);

struct ShiftChoice {
  double shift = 0.0; // +/-infinity for the extremal pseudo-candidate
  std::size_t ambient_dim = 0;
  std::size_t inner_dim = 0; // equals ambient_dim for the extremal candidate
  double bound = 0.0;        // value at ambient_dim
  bool converged = false;
  std::size_t candidates_evaluated = 0;
  BoundCurve curve;
};

/// Picks the shift whose exact interior bound reaches target_error at the
/// smallest ambient Krylov dimension <= n_cap.
///
/// Candidates are the points where two A' eigenvalues become degenerate, the
/// pairwise midpoints (lambda_i + lambda_k)/2, taken exactly (with degenerate
/// A' eigenvalues merged) and displaced by +/-1e-9 * (lambda_1 - lambda_N), plus
/// +/-infinity realized as the extremal bound of A or -A. Ties go to the smaller
/// bound, then the smaller |shift|. When nothing converges within n_cap the
/// candidate with the smallest bound at n_cap is returned unconverged.
ShiftChoice optimize_shift(const Spectrum& spectrum, const OverlapProfile& overlaps,
                           std::size_t alpha, double target_error, std::size_t n_cap);

} // namespace ritz
