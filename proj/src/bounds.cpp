#include "ritz/bounds.hpp"

#include "ritz/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

namespace ritz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Reason the extremal bound for rank j is undefined, or empty when it applies.
std::string kps_obstacle(std::span<const double> values, std::span<const double> overlaps,
                         std::size_t j, bool allow_zero_gap) {
  const std::size_t n = values.size();
  if (overlaps.size() != n)
    return "overlap profile and spectrum differ in size";
  if (j < 1 || j >= n)
    return "no eigenvalue below target " + std::to_string(j) + " (j must lie in 1..N-1)";
  if (values[j] == values[n - 1])
    return "lambda_{j+1} equals lambda_N for j = " + std::to_string(j) +
           ": Chebyshev interval is degenerate";
  if (values[j - 1] == values[j] && !allow_zero_gap)
    return "lambda_j equals lambda_{j+1} for j = " + std::to_string(j);
  if (overlaps[j - 1] == 0.0)
    return "start vector has no component along eigenvector " + std::to_string(j);
  return {};
}

double clamp_bound(double log_value) {
  const double v = std::exp(log_value);
  return v < kUnderflowClamp ? 0.0 : v;
}

std::vector<double> negated_reversed(std::span<const double> v) {
  std::vector<double> out(v.rbegin(), v.rend());
  for (double& x : out)
    x = -x;
  return out;
}

// ln of the extremal bound on one end; nullopt when the bound is undefined for
// this spectrum, +inf before it starts.
std::optional<double> side_log_bound(std::span<const double> values,
                                     std::span<const double> overlaps, std::size_t j,
                                     std::size_t n, BoundForm form,
                                     std::optional<std::span<const double>> ritz) {
  if (!kps_obstacle(values, overlaps, j, false).empty())
    return std::nullopt;
  if (n < j)
    return kInf;
  return kps_log_bound(kps_ingredients(values, overlaps, j, ritz), n, form);
}

struct PreparedInterior {
  KpsIngredients ing;
  double nu = 0.0;
};

PreparedInterior prepare_interior(const Spectrum& spectrum, const OverlapProfile& overlaps,
                                  std::size_t alpha, double shift, const InteriorOptions& options,
                                  std::size_t inner_n) {
  if (overlaps.size() != spectrum.size())
    throw std::invalid_argument("overlap profile and spectrum differ in size");
  const double target = spectrum.at_rank(alpha);
  const double nu = std::abs(target - shift);
  if (!(nu > 0.0))
    throw std::invalid_argument("shift coincides with target");

  const ShiftedSpectrum shifted = shift_spectrum(spectrum, overlaps, shift);
  const std::size_t pos = shifted.position_of(alpha);

  std::vector<double> values;
  std::vector<double> ov;
  std::size_t j = pos;
  bool allow_zero_gap = false;
  if (options.policy == DegeneracyPolicy::merge) {
    CollapsedSpectrum collapsed = collapse_degenerate(shifted);
    j = collapsed.cluster_of(pos);
    values = std::move(collapsed.values);
    ov = std::move(collapsed.overlaps);
  } else {
    values.assign(shifted.values.values().begin(), shifted.values.values().end());
    ov.assign(shifted.overlaps.magnitudes().begin(), shifted.overlaps.magnitudes().end());
    if (j < values.size()) {
      const double tol = kDegenerateRelTol * shifted.values.magnitude();
      if (std::abs(values[j - 1] - values[j]) <= tol) {
        if (options.policy == DegeneracyPolicy::reject)
          throw std::invalid_argument("degenerate primed gap");
        values[j] = values[j - 1];
        allow_zero_gap = true;
      }
    }
  }

  std::optional<std::span<const double>> ritz;
  if (options.k_mode == KMode::a_posteriori) {
    if (inner_n >= j && options.primed_ritz_values.size() + 1 < j)
      throw std::invalid_argument("a-posteriori interior bound needs j-1 primed Ritz values");
    ritz = options.primed_ritz_values;
  }
  if (const std::string why = kps_obstacle(values, ov, j, allow_zero_gap); !why.empty())
    throw std::invalid_argument("interior bound: " + why);
  if (ritz && inner_n < j)
    ritz.reset(); // not started; K is never used
  return {kps_ingredients(values, ov, j, ritz, allow_zero_gap), nu};
}

double interior_log_bound(const PreparedInterior& p, std::size_t inner_n, BoundForm form) {
  return kps_log_bound(p.ing, inner_n, form) - std::log(2.0 * p.nu);
}

} // namespace

KpsIngredients kps_ingredients(std::span<const double> values, std::span<const double> overlaps,
                               std::size_t j, std::optional<std::span<const double>> ritz_values,
                               bool allow_zero_gap) {
  if (const std::string why = kps_obstacle(values, overlaps, j, allow_zero_gap); !why.empty())
    throw std::invalid_argument(why);
  if (ritz_values && ritz_values->size() + 1 < j)
    throw std::invalid_argument("a-posteriori K needs at least j-1 Ritz values");

  const std::size_t n = values.size();
  const double lj = values[j - 1];
  const double lnext = values[j];
  const double lmin = values[n - 1];

  KpsIngredients ing;
  ing.j = j;
  ing.span = lj - lmin;
  ing.mu = std::sqrt((lj - lnext) / (lnext - lmin));
  ing.gamma_at_lambda_j = 1.0 + 2.0 * ing.mu * ing.mu;
  ing.tan_angle = norm(overlaps.subspan(j)) / overlaps[j - 1];
  ing.mode = ritz_values ? KMode::a_posteriori : KMode::a_priori;

  double log_k = 0.0;
  for (std::size_t i = 0; i + 1 < j; ++i) {
    const double t = ritz_values ? (*ritz_values)[i] : values[i];
    const double num = std::max(std::abs(t - lmin), std::abs(t - lnext));
    const double den = std::abs(t - lj);
    if (den == 0.0) {
      log_k = kInf;
      break;
    }
    log_k += std::log(num / den);
  }
  ing.log_k_factor = log_k;
  ing.k_factor = std::exp(log_k);
  return ing;
}

KpsIngredients kps_ingredients(const Spectrum& spectrum, const OverlapProfile& overlaps,
                               std::size_t j, std::optional<std::span<const double>> ritz_values) {
  return kps_ingredients(spectrum.values(), overlaps.magnitudes(), j, ritz_values);
}

double kps_log_bound(const KpsIngredients& ing, std::size_t n, BoundForm form) {
  if (n < ing.j)
    throw std::invalid_argument("Krylov dimension " + std::to_string(n) +
                                " is below the target rank " + std::to_string(ing.j));
  if (ing.tan_angle == 0.0)
    return -kInf;
  if (ing.log_k_factor == kInf)
    return kInf;
  const auto degree = static_cast<unsigned>(n - ing.j);
  const double prefactor = std::log(ing.span) + 2.0 * ing.log_k_factor + 2.0 * std::log(ing.tan_angle);
  if (form == BoundForm::exact)
    return prefactor - 2.0 * cheb_log_eval_gap(degree, ing.mu);
  return std::log(4.0) + prefactor - 4.0 * static_cast<double>(degree) * ing.mu;
}

double kps_bound(const KpsIngredients& ing, std::size_t n, BoundForm form) {
  return clamp_bound(kps_log_bound(ing, n, form));
}

double kps_bound_lower_end(const Spectrum& spectrum, const OverlapProfile& overlaps,
                           std::size_t j_from_bottom, std::size_t n, BoundForm form,
                           std::optional<std::span<const double>> ritz_values) {
  const Spectrum neg = spectrum.negated();
  const OverlapProfile rev = overlaps.reversed();
  std::vector<double> neg_ritz;
  std::optional<std::span<const double>> ritz;
  if (ritz_values) {
    neg_ritz = negated_reversed(*ritz_values);
    ritz = neg_ritz;
  }
  return kps_bound(kps_ingredients(neg, rev, j_from_bottom, ritz), n, form);
}

double extremal_bound(const Spectrum& spectrum, const OverlapProfile& overlaps, std::size_t alpha,
                      std::size_t n, BoundForm form,
                      std::optional<std::span<const double>> ritz_values) {
  const std::size_t size = spectrum.size();
  if (alpha < 1 || alpha > size)
    throw std::out_of_range("target rank out of range");
  const auto top = side_log_bound(spectrum.values(), overlaps.magnitudes(), alpha, n, form,
                                  ritz_values);

  const Spectrum neg = spectrum.negated();
  const OverlapProfile rev = overlaps.reversed();
  std::vector<double> neg_ritz;
  std::optional<std::span<const double>> ritz;
  if (ritz_values) {
    neg_ritz = negated_reversed(*ritz_values);
    ritz = neg_ritz;
  }
  const auto bottom = side_log_bound(neg.values(), rev.magnitudes(), size - alpha + 1, n, form, ritz);

  if (!top && !bottom)
    throw std::invalid_argument("no extremal bound applies to rank " + std::to_string(alpha));
  const double best = std::min(top.value_or(kInf), bottom.value_or(kInf));
  return best == kInf ? kInf : clamp_bound(best);
}

std::size_t ShiftedSpectrum::position_of(std::size_t alpha) const {
  const auto it = std::find(perm.begin(), perm.end(), alpha);
  if (it == perm.end())
    throw std::out_of_range("target rank " + std::to_string(alpha) + " not in spectrum");
  return static_cast<std::size_t>(it - perm.begin()) + 1;
}

ShiftedSpectrum shift_spectrum(const Spectrum& spectrum, const OverlapProfile& overlaps,
                               double shift) {
  const std::size_t n = spectrum.size();
  if (overlaps.size() != n)
    throw std::invalid_argument("overlap profile and spectrum differ in size");
  std::vector<double> squared(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double d = spectrum[k] - shift;
    squared[k] = -(d * d);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return squared[a] > squared[b]; });

  std::vector<double> values(n), ov(n);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = squared[order[i]];
    ov[i] = overlaps[order[i]];
    perm[i] = order[i] + 1;
  }
  return {shift, Spectrum(std::move(values)), std::move(perm), OverlapProfile(std::move(ov))};
}

std::size_t CollapsedSpectrum::cluster_of(std::size_t primed_rank) const {
  for (std::size_t c = 0; c < members.size(); ++c)
    if (std::find(members[c].begin(), members[c].end(), primed_rank) != members[c].end())
      return c + 1;
  throw std::out_of_range("A' rank not present in collapsed spectrum");
}

CollapsedSpectrum collapse_degenerate(const ShiftedSpectrum& shifted) {
  CollapsedSpectrum out;
  const auto values = shifted.values.values();
  const auto ov = shifted.overlaps.magnitudes();
  const double tol = kDegenerateRelTol * shifted.values.magnitude();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!out.values.empty() && std::abs(out.values.back() - values[i]) <= tol) {
      out.overlaps.back() = std::hypot(out.overlaps.back(), ov[i]);
      out.members.back().push_back(i + 1);
    } else {
      out.values.push_back(values[i]);
      out.overlaps.push_back(ov[i]);
      out.members.push_back({i + 1});
    }
  }
  return out;
}

InteriorBoundResult interior_bound(const Spectrum& spectrum, const OverlapProfile& overlaps,
                                   std::size_t alpha, double shift, std::size_t inner_n,
                                   BoundForm form, const InteriorOptions& options) {
  const PreparedInterior p = prepare_interior(spectrum, overlaps, alpha, shift, options, inner_n);
  InteriorBoundResult r;
  r.alpha = alpha;
  r.j = p.ing.j;
  r.nu = p.nu;
  r.log_epsilon = kps_log_bound(p.ing, inner_n, form);
  r.epsilon = std::exp(r.log_epsilon);
  r.bound = clamp_bound(interior_log_bound(p, inner_n, form));
  r.inner_dim = inner_n;
  r.ambient_dim = 2 * inner_n;
  r.mode = p.ing.mode;
  r.mu_prime = p.ing.mu;
  r.k_factor = p.ing.k_factor;
  r.tan_angle = p.ing.tan_angle;
  return r;
}

double recovered_ritz_value(double target_eigenvalue, double shift, double primed_ritz_value) {
  const double xi = std::sqrt(std::max(-primed_ritz_value, 0.0));
  return target_eigenvalue < shift ? shift - xi : shift + xi;
}

MuRatio mu_ratio(const Spectrum& spectrum, std::size_t alpha, double shift) {
  const std::size_t n = spectrum.size();
  if (alpha < 1 || alpha + 1 >= n)
    throw std::invalid_argument("mu_ratio needs 1 <= alpha <= N-2");
  const double la = spectrum.at_rank(alpha);
  const double lnext = spectrum.at_rank(alpha + 1);
  const double lmin = spectrum.smallest();
  if (lnext == lmin)
    throw std::invalid_argument("lambda_{alpha+1} equals lambda_N: mu undefined");

  const ShiftedSpectrum shifted =
      shift_spectrum(spectrum, OverlapProfile(std::vector<double>(n, 1.0)), shift);
  const std::size_t j = shifted.position_of(alpha);
  const auto primed = shifted.values.values();
  const double d_next = lnext - shift;
  const double d_min = lmin - shift;
  if (j >= n || primed[j] != -(d_next * d_next) || primed[n - 1] != -(d_min * d_min))
    throw std::invalid_argument("shift-to-gap correspondence broken");
  if (primed[j] == primed[n - 1])
    throw std::invalid_argument("lambda'_{j+1} equals lambda'_N: mu' undefined");

  MuRatio r;
  r.mu_prime = std::sqrt((primed[j - 1] - primed[j]) / (primed[j] - primed[n - 1]));
  r.mu = std::sqrt((la - lnext) / (lnext - lmin));
  r.ratio = std::sqrt((2.0 * shift - la - lnext) / (2.0 * shift - lnext - lmin));
  return r;
}

std::string_view to_string(BoundFamily family) {
  switch (family) {
  case BoundFamily::extremal_exact:
    return "extremal-exact";
  case BoundFamily::extremal_asymptotic:
    return "extremal-asymptotic";
  case BoundFamily::interior_exact:
    return "interior-exact";
  case BoundFamily::interior_asymptotic:
    return "interior-asymptotic";
  }
  return "unknown";
}

std::optional<BoundFamily> parse_bound_family(std::string_view name) {
  for (BoundFamily f : {BoundFamily::extremal_exact, BoundFamily::extremal_asymptotic,
                        BoundFamily::interior_exact, BoundFamily::interior_asymptotic})
    if (to_string(f) == name)
      return f;
  return std::nullopt;
}

bool is_interior(BoundFamily family) {
  return family == BoundFamily::interior_exact || family == BoundFamily::interior_asymptotic;
}

BoundForm form_of(BoundFamily family) {
  return (family == BoundFamily::extremal_exact || family == BoundFamily::interior_exact)
             ? BoundForm::exact
             : BoundForm::asymptotic;
}

BoundCurve bound_curve(const Spectrum& spectrum, const OverlapProfile& overlaps, std::size_t alpha,
                       BoundFamily family, std::optional<double> shift, std::size_t first,
                       std::size_t last, DegeneracyPolicy policy) {
  if (first < 1 || first > last)
    throw std::invalid_argument("bound_curve: empty or invalid dimension range");
  if (is_interior(family) && !shift)
    throw std::invalid_argument("interior bound families need a shift");
  if (!is_interior(family) && shift)
    throw std::invalid_argument("extremal bound families take no shift");

  const BoundForm form = form_of(family);
  BoundCurve curve{family, alpha, shift, {}};

  if (!is_interior(family)) {
    for (std::size_t d = first; d <= last; ++d)
      curve.points.push_back({d, extremal_bound(spectrum, overlaps, alpha, d, form)});
    return curve;
  }

  if (std::isinf(*shift)) {
    // the limit shift -> +/-inf is the extremal bound of that end
    const bool top = *shift > 0.0;
    const Spectrum neg = spectrum.negated();
    const OverlapProfile rev = overlaps.reversed();
    const Spectrum& s = top ? spectrum : neg;
    const OverlapProfile& o = top ? overlaps : rev;
    const std::size_t j = top ? alpha : spectrum.size() - alpha + 1;
    if (const std::string why = kps_obstacle(s.values(), o.magnitudes(), j, false); !why.empty())
      throw std::invalid_argument(why);
    const KpsIngredients ing = kps_ingredients(s, o, j);
    for (std::size_t d = first; d <= last; ++d)
      curve.points.push_back({d, d < j ? kInf : kps_bound(ing, d, form)});
    return curve;
  }

  InteriorOptions options;
  options.policy = policy;
  const PreparedInterior p = prepare_interior(spectrum, overlaps, alpha, *shift, options, 0);
  for (std::size_t d = first; d <= last; ++d) {
    if (d % 2 != 0)
      continue;
    const std::size_t inner = d / 2;
    const double v = inner < p.ing.j ? kInf : clamp_bound(interior_log_bound(p, inner, form));
    curve.points.push_back({d, v});
  }
  return curve;
}

std::optional<std::size_t> first_dimension_below(const BoundCurve& curve, double threshold) {
  for (const CurvePoint& p : curve.points)
    if (p.value <= threshold)
      return p.ambient_dim;
  return std::nullopt;
}

ShiftChoice optimize_shift(const Spectrum& spectrum, const OverlapProfile& overlaps,
                           std::size_t alpha, double target_error, std::size_t n_cap) {
  if (!(target_error > 0.0))
    throw std::invalid_argument("target_error must be positive");
  if (alpha < 1 || alpha > spectrum.size())
    throw std::out_of_range("target rank out of range");
  if (n_cap < 1)
    throw std::invalid_argument("n_cap must be positive");

  const double log_target = std::log(target_error);
  const double nudge = 1e-9 * spectrum.width();
  const std::size_t n = spectrum.size();

  std::vector<double> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      if (spectrum[i] == spectrum[k])
        continue;
      const double mid = 0.5 * (spectrum[i] + spectrum[k]);
      candidates.push_back(mid);
      if (nudge > 0.0) {
        candidates.push_back(mid + nudge);
        candidates.push_back(mid - nudge);
      }
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  struct Outcome {
    double shift;
    std::size_t ambient;
    std::size_t inner;
    double log_bound;
    bool converged;
  };
  // converged first, then dimension, bound, |shift|
  auto better = [](const Outcome& a, const Outcome& b) {
    if (a.converged != b.converged)
      return a.converged;
    if (a.converged) {
      return std::tuple(a.ambient, a.log_bound, std::abs(a.shift)) <
             std::tuple(b.ambient, b.log_bound, std::abs(b.shift));
    }
    return std::tuple(a.log_bound, std::abs(a.shift)) < std::tuple(b.log_bound, std::abs(b.shift));
  };

  std::optional<Outcome> best;
  std::size_t evaluated = 0;
  auto consider = [&](const Outcome& o) {
    ++evaluated;
    if (!best || better(o, *best))
      best = o;
  };

  InteriorOptions options;
  options.policy = DegeneracyPolicy::merge;
  const std::size_t inner_cap = n_cap / 2;
  for (double shift : candidates) {
    PreparedInterior p;
    try {
      p = prepare_interior(spectrum, overlaps, alpha, shift, options, 0);
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (inner_cap < p.ing.j)
      continue;
    Outcome o{shift, 2 * inner_cap, inner_cap, interior_log_bound(p, inner_cap, BoundForm::exact),
              false};
    for (std::size_t m = p.ing.j; m <= inner_cap; ++m) {
      const double lb = interior_log_bound(p, m, BoundForm::exact);
      if (lb <= log_target) {
        o = {shift, 2 * m, m, lb, true};
        break;
      }
    }
    consider(o);
  }

  // shift -> +inf / -inf: the plain extremal bound of A / -A
  const Spectrum neg = spectrum.negated();
  const OverlapProfile rev = overlaps.reversed();
  for (bool top : {true, false}) {
    const Spectrum& s = top ? spectrum : neg;
    const OverlapProfile& o = top ? overlaps : rev;
    const std::size_t j = top ? alpha : n - alpha + 1;
    if (!kps_obstacle(s.values(), o.magnitudes(), j, false).empty() || n_cap < j)
      continue;
    const KpsIngredients ing = kps_ingredients(s, o, j);
    const double shift = top ? kInf : -kInf;
    Outcome out{shift, n_cap, n_cap, kps_log_bound(ing, n_cap, BoundForm::exact), false};
    for (std::size_t d = j; d <= n_cap; ++d) {
      const double lb = kps_log_bound(ing, d, BoundForm::exact);
      if (lb <= log_target) {
        out = {shift, d, d, lb, true};
        break;
      }
    }
    consider(out);
  }

  if (!best)
    throw std::invalid_argument("optimize_shift: no candidate shift yields a bound for rank " +
                                std::to_string(alpha));

  ShiftChoice choice;
  choice.shift = best->shift;
  choice.ambient_dim = best->ambient;
  choice.inner_dim = best->inner;
  choice.bound = clamp_bound(best->log_bound);
  choice.converged = best->converged;
  choice.candidates_evaluated = evaluated;
  choice.curve = bound_curve(spectrum, overlaps, alpha, BoundFamily::interior_exact, best->shift, 1,
                             n_cap, DegeneracyPolicy::merge);
  return choice;
}

} // namespace ritz
