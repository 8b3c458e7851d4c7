#include "ritz/harness.hpp"

#include "ritz/lanczos.hpp"
#include "ritz/spectra.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

namespace ritz {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(std::string_view origin, const std::string& field, const std::string& msg) {
  throw ConfigError(std::string(origin) + ": " + field + ": " + msg);
}

// 1-based line and column of a byte offset
std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double number_at(std::string_view origin, const std::string& field, const json& v) {
  if (!v.is_number())
    fail(origin, field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x))
    fail(origin, field, "expected a finite number");
  return x;
}

std::size_t count_at(std::string_view origin, const std::string& field, const json& v) {
  if (!v.is_number_integer() || v.get<long long>() < 1)
    fail(origin, field, "expected a positive integer");
  return v.get<std::size_t>();
}

std::vector<double> number_list(std::string_view origin, const std::string& field, const json& v) {
  if (!v.is_array() || v.empty())
    fail(origin, field, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(number_at(origin, field + "[" + std::to_string(i) + "]", v[i]));
  return out;
}

Spectrum parse_spectrum(std::string_view origin, const json& v) {
  try {
    if (v.is_string()) {
      if (v.get<std::string>() == "figure1")
        return figure1_spectrum();
      fail(origin, "spectrum", "unknown builtin \"" + v.get<std::string>() + "\"");
    }
    if (v.is_array())
      return Spectrum(number_list(origin, "spectrum", v));
    if (v.is_object() && v.contains("banded")) {
      const json& b = v.at("banded");
      if (!b.is_object())
        fail(origin, "spectrum.banded", "expected an object");
      BandedSpectrumSpec spec;
      for (const auto& [key, value] : b.items()) {
        const std::string field = "spectrum.banded." + key;
        if (key == "bands")
          spec.bands = count_at(origin, field, value);
        else if (key == "total")
          spec.total = count_at(origin, field, value);
        else if (key == "void")
          spec.void_width = number_at(origin, field, value);
        else if (key == "lo")
          spec.lo = number_at(origin, field, value);
        else if (key == "hi")
          spec.hi = number_at(origin, field, value);
        else if (key == "allow_degenerate") {
          if (!value.is_boolean())
            fail(origin, field, "expected true or false");
          spec.allow_degenerate = value.get<bool>();
        } else {
          fail(origin, field, "unknown key");
        }
      }
      return banded_spectrum(spec);
    }
  } catch (const std::invalid_argument& e) {
    fail(origin, "spectrum", e.what());
  }
  fail(origin, "spectrum", "expected a list of eigenvalues, {\"banded\": {...}} or \"figure1\"");
}

OverlapProfile parse_overlaps(std::string_view origin, const json& v, std::size_t n) {
  if (v.is_string()) {
    if (v.get<std::string>() != "equal")
      fail(origin, "overlaps", "unknown overlap source \"" + v.get<std::string>() + "\"");
    return equal_overlap_start(n);
  }
  std::vector<double> values = number_list(origin, "overlaps", v);
  if (values.size() != n)
    fail(origin, "overlaps",
         "has " + std::to_string(values.size()) + " entries, spectrum has " + std::to_string(n));
  try {
    return OverlapProfile(std::move(values));
  } catch (const std::invalid_argument& e) {
    fail(origin, "overlaps", e.what());
  }
}

ShiftPolicy parse_shift(std::string_view origin, const std::string& field, const json& v) {
  ShiftPolicy p;
  if (v.is_number()) {
    p.kind = ShiftPolicy::Kind::fixed;
    p.shift = number_at(origin, field, v);
    return p;
  }
  if (v.is_string() && v.get<std::string>() == "extremal") {
    p.kind = ShiftPolicy::Kind::extremal;
    return p;
  }
  if (v.is_object() && v.size() == 1 && v.contains("optimize")) {
    const json& o = v.at("optimize");
    if (!o.is_object() || !o.contains("target_error"))
      fail(origin, field + ".optimize", "expected {\"target_error\": ..., \"n_cap\": ...}");
    p.kind = ShiftPolicy::Kind::optimize;
    p.target_error = number_at(origin, field + ".optimize.target_error", o.at("target_error"));
    if (!(p.target_error > 0.0))
      fail(origin, field + ".optimize.target_error", "must be positive");
    if (o.contains("n_cap"))
      p.n_cap = count_at(origin, field + ".optimize.n_cap", o.at("n_cap"));
    for (const auto& [key, value] : o.items())
      if (key != "target_error" && key != "n_cap")
        fail(origin, field + ".optimize." + key, "unknown key");
    return p;
  }
  fail(origin, field, "expected a number, \"extremal\" or {\"optimize\": {...}}");
}

TargetSpec parse_target(std::string_view origin, const std::string& field, const json& v,
                        std::size_t n) {
  if (!v.is_object())
    fail(origin, field, "expected an object");
  if (!v.contains("index"))
    fail(origin, field + ".index", "missing");
  TargetSpec t;
  t.index = count_at(origin, field + ".index", v.at("index"));
  if (t.index > n)
    fail(origin, field + ".index", "exceeds the spectrum size " + std::to_string(n));

  if (v.contains("families")) {
    const json& f = v.at("families");
    if (!f.is_array() || f.empty())
      fail(origin, field + ".families", "expected a non-empty array of family names");
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::string ff = field + ".families[" + std::to_string(i) + "]";
      if (!f[i].is_string())
        fail(origin, ff, "expected a string");
      const auto family = parse_bound_family(f[i].get<std::string>());
      if (!family)
        fail(origin, ff, "unknown bound family \"" + f[i].get<std::string>() + "\"");
      if (std::find(t.families.begin(), t.families.end(), *family) == t.families.end())
        t.families.push_back(*family);
    }
  } else {
    t.families = {BoundFamily::extremal_exact};
  }

  if (v.contains("shift"))
    t.shift = parse_shift(origin, field + ".shift", v.at("shift"));
  const bool interior = std::any_of(t.families.begin(), t.families.end(),
                                    [](BoundFamily f) { return is_interior(f); });
  if (interior && t.shift.kind == ShiftPolicy::Kind::none)
    fail(origin, field + ".shift", "required by interior bound families");

  if (v.contains("k_factor")) {
    const json& k = v.at("k_factor");
    if (k == "a-posteriori")
      t.k_mode = KMode::a_posteriori;
    else if (k == "a-priori")
      t.k_mode = KMode::a_priori;
    else
      fail(origin, field + ".k_factor", "expected \"a-priori\" or \"a-posteriori\"");
  }
  for (const auto& [key, value] : v.items())
    if (key != "index" && key != "families" && key != "shift" && key != "k_factor")
      fail(origin, field + "." + key, "unknown key");
  return t;
}

std::string format_double(double x) {
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Interior family evaluated at an infinite shift: the extremal bound of one end.
double end_bound(const Spectrum& spectrum, const OverlapProfile& overlaps, std::size_t alpha,
                 bool top, std::size_t n, BoundForm form,
                 std::optional<std::span<const double>> ritz) {
  const std::size_t j = top ? alpha : spectrum.size() - alpha + 1;
  if (n < j)
    return kInf;
  if (top)
    return kps_bound(kps_ingredients(spectrum, overlaps, j, ritz), n, form);
  return kps_bound_lower_end(spectrum, overlaps, j, n, form, ritz);
}

struct ResolvedTarget {
  const TargetSpec* spec;
  std::optional<double> shift; // for interior families
  std::size_t primed_j = 0;    // finite shift only
  std::vector<RitzSet> primed_sweep;
};

} // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(std::string(origin) + ":" + std::to_string(line) + ":" +
                      std::to_string(col) + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object())
    fail(origin, "<root>", "expected a JSON object");
  for (const auto& [key, value] : doc.items())
    if (key != "spectrum" && key != "overlaps" && key != "targets" && key != "max_dim" &&
        key != "output")
      fail(origin, key, "unknown top-level key");
  for (const char* key : {"spectrum", "overlaps", "targets", "max_dim"})
    if (!doc.contains(key))
      fail(origin, key, "missing");

  Spectrum spectrum = parse_spectrum(origin, doc.at("spectrum"));
  const std::size_t n = spectrum.size();
  OverlapProfile overlaps = parse_overlaps(origin, doc.at("overlaps"), n);

  const std::size_t max_dim = count_at(origin, "max_dim", doc.at("max_dim"));
  if (max_dim > n)
    fail(origin, "max_dim", "exceeds the spectrum size " + std::to_string(n));

  const json& t = doc.at("targets");
  if (!t.is_array())
    fail(origin, "targets", "expected an array");
  std::vector<TargetSpec> targets;
  for (std::size_t i = 0; i < t.size(); ++i)
    targets.push_back(parse_target(origin, "targets[" + std::to_string(i) + "]", t[i], n));

  std::string output;
  if (doc.contains("output")) {
    if (!doc.at("output").is_string() || doc.at("output").get<std::string>().empty())
      fail(origin, "output", "expected a non-empty path string");
    output = doc.at("output").get<std::string>();
  }
  return {std::move(spectrum), std::move(overlaps), std::move(targets), max_dim, std::move(output)};
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad())
    throw IoError("error reading config " + path.string());
  return parse_config(text.str(), path.string());
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const Spectrum& spectrum = config.spectrum;
  const OverlapProfile& overlaps = config.overlaps;
  const std::size_t size = spectrum.size();
  ExperimentResult result;

  const LinearOperator op = LinearOperator::diagonal(spectrum);
  const LanczosDecomposition dec = lanczos_decompose(op, overlaps.magnitudes(), config.max_dim);
  const std::vector<RitzSet> sweep = ritz_sweep(dec);
  const std::size_t dims = dec.dimension();
  if (dims < config.max_dim)
    result.warnings.push_back("Krylov space exhausted at dimension " + std::to_string(dims) +
                              "; records stop there");

  std::vector<ResolvedTarget> resolved;
  for (std::size_t ti = 0; ti < config.targets.size(); ++ti) {
    const TargetSpec& t = config.targets[ti];
    const std::string field = "targets[" + std::to_string(ti) + "]";
    ResolvedTarget r{&t, std::nullopt, 0, {}};
    switch (t.shift.kind) {
    case ShiftPolicy::Kind::none:
      break;
    case ShiftPolicy::Kind::fixed:
      r.shift = t.shift.shift;
      break;
    case ShiftPolicy::Kind::extremal:
      r.shift = 2 * t.index <= size + 1 ? kInf : -kInf;
      break;
    case ShiftPolicy::Kind::optimize: {
      const std::size_t cap = t.shift.n_cap == 0 ? config.max_dim : t.shift.n_cap;
      try {
        const ShiftChoice choice =
            optimize_shift(spectrum, overlaps, t.index, t.shift.target_error, cap);
        r.shift = choice.shift;
        if (!choice.converged)
          result.warnings.push_back(field + ": shift optimization did not reach " +
                                    format_double(t.shift.target_error) + " within dimension " +
                                    std::to_string(cap) + "; using shift " +
                                    format_double(choice.shift));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(field + ".shift: " + e.what());
      }
      break;
    }
    }

    // validate every family once so that run-time evaluation cannot fail
    for (BoundFamily family : t.families) {
      try {
        if (!is_interior(family)) {
          (void)extremal_bound(spectrum, overlaps, t.index, size, form_of(family));
        } else if (std::isinf(*r.shift)) {
          (void)end_bound(spectrum, overlaps, t.index, *r.shift > 0, size, form_of(family),
                          std::nullopt);
        } else {
          InteriorOptions options;
          options.policy = DegeneracyPolicy::merge;
          r.primed_j = interior_bound(spectrum, overlaps, t.index, *r.shift, size,
                                      form_of(family), options)
                           .j;
        }
      } catch (const std::invalid_argument& e) {
        throw ConfigError(field + ": " + std::string(to_string(family)) + ": " + e.what());
      }
    }

    const bool primed_needed =
        t.k_mode == KMode::a_posteriori && r.shift && std::isfinite(*r.shift) && dims >= 2;
    if (primed_needed) {
      const ShiftedSpectrum shifted = shift_spectrum(spectrum, overlaps, *r.shift);
      const LinearOperator primed = LinearOperator::diagonal(shifted.values);
      r.primed_sweep = ritz_sweep(primed, shifted.overlaps.magnitudes(), dims / 2);
    }
    resolved.push_back(std::move(r));
  }

  for (const ResolvedTarget& r : resolved) {
    const TargetSpec& t = *r.spec;
    const double target_value = spectrum.at_rank(t.index);
    for (std::size_t n = 1; n <= dims; ++n) {
      const std::vector<double>& thetas = sweep[n - 1].values;
      double ritz = thetas.front();
      for (double theta : thetas)
        if (std::abs(theta - target_value) < std::abs(ritz - target_value))
          ritz = theta;
      const NearestEigenvalue ne = nearest_eigenvalue(ritz, spectrum);

      std::optional<std::span<const double>> ritz_values;
      if (t.k_mode == KMode::a_posteriori)
        ritz_values = std::span<const double>(thetas);

      for (BoundFamily family : t.families) {
        const BoundForm form = form_of(family);
        ConvergenceRecord rec{n, t.index, ritz, ne.eigenvalue, ne.abs_error, family, 0.0, {}};
        if (!is_interior(family)) {
          rec.bound = extremal_bound(spectrum, overlaps, t.index, n, form, ritz_values);
        } else if (std::isinf(*r.shift)) {
          rec.shift = r.shift;
          rec.bound = end_bound(spectrum, overlaps, t.index, *r.shift > 0, n, form, ritz_values);
        } else {
          if (n % 2 != 0)
            continue;
          rec.shift = r.shift;
          const std::size_t inner = n / 2;
          if (inner < r.primed_j) {
            rec.bound = kInf;
          } else {
            InteriorOptions options;
            options.policy = DegeneracyPolicy::merge;
            if (t.k_mode == KMode::a_posteriori) {
              options.k_mode = KMode::a_posteriori;
              options.primed_ritz_values =
                  r.primed_sweep[std::min(inner, r.primed_sweep.size()) - 1].values;
            }
            rec.bound =
                interior_bound(spectrum, overlaps, t.index, *r.shift, inner, form, options).bound;
          }
        }
        result.records.push_back(rec);
      }
    }
  }

  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const ConvergenceRecord& a, const ConvergenceRecord& b) {
                     return std::tuple(a.target, a.n, static_cast<int>(a.family)) <
                            std::tuple(b.target, b.n, static_cast<int>(b.family));
                   });
  return result;
}

std::string format_csv(const std::vector<ConvergenceRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const ConvergenceRecord& r : records) {
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.target);
    out += ',';
    out += format_double(r.ritz);
    out += ',';
    out += format_double(r.nearest);
    out += ',';
    out += format_double(r.abs_error);
    out += ',';
    out += to_string(r.family);
    out += ',';
    out += format_double(r.bound);
    out += ',';
    if (r.shift)
      out += format_double(*r.shift);
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<ConvergenceRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  const std::string text = format_csv(records);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out)
    throw IoError("error writing " + path.string());
}

ExperimentConfig figure1_config() {
  const Spectrum spectrum = figure1_spectrum();
  std::vector<TargetSpec> targets;
  ShiftPolicy none;
  targets.push_back({1, {BoundFamily::extremal_exact, BoundFamily::extremal_asymptotic}, none,
                     KMode::a_posteriori});
  ShiftPolicy fixed{ShiftPolicy::Kind::fixed, kFigure1Shift, 0.0, 0};
  for (std::size_t alpha : {23, 24, 25})
    targets.push_back({alpha,
                       {BoundFamily::extremal_exact, BoundFamily::interior_exact,
                        BoundFamily::interior_asymptotic},
                       fixed, KMode::a_posteriori});
  targets.push_back({46, {BoundFamily::extremal_exact}, none, KMode::a_posteriori});
  return {spectrum, equal_overlap_start(spectrum.size()), std::move(targets), spectrum.size(),
          "figure1.csv"};
}

} // namespace ritz
