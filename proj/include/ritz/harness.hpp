#pragma once

// Experiment configuration, the Ritz-sweep/bound driver and CSV output.
//
// Config (JSON):
//   {
//     "spectrum": [3, 2, 1, 0] | {"banded": {"bands": 2, "total": 8, "void": 0.5,
//                                            "lo": 0, "hi": 1, "allow_degenerate": false}}
//                 | "figure1",
//     "overlaps": "equal" | [0.5, 0.5, 0.5, 0.5],
//     "targets": [ {"index": 23,
//                   "families": ["extremal-exact", "interior-exact"],
//                   "shift": 0.45 | {"optimize": {"target_error": 1e-8, "n_cap": 46}}
//                            | "extremal",
//                   "k_factor": "a-posteriori" | "a-priori"} ],
//     "max_dim": 46,
//     "output": "figure1.csv"
//   }

#include "ritz/bounds.hpp"
#include "ritz/operator.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ritz {

/// Invalid configuration; the message names the offending field or position.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Failure reading or writing a file; the message carries the path.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ShiftPolicy {
  enum class Kind { none, fixed, optimize, extremal };
  Kind kind = Kind::none;
  double shift = 0.0;        // fixed
  double target_error = 0.0; // optimize
  std::size_t n_cap = 0;     // optimize, ambient; 0 means max_dim
};

struct TargetSpec {
  std::size_t index = 1;
  std::vector<BoundFamily> families;
  ShiftPolicy shift;
  KMode k_mode = KMode::a_posteriori;
};

struct ExperimentConfig {
  Spectrum spectrum;
  OverlapProfile overlaps;
  std::vector<TargetSpec> targets;
  std::size_t max_dim = 1;
  std::string output;
};

/// Parses and validates a config. `origin` prefixes diagnostics. Throws
/// ConfigError.
ExperimentConfig parse_config(std::string_view text, std::string_view origin = "config");
/// Reads and parses a config file. Throws IoError or ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path);

struct ConvergenceRecord {
  std::size_t n = 0; // ambient Krylov dimension
  std::size_t target = 0;
  double ritz = 0.0;    // Ritz value nearest lambda_target
  double nearest = 0.0; // eigenvalue nearest that Ritz value
  double abs_error = 0.0;
  BoundFamily family = BoundFamily::extremal_exact;
  double bound = 0.0;           // +infinity before the bound starts
  std::optional<double> shift;  // interior families only
};

struct ExperimentResult {
  std::vector<ConvergenceRecord> records;
  std::vector<std::string> warnings;
};

/// One Lanczos sweep on the diagonal operator, then per target and ambient
/// dimension the Ritz error and each requested bound. Interior families appear
/// at even dimensions only (every dimension for an infinite shift). Records are
/// ordered by (target, n, family).
ExperimentResult run_experiment(const ExperimentConfig& config);

inline constexpr std::string_view kCsvHeader = "n,target,ritz,nearest,abs_error,family,bound,shift";

std::string format_csv(const std::vector<ConvergenceRecord>& records);
/// Writes format_csv to path. Throws IoError.
void emit_csv(const std::vector<ConvergenceRecord>& records, const std::filesystem::path& path);

/// The built-in figure reproduction: figure-1 spectrum, equal overlaps,
/// target 1 with extremal bounds, targets 23-25 with interior bounds at
/// shift 0.45, target 46 with extremal bounds.
ExperimentConfig figure1_config();

} // namespace ritz
