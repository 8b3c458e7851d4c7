// ritz-bounds: Ritz-value convergence experiments from the command line.
//
//   ritz-bounds run <config>
//   ritz-bounds figure1 [--out <dir>]
//   ritz-bounds optimize-shift <config> --target <idx> --error <eps>
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error.

#include "ritz/bounds.hpp"
#include "ritz/harness.hpp"
#include "ritz/spectra.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

void print_warnings(const ritz::ExperimentResult& result) {
  for (const std::string& w : result.warnings)
    std::cerr << "warning: " << w << '\n';
}

std::string shift_text(double shift) {
  if (std::isinf(shift))
    return shift > 0 ? "+inf (extremal bound of A)" : "-inf (extremal bound of -A)";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", shift);
  return buf;
}

int cmd_run(const std::string& config_path) {
  const ritz::ExperimentConfig config = ritz::load_config(config_path);
  const ritz::ExperimentResult result = ritz::run_experiment(config);
  print_warnings(result);
  if (config.output.empty()) {
    std::cout << ritz::format_csv(result.records);
  } else {
    const std::filesystem::path out = config.output;
    ritz::emit_csv(result.records, out);
    std::cout << "wrote " << result.records.size() << " records to " << out.string() << '\n';
  }
  return 0;
}

int cmd_figure1(const std::string& out_dir) {
  ritz::ExperimentConfig config = ritz::figure1_config();
  const ritz::ExperimentResult result = ritz::run_experiment(config);
  print_warnings(result);
  const std::filesystem::path out = std::filesystem::path(out_dir) / config.output;
  ritz::emit_csv(result.records, out);
  std::cout << "wrote " << result.records.size() << " records to " << out.string() << '\n';

  std::cout << "spectrum: reconstructed 46-eigenvalue figure spectrum, equal overlaps\n"
            << "optimized shifts for error 1e-8 (figure uses " << ritz::kFigure1Shift
            << " for 23-25 and +inf for 1):\n";
  for (std::size_t alpha : {1, 23, 24, 25}) {
    const ritz::ShiftChoice c = ritz::optimize_shift(config.spectrum, config.overlaps, alpha, 1e-8,
                                                     config.spectrum.size());
    std::cout << "  target " << alpha << ": shift " << shift_text(c.shift) << ", dimension "
              << c.ambient_dim << (c.converged ? "" : " (not converged)") << '\n';
  }
  return 0;
}

int cmd_optimize(const std::string& config_path, std::size_t target, double error) {
  const ritz::ExperimentConfig config = ritz::load_config(config_path);
  if (target < 1 || target > config.spectrum.size())
    throw ritz::ConfigError("--target: " + std::to_string(target) + " is outside 1.." +
                            std::to_string(config.spectrum.size()));
  if (!(error > 0.0))
    throw ritz::ConfigError("--error: must be positive");
  ritz::ShiftChoice c;
  try {
    c = ritz::optimize_shift(config.spectrum, config.overlaps, target, error, config.max_dim);
  } catch (const std::invalid_argument& e) {
    throw ritz::ConfigError(e.what());
  }
  std::cout << "target " << target << '\n'
            << "shift " << shift_text(c.shift) << '\n'
            << "ambient_dim " << c.ambient_dim << '\n'
            << "bound " << c.bound << '\n'
            << "converged " << (c.converged ? "yes" : "no") << '\n'
            << "candidates " << c.candidates_evaluated << '\n';
  if (!c.converged)
    std::cerr << "warning: no shift reaches " << error << " within dimension " << config.max_dim
              << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ritz values and their convergence bounds"};
  app.require_subcommand(1);

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "run an experiment config and write its CSV");
  run->add_option("config", run_config, "experiment config (JSON)")->required();

  std::string out_dir = ".";
  CLI::App* fig = app.add_subcommand("figure1", "reproduce the convergence figure");
  fig->add_option("--out", out_dir, "output directory");

  std::string opt_config;
  std::size_t opt_target = 0;
  double opt_error = 0.0;
  CLI::App* opt = app.add_subcommand("optimize-shift", "choose the shift for one target");
  opt->add_option("config", opt_config, "experiment config (JSON)")->required();
  opt->add_option("--target", opt_target, "1-based eigenvalue rank")->required();
  opt->add_option("--error", opt_error, "target bound value")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run)
      return cmd_run(run_config);
    if (*fig)
      return cmd_figure1(out_dir);
    return cmd_optimize(opt_config, opt_target, opt_error);
  } catch (const ritz::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ritz::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
}
