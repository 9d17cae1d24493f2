// diffsnr: parameter sweeps for the accuracy of numerical differentiation
// under harmonic or white sensor noise. Emits plot-ready CSV plus a
// terminal summary; `check` verifies the closed-form identities.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "diffsnr/check.hpp"
#include "diffsnr/config.hpp"
#include "diffsnr/csv.hpp"
#include "diffsnr/sweeps.hpp"

namespace {

// Exit codes, also listed in the help footer.
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

struct Options {
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string config_path;
  std::string perturb;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw diffsnr::ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void apply_overrides(diffsnr::SweepConfig& config, const Options& options) {
  if (options.seed) config.base_seed = *options.seed;
  if (options.trials) {
    if (*options.trials < 1) throw diffsnr::ConfigError("--trials must be >= 1");
    config.trials = *options.trials;
  }
}

void print_warnings(const diffsnr::SweepConfig& config) {
  for (const auto& warning : config.warnings()) {
    std::cerr << "warning: " << warning << "\n";
  }
}

int run_sweep_command(const diffsnr::SweepConfig& config, const Options& options,
                      const std::string& default_out) {
  print_warnings(config);
  const auto rows = diffsnr::run_sweep(config);
  const std::string csv = diffsnr::csv_string(config, rows);
  const std::string out_path = options.out_path.empty() ? default_out : options.out_path;
  if (out_path == "-") {
    std::cout << csv;
    return kExitOk;
  }
  write_file(out_path, csv);
  diffsnr::print_summary(config, rows, std::cout);
  std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
  return kExitOk;
}

int run_ratio_command(const diffsnr::SweepConfig& config, const Options& options) {
  print_warnings(config);
  const auto rows = diffsnr::ratio_sweep(config);
  const std::string csv = diffsnr::ratio_csv_string(rows);
  const std::string out_path = options.out_path.empty() ? "ratio.csv" : options.out_path;
  if (out_path == "-") {
    std::cout << csv;
    return kExitOk;
  }
  write_file(out_path, csv);
  diffsnr::print_ratio_summary(rows, std::cout);
  std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
  return kExitOk;
}

int run_check_command(const Options& options) {
  const auto checks = diffsnr::check_formulas(options.perturb);
  diffsnr::print_identity_report(checks, std::cout);
  return diffsnr::all_identities_pass(checks) ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "diffsnr: SNR metrics and RMSE sweeps for numerical differentiation of\n"
      "sampled harmonic signals under harmonic or white sensor noise."};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 1 identity-check failure, 2 configuration error,\n"
      "3 runtime error.");

  Options options;

  const auto add_common = [&](CLI::App* sub, bool with_trials) {
    sub->add_option("--out", options.out_path,
                    "Output CSV path ('-' for stdout; default <subcommand>.csv)");
    sub->add_option("--seed", options.seed, "Base seed for white-noise trials");
    if (with_trials) {
      sub->add_option("--trials", options.trials,
                      "Monte Carlo trials per white-noise grid point");
    }
  };

  auto* example1 = app.add_subcommand(
      "example1",
      "Harmonic-noise sweep, locked parameters: A=50, omega=1 rad/s, An=1, "
      "omega_n = 0..10 rad/s, Ts=0.01 s");
  add_common(example1, false);

  auto* example2 = app.add_subcommand(
      "example2",
      "Harmonic-noise sweep, locked parameters: A=1, omega=2*pi rad/s, An=0.2, "
      "omega_n = 0..10 rad/s, Ts=0.01 s");
  add_common(example2, false);

  auto* example3 = app.add_subcommand(
      "example3",
      "White-noise sweep, locked parameters: A=1, omega=2*pi rad/s, "
      "sigma in {0.25, 0.5, 1, 2}, Ts=0.01 s, 10 trials");
  add_common(example3, true);

  auto* ratio = app.add_subcommand(
      "ratio",
      "Second/first derivative RMSE ratio vs sigma (white noise), with the "
      "exact constant sqrt(3)/Ts");
  add_common(ratio, true);

  auto* custom = app.add_subcommand("custom", "Run a sweep described by --config FILE");
  custom->add_option("--config", options.config_path, "Sweep configuration file")
      ->required();
  add_common(custom, true);

  auto* check = app.add_subcommand(
      "check", "Verify the closed-form identities on a fixed parameter grid");
  check->add_option("--perturb", options.perturb,
                    "Testing hook: inject an error into the named identity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (example1->parsed()) {
      auto config = diffsnr::example1_config();
      apply_overrides(config, options);
      return run_sweep_command(config, options, "example1.csv");
    }
    if (example2->parsed()) {
      auto config = diffsnr::example2_config();
      apply_overrides(config, options);
      return run_sweep_command(config, options, "example2.csv");
    }
    if (example3->parsed()) {
      auto config = diffsnr::example3_config();
      apply_overrides(config, options);
      return run_sweep_command(config, options, "example3.csv");
    }
    if (ratio->parsed()) {
      auto config = diffsnr::example3_config();
      config.experiment = diffsnr::Experiment::custom;
      apply_overrides(config, options);
      return run_ratio_command(config, options);
    }
    if (custom->parsed()) {
      auto config = diffsnr::parse_config(read_file(options.config_path));
      apply_overrides(config, options);
      return run_sweep_command(config, options, "custom.csv");
    }
    if (check->parsed()) {
      return run_check_command(options);
    }
  } catch (const diffsnr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return kExitOk;
}
