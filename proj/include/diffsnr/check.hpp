#pragma once

// Closed-form identity suite behind the `check` CLI subcommand. Each
// identity is evaluated over a 5x5 parameter grid and reported with its
// worst dimensionless residual. A named identity can be perturbed to
// verify that the suite actually detects violations (negative control).

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "diffsnr/metrics.hpp"

namespace diffsnr {

struct IdentityCheck {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 1e-12;
  bool pass = false;
};

inline const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names = {
      "harmonic_sd_rmse_snr",    "harmonic_dd_rmse_snr",    "white_sd_rmse_snr",
      "white_dd_rmse_snr",       "white_sd_rmse_variance",  "white_dd_rmse_variance",
      "white_rmse_ratio",
  };
  return names;
}

/// Evaluates every identity; pass perturb_name (a test hook) to inject a
/// relative error of 1e-9 into one identity and watch it fail.
inline std::vector<IdentityCheck> check_formulas(std::string_view perturb_name = {}) {
  constexpr double kTolerance = 1e-12;
  const double harmonic_amplitudes[] = {0.05, 0.2, 1.0, 2.5, 10.0};
  const double harmonic_omegas[] = {0.5, 1.0, 5.0, 2.0 * std::numbers::pi, 10.0};
  const double sigmas[] = {0.01, 0.25, 1.0, 2.0, 10.0};
  const double sample_times[] = {0.001, 0.005, 0.01, 0.1, 1.0};

  std::vector<IdentityCheck> checks;
  for (const auto& name : identity_names()) {
    checks.push_back(IdentityCheck{name, 0.0, kTolerance, false});
  }
  const auto nudge = [&](const std::string& name) {
    return name == perturb_name ? 1.0 + 1e-9 : 1.0;
  };
  const auto record = [&](const std::string& name, double residual) {
    for (auto& check : checks) {
      if (check.name == name && residual > check.max_residual) {
        check.max_residual = residual;
      }
    }
  };

  for (double amplitude : harmonic_amplitudes) {
    for (double omega : harmonic_omegas) {
      // RMSE = 1/(sqrt(2) * SNR) for both differentiation orders.
      for (int order : {1, 2}) {
        const std::string name =
            order == 1 ? "harmonic_sd_rmse_snr" : "harmonic_dd_rmse_snr";
        const double lhs =
            exact_rmse_harmonic(amplitude, omega, order) * nudge(name);
        const double rhs =
            1.0 / (std::numbers::sqrt2 * snr_harmonic(amplitude, omega, order));
        record(name, std::abs(lhs / rhs - 1.0));
      }
    }
  }

  for (double sigma : sigmas) {
    for (double ts : sample_times) {
      // RMSE * SNR = sqrt(2) (order 1) and sqrt(6) (order 2).
      {
        const std::string name = "white_sd_rmse_snr";
        const double lhs = exact_rmse_white(sigma, ts, 1) * snr_white(sigma, ts, 1);
        record(name, std::abs(lhs * nudge(name) / std::numbers::sqrt2 - 1.0));
      }
      {
        const std::string name = "white_dd_rmse_snr";
        const double lhs = exact_rmse_white(sigma, ts, 2) * snr_white(sigma, ts, 2);
        record(name, std::abs(lhs * nudge(name) / std::sqrt(6.0) - 1.0));
      }
      // RMSE equals the standard deviation of the differenced noise.
      for (int order : {1, 2}) {
        const std::string name =
            order == 1 ? "white_sd_rmse_variance" : "white_dd_rmse_variance";
        const double lhs = exact_rmse_white(sigma, ts, order) * nudge(name);
        const double rhs = std::sqrt(noise_derivative_variance(sigma, ts, order));
        record(name, std::abs(lhs / rhs - 1.0));
      }
      // RMSE_dd / RMSE_sd = sqrt(3) / Ts.
      {
        const std::string name = "white_rmse_ratio";
        const double lhs =
            exact_rmse_white(sigma, ts, 2) / exact_rmse_white(sigma, ts, 1) * nudge(name);
        record(name, std::abs(lhs / rmse_ratio_white(ts) - 1.0));
      }
    }
  }

  for (auto& check : checks) check.pass = check.max_residual < check.tolerance;
  return checks;
}

inline bool all_identities_pass(const std::vector<IdentityCheck>& checks) {
  for (const auto& check : checks) {
    if (!check.pass) return false;
  }
  return true;
}

inline void print_identity_report(const std::vector<IdentityCheck>& checks,
                                  std::ostream& out) {
  for (const auto& check : checks) {
    out << (check.pass ? "PASS" : "FAIL") << "  " << check.name
        << "  max residual " << check.max_residual << " (tolerance " << check.tolerance
        << ")\n";
  }
}

}  // namespace diffsnr
