#pragma once

// Deterministic parameter sweeps over harmonic- or white-noise grids,
// with Monte Carlo aggregation over trials for white noise.
//
// Reproducibility contract: every white-noise trial draws its seed from
// derive_trial_seed(base_seed, grid_point_key(model), trial_index).
// Seeds depend only on the grid-point parameters and the trial index,
// never on evaluation order or on the point's position in the grid, so
// permuting the grid permutes rows without changing any value.

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "diffsnr/differentiators.hpp"
#include "diffsnr/metrics.hpp"
#include "diffsnr/signals.hpp"

namespace diffsnr {

inline constexpr std::uint64_t kDefaultBaseSeed = 12345;

enum class Experiment { example1, example2, example3, custom };

/// Declarative sweep description. Presets lock the published experiment
/// parameters; custom configs come from the CLI config parser.
struct SweepConfig {
  Experiment experiment = Experiment::custom;
  HarmonicSpec signal;
  std::vector<NoiseModel> noise_grid;
  double sample_time = 0.0;  // s
  double duration = 0.0;     // s; sample count = round(duration / sample_time)
  std::size_t trials = 10;   // white noise only; harmonic points are deterministic
  std::uint64_t base_seed = kDefaultBaseSeed;
  std::vector<DifferentiatorKind> differentiators = {
      DifferentiatorKind::backward_first,
      DifferentiatorKind::backward_second,
      DifferentiatorKind::tracking_first,
      DifferentiatorKind::tracking_second,
  };

  std::size_t sample_count() const {
    return static_cast<std::size_t>(std::llround(duration / sample_time));
  }

  bool white_grid() const { return !noise_grid.empty() && is_white(noise_grid.front()); }

  void validate() const {
    detail::require(sample_time > 0.0, "SweepConfig: sample_time must be positive");
    detail::require(duration > 0.0, "SweepConfig: duration must be positive");
    detail::require(sample_count() >= 3, "SweepConfig: fewer than 3 samples");
    detail::require(trials >= 1, "SweepConfig: trials must be >= 1");
    detail::require(signal.amplitude >= 0.0, "SweepConfig: signal amplitude must be >= 0");
    detail::require(signal.omega >= 0.0, "SweepConfig: signal omega must be >= 0");
    detail::require(!noise_grid.empty(), "SweepConfig: empty noise grid");
    const bool white = is_white(noise_grid.front());
    for (const auto& model : noise_grid) {
      detail::require(is_white(model) == white,
                      "SweepConfig: noise grid must use a single noise kind");
    }
    detail::require(!differentiators.empty(), "SweepConfig: no differentiators selected");
    for (std::size_t i = 0; i < differentiators.size(); ++i) {
      for (std::size_t j = i + 1; j < differentiators.size(); ++j) {
        detail::require(differentiators[i] != differentiators[j],
                        "SweepConfig: duplicate differentiator");
      }
    }
  }

  /// Non-fatal configuration advice (currently: too-short duration).
  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    if (signal.omega > 0.0) {
      const double ten_periods = 10.0 * 2.0 * std::numbers::pi / signal.omega;
      if (duration < ten_periods) {
        std::ostringstream msg;
        msg << "duration " << duration << " s covers fewer than 10 signal periods ("
            << ten_periods << " s); discrete RMS may deviate from the period integral";
        out.push_back(msg.str());
      }
    }
    return out;
  }
};

/// Example presets. Grids and locked parameters:
///   example1: A=50, omega=1 rad/s, harmonic noise An=1, wn = 0..10 rad/s
///   example2: A=1, omega=2*pi rad/s, harmonic noise An=0.2, wn = 0..10 rad/s
///   example3: A=1, omega=2*pi rad/s, white noise sigma in {0.25, 0.5, 1, 2}
/// All use Ts = 0.01 s and 100 signal periods of data.
inline SweepConfig example1_config() {
  SweepConfig config;
  config.experiment = Experiment::example1;
  config.signal = {50.0, 1.0};
  for (int wn = 0; wn <= 10; ++wn) {
    config.noise_grid.push_back(HarmonicNoise{1.0, static_cast<double>(wn)});
  }
  config.sample_time = 0.01;
  config.duration = 100.0 * 2.0 * std::numbers::pi;
  config.trials = 1;
  return config;
}

inline SweepConfig example2_config() {
  SweepConfig config;
  config.experiment = Experiment::example2;
  config.signal = {1.0, 2.0 * std::numbers::pi};
  for (int wn = 0; wn <= 10; ++wn) {
    config.noise_grid.push_back(HarmonicNoise{0.2, static_cast<double>(wn)});
  }
  config.sample_time = 0.01;
  config.duration = 100.0;
  config.trials = 1;
  return config;
}

inline SweepConfig example3_config() {
  SweepConfig config;
  config.experiment = Experiment::example3;
  config.signal = {1.0, 2.0 * std::numbers::pi};
  for (double sigma : {0.25, 0.5, 1.0, 2.0}) {
    config.noise_grid.push_back(WhiteNoise{sigma, 0});
  }
  config.sample_time = 0.01;
  config.duration = 100.0;
  config.trials = 10;
  return config;
}

/// Key identifying a grid point by its parameters (not its position).
inline std::uint64_t grid_point_key(const NoiseModel& model) {
  if (const auto* white = std::get_if<WhiteNoise>(&model)) {
    return splitmix64(std::bit_cast<std::uint64_t>(white->sigma) ^ 0x57A7E0000F00DULL);
  }
  const auto& harmonic = std::get<HarmonicNoise>(model);
  return splitmix64(splitmix64(std::bit_cast<std::uint64_t>(harmonic.amplitude)) ^
                    std::bit_cast<std::uint64_t>(harmonic.omega));
}

/// Pure seed-derivation function for white-noise trials; see the
/// reproducibility contract at the top of this header.
inline std::uint64_t derive_trial_seed(std::uint64_t base_seed, std::uint64_t point_key,
                                       std::uint64_t trial_index) {
  const std::uint64_t mixed = splitmix64(base_seed ^ point_key);
  return splitmix64(mixed ^ splitmix64(trial_index + 0x9E3779B97F4A7C15ULL));
}

/// Measured error statistics for one differentiator at one grid point.
struct DifferentiatorCell {
  DifferentiatorKind kind{};
  double rmse_measured = 0.0;    // RMS over trials of per-trial RMSE
  double rmse_std_error = 0.0;   // sample std of per-trial RMSE / sqrt(trials)
  double rmse_truncation = 0.0;  // RMSE on the noise-free trace (bias audit)
};

/// One grid point of a sweep: the swept parameter, SNR metrics, and
/// per-differentiator measured errors.
struct SweepRow {
  double param = 0.0;  // omega_n (harmonic) or sigma (white)
  bool white = false;
  std::size_t trials = 1;
  MetricReport metrics;
  std::vector<DifferentiatorCell> cells;

  const DifferentiatorCell* find(DifferentiatorKind kind) const {
    for (const auto& cell : cells) {
      if (cell.kind == kind) return &cell;
    }
    return nullptr;
  }
};

namespace detail {

inline const std::vector<double>& truth_for_order(const SampledTrace& trace, int order) {
  return order == 1 ? trace.first_deriv : trace.second_deriv;
}

inline double series_rmse(const EstimateSeries& series, const std::vector<double>& truth) {
  return rmse(series.values, truth, series.valid_from);
}

/// Measured RMSE of one differentiator over one measured array.
inline double measured_rmse(DifferentiatorKind kind, const SampledTrace& trace) {
  const EstimateSeries series = run_differentiator(kind, trace);
  return series_rmse(series, truth_for_order(trace, derivative_order(kind)));
}

inline std::string describe_point(const NoiseModel& model) {
  std::ostringstream out;
  if (const auto* white = std::get_if<WhiteNoise>(&model)) {
    out << "sigma=" << white->sigma;
  } else {
    const auto& harmonic = std::get<HarmonicNoise>(model);
    out << "omega_n=" << harmonic.omega;
  }
  return out.str();
}

/// Fills the measured fields of a report from the row's cells, preferring
/// the backward-difference family.
inline void fill_measured(SweepRow& row) {
  const DifferentiatorCell* sd = row.find(DifferentiatorKind::backward_first);
  const DifferentiatorCell* dd = row.find(DifferentiatorKind::backward_second);
  if (sd == nullptr) {
    for (const auto& cell : row.cells) {
      if (derivative_order(cell.kind) == 1) {
        sd = &cell;
        break;
      }
    }
  }
  if (dd == nullptr) {
    for (const auto& cell : row.cells) {
      if (derivative_order(cell.kind) == 2) {
        dd = &cell;
        break;
      }
    }
  }
  if (sd != nullptr) row.metrics.rmse_sd_measured = sd->rmse_measured;
  if (dd != nullptr) row.metrics.rmse_dd_measured = dd->rmse_measured;
}

}  // namespace detail

/// Monte Carlo estimate of a differentiator's RMSE under white noise.
/// Per-trial RMSEs are aggregated as their root mean square; the second
/// element is the sample standard error across trials.
inline std::pair<double, double> monte_carlo_rmse(const HarmonicSpec& signal, double sigma,
                                                  double sample_time, std::size_t count,
                                                  std::size_t trials,
                                                  std::uint64_t base_seed,
                                                  DifferentiatorKind kind) {
  detail::require(trials >= 1, "monte_carlo_rmse: trials must be >= 1");
  detail::require(count >= 3, "monte_carlo_rmse: need at least 3 samples");
  const std::uint64_t point_key = grid_point_key(NoiseModel{WhiteNoise{sigma, 0}});

  auto clean = sample_harmonic(signal, sample_time, count);
  auto [rate, accel] = true_derivatives(signal, sample_time, count);

  std::vector<double> per_trial(trials, 0.0);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t seed = derive_trial_seed(base_seed, point_key, trial);
    const SampledTrace trace = compose_measurement(clean, rate, accel,
                                                   WhiteNoise{sigma, seed}, sample_time);
    per_trial[trial] = detail::measured_rmse(kind, trace);
  }

  double mean_sq = 0.0;
  for (double v : per_trial) mean_sq += v * v;
  mean_sq /= static_cast<double>(trials);
  const double aggregate = std::sqrt(mean_sq);

  double std_error = 0.0;
  if (trials > 1) {
    double mean = 0.0;
    for (double v : per_trial) mean += v;
    mean /= static_cast<double>(trials);
    double var = 0.0;
    for (double v : per_trial) var += (v - mean) * (v - mean);
    var /= static_cast<double>(trials - 1);
    std_error = std::sqrt(var / static_cast<double>(trials));
  }
  return {aggregate, std_error};
}

/// Runs the sweep: one row per grid point, in grid order. A failing grid
/// point aborts with a diagnostic naming the point.
inline std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  config.validate();
  const std::size_t count = config.sample_count();

  auto clean = sample_harmonic(config.signal, config.sample_time, count);
  auto [rate, accel] = true_derivatives(config.signal, config.sample_time, count);

  // Noise-free baseline: truncation bias of each differentiator.
  const SampledTrace clean_trace = compose_measurement(
      clean, rate, accel, HarmonicNoise{0.0, 0.0}, config.sample_time);
  std::vector<double> truncation(config.differentiators.size(), 0.0);
  for (std::size_t d = 0; d < config.differentiators.size(); ++d) {
    truncation[d] = detail::measured_rmse(config.differentiators[d], clean_trace);
  }

  std::vector<SweepRow> rows;
  rows.reserve(config.noise_grid.size());
  for (std::size_t gi = 0; gi < config.noise_grid.size(); ++gi) {
    const NoiseModel& model = config.noise_grid[gi];
    try {
      SweepRow row;
      row.white = is_white(model);
      for (std::size_t d = 0; d < config.differentiators.size(); ++d) {
        DifferentiatorCell cell;
        cell.kind = config.differentiators[d];
        cell.rmse_truncation = truncation[d];
        row.cells.push_back(cell);
      }

      if (const auto* harmonic = std::get_if<HarmonicNoise>(&model)) {
        row.param = harmonic->omega;
        row.trials = 1;
        const SampledTrace trace =
            compose_measurement(clean, rate, accel, model, config.sample_time);
        for (auto& cell : row.cells) {
          cell.rmse_measured = detail::measured_rmse(cell.kind, trace);
        }

        if (config.signal.amplitude > 0.0 && harmonic->amplitude > 0.0) {
          row.metrics.snr_amp_db = snr_amp_db(config.signal.amplitude, harmonic->amplitude);
        }
        const auto noise = noise_samples(model, config.sample_time, count);
        if (rms(noise) > 0.0) {
          row.metrics.snr_eng_db = snr_eng_db(trace.measured, noise);
        }
        if (harmonic->amplitude > 0.0 && harmonic->omega > 0.0) {
          row.metrics.snr_sd = snr_harmonic(harmonic->amplitude, harmonic->omega, 1);
          row.metrics.snr_dd = snr_harmonic(harmonic->amplitude, harmonic->omega, 2);
        }
        row.metrics.rmse_sd_exact =
            exact_rmse_harmonic(harmonic->amplitude, harmonic->omega, 1);
        row.metrics.rmse_dd_exact =
            exact_rmse_harmonic(harmonic->amplitude, harmonic->omega, 2);
      } else {
        const auto& white = std::get<WhiteNoise>(model);
        row.param = white.sigma;
        row.trials = config.trials;
        const std::uint64_t point_key = grid_point_key(model);

        std::vector<std::vector<double>> per_trial(row.cells.size(),
                                                   std::vector<double>(config.trials, 0.0));
        for (std::size_t trial = 0; trial < config.trials; ++trial) {
          const std::uint64_t seed =
              derive_trial_seed(config.base_seed, point_key, trial);
          const SampledTrace trace = compose_measurement(
              clean, rate, accel, WhiteNoise{white.sigma, seed}, config.sample_time);
          for (std::size_t d = 0; d < row.cells.size(); ++d) {
            per_trial[d][trial] = detail::measured_rmse(row.cells[d].kind, trace);
          }
        }
        for (std::size_t d = 0; d < row.cells.size(); ++d) {
          double mean_sq = 0.0;
          double mean = 0.0;
          for (double v : per_trial[d]) {
            mean_sq += v * v;
            mean += v;
          }
          mean_sq /= static_cast<double>(config.trials);
          mean /= static_cast<double>(config.trials);
          row.cells[d].rmse_measured = std::sqrt(mean_sq);
          if (config.trials > 1) {
            double var = 0.0;
            for (double v : per_trial[d]) var += (v - mean) * (v - mean);
            var /= static_cast<double>(config.trials - 1);
            row.cells[d].rmse_std_error = std::sqrt(var / static_cast<double>(config.trials));
          }
        }

        if (config.signal.amplitude > 0.0 && white.sigma > 0.0) {
          row.metrics.snr0 = snr0(config.signal.amplitude, white.sigma);
        }
        if (white.sigma > 0.0) {
          row.metrics.snr_sd = snr_white(white.sigma, config.sample_time, 1);
          row.metrics.snr_dd = snr_white(white.sigma, config.sample_time, 2);
        }
        row.metrics.rmse_sd_exact = exact_rmse_white(white.sigma, config.sample_time, 1);
        row.metrics.rmse_dd_exact = exact_rmse_white(white.sigma, config.sample_time, 2);
      }

      detail::fill_measured(row);
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep grid point " + std::to_string(gi) + " (" +
                               detail::describe_point(model) + "): " + e.what());
    }
  }
  return rows;
}

/// One row of the RMSE-ratio sweep (white noise only).
struct RatioRow {
  double sigma = 0.0;
  double bd_ratio = 0.0;                // measured RMSE_dd / RMSE_sd, backward differences
  std::optional<double> tf_ratio;       // same for the tracking filters, when configured
  double exact_ratio = 0.0;             // sqrt(3) / Ts
};

/// Ratio of measured second- to first-derivative RMSE per sigma,
/// alongside the constant sqrt(3)/Ts.
inline std::vector<RatioRow> ratio_sweep(const SweepConfig& config) {
  config.validate();
  detail::require(config.white_grid(), "ratio_sweep: requires a white-noise grid");
  bool has_bd_pair = false;
  bool has_tf_pair = false;
  {
    bool bd1 = false, bd2 = false, tf1 = false, tf2 = false;
    for (auto kind : config.differentiators) {
      bd1 |= kind == DifferentiatorKind::backward_first;
      bd2 |= kind == DifferentiatorKind::backward_second;
      tf1 |= kind == DifferentiatorKind::tracking_first;
      tf2 |= kind == DifferentiatorKind::tracking_second;
    }
    has_bd_pair = bd1 && bd2;
    has_tf_pair = tf1 && tf2;
  }
  detail::require(has_bd_pair,
                  "ratio_sweep: config must include both backward-difference orders");

  const auto rows = run_sweep(config);
  std::vector<RatioRow> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    RatioRow ratio;
    ratio.sigma = row.param;
    ratio.exact_ratio = rmse_ratio_white(config.sample_time);
    const auto* sd = row.find(DifferentiatorKind::backward_first);
    const auto* dd = row.find(DifferentiatorKind::backward_second);
    if (sd->rmse_measured <= 0.0) {
      throw std::domain_error("ratio_sweep: sigma=" + std::to_string(row.param) +
                              ": first-derivative RMSE is zero, ratio undefined");
    }
    ratio.bd_ratio = dd->rmse_measured / sd->rmse_measured;
    if (has_tf_pair) {
      const auto* tf_sd = row.find(DifferentiatorKind::tracking_first);
      const auto* tf_dd = row.find(DifferentiatorKind::tracking_second);
      if (tf_sd->rmse_measured <= 0.0) {
        throw std::domain_error("ratio_sweep: sigma=" + std::to_string(row.param) +
                                ": first-derivative RMSE is zero, ratio undefined");
      }
      ratio.tf_ratio = tf_dd->rmse_measured / tf_sd->rmse_measured;
    }
    out.push_back(ratio);
  }
  return out;
}

}  // namespace diffsnr
