#pragma once

// RMS/RMSE computation, every SNR variant used by the sweeps, and the
// closed-form RMSE predictions for harmonic and white sensor noise.
//
// Closed forms, with An/wn the harmonic-noise amplitude and frequency,
// sigma the white-noise standard deviation and Ts the sample time:
//   harmonic:  RMSE_sd = An*wn/sqrt(2)        SNR_sd = 1/(An*wn)
//              RMSE_dd = An*wn^2/sqrt(2)      SNR_dd = 1/(An*wn^2)
//   white:     RMSE_sd = sqrt(2)*sigma/Ts     SNR_sd = Ts/sigma
//              RMSE_dd = sqrt(6)*sigma/Ts^2   SNR_dd = Ts^2/sigma
//              RMSE_dd/RMSE_sd = sqrt(3)/Ts

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace diffsnr {

namespace detail {

inline void require_metric(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

inline void require_order(int order, const char* message) {
  if (order != 1 && order != 2) throw std::invalid_argument(message);
}

}  // namespace detail

/// Root-mean-square of a non-empty sample set.
inline double rms(std::span<const double> values) {
  detail::require_metric(!values.empty(), "rms: empty array");
  double sum_sq = 0.0;
  for (double v : values) sum_sq += v * v;
  return std::sqrt(sum_sq / static_cast<double>(values.size()));
}

/// RMS of (estimate - truth) over indices >= valid_from. Entries before
/// valid_from (a differentiator's warm-up prefix) are excluded.
inline double rmse(std::span<const double> estimate, std::span<const double> truth,
                   std::size_t valid_from = 0) {
  detail::require_metric(estimate.size() == truth.size(), "rmse: length mismatch");
  detail::require_metric(valid_from < estimate.size(), "rmse: valid_from out of range");
  double sum_sq = 0.0;
  for (std::size_t k = valid_from; k < estimate.size(); ++k) {
    const double e = estimate[k] - truth[k];
    sum_sq += e * e;
  }
  return std::sqrt(sum_sq / static_cast<double>(estimate.size() - valid_from));
}

/// Amplitude-based SNR in dB: 20*log10(A/An).
inline double snr_amp_db(double signal_amplitude, double noise_amplitude) {
  detail::require_metric(signal_amplitude > 0.0 && noise_amplitude > 0.0,
                         "snr_amp_db: amplitudes must be positive");
  return 20.0 * std::log10(signal_amplitude / noise_amplitude);
}

/// Sample-based SNR in dB: 20*log10(rms(measured)/rms(noise)).
/// Throws std::domain_error when the noise RMS is zero (SNR undefined).
inline double snr_eng_db(std::span<const double> measured, std::span<const double> noise) {
  detail::require_metric(measured.size() == noise.size() && !measured.empty(),
                         "snr_eng_db: arrays must be non-empty and equal length");
  const double noise_rms = rms(noise);
  if (noise_rms <= 0.0) throw std::domain_error("snr_eng_db: zero noise RMS, SNR undefined");
  return 20.0 * std::log10(rms(measured) / noise_rms);
}

/// Exact RMSE of differentiating the harmonic-noise term: An*wn^order/sqrt(2).
inline double exact_rmse_harmonic(double noise_amplitude, double noise_omega, int order) {
  detail::require_metric(noise_amplitude >= 0.0 && noise_omega >= 0.0,
                         "exact_rmse_harmonic: negative parameter");
  detail::require_order(order, "exact_rmse_harmonic: order must be 1 or 2");
  const double scale = order == 1 ? noise_omega : noise_omega * noise_omega;
  return noise_amplitude * scale / std::numbers::sqrt2;
}

/// Differentiation SNR for harmonic noise: 1/(An*wn) or 1/(An*wn^2).
inline double snr_harmonic(double noise_amplitude, double noise_omega, int order) {
  detail::require_metric(noise_amplitude > 0.0 && noise_omega > 0.0,
                         "snr_harmonic: parameters must be positive");
  detail::require_order(order, "snr_harmonic: order must be 1 or 2");
  const double scale = order == 1 ? noise_omega : noise_omega * noise_omega;
  return 1.0 / (noise_amplitude * scale);
}

/// Exact RMSE of differencing sampled white noise:
/// sqrt(2)*sigma/Ts or sqrt(6)*sigma/Ts^2.
inline double exact_rmse_white(double sigma, double sample_time, int order) {
  detail::require_metric(sigma >= 0.0, "exact_rmse_white: sigma must be >= 0");
  detail::require_metric(sample_time > 0.0, "exact_rmse_white: sample_time must be positive");
  detail::require_order(order, "exact_rmse_white: order must be 1 or 2");
  if (order == 1) return std::numbers::sqrt2 * sigma / sample_time;
  return std::sqrt(6.0) * sigma / (sample_time * sample_time);
}

/// Differentiation SNR for white noise: Ts/sigma or Ts^2/sigma.
inline double snr_white(double sigma, double sample_time, int order) {
  detail::require_metric(sigma > 0.0 && sample_time > 0.0,
                         "snr_white: parameters must be positive");
  detail::require_order(order, "snr_white: order must be 1 or 2");
  return order == 1 ? sample_time / sigma : sample_time * sample_time / sigma;
}

/// Raw measurement SNR for white noise: A/sigma.
inline double snr0(double signal_amplitude, double sigma) {
  detail::require_metric(signal_amplitude > 0.0 && sigma > 0.0,
                         "snr0: parameters must be positive");
  return signal_amplitude / sigma;
}

/// Constant ratio RMSE_dd/RMSE_sd for white noise: sqrt(3)/Ts.
inline double rmse_ratio_white(double sample_time) {
  detail::require_metric(sample_time > 0.0, "rmse_ratio_white: sample_time must be positive");
  return std::numbers::sqrt3 / sample_time;
}

/// Variance of the backward difference of white noise:
/// 2*sigma^2/Ts^2 (first order) or 6*sigma^2/Ts^4 (second order).
inline double noise_derivative_variance(double sigma, double sample_time, int order) {
  detail::require_metric(sigma >= 0.0, "noise_derivative_variance: sigma must be >= 0");
  detail::require_metric(sample_time > 0.0,
                         "noise_derivative_variance: sample_time must be positive");
  detail::require_order(order, "noise_derivative_variance: order must be 1 or 2");
  const double ts_sq = sample_time * sample_time;
  if (order == 1) return 2.0 * sigma * sigma / ts_sq;
  return 6.0 * sigma * sigma / (ts_sq * ts_sq);
}

namespace detail {

/// Ranks with ties replaced by their average rank (1-based).
inline std::vector<double> fractional_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace detail

/// Spearman rank correlation (Pearson correlation of fractional ranks).
inline double spearman_rank_correlation(std::span<const double> a,
                                        std::span<const double> b) {
  detail::require_metric(a.size() == b.size(), "spearman: length mismatch");
  detail::require_metric(a.size() >= 2, "spearman: need at least two points");
  const auto ra = detail::fractional_ranks(a);
  const auto rb = detail::fractional_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double da = ra[k] - mean;
    const double db = rb[k] - mean;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  detail::require_metric(var_a > 0.0 && var_b > 0.0, "spearman: constant input");
  return cov / std::sqrt(var_a * var_b);
}

/// All SNR variants and measured/exact RMSE values for one experiment
/// point. Fields defined only under one noise model are nullopt under
/// the other.
struct MetricReport {
  std::optional<double> snr_amp_db;   // dB, harmonic noise only
  std::optional<double> snr_eng_db;   // dB, harmonic noise only
  std::optional<double> snr0;         // linear, white noise only
  std::optional<double> snr_sd;       // linear differentiation SNR, order 1
  std::optional<double> snr_dd;       // linear differentiation SNR, order 2
  std::optional<double> rmse_sd_exact;
  std::optional<double> rmse_dd_exact;
  double rmse_sd_measured = std::numeric_limits<double>::quiet_NaN();
  double rmse_dd_measured = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace diffsnr
