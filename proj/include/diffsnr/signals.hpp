#pragma once

// Sampled harmonic test signals, sensor-noise models, and composed
// measurement traces carrying analytic ground-truth derivatives.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace diffsnr {

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace detail

/// Pure sinusoid amplitude*sin(omega*t) together with its analytic
/// first and second derivatives.
struct HarmonicSpec {
  double amplitude = 0.0;  // signal units, >= 0
  double omega = 0.0;      // angular frequency, rad/s, >= 0

  double value_at(double t) const { return amplitude * std::sin(omega * t); }
  double rate_at(double t) const { return amplitude * omega * std::cos(omega * t); }
  double accel_at(double t) const { return -amplitude * omega * omega * std::sin(omega * t); }
};

/// Additive sinusoidal disturbance amplitude*sin(omega*t).
struct HarmonicNoise {
  double amplitude = 0.0;  // >= 0
  double omega = 0.0;      // rad/s, >= 0
};

/// Zero-mean i.i.d. Gaussian samples; sigma is the standard deviation.
struct WhiteNoise {
  double sigma = 0.0;      // >= 0
  std::uint64_t seed = 0;  // same (sigma, seed, count) reproduces identical samples
};

using NoiseModel = std::variant<HarmonicNoise, WhiteNoise>;

inline bool is_white(const NoiseModel& model) {
  return std::holds_alternative<WhiteNoise>(model);
}

/// Uniformly sampled measurement plus aligned truth arrays.
/// All arrays share one length (>= 3); sample k sits at t = k*sample_time.
struct SampledTrace {
  double sample_time = 0.0;
  std::vector<double> measured;      // clean + noise
  std::vector<double> clean;
  std::vector<double> first_deriv;   // d/dt of clean
  std::vector<double> second_deriv;  // d^2/dt^2 of clean

  std::size_t size() const { return measured.size(); }
};

/// Samples amplitude*sin(omega*k*sample_time) for k = 0..count-1.
inline std::vector<double> sample_harmonic(const HarmonicSpec& spec, double sample_time,
                                           std::size_t count) {
  detail::require(spec.amplitude >= 0.0, "sample_harmonic: amplitude must be >= 0");
  detail::require(spec.omega >= 0.0, "sample_harmonic: omega must be >= 0");
  detail::require(sample_time > 0.0, "sample_harmonic: sample_time must be positive");
  detail::require(count >= 1, "sample_harmonic: count must be >= 1");
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = spec.value_at(static_cast<double>(k) * sample_time);
  }
  return out;
}

/// Analytic first and second derivatives of the sinusoid on the same grid.
inline std::pair<std::vector<double>, std::vector<double>> true_derivatives(
    const HarmonicSpec& spec, double sample_time, std::size_t count) {
  detail::require(spec.amplitude >= 0.0, "true_derivatives: amplitude must be >= 0");
  detail::require(spec.omega >= 0.0, "true_derivatives: omega must be >= 0");
  detail::require(sample_time > 0.0, "true_derivatives: sample_time must be positive");
  detail::require(count >= 1, "true_derivatives: count must be >= 1");
  std::vector<double> rate(count);
  std::vector<double> accel(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) * sample_time;
    rate[k] = spec.rate_at(t);
    accel[k] = spec.accel_at(t);
  }
  return {std::move(rate), std::move(accel)};
}

/// splitmix64 mixing step; a bijection on 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Draws count zero-mean Gaussian samples with standard deviation sigma.
///
/// The generator is pinned: mt19937_64 drives a Box-Muller transform on
/// 53-bit uniforms. Both pieces are fully specified, so a given
/// (sigma, seed, count) reproduces bit-identical output on any
/// conforming platform, and shorter requests are prefixes of longer ones.
inline std::vector<double> gen_white_noise(double sigma, std::uint64_t seed,
                                           std::size_t count) {
  detail::require(sigma >= 0.0, "gen_white_noise: sigma must be >= 0");
  std::vector<double> out(count);
  std::mt19937_64 engine(seed);
  constexpr double kInv2To53 = 1.0 / 9007199254740992.0;  // 2^-53
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  std::size_t i = 0;
  while (i < count) {
    const double u1 = static_cast<double>((engine() >> 11) + 1) * kInv2To53;  // (0, 1]
    const double u2 = static_cast<double>(engine() >> 11) * kInv2To53;        // [0, 1)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    out[i++] = sigma * radius * std::cos(kTwoPi * u2);
    if (i < count) out[i++] = sigma * radius * std::sin(kTwoPi * u2);
  }
  return out;
}

/// Noise samples on the uniform grid t = k*sample_time for either model.
inline std::vector<double> noise_samples(const NoiseModel& model, double sample_time,
                                         std::size_t count) {
  if (const auto* harmonic = std::get_if<HarmonicNoise>(&model)) {
    detail::require(harmonic->amplitude >= 0.0, "noise_samples: amplitude must be >= 0");
    detail::require(harmonic->omega >= 0.0, "noise_samples: omega must be >= 0");
    return sample_harmonic(HarmonicSpec{harmonic->amplitude, harmonic->omega}, sample_time,
                           count);
  }
  const auto& white = std::get<WhiteNoise>(model);
  return gen_white_noise(white.sigma, white.seed, count);
}

/// Builds a trace from explicit signal/truth arrays: measured = clean + noise.
inline SampledTrace compose_measurement(std::vector<double> clean,
                                        std::vector<double> first_deriv,
                                        std::vector<double> second_deriv,
                                        const NoiseModel& noise, double sample_time) {
  detail::require(sample_time > 0.0, "compose_measurement: sample_time must be positive");
  detail::require(!clean.empty(), "compose_measurement: signal must be non-empty");
  detail::require(clean.size() == first_deriv.size() && clean.size() == second_deriv.size(),
                  "compose_measurement: array length mismatch");
  detail::require(clean.size() >= 3, "compose_measurement: need at least 3 samples");

  SampledTrace trace;
  trace.sample_time = sample_time;
  const std::vector<double> noise_values = noise_samples(noise, sample_time, clean.size());
  trace.measured.resize(clean.size());
  for (std::size_t k = 0; k < clean.size(); ++k) {
    trace.measured[k] = clean[k] + noise_values[k];
  }
  trace.clean = std::move(clean);
  trace.first_deriv = std::move(first_deriv);
  trace.second_deriv = std::move(second_deriv);
  return trace;
}

/// Convenience overload: samples the sinusoid and its derivatives, then composes.
inline SampledTrace compose_measurement(const HarmonicSpec& spec, const NoiseModel& noise,
                                        double sample_time, std::size_t count) {
  detail::require(count >= 3, "compose_measurement: need at least 3 samples");
  auto clean = sample_harmonic(spec, sample_time, count);
  auto [rate, accel] = true_derivatives(spec, sample_time, count);
  return compose_measurement(std::move(clean), std::move(rate), std::move(accel), noise,
                             sample_time);
}

}  // namespace diffsnr
