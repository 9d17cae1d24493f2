#pragma once

// Causal streaming estimators of first and second derivatives from
// uniformly sampled data: backward differences and steady-state
// alpha-beta / alpha-beta-gamma tracking filters.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "diffsnr/signals.hpp"

namespace diffsnr {

enum class DifferentiatorKind {
  backward_first,   // (y_k - y_{k-1}) / Ts
  backward_second,  // (y_k - 2 y_{k-1} + y_{k-2}) / Ts^2
  tracking_first,   // alpha-beta filter, velocity output
  tracking_second,  // alpha-beta-gamma filter, acceleration output
};

/// Derivative order estimated by the kind; also the number of leading
/// samples for which no valid output exists.
constexpr int derivative_order(DifferentiatorKind kind) {
  switch (kind) {
    case DifferentiatorKind::backward_first:
    case DifferentiatorKind::tracking_first:
      return 1;
    case DifferentiatorKind::backward_second:
    case DifferentiatorKind::tracking_second:
      return 2;
  }
  return 0;
}

constexpr std::string_view family_tag(DifferentiatorKind kind) {
  switch (kind) {
    case DifferentiatorKind::backward_first:
    case DifferentiatorKind::backward_second:
      return "bd";
    case DifferentiatorKind::tracking_first:
    case DifferentiatorKind::tracking_second:
      return "tf";
  }
  return "";
}

constexpr std::string_view kind_name(DifferentiatorKind kind) {
  switch (kind) {
    case DifferentiatorKind::backward_first:
      return "bd_first";
    case DifferentiatorKind::backward_second:
      return "bd_second";
    case DifferentiatorKind::tracking_first:
      return "tf_first";
    case DifferentiatorKind::tracking_second:
      return "tf_second";
  }
  return "";
}

/// Gains for the tracking filters. gamma is used only by the
/// second-order filter.
struct TrackingGains {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Default gains: alpha = 0.5 with the Benedict-Bordner relation
/// beta = alpha^2/(2 - alpha), and gamma = beta^2/(2*alpha) for the
/// second-order filter.
inline TrackingGains default_tracking_gains(int order) {
  TrackingGains g;
  g.alpha = 0.5;
  g.beta = g.alpha * g.alpha / (2.0 - g.alpha);
  g.gamma = order == 2 ? g.beta * g.beta / (2.0 * g.alpha) : 0.0;
  return g;
}

/// Schur stability of the alpha-beta closed loop:
/// 0 < alpha < 2 and 0 < beta < 4 - 2*alpha.
inline bool tracking_gains_stable_first(const TrackingGains& g) {
  return g.alpha > 0.0 && g.alpha < 2.0 && g.beta > 0.0 && g.beta < 4.0 - 2.0 * g.alpha;
}

/// Schur stability of the alpha-beta-gamma closed loop via the Jury test
/// on the characteristic polynomial. The transition matrix is expressed
/// in (x, Ts*v, Ts^2*a) scaled coordinates, so the result does not
/// depend on the sample time.
inline bool tracking_gains_stable_second(const TrackingGains& g) {
  if (!(g.alpha > 0.0) || !(g.beta > 0.0) || !(g.gamma > 0.0)) return false;
  const double u = 1.0 - g.alpha;
  // Closed-loop matrix for state (x, Ts*v, Ts^2*a) with zero input.
  const double m[3][3] = {
      {u, u, 0.5 * u},
      {-g.beta, 1.0 - g.beta, 1.0 - 0.5 * g.beta},
      {-2.0 * g.gamma, -2.0 * g.gamma, 1.0 - g.gamma},
  };
  const double trace = m[0][0] + m[1][1] + m[2][2];
  double trace_sq = 0.0;  // tr(M^2)
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) trace_sq += m[i][j] * m[j][i];
  }
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  // Characteristic polynomial z^3 + c2 z^2 + c1 z + c0.
  const double c2 = -trace;
  const double c1 = 0.5 * (trace * trace - trace_sq);
  const double c0 = -det;
  const double at_one = 1.0 + c2 + c1 + c0;
  const double at_minus_one = -1.0 + c2 - c1 + c0;
  return std::abs(c0) < 1.0 && at_one > 0.0 && at_minus_one < 0.0 &&
         std::abs(1.0 - c0 * c0) > std::abs(c1 - c0 * c2);
}

inline bool tracking_gains_stable(const TrackingGains& g, int order) {
  return order == 2 ? tracking_gains_stable_second(g) : tracking_gains_stable_first(g);
}

/// Single-owner streaming state. step() returns the derivative estimate
/// once enough history has been consumed, std::nullopt during warm-up.
class Differentiator {
 public:
  explicit Differentiator(DifferentiatorKind kind, double sample_time)
      : Differentiator(kind, sample_time, default_tracking_gains(derivative_order(kind))) {}

  Differentiator(DifferentiatorKind kind, double sample_time, const TrackingGains& gains)
      : kind_(kind), sample_time_(sample_time), gains_(gains) {
    detail::require(sample_time > 0.0, "Differentiator: sample_time must be positive");
    if (kind == DifferentiatorKind::tracking_first ||
        kind == DifferentiatorKind::tracking_second) {
      if (!tracking_gains_stable(gains, derivative_order(kind))) {
        throw std::invalid_argument("Differentiator: unstable tracking gains");
      }
    }
  }

  DifferentiatorKind kind() const { return kind_; }
  int order() const { return derivative_order(kind_); }
  double sample_time() const { return sample_time_; }

  void reset() {
    seen_ = 0;
    history_ = {0.0, 0.0};
    position_ = velocity_ = acceleration_ = 0.0;
  }

  std::optional<double> step(double sample) {
    const std::size_t index = seen_++;
    switch (kind_) {
      case DifferentiatorKind::backward_first: {
        const double prev = history_[0];
        history_[0] = sample;
        if (index < 1) return std::nullopt;
        return (sample - prev) / sample_time_;
      }
      case DifferentiatorKind::backward_second: {
        const double prev1 = history_[0];  // y_{k-1}
        const double prev2 = history_[1];  // y_{k-2}
        history_[1] = prev1;
        history_[0] = sample;
        if (index < 2) return std::nullopt;
        return (sample - 2.0 * prev1 + prev2) / (sample_time_ * sample_time_);
      }
      case DifferentiatorKind::tracking_first: {
        if (index == 0) {
          position_ = sample;
          velocity_ = 0.0;
          return std::nullopt;
        }
        const double predicted = position_ + sample_time_ * velocity_;
        const double residual = sample - predicted;
        position_ = predicted + gains_.alpha * residual;
        velocity_ += gains_.beta / sample_time_ * residual;
        return velocity_;
      }
      case DifferentiatorKind::tracking_second: {
        if (index == 0) {
          position_ = sample;
          velocity_ = 0.0;
          acceleration_ = 0.0;
          return std::nullopt;
        }
        const double ts = sample_time_;
        const double predicted = position_ + ts * velocity_ + 0.5 * ts * ts * acceleration_;
        const double residual = sample - predicted;
        position_ = predicted + gains_.alpha * residual;
        velocity_ = velocity_ + ts * acceleration_ + gains_.beta / ts * residual;
        acceleration_ += 2.0 * gains_.gamma / (ts * ts) * residual;
        if (index < 2) return std::nullopt;
        return acceleration_;
      }
    }
    return std::nullopt;
  }

 private:
  DifferentiatorKind kind_;
  double sample_time_;
  TrackingGains gains_;
  std::size_t seen_ = 0;
  std::array<double, 2> history_{0.0, 0.0};
  double position_ = 0.0;
  double velocity_ = 0.0;
  double acceleration_ = 0.0;
};

/// Batch output aligned to the input indices. Entries before valid_from
/// are NaN and must be excluded from error statistics.
struct EstimateSeries {
  std::vector<double> values;
  std::size_t valid_from = 0;
};

inline EstimateSeries run_differentiator(DifferentiatorKind kind, double sample_time,
                                         std::span<const double> samples,
                                         const TrackingGains& gains) {
  Differentiator diff(kind, sample_time, gains);
  EstimateSeries series;
  series.values.assign(samples.size(), std::numeric_limits<double>::quiet_NaN());
  series.valid_from = static_cast<std::size_t>(diff.order());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (auto estimate = diff.step(samples[k])) series.values[k] = *estimate;
  }
  return series;
}

inline EstimateSeries run_differentiator(DifferentiatorKind kind, double sample_time,
                                         std::span<const double> samples) {
  return run_differentiator(kind, sample_time, samples,
                            default_tracking_gains(derivative_order(kind)));
}

inline EstimateSeries run_differentiator(DifferentiatorKind kind, const SampledTrace& trace) {
  return run_differentiator(kind, trace.sample_time, trace.measured);
}

}  // namespace diffsnr
