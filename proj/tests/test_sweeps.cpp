#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "diffsnr/sweeps.hpp"

using Catch::Approx;
using namespace diffsnr;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool rows_identical(const SweepRow& a, const SweepRow& b) {
  if (a.param != b.param || a.trials != b.trials || a.cells.size() != b.cells.size()) {
    return false;
  }
  for (std::size_t d = 0; d < a.cells.size(); ++d) {
    if (a.cells[d].kind != b.cells[d].kind ||
        a.cells[d].rmse_measured != b.cells[d].rmse_measured ||
        a.cells[d].rmse_std_error != b.cells[d].rmse_std_error ||
        a.cells[d].rmse_truncation != b.cells[d].rmse_truncation) {
      return false;
    }
  }
  return true;
}

}  // namespace

// =============================================================================
// Presets
// =============================================================================

TEST_CASE("example1 preset: grid shape and the omega_n = 0 row", "[sweeps]") {
  const auto config = example1_config();
  REQUIRE(config.noise_grid.size() == 11);
  REQUIRE(config.signal.amplitude == 50.0);
  REQUIRE(config.signal.omega == 1.0);
  REQUIRE(config.sample_time == 0.01);

  const auto rows = run_sweep(config);
  REQUIRE(rows.size() == 11);
  for (std::size_t gi = 0; gi < rows.size(); ++gi) {
    REQUIRE(rows[gi].param == static_cast<double>(gi));
  }

  // Zero-frequency noise vanishes: the measured error is pure truncation
  // and the differentiation SNR is undefined.
  const auto& zero_row = rows.front();
  REQUIRE(zero_row.metrics.rmse_sd_exact.value() == 0.0);
  REQUIRE(zero_row.metrics.rmse_dd_exact.value() == 0.0);
  REQUIRE_FALSE(zero_row.metrics.snr_sd.has_value());
  REQUIRE_FALSE(zero_row.metrics.snr_eng_db.has_value());
  for (const auto& cell : zero_row.cells) {
    REQUIRE(cell.rmse_measured == cell.rmse_truncation);
  }
}

TEST_CASE("example2 preset: measured errors track the closed form", "[sweeps][oracle]") {
  const auto rows = run_sweep(example2_config());
  REQUIRE(rows.size() == 11);

  SECTION("omega_n = 10: backward-difference RMSE within 10% of An*wn/sqrt(2)") {
    const auto& row = rows.back();
    const auto* cell = row.find(DifferentiatorKind::backward_first);
    REQUIRE(cell != nullptr);
    REQUIRE(cell->rmse_measured ==
            Approx(0.2 * 10.0 / std::numbers::sqrt2).epsilon(0.10));
  }

  SECTION("measured first-derivative RMSE is nondecreasing for omega_n >= 1") {
    double previous = 0.0;
    for (std::size_t gi = 1; gi < rows.size(); ++gi) {
      const auto* cell = rows[gi].find(DifferentiatorKind::backward_first);
      REQUIRE(cell->rmse_measured >= previous);
      previous = cell->rmse_measured;
    }
  }

  SECTION("exact columns match the metrics formulas bit-for-bit") {
    for (const auto& row : rows) {
      REQUIRE(row.metrics.rmse_sd_exact.value() ==
              exact_rmse_harmonic(0.2, row.param, 1));
      REQUIRE(row.metrics.rmse_dd_exact.value() ==
              exact_rmse_harmonic(0.2, row.param, 2));
    }
  }
}

TEST_CASE("example3 preset: white grid with snr0 populated", "[sweeps]") {
  const auto config = example3_config();
  REQUIRE(config.white_grid());
  REQUIRE(config.trials == 10);
  const auto rows = run_sweep(config);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    REQUIRE(row.trials == 10);
    REQUIRE(row.metrics.snr0.value() == Approx(1.0 / row.param));
    REQUIRE_FALSE(row.metrics.snr_amp_db.has_value());
    REQUIRE(row.metrics.rmse_sd_exact.value() ==
            exact_rmse_white(row.param, 0.01, 1));
  }
}

TEST_CASE("degenerate single-point grid with zero noise", "[sweeps]") {
  SweepConfig config;
  config.signal = {1.0, kTwoPi};
  config.noise_grid = {NoiseModel{HarmonicNoise{0.0, 0.0}}};
  config.sample_time = 0.01;
  config.duration = 10.0;
  const auto rows = run_sweep(config);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].metrics.rmse_sd_exact.value() == 0.0);
  for (const auto& cell : rows[0].cells) {
    REQUIRE(cell.rmse_measured == cell.rmse_truncation);
    REQUIRE(cell.rmse_measured > 0.0);  // pure truncation error
  }
}

TEST_CASE("example1: naive SNRs stay flat while the measured RMSE grows",
          "[sweeps][oracle]") {
  const auto rows = run_sweep(example1_config());

  // snr_amp never moves: 20*log10(50) everywhere.
  for (std::size_t gi = 1; gi < rows.size(); ++gi) {
    REQUIRE(rows[gi].metrics.snr_amp_db.value() == Approx(33.97940).margin(5e-5));
  }

  // snr_eng is constant (quadrature closed form 10*log10(2501)) at every
  // incoherent grid point. At omega_n = 1 the noise is phase-locked to the
  // signal, so the sampled RMS adds coherently: 20*log10(51), a +0.170 dB
  // outlier. Both values are pinned here.
  for (std::size_t gi = 2; gi < rows.size(); ++gi) {
    REQUIRE(rows[gi].metrics.snr_eng_db.value() ==
            Approx(10.0 * std::log10(2501.0)).margin(2e-3));
  }
  REQUIRE(rows[1].metrics.snr_eng_db.value() ==
          Approx(20.0 * std::log10(51.0)).margin(2e-3));
  REQUIRE(rows[1].metrics.snr_eng_db.value() - rows[2].metrics.snr_eng_db.value() ==
          Approx(0.17027).margin(2e-3));

  // Meanwhile the measured first-derivative error grows roughly tenfold.
  const double first =
      rows[1].find(DifferentiatorKind::backward_first)->rmse_measured;
  const double last =
      rows[10].find(DifferentiatorKind::backward_first)->rmse_measured;
  REQUIRE(last / first >= 9.0);
}

TEST_CASE("example2: measured RMSE ranks exactly with 1/snr", "[sweeps][property]") {
  // Perfect monotone agreement between the measured error and the inverse
  // differentiation SNR over omega_n = 1..10, for both orders.
  const auto rows = run_sweep(example2_config());
  std::vector<double> measured_sd, measured_dd, inv_snr_sd, inv_snr_dd;
  for (std::size_t gi = 1; gi < rows.size(); ++gi) {
    measured_sd.push_back(rows[gi].find(DifferentiatorKind::backward_first)->rmse_measured);
    measured_dd.push_back(rows[gi].find(DifferentiatorKind::backward_second)->rmse_measured);
    inv_snr_sd.push_back(1.0 / rows[gi].metrics.snr_sd.value());
    inv_snr_dd.push_back(1.0 / rows[gi].metrics.snr_dd.value());
  }
  REQUIRE(spearman_rank_correlation(measured_sd, inv_snr_sd) ==
          Approx(1.0).margin(1e-12));
  REQUIRE(spearman_rank_correlation(measured_dd, inv_snr_dd) ==
          Approx(1.0).margin(1e-12));
}

// =============================================================================
// Monte Carlo aggregation
// =============================================================================

TEST_CASE("monte_carlo_rmse: zero sigma collapses to the truncation error",
          "[sweeps][mc]") {
  const auto [mean, std_error] = monte_carlo_rmse(
      {1.0, kTwoPi}, 0.0, 0.01, 2000, 5, 1, DifferentiatorKind::backward_first);
  REQUIRE(std_error == 0.0);
  // Same value as a noise-free run.
  const auto trace =
      compose_measurement({1.0, kTwoPi}, HarmonicNoise{0.0, 0.0}, 0.01, 2000);
  const auto series = run_differentiator(DifferentiatorKind::backward_first, trace);
  REQUIRE(mean == rmse(series.values, trace.first_deriv, series.valid_from));
}

TEST_CASE("monte_carlo_rmse: white-noise RMSE matches sqrt(2)*sigma/Ts",
          "[sweeps][mc][statistical]") {
  const auto [mean, std_error] = monte_carlo_rmse(
      {1.0, kTwoPi}, 1.0, 0.01, 100'000, 10, 2025, DifferentiatorKind::backward_first);
  REQUIRE(mean == Approx(141.421356).epsilon(0.02));
  REQUIRE(std_error < 0.01 * mean);
}

TEST_CASE("monte_carlo_rmse: second order matches sqrt(6)*sigma/Ts^2",
          "[sweeps][mc][statistical]") {
  const auto [mean, std_error] = monte_carlo_rmse(
      {1.0, kTwoPi}, 1.0, 0.01, 100'000, 10, 2025, DifferentiatorKind::backward_second);
  REQUIRE(mean == Approx(24494.8974).epsilon(0.02));
  REQUIRE(std_error < 0.01 * mean);
}

TEST_CASE("monte_carlo_rmse agrees with the matching sweep cell", "[sweeps][mc]") {
  SweepConfig config;
  config.signal = {1.0, kTwoPi};
  config.noise_grid = {NoiseModel{WhiteNoise{0.7, 0}}};
  config.sample_time = 0.01;
  config.duration = 20.0;
  config.trials = 6;
  config.base_seed = 99;
  config.differentiators = {DifferentiatorKind::backward_first};

  const auto rows = run_sweep(config);
  const auto [mean, std_error] =
      monte_carlo_rmse({1.0, kTwoPi}, 0.7, 0.01, config.sample_count(), 6, 99,
                       DifferentiatorKind::backward_first);
  REQUIRE(rows[0].cells[0].rmse_measured == mean);
  REQUIRE(rows[0].cells[0].rmse_std_error == std_error);
}

TEST_CASE("standard error shrinks roughly as 1/sqrt(trials)",
          "[sweeps][mc][statistical]") {
  // Factor-2 bracket between successive 4x trial counts.
  const HarmonicSpec spec{1.0, kTwoPi};
  const auto se = [&](std::size_t trials) {
    return monte_carlo_rmse(spec, 1.0, 0.01, 20'000, trials, 7,
                            DifferentiatorKind::backward_first)
        .second;
  };
  const double se4 = se(4);
  const double se16 = se(16);
  const double se64 = se(64);
  REQUIRE(se4 / se16 > 1.0);
  REQUIRE(se4 / se16 < 4.0);
  REQUIRE(se16 / se64 > 1.0);
  REQUIRE(se16 / se64 < 4.0);
}

// =============================================================================
// Reproducibility and grid independence
// =============================================================================

TEST_CASE("identical configs produce bit-identical rows", "[sweeps][property]") {
  auto config = example3_config();
  config.duration = 10.0;  // keep the repeat cheap
  config.trials = 3;
  const auto a = run_sweep(config);
  const auto b = run_sweep(config);
  REQUIRE(a.size() == b.size());
  for (std::size_t gi = 0; gi < a.size(); ++gi) {
    REQUIRE(rows_identical(a[gi], b[gi]));
  }
}

TEST_CASE("permuting the grid permutes rows without changing values",
          "[sweeps][property]") {
  SweepConfig forward;
  forward.signal = {1.0, kTwoPi};
  forward.noise_grid = {NoiseModel{WhiteNoise{0.5, 0}}, NoiseModel{WhiteNoise{2.0, 0}}};
  forward.sample_time = 0.01;
  forward.duration = 10.0;
  forward.trials = 4;
  forward.base_seed = 31;

  SweepConfig reversed = forward;
  std::swap(reversed.noise_grid[0], reversed.noise_grid[1]);

  const auto a = run_sweep(forward);
  const auto b = run_sweep(reversed);
  REQUIRE(rows_identical(a[0], b[1]));
  REQUIRE(rows_identical(a[1], b[0]));
}

TEST_CASE("derive_trial_seed: pure and trial-sensitive", "[sweeps]") {
  const std::uint64_t key = grid_point_key(NoiseModel{WhiteNoise{1.0, 0}});
  REQUIRE(derive_trial_seed(1, key, 0) == derive_trial_seed(1, key, 0));
  REQUIRE(derive_trial_seed(1, key, 0) != derive_trial_seed(1, key, 1));
  REQUIRE(derive_trial_seed(1, key, 0) != derive_trial_seed(2, key, 0));
  const std::uint64_t other_key = grid_point_key(NoiseModel{WhiteNoise{2.0, 0}});
  REQUIRE(other_key != key);
  // seed attached to a white grid point is a placeholder, not part of the key
  REQUIRE(grid_point_key(NoiseModel{WhiteNoise{1.0, 777}}) == key);
}

// =============================================================================
// Validation, warnings and diagnostics
// =============================================================================

TEST_CASE("SweepConfig validation", "[sweeps][errors]") {
  SweepConfig config;
  config.signal = {1.0, kTwoPi};
  config.noise_grid = {NoiseModel{WhiteNoise{1.0, 0}}};
  config.sample_time = 0.01;
  config.duration = 10.0;
  REQUIRE_NOTHROW(config.validate());

  SECTION("mixed noise kinds rejected") {
    config.noise_grid.push_back(NoiseModel{HarmonicNoise{1.0, 1.0}});
    REQUIRE_THROWS_AS(config.validate(), std::invalid_argument);
  }
  SECTION("duplicate differentiators rejected") {
    config.differentiators = {DifferentiatorKind::backward_first,
                              DifferentiatorKind::backward_first};
    REQUIRE_THROWS_AS(config.validate(), std::invalid_argument);
  }
  SECTION("zero trials rejected") {
    config.trials = 0;
    REQUIRE_THROWS_AS(config.validate(), std::invalid_argument);
  }
  SECTION("empty grid rejected") {
    config.noise_grid.clear();
    REQUIRE_THROWS_AS(config.validate(), std::invalid_argument);
  }
}

TEST_CASE("short duration triggers a warning, not an error", "[sweeps]") {
  SweepConfig config;
  config.signal = {1.0, 1.0};  // 10 periods would need ~62.8 s
  config.noise_grid = {NoiseModel{WhiteNoise{1.0, 0}}};
  config.sample_time = 0.01;
  config.duration = 5.0;
  REQUIRE_FALSE(config.warnings().empty());
  REQUIRE_NOTHROW(run_sweep(config));

  config.duration = 100.0;
  REQUIRE(config.warnings().empty());
}

TEST_CASE("a failing grid point aborts with a diagnostic naming the point",
          "[sweeps][errors]") {
  SweepConfig config;
  config.signal = {1.0, kTwoPi};
  config.noise_grid = {NoiseModel{WhiteNoise{1.0, 0}},
                       NoiseModel{WhiteNoise{-1.0, 0}}};  // invalid sigma
  config.sample_time = 0.01;
  config.duration = 10.0;
  config.trials = 2;
  try {
    run_sweep(config);
    FAIL("expected run_sweep to throw");
  } catch (const std::runtime_error& e) {
    const std::string message = e.what();
    REQUIRE(message.find("grid point 1") != std::string::npos);
    REQUIRE(message.find("sigma=-1") != std::string::npos);
  }
}

// =============================================================================
// Ratio sweep
// =============================================================================

TEST_CASE("ratio_sweep: exact column and flatness", "[sweeps][ratio][statistical]") {
  auto config = example3_config();
  config.duration = 50.0;
  config.trials = 5;
  const auto rows = ratio_sweep(config);
  REQUIRE(rows.size() == 4);

  double lo = 1e300, hi = 0.0;
  for (const auto& row : rows) {
    REQUIRE(row.exact_ratio == Approx(173.205081).margin(1e-5));
    lo = std::min(lo, row.bd_ratio);
    hi = std::max(hi, row.bd_ratio);
  }
  REQUIRE(hi / lo - 1.0 < 0.03);           // sigma-independent ratio
  for (const auto& row : rows) {
    REQUIRE(row.bd_ratio == Approx(173.205081).epsilon(0.02));
  }
}

TEST_CASE("ratio_sweep: configuration errors", "[sweeps][ratio][errors]") {
  SECTION("harmonic grid rejected") {
    const auto config = example2_config();
    REQUIRE_THROWS_AS(ratio_sweep(config), std::invalid_argument);
  }
  SECTION("missing backward-difference pair rejected") {
    auto config = example3_config();
    config.differentiators = {DifferentiatorKind::backward_first};
    REQUIRE_THROWS_AS(ratio_sweep(config), std::invalid_argument);
  }
  SECTION("all-zero trace: ratio undefined") {
    SweepConfig config;
    config.signal = {0.0, 0.0};
    config.noise_grid = {NoiseModel{WhiteNoise{0.0, 0}}};
    config.sample_time = 0.01;
    config.duration = 1.0;
    config.differentiators = {DifferentiatorKind::backward_first,
                              DifferentiatorKind::backward_second};
    REQUIRE_THROWS_AS(ratio_sweep(config), std::domain_error);
  }
}
