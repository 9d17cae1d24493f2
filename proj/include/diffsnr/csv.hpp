#pragma once

// CSV serialization of sweep results and the human-readable summary
// table. Values are printed with 9 significant digits; identical rows
// always serialize to identical bytes. Undefined metrics print as "nan".

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "diffsnr/sweeps.hpp"

namespace diffsnr {

/// 9-significant-digit decimal rendering; non-finite values become "nan".
inline std::string format_value(double value) {
  if (!std::isfinite(value)) return "nan";
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

inline std::string format_value(const std::optional<double>& value) {
  return value ? format_value(*value) : "nan";
}

namespace detail {

inline std::string cell_column(DifferentiatorKind kind) {
  const std::string order = derivative_order(kind) == 1 ? "sd" : "dd";
  return "rmse_" + order + "_" + std::string(family_tag(kind));
}

}  // namespace detail

/// Writes header plus one line per grid point. Column set depends on the
/// noise kind and the configured differentiators.
inline void emit_csv(const SweepConfig& config, const std::vector<SweepRow>& rows,
                     std::ostream& out) {
  detail::require(!rows.empty(), "emit_csv: no rows");
  const bool white = rows.front().white;

  out << (white ? "sigma,sigma_sq" : "omega_n_rad_s") << ",trials";
  out << ",snr_amp_db,snr_eng_db,snr0,snr_sd,snr_dd,rmse_sd_exact,rmse_dd_exact";
  for (auto kind : config.differentiators) {
    const std::string base = detail::cell_column(kind);
    out << "," << base << "," << base << "_stderr," << base << "_trunc";
  }
  out << "\n";

  for (const auto& row : rows) {
    out << format_value(row.param);
    if (white) out << "," << format_value(row.param * row.param);
    out << "," << row.trials;
    out << "," << format_value(row.metrics.snr_amp_db);
    out << "," << format_value(row.metrics.snr_eng_db);
    out << "," << format_value(row.metrics.snr0);
    out << "," << format_value(row.metrics.snr_sd);
    out << "," << format_value(row.metrics.snr_dd);
    out << "," << format_value(row.metrics.rmse_sd_exact);
    out << "," << format_value(row.metrics.rmse_dd_exact);
    for (const auto& cell : row.cells) {
      out << "," << format_value(cell.rmse_measured);
      out << "," << format_value(cell.rmse_std_error);
      out << "," << format_value(cell.rmse_truncation);
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("emit_csv: write failed");
}

inline std::string csv_string(const SweepConfig& config, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  emit_csv(config, rows, out);
  return out.str();
}

inline void emit_ratio_csv(const std::vector<RatioRow>& rows, std::ostream& out) {
  detail::require(!rows.empty(), "emit_ratio_csv: no rows");
  const bool with_tf = rows.front().tf_ratio.has_value();
  out << "sigma,sigma_sq,ratio_bd";
  if (with_tf) out << ",ratio_tf";
  out << ",ratio_exact\n";
  for (const auto& row : rows) {
    out << format_value(row.sigma) << "," << format_value(row.sigma * row.sigma) << ","
        << format_value(row.bd_ratio);
    if (with_tf) out << "," << format_value(row.tf_ratio);
    out << "," << format_value(row.exact_ratio) << "\n";
  }
  if (!out) throw std::runtime_error("emit_ratio_csv: write failed");
}

inline std::string ratio_csv_string(const std::vector<RatioRow>& rows) {
  std::ostringstream out;
  emit_ratio_csv(rows, out);
  return out.str();
}

namespace detail {

inline void summary_cell(std::ostream& out, double value, int width) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  out << std::setw(width) << buffer;
}

}  // namespace detail

/// Aligned table for terminal output: swept parameter, exact RMSE and the
/// measured RMSE of each configured differentiator.
inline void print_summary(const SweepConfig& config, const std::vector<SweepRow>& rows,
                          std::ostream& out) {
  if (rows.empty()) return;
  const bool white = rows.front().white;
  constexpr int kWidth = 14;

  out << std::setw(kWidth) << (white ? "sigma" : "omega_n");
  out << std::setw(kWidth) << "rmse_sd_exact" << std::setw(kWidth) << "rmse_dd_exact";
  for (auto kind : config.differentiators) {
    out << std::setw(kWidth) << detail::cell_column(kind);
  }
  out << std::setw(kWidth) << (white ? "snr0" : "snr_eng_db");
  out << "\n";

  for (const auto& row : rows) {
    detail::summary_cell(out, row.param, kWidth);
    detail::summary_cell(out, row.metrics.rmse_sd_exact.value_or(
                                  std::numeric_limits<double>::quiet_NaN()),
                         kWidth);
    detail::summary_cell(out, row.metrics.rmse_dd_exact.value_or(
                                  std::numeric_limits<double>::quiet_NaN()),
                         kWidth);
    for (const auto& cell : row.cells) {
      detail::summary_cell(out, cell.rmse_measured, kWidth);
    }
    const auto& extra = white ? row.metrics.snr0 : row.metrics.snr_eng_db;
    detail::summary_cell(out, extra.value_or(std::numeric_limits<double>::quiet_NaN()),
                         kWidth);
    out << "\n";
  }
}

inline void print_ratio_summary(const std::vector<RatioRow>& rows, std::ostream& out) {
  constexpr int kWidth = 14;
  out << std::setw(kWidth) << "sigma" << std::setw(kWidth) << "ratio_bd";
  if (!rows.empty() && rows.front().tf_ratio) out << std::setw(kWidth) << "ratio_tf";
  out << std::setw(kWidth) << "ratio_exact"
      << "\n";
  for (const auto& row : rows) {
    detail::summary_cell(out, row.sigma, kWidth);
    detail::summary_cell(out, row.bd_ratio, kWidth);
    if (row.tf_ratio) detail::summary_cell(out, *row.tf_ratio, kWidth);
    detail::summary_cell(out, row.exact_ratio, kWidth);
    out << "\n";
  }
}

}  // namespace diffsnr
