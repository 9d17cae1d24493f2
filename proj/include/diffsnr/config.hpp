#pragma once

// Line-oriented key-value sweep configuration.
//
// Schema ('#' starts a comment, keys may appear once):
//   signal.amplitude = <double >= 0>          required
//   signal.omega     = <double >= 0>          required, rad/s
//   noise.kind       = harmonic | white       required
//   noise.amplitude  = <double >= 0>          required for harmonic (An), rejected for white
//   noise.grid       = v1, v2, ...            required; omega_n values (harmonic)
//                                             or sigma values (white)
//   ts               = <double > 0>           required, s
//   duration         = <double > 0>           required, s
//   trials           = <integer >= 1>         optional, default 10 (white noise only)
//   seed             = <uint64>               optional, default 12345
//   differentiators  = bd_first, bd_second, tf_first, tf_second
//                                             optional, default all four
// Unknown keys are rejected.

#include <charconv>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "diffsnr/sweeps.hpp"

namespace diffsnr {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

inline double parse_double(std::string_view value, const std::string& key, int line) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("line " + std::to_string(line) + ": '" + key +
                      "' expects a number, got '" + std::string(value) + "'");
  }
  return out;
}

inline std::uint64_t parse_u64(std::string_view value, const std::string& key, int line) {
  std::uint64_t out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("line " + std::to_string(line) + ": '" + key +
                      "' expects an unsigned integer, got '" + std::string(value) + "'");
  }
  return out;
}

inline std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t comma = value.find(',', start);
    const std::string_view item =
        trim(value.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline DifferentiatorKind parse_kind(std::string_view name, int line) {
  if (name == "bd_first") return DifferentiatorKind::backward_first;
  if (name == "bd_second") return DifferentiatorKind::backward_second;
  if (name == "tf_first") return DifferentiatorKind::tracking_first;
  if (name == "tf_second") return DifferentiatorKind::tracking_second;
  throw ConfigError("line " + std::to_string(line) + ": unknown differentiator '" +
                    std::string(name) +
                    "' (expected bd_first, bd_second, tf_first or tf_second)");
}

}  // namespace detail

/// Parses the textual schema above into a validated SweepConfig.
inline SweepConfig parse_config(std::string_view text) {
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, Entry> entries;

  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t newline = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, newline == std::string_view::npos ? newline : newline - pos);
    ++line_number;
    pos = newline == std::string_view::npos ? text.size() + 1 : newline + 1;

    std::string_view line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_number) + ": expected 'key = value'");
    }
    const std::string key{detail::trim(line.substr(0, eq))};
    const std::string value{detail::trim(line.substr(eq + 1))};
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_number) + ": empty key");
    }
    if (entries.contains(key)) {
      throw ConfigError("line " + std::to_string(line_number) + ": duplicate key '" + key +
                        "' (first set on line " + std::to_string(entries[key].line) + ")");
    }
    entries[key] = Entry{value, line_number};
  }

  static const char* kKnownKeys[] = {
      "signal.amplitude", "signal.omega", "noise.kind",      "noise.amplitude",
      "noise.grid",       "ts",           "duration",        "trials",
      "seed",             "differentiators",
  };
  for (const auto& [key, entry] : entries) {
    bool known = false;
    for (const char* candidate : kKnownKeys) {
      if (key == candidate) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }
  }

  std::vector<std::string> missing;
  for (const char* required :
       {"signal.amplitude", "signal.omega", "noise.kind", "noise.grid", "ts", "duration"}) {
    if (!entries.contains(required)) missing.emplace_back(required);
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "missing required keys:";
    for (const auto& key : missing) msg << " " << key;
    throw ConfigError(msg.str());
  }

  SweepConfig config;
  config.experiment = Experiment::custom;

  const auto semantic = [](const std::string& key, const std::string& what) {
    return ConfigError("'" + key + "' " + what);
  };

  {
    const auto& e = entries["signal.amplitude"];
    config.signal.amplitude = detail::parse_double(e.value, "signal.amplitude", e.line);
    if (config.signal.amplitude < 0.0) throw semantic("signal.amplitude", "must be >= 0");
  }
  {
    const auto& e = entries["signal.omega"];
    config.signal.omega = detail::parse_double(e.value, "signal.omega", e.line);
    if (config.signal.omega < 0.0) throw semantic("signal.omega", "must be >= 0");
  }
  {
    const auto& e = entries["ts"];
    config.sample_time = detail::parse_double(e.value, "ts", e.line);
    if (config.sample_time <= 0.0) throw semantic("ts", "must be positive");
  }
  {
    const auto& e = entries["duration"];
    config.duration = detail::parse_double(e.value, "duration", e.line);
    if (config.duration <= 0.0) throw semantic("duration", "must be positive");
  }
  if (entries.contains("trials")) {
    const auto& e = entries["trials"];
    config.trials = detail::parse_u64(e.value, "trials", e.line);
    if (config.trials < 1) throw semantic("trials", "must be >= 1");
  }
  if (entries.contains("seed")) {
    const auto& e = entries["seed"];
    config.base_seed = detail::parse_u64(e.value, "seed", e.line);
  }

  const std::string& kind = entries["noise.kind"].value;
  const auto& grid_entry = entries["noise.grid"];
  const auto grid_items = detail::split_list(grid_entry.value);
  if (grid_items.empty()) throw semantic("noise.grid", "must list at least one value");

  if (kind == "harmonic") {
    if (!entries.contains("noise.amplitude")) {
      throw ConfigError("missing required keys: noise.amplitude (required for harmonic noise)");
    }
    const auto& e = entries["noise.amplitude"];
    const double amplitude = detail::parse_double(e.value, "noise.amplitude", e.line);
    if (amplitude < 0.0) throw semantic("noise.amplitude", "must be >= 0");
    for (const auto& item : grid_items) {
      const double omega = detail::parse_double(item, "noise.grid", grid_entry.line);
      if (omega < 0.0) throw semantic("noise.grid", "omega_n values must be >= 0");
      config.noise_grid.push_back(HarmonicNoise{amplitude, omega});
    }
  } else if (kind == "white") {
    if (entries.contains("noise.amplitude")) {
      throw semantic("noise.amplitude", "is only valid for harmonic noise");
    }
    for (const auto& item : grid_items) {
      const double sigma = detail::parse_double(item, "noise.grid", grid_entry.line);
      if (sigma < 0.0) throw semantic("noise.grid", "sigma values must be >= 0");
      config.noise_grid.push_back(WhiteNoise{sigma, 0});
    }
  } else {
    throw semantic("noise.kind", "must be 'harmonic' or 'white'");
  }

  if (entries.contains("differentiators")) {
    const auto& e = entries["differentiators"];
    const auto items = detail::split_list(e.value);
    if (items.empty()) throw semantic("differentiators", "must list at least one kind");
    config.differentiators.clear();
    for (const auto& item : items) {
      config.differentiators.push_back(detail::parse_kind(item, e.line));
    }
  }

  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return config;
}

}  // namespace diffsnr
