#pragma once

// Run configuration shared by the command-line tool and config files.
//
// Settings are plain key=value pairs. The same keys are accepted from a
// flat config file and from command-line flags, applied in the order
// defaults < file < flags.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qdef/errors.hpp"
#include "qdef/series_table.hpp"

namespace qdef {

struct RunConfig {
  std::string command;

  // Deformation: either gamma (= gamma_q * xi) or q, with xi = scale.
  std::vector<double> gamma;
  std::vector<double> q;
  bool gamma_set = false;
  bool q_set = false;
  double scale = 1.0;

  double m0 = 1.0;
  double omega0 = 1.0;
  double hbar = 1.0;
  double amplitude = 1.0;
  double delta = 0.0;

  std::vector<int> levels;
  bool levels_set = false;
  int n2 = 0;
  std::optional<double> gamma_y;  // second oscillator (lissajous, density2d)
  double omega_ratio = 2.0;       // omega_y / omega_x for lissajous

  int samples = 401;
  double periods = 2.0;
  double window = 0.0;  // correspondence averaging width, <= 0 for lambda_dB

  std::string out = ".";
  Format format = Format::csv;
  double tol = 1.0;

  bool natural_units = true;
};

/// QDEF_OSC_NATURAL_UNITS: unset or "1" pins m0 = omega0 = hbar = 1, "0"
/// accepts overrides. Anything else is a validation error.
inline bool natural_units_from_env() {
  const char* v = std::getenv("QDEF_OSC_NATURAL_UNITS");
  if (v == nullptr || std::string_view(v).empty()) return true;
  const std::string_view s(v);
  if (s == "1") return true;
  if (s == "0") return false;
  throw ValidationError("QDEF_OSC_NATURAL_UNITS must be 0 or 1, got '" + std::string(s) + "'");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline double field_double(std::string_view key, std::string_view text) {
  try {
    return parse_double(trim(text));
  } catch (const ValidationError&) {
    throw ValidationError("field '" + std::string(key) + "': expected a number, got '" +
                          std::string(text) + "'");
  }
}

inline int field_int(std::string_view key, std::string_view text) {
  const double v = field_double(key, text);
  if (!(std::abs(v) < 1e9) || v != std::trunc(v)) {
    throw ValidationError("field '" + std::string(key) + "': expected an integer, got '" +
                          std::string(text) + "'");
  }
  return static_cast<int>(v);
}

inline std::vector<double> field_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  const auto body = trim(text);
  if (body.empty()) return out;
  for (auto part : split(body, ',')) out.push_back(field_double(key, part));
  return out;
}

/// Integer list with optional ranges, e.g. "0-3,5".
inline std::vector<int> field_levels(std::string_view key, std::string_view text) {
  std::vector<int> out;
  const auto body = trim(text);
  if (body.empty()) return out;
  for (auto part : split(body, ',')) {
    part = trim(part);
    const std::size_t dash = part.find('-', 1);
    if (dash == std::string_view::npos) {
      out.push_back(field_int(key, part));
      continue;
    }
    const int lo = field_int(key, part.substr(0, dash));
    const int hi = field_int(key, part.substr(dash + 1));
    if (hi < lo) {
      throw ValidationError("field '" + std::string(key) + "': empty range '" +
                            std::string(part) + "'");
    }
    for (int n = lo; n <= hi; ++n) out.push_back(n);
  }
  return out;
}

inline void require_positive(std::string_view key, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError("field '" + std::string(key) + "': must be positive");
  }
}

}  // namespace detail

/// Applies one key=value setting to cfg.
inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  const std::string k(detail::trim(key));
  const std::string_view v = detail::trim(value);
  auto physical = [&](double& slot) {
    if (cfg.natural_units) {
      throw ValidationError("field '" + k +
                            "': natural units are active (QDEF_OSC_NATURAL_UNITS=1); "
                            "set QDEF_OSC_NATURAL_UNITS=0 to override m0, omega0, hbar");
    }
    slot = detail::field_double(k, v);
    detail::require_positive(k, slot);
  };
  if (k == "gamma") {
    cfg.gamma = detail::field_list(k, v);
    cfg.gamma_set = true;
  } else if (k == "q") {
    cfg.q = detail::field_list(k, v);
    cfg.q_set = true;
  } else if (k == "scale") {
    cfg.scale = detail::field_double(k, v);
    detail::require_positive(k, cfg.scale);
  } else if (k == "m0") {
    physical(cfg.m0);
  } else if (k == "omega0") {
    physical(cfg.omega0);
  } else if (k == "hbar") {
    physical(cfg.hbar);
  } else if (k == "amplitude") {
    cfg.amplitude = detail::field_double(k, v);
    detail::require_positive(k, cfg.amplitude);
  } else if (k == "delta") {
    cfg.delta = detail::field_double(k, v);
  } else if (k == "levels") {
    cfg.levels = detail::field_levels(k, v);
    cfg.levels_set = true;
    for (int n : cfg.levels) {
      if (n < 0) throw ValidationError("field 'levels': quantum numbers must be >= 0");
    }
  } else if (k == "n2") {
    cfg.n2 = detail::field_int(k, v);
    if (cfg.n2 < 0) throw ValidationError("field 'n2': must be >= 0");
  } else if (k == "gamma_y") {
    cfg.gamma_y = detail::field_double(k, v);
  } else if (k == "omega_ratio") {
    cfg.omega_ratio = detail::field_double(k, v);
    detail::require_positive(k, cfg.omega_ratio);
  } else if (k == "samples") {
    cfg.samples = detail::field_int(k, v);
    if (cfg.samples < 2) throw ValidationError("field 'samples': must be >= 2");
  } else if (k == "periods") {
    cfg.periods = detail::field_double(k, v);
    detail::require_positive(k, cfg.periods);
  } else if (k == "window") {
    cfg.window = detail::field_double(k, v);
  } else if (k == "out") {
    if (v.empty()) throw ValidationError("field 'out': empty path");
    cfg.out = std::string(v);
  } else if (k == "format") {
    if (v == "csv") {
      cfg.format = Format::csv;
    } else if (v == "json") {
      cfg.format = Format::json;
    } else {
      throw ValidationError("field 'format': expected csv or json, got '" + std::string(v) + "'");
    }
  } else if (k == "tol") {
    cfg.tol = detail::field_double(k, v);
    detail::require_positive(k, cfg.tol);
  } else {
    throw ValidationError("unknown field '" + k + "'");
  }
}

struct ConfigEntry {
  std::size_t line;
  std::string key;
  std::string value;
};

/// Parses a flat config file body. Blank lines and '#' comments are
/// skipped; syntax errors name the line.
inline std::vector<ConfigEntry> parse_config_text(std::string_view text) {
  std::vector<ConfigEntry> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": expected key=value, got '" + std::string(line) + "'");
    }
    const auto key = detail::trim(line.substr(0, eq));
    if (key.empty()) {
      throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
    }
    out.push_back({line_no, std::string(key), std::string(detail::trim(line.substr(eq + 1)))});
  }
  return out;
}

/// Applies a config file body to cfg; field errors are prefixed with the line.
inline void apply_config_text(RunConfig& cfg, std::string_view text) {
  for (const auto& entry : parse_config_text(text)) {
    try {
      apply_setting(cfg, entry.key, entry.value);
    } catch (const ValidationError& e) {
      throw ValidationError("config line " + std::to_string(entry.line) + ": " + e.what());
    }
  }
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    apply_config_text(cfg, buffer.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

/// Resolves defaults < file < flags. `flags` holds only the settings given
/// on the command line.
inline RunConfig resolve_config(const std::string& command,
                                const std::optional<std::string>& config_path,
                                const std::vector<std::pair<std::string, std::string>>& flags,
                                bool natural_units) {
  RunConfig cfg;
  cfg.command = command;
  cfg.natural_units = natural_units;
  if (config_path) load_config_file(cfg, *config_path);
  for (const auto& [key, value] : flags) apply_setting(cfg, key, value);
  return cfg;
}

/// Checks cross-field constraints.
inline void validate(const RunConfig& cfg) {
  if (cfg.gamma_set && cfg.q_set) {
    throw ValidationError("specify exactly one of 'gamma' and 'q'");
  }
  if (cfg.gamma_set && cfg.gamma.empty()) {
    throw ValidationError("field 'gamma': empty list");
  }
  if (cfg.q_set && cfg.q.empty()) throw ValidationError("field 'q': empty list");
}

/// gamma_q values in inverse units of scale: gamma / scale or (1 - q) / scale.
/// Falls back to `defaults` (already gamma_q * scale products) when neither
/// was given.
inline std::vector<double> deformation_values(const RunConfig& cfg,
                                              const std::vector<double>& defaults) {
  validate(cfg);
  std::vector<double> out;
  if (cfg.q_set) {
    for (double q : cfg.q) out.push_back((1.0 - q) / cfg.scale);
  } else {
    for (double g : cfg.gamma_set ? cfg.gamma : defaults) out.push_back(g / cfg.scale);
  }
  return out;
}

}  // namespace qdef
