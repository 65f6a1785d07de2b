#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace anisoshape {

/// Defaults overridable from a "key=value" file.
struct HarnessConfig {
  /// Diameter cap M of the tempered shape function.
  double cap = 16.0;
  /// Midpoint grid of the predicted limit.
  int limit_grid = 128;
  /// Marching-squares grid of level-set plots.
  int levelset_grid = 512;
  /// Grid of `metric field` exports.
  int metric_grid = 64;
  std::uint64_t seed = 0x5EED;
};

/// Parses "key=value" lines; blank lines and lines starting with '#' are
/// skipped. Throws std::invalid_argument on malformed lines.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Applies known keys (cap, limit_grid, levelset_grid, metric_grid, seed);
/// unknown keys throw std::invalid_argument.
HarnessConfig apply_config(HarnessConfig base, const std::map<std::string, std::string>& values);

HarnessConfig load_config(const std::string& path, HarnessConfig base = {});

}  // namespace anisoshape
