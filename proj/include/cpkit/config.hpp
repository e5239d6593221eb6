#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cpkit/criteria.hpp"
#include "cpkit/simulator.hpp"

namespace cpkit {

inline constexpr const char* kToolName = "cpkit";
inline constexpr const char* kToolVersion = "0.1.0";

/// Everything a run needs beyond file paths. The rig is configured once,
/// under criteria, and mirrored into the scenario so generation and
/// labeling always agree on the geometry.
struct RunConfig {
  ScenarioConfig scenario{};
  CriteriaConfig criteria{};

  bool operator==(const RunConfig&) const = default;
};

/// Parses a JSON run config. Every section and key is optional and falls
/// back to the defaults; unknown keys are errors. Range-valued keys accept
/// [lo, hi] or a single number that pins the value.
RunConfig parse_run_config(const std::string& text, const std::string& origin);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical JSON echo of a fully resolved config.
std::string render_run_config_json(const RunConfig& config);

/// Reproducibility manifest: tool identity, command, seed, count, and the
/// resolved config. Deterministic byte-for-byte for equal inputs.
std::string render_manifest_json(const std::string& command, const RunConfig& config,
                                 std::uint64_t seed, std::int64_t count);

}  // namespace cpkit
