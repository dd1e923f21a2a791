#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cv2x/engine/engine.hpp"

namespace cv2x::cli {

/// Invalid configuration; `what()` holds one violation per line, anchored to
/// `file:line` where the source is known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeyInfo {
  std::string section;
  std::string key;
  std::string doc;
  std::string dotted() const { return section + "." + key; }
};

/// Every accepted key, in dump order.
const std::vector<KeyInfo>& schema();

/// Closest known key to `key` (edit distance), as "section.key"; empty when
/// nothing is reasonably close.
std::string suggest_key(std::string_view section, std::string_view key);

/// Sets one key; throws ConfigError for an unknown key or unparsable value.
void set_key(engine::RunConfig& cfg, std::string_view section, std::string_view key, std::string_view value);

/// Same as set_key for a "section.key=value" override.
void apply_override(engine::RunConfig& cfg, std::string_view assignment);

std::string get_key(const engine::RunConfig& cfg, const KeyInfo& key);

void apply_scenario(engine::RunConfig& cfg, std::string_view name);
void apply_scheme(engine::RunConfig& cfg, std::string_view name);

/// Resolved config as a config file; loading the text reproduces `cfg`.
std::string dump(const engine::RunConfig& cfg);

struct LoadRequest {
  std::optional<std::filesystem::path> file;
  std::optional<std::string> file_text;  // used instead of reading `file`
  std::optional<std::string> scenario;
  std::optional<std::string> scheme;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;  // "section.key=value"
};

/// Defaults, then scenario preset, scheme preset, file keys and overrides,
/// in that order. Throws ConfigError listing every problem found, including
/// invariant violations of the resolved config.
engine::RunConfig load(const LoadRequest& req);

/// Invariant violations phrased with config key names.
std::vector<std::string> check(const engine::RunConfig& cfg);

}  // namespace cv2x::cli
