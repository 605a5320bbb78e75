#pragma once

#include "liouville_tools/json_io.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace liouville::tools {

/// Experiment descriptor shared by every command. `params` holds the
/// command-specific parameters verbatim; flags given on the command line
/// override entries of the same name.
struct ExperimentConfig {
  std::optional<InteractionMatrix> matrix;
  std::vector<WeightFunction> weights;
  json params = json::object();
  std::string output_dir;
  std::uint64_t seed = 0;

  json to_json() const;
  /// `base` resolves relative file references ("matrix": "a.json").
  static ExperimentConfig from_json(const json& j, const std::filesystem::path& base = {});
  static ExperimentConfig load(const std::filesystem::path& path);

  /// Canonical serialization (sorted keys, shortest round-trip doubles).
  std::string canonical() const;
};

/// Reads a JSON document; a string starting with '{' or '[' is parsed inline.
json read_json_argument(const std::string& path_or_inline);

}  // namespace liouville::tools
