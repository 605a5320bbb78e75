#pragma once

#include "liouville_tools/json_io.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace liouville::tools {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct ManifestEntry {
  std::string path;  // relative to the manifest directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string toolkit_version;
  std::string command;
  std::string config_hash;
  std::string started;
  std::string finished;
  std::string status;  // "ok" or the error kind
  int exit_code = 0;
  std::vector<ManifestEntry> outputs;

  json to_json() const;
  static RunManifest from_json(const json& j);
};

/// UTC time in ISO 8601.
std::string utc_timestamp();

/// Writes `content` to dir/name and records it in the manifest.
void write_artifact(RunManifest& manifest, const std::filesystem::path& dir, const std::string& name,
                    const std::string& content);

/// Re-hashes every listed output; returns the paths that are missing or differ.
std::vector<std::string> validate_manifest(const std::filesystem::path& manifest_path);

}  // namespace liouville::tools
