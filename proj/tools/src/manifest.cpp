#include "liouville_tools/manifest.hpp"

#include "liouville/error.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <memory>

namespace liouville::tools {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw Error("io", "SHA-256 computation failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

json RunManifest::to_json() const {
  json out = json::array();
  for (const auto& e : outputs) out.push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  return {{"toolkit_version", toolkit_version},
          {"command", command},
          {"config_hash", config_hash},
          {"started", started},
          {"finished", finished},
          {"status", {{command, status}}},
          {"exit_code", exit_code},
          {"outputs", out}};
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  m.toolkit_version = j.at("toolkit_version").get<std::string>();
  m.command = j.at("command").get<std::string>();
  m.config_hash = j.at("config_hash").get<std::string>();
  m.started = j.at("started").get<std::string>();
  m.finished = j.at("finished").get<std::string>();
  m.status = j.at("status").at(m.command).get<std::string>();
  m.exit_code = j.at("exit_code").get<int>();
  for (const auto& e : j.at("outputs"))
    m.outputs.push_back({e.at("path").get<std::string>(), e.at("sha256").get<std::string>(),
                         e.at("bytes").get<std::uintmax_t>()});
  return m;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_artifact(RunManifest& manifest, const fs::path& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  out.close();
  manifest.outputs.push_back({name, sha256_hex(content), content.size()});
}

std::vector<std::string> validate_manifest(const fs::path& manifest_path) {
  const json j = [&] {
    std::ifstream in(manifest_path);
    if (!in) throw InputError("cannot open " + manifest_path.string());
    return json::parse(in);
  }();
  const RunManifest m = RunManifest::from_json(j);
  std::vector<std::string> bad;
  for (const auto& e : m.outputs) {
    const fs::path p = manifest_path.parent_path() / e.path;
    if (!fs::exists(p) || sha256_file(p) != e.sha256) bad.push_back(e.path);
  }
  return bad;
}

}  // namespace liouville::tools
