#include "liouville_tools/config.hpp"

#include "liouville/error.hpp"

#include <fstream>
#include <sstream>

namespace liouville::tools {

namespace fs = std::filesystem;

json read_json_argument(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  try {
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw InputError("cannot open " + arg);
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON in ") + arg + ": " + e.what());
  }
}

json ExperimentConfig::to_json() const {
  json j = json::object();
  if (matrix) j["matrix"] = matrix_to_json(*matrix);
  json w = json::array();
  for (const auto& h : weights) w.push_back(weight_to_json(h));
  j["weights"] = w;
  j["params"] = params;
  j["output_dir"] = output_dir;
  j["seed"] = seed;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const fs::path& base) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  ExperimentConfig c;
  auto resolve = [&](const json& v) -> json {
    if (!v.is_string()) return v;
    fs::path p = v.get<std::string>();
    if (p.is_relative() && !base.empty()) p = base / p;
    if (!fs::exists(p)) throw InputError("referenced file does not exist: " + p.string());
    return read_json_argument(p.string());
  };
  if (j.contains("matrix") && !j.at("matrix").is_null()) c.matrix = interaction_from_json(resolve(j.at("matrix")));
  if (j.contains("weights")) {
    const json w = resolve(j.at("weights"));
    if (!w.is_array()) throw InputError("weights must be an array");
    for (const auto& h : w) c.weights.push_back(weight_from_json(h));
  }
  if (j.contains("params")) {
    c.params = j.at("params");
    if (!c.params.is_object()) throw InputError("params must be an object");
  }
  c.output_dir = j.value("output_dir", "");
  c.seed = j.value("seed", std::uint64_t{0});
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  if (!fs::exists(path)) throw InputError("config file does not exist: " + path.string());
  return from_json(read_json_argument(path.string()), path.parent_path());
}

std::string ExperimentConfig::canonical() const { return to_json().dump(); }

}  // namespace liouville::tools
