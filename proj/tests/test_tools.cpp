#include "liouville/error.hpp"
#include "liouville_tools/cli.hpp"
#include "liouville_tools/config.hpp"
#include "liouville_tools/manifest.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace liouville;
using namespace liouville::tools;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "liouville");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("liouville_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(JsonIo, WeightRoundTrip) {
  const WeightFunction w(TrigPolynomial{0.5, {{1, -2, 0.3, 0.1}}}, true);
  const WeightFunction back = weight_from_json(weight_to_json(w));
  EXPECT_TRUE(back.exponential());
  const TorusPoint x(0.3, 0.2);
  EXPECT_EQ(back.value(x), w.value(x));
  EXPECT_EQ(weight_from_json(json(2.5)).value(x), 2.5);
  EXPECT_THROW(weight_from_json(json{{"form", "spline"}}), InputError);
}

TEST(JsonIo, MatrixForms) {
  const auto a = interaction_from_json(json::parse("[[1,2],[2,1]]"));
  EXPECT_EQ(a.size(), 2);
  const auto b = interaction_from_json(matrix_to_json(a));
  EXPECT_EQ(b.a(), a.a());
  EXPECT_EQ(number(std::nan("")), json("nan"));
}

TEST(Config, CanonicalRoundTripIsBitIdentical) {
  ExperimentConfig c;
  c.matrix = InteractionMatrix((Matrix(2, 2) << 0.1, 1.0 / 3.0, 1.0 / 3.0, 0.7).finished());
  c.weights = {WeightFunction(TrigPolynomial{1.0, {{1, 0, 0.1 + 0.2, 0.0}}}, false), WeightFunction::constant(1e-300)};
  c.params = {{"alpha", {0.0, 0.123456789012345678}}, {"level", 2}};
  c.output_dir = "out";
  c.seed = 18446744073709551615ull;
  const std::string s1 = c.canonical();
  const auto back = ExperimentConfig::from_json(json::parse(s1));
  EXPECT_EQ(back.canonical(), s1);
  EXPECT_EQ(back.matrix->a(), c.matrix->a());
  EXPECT_EQ(back.seed, c.seed);
}

TEST(Config, MissingReferencedFile) {
  const fs::path dir = scratch("cfg");
  std::ofstream(dir / "c.json") << R"({"matrix": "missing.json"})";
  EXPECT_THROW(ExperimentConfig::load(dir / "c.json"), InputError);
  std::ofstream(dir / "a.json") << "[[1]]";
  std::ofstream(dir / "d.json") << R"({"matrix": "a.json", "params": {"alpha": [0]}})";
  EXPECT_EQ(ExperimentConfig::load(dir / "d.json").matrix->size(), 1);
}

TEST(Manifest, HashesAndValidation) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const fs::path dir = scratch("manifest");
  RunManifest m;
  m.command = "x";
  write_artifact(m, dir, "a.txt", "hello\n");
  std::ofstream(dir / "manifest.json") << m.to_json().dump();
  EXPECT_TRUE(validate_manifest(dir / "manifest.json").empty());
  std::ofstream(dir / "a.txt") << "tampered\n";
  EXPECT_EQ(validate_manifest(dir / "manifest.json"), std::vector<std::string>{"a.txt"});
}

TEST(Cli, DegreeOfTheEmptyCrossing) {
  const auto r = cli({"degree", "--N", "0", "--chi", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1\n");
}

TEST(Cli, ScalarGlobalSolve) {
  const fs::path dir = scratch("gs");
  std::ofstream(dir / "a.json") << "[[1]]";
  const auto r = cli({"--matrix", (dir / "a.json").string(), "global-solve", "--alpha", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["sigma"][0].get<double>(), 4.0, 1e-8);
  EXPECT_NEAR(j["m"][0].get<double>(), 4.0, 1e-8);
  EXPECT_NEAR(j["D"][0].get<double>(), std::log(64.0), 1e-8);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({}).code, kUsage);
  EXPECT_EQ(cli({"no-such-command"}).code, kUsage);
  EXPECT_EQ(cli({"degree", "--N", "x", "--chi", "0"}).code, kUsage);
  EXPECT_EQ(cli({"--convention-factor", "3", "degree", "--N", "1", "--chi", "0"}).code, kUsage);
  const auto bad = cli({"--matrix", "[[1,1],[1,1]]", "qpoint"});
  EXPECT_EQ(bad.code, kModuleError);
  const json e = json::parse(bad.err);
  EXPECT_EQ(e["error"]["kind"], "singular_matrix");
  EXPECT_EQ(e["error"]["command"], "qpoint");
  EXPECT_EQ(cli({"qpoint"}).code, kModuleError);  // no matrix
}

TEST(Cli, ArtifactsAreDeterministicAndHashed) {
  const fs::path d1 = scratch("det1"), d2 = scratch("det2");
  for (const auto& d : {d1, d2})
    ASSERT_EQ(cli({"--matrix", "[[1,2],[2,1]]", "--out", d.string(), "global-solve", "--alpha", "0", "0.5"}).code, 0);
  EXPECT_EQ(slurp(d1 / "profile.csv"), slurp(d2 / "profile.csv"));
  EXPECT_TRUE(validate_manifest(d1 / "manifest.json").empty());
  const auto m = RunManifest::from_json(json::parse(slurp(d1 / "manifest.json")));
  EXPECT_EQ(m.status, "ok");
  EXPECT_EQ(m.outputs.size(), 2u);
}

TEST(Cli, ConfigParamsFeedTheCommand) {
  const fs::path dir = scratch("params");
  std::ofstream(dir / "c.json") << R"({"matrix": [[1,2],[2,1]], "params": {"level": 2}})";
  const auto r = cli({"--config", (dir / "c.json").string(), "qpoint"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["q"][0].get<double>(), 16 * std::numbers::pi / 3, 1e-12);
  // a flag wins over the config
  const auto r2 = cli({"--config", (dir / "c.json").string(), "qpoint", "--N", "1"});
  EXPECT_NEAR(json::parse(r2.out)["q"][0].get<double>(), 8 * std::numbers::pi / 3, 1e-12);
}

TEST(Cli, GammaSide) {
  const auto r = cli({"--matrix", "[[1]]", "gamma", "--rho", "25"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_GT(json::parse(r.out)["lambda_I"].get<double>(), 0.0);
  EXPECT_EQ(json::parse(r.out)["classification"], "in_O_N_minus_1");
}
