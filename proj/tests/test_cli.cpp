#include "framelift/cli.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

using namespace framelift;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = FRAMELIFT_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("framelift_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + FRAMELIFT_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_config(const std::string& sub, const fs::path& cfg, const fs::path& out, const std::string& extra = "") {
  return run(sub + " --config \"" + cfg.string() + "\" --out \"" + out.string() + "\" " + extra);
}

json load(const fs::path& p) { return json::parse(read_file(p)); }

}  // namespace

TEST(Config, DefaultsAndEcho) {
  const auto c = cli::parse_config(json{{"kind", "gabor"}});
  EXPECT_EQ(c.ns, (std::vector<Index>{16, 32, 64}));
  EXPECT_EQ(c.lattice.steps_for(32), std::make_pair(Index(2), Index(4)));
  EXPECT_EQ(c.ps.size(), 1u);
  const json echo = cli::config_echo(c);
  EXPECT_EQ(echo.at("kind"), "gabor");
  EXPECT_EQ(echo.at("schema_version"), cli::kSchemaVersion);
}

TEST(Config, ShippedConfigsParse) {
  for (const auto& entry : fs::directory_iterator(kConfigs)) {
    EXPECT_NO_THROW(cli::load_config(entry.path())) << entry.path();
  }
}

TEST(Config, MalformedFieldsRejected) {
  const json base = load(kConfigs / "gabor.json");
  const std::vector<std::pair<std::string, json>> bad{
      {"kind", "wavelet"},   {"kind", 3},          {"seed", -1},       {"seed", 1.5},
      {"Ns", json::array()}, {"Ns", {16, 2}},      {"Ns", {"16"}},      {"ps", {0.5}},
      {"ps", "two"},         {"s", 0},             {"samples", 0},      {"threads", -2},
      {"mu", "big"},         {"mu", {{"type", "gauss"}}}, {"m", {{"type", "values"}, {"values", {1, -1}}}},
      {"metric_scale", "log"}, {"redundancy", 3},  {"tolerances", 1},   {"schema_version", 2},
      {"a", 0}};
  for (const auto& [key, value] : bad) {
    json j = base;
    j[key] = value;
    EXPECT_THROW(cli::parse_config(j), cli::ConfigError) << key << " = " << value.dump();
  }
  json both = base;
  both["a"] = 2;
  both["b"] = 2;
  EXPECT_THROW(cli::parse_config(both), cli::ConfigError);
  both.erase("redundancy");
  EXPECT_NO_THROW(cli::parse_config(both));
  EXPECT_THROW(cli::parse_config(json::array()), cli::ConfigError);
  EXPECT_THROW(cli::parse_config(json{{"kind", "custom-frame"}}), cli::ConfigError);
  EXPECT_THROW(cli::parse_config(json{{"kind", "fock"}, {"jitter", 1.0}}), cli::ConfigError);
}

TEST(Config, RandomMutationsNeverEscapeAsOtherErrors) {
  // Any type swap in a valid config is either accepted or a ConfigError.
  const json base = load(kConfigs / "fock.json");
  const std::vector<json> values{json(nullptr), json("x"), json(-1), json(0), json(1e300), json::array(),
                                 json::object(), json(true)};
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    json j = base;
    auto it = j.begin();
    std::advance(it, rng.uniform_int(0, static_cast<int>(j.size()) - 1));
    j[it.key()] = values[rng.uniform_int(0, static_cast<int>(values.size()) - 1)];
    try {
      cli::parse_config(j);
    } catch (const cli::ConfigError&) {
    } catch (const std::exception& e) {
      ADD_FAILURE() << it.key() << " -> " << j[it.key()].dump() << ": " << e.what();
    }
  }
}

TEST(Cli, UsageErrorsExitTwo) {
  const fs::path dir = scratch("usage");
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("bogus"), 2);
  EXPECT_EQ(run("lift"), 2);
  EXPECT_EQ(run_config("lift", dir / "missing.json", dir), 2);
  atomic_write(dir / "broken.json", "{ \"kind\": ");
  EXPECT_EQ(run_config("lift", dir / "broken.json", dir), 2);
  atomic_write(dir / "a0.json", R"({"kind": "gabor", "Ns": [16], "a": 0, "b": 2})");
  EXPECT_EQ(run_config("lift", dir / "a0.json", dir), 2);
  EXPECT_EQ(run_config("lift", kConfigs / "onb.json", dir, "--seed -3"), 2);
  fs::remove_all(dir);
}

TEST(Cli, UnwritableOutputExitsTwo) {
  const fs::path dir = scratch("unwritable");
  atomic_write(dir / "plain_file", "x");
  EXPECT_EQ(run_config("export", kConfigs / "onb.json", dir / "plain_file" / "sub"), 2);
  fs::remove_all(dir);
}

TEST(Cli, VerifyOrthonormalBasis) {
  const fs::path dir = scratch("verify");
  ASSERT_EQ(run_config("verify", kConfigs / "onb.json", dir), 0);
  const json rep = load(dir / "identities.json");
  EXPECT_TRUE(rep.at("ok").get<bool>());
  const json& c = rep.at("cases").at(0);
  EXPECT_LT(c.at("gram_identities").at("max_residual").get<double>(), 1e-12);
  EXPECT_TRUE(c.at("augmented_invertibility").at("frame-frame").at("matrix_invertible").get<bool>());
  fs::remove_all(dir);
}

TEST(Cli, LiftGaborWritesTables) {
  const fs::path dir = scratch("gabor");
  ASSERT_EQ(run_config("lift", kConfigs / "gabor.json", dir), 0);
  for (const char* f : {"lift_N16.json", "lift_N32.json", "lift_N64.json", "lift_series.json", "scaling.csv", "scaling.dat"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const std::string csv = read_file(dir / "scaling.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.rfind("size,p,weight,lower,upper,condition,verdict\n", 0), 0u);
  EXPECT_EQ(csv.find("fail"), std::string::npos) << csv;
  fs::remove_all(dir);
}

TEST(Cli, SparseFockAllFailExitsOne) {
  const fs::path dir = scratch("sparse");
  EXPECT_EQ(run_config("lift", kConfigs / "fock_sparse.json", dir), 1);
  const json s = load(dir / "lift_series.json");
  for (const auto& e : s.at("series").at("entries")) {
    EXPECT_FALSE(e.at("ok").get<bool>());
    EXPECT_EQ(e.at("failure").get<std::string>().rfind("not a frame", 0), 0u);
  }
  // The closed-form Gram is still exported.
  EXPECT_EQ(run_config("export", kConfigs / "fock_sparse.json", dir), 0);
  EXPECT_TRUE(fs::exists(dir / "gram_R2.json"));
  fs::remove_all(dir);
}

TEST(Cli, ScalarSymbolOnTightFrame) {
  const fs::path dir = scratch("tight");
  ASSERT_EQ(run_config("lift", kConfigs / "scalar_tight.json", dir), 0);
  const json e = load(dir / "lift_frame.json").at("entry").at("report");
  EXPECT_NEAR(e.at("lower").get<double>(), 2.5, 1e-9);
  EXPECT_NEAR(e.at("upper").get<double>(), 2.5, 1e-9);
  fs::remove_all(dir);
}

TEST(Cli, ExportRoundTrip) {
  const fs::path dir = scratch("export");
  ASSERT_EQ(run_config("export", kConfigs / "random_frame.json", dir), 0);
  const Frame fr = frame_from_json(load(dir / "frame_frame.json"));
  const Mat g = matrix_from_json(load(dir / "gram_frame.json"));
  EXPECT_EQ(g, fr.gram());
  EXPECT_EQ(read_matrix_csv(dir / "gram_frame"), g);
  fs::remove_all(dir);
}

TEST(Cli, DeterministicAndSeedSensitive) {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  const fs::path c = scratch("det_c");
  ASSERT_EQ(run_config("lift", kConfigs / "random_frame.json", a), 0);
  ASSERT_EQ(run_config("lift", kConfigs / "random_frame.json", b), 0);
  EXPECT_EQ(read_file(a / "lift_series.json"), read_file(b / "lift_series.json"));
  EXPECT_EQ(read_file(a / "scaling.csv"), read_file(b / "scaling.csv"));
  ASSERT_EQ(run_config("lift", kConfigs / "random_frame.json", c, "--seed 99"), 0);
  EXPECT_NE(read_file(a / "lift_series.json"), read_file(c / "lift_series.json"));
  for (const auto& d : {a, b, c}) fs::remove_all(d);
}
