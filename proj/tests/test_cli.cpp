#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "qgl/experiments.hpp"

using namespace qgl;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json qubit_instance() {
  return json::parse(R"({
    "hamiltonian": {"kind": "pauli_z_chain", "n": 1, "params": {"fields": [1.0]}},
    "beta": 1.0,
    "jumps": [{"pauli": "X"}],
    "filter": {"kind": "gaussian", "param": 5.0},
    "weight": {"kind": "metropolis"},
    "grid": {"N": 64}
  })");
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qgl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  struct Result {
    int code = -1;
    std::string out;
  };
  Result run(const std::string& args) const {
    const std::string cmd = std::string(QGL_CLI_PATH) + " " + args + " 2>" + (dir_ / "stderr.txt").string();
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }
  std::string stderr_text() const {
    std::ifstream in(dir_ / "stderr.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  static std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  static std::string body(const std::string& csv) { return csv.substr(csv.find('\n') + 1); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ParsevalSingleRow) {
  const json cfg{{"experiment", "parseval"}, {"instance", qubit_instance()}};
  const auto r = run("parseval --config " + write("c.json", cfg.dump()));
  EXPECT_EQ(r.code, 0);
  const std::string b = body(r.out);
  EXPECT_EQ(b.substr(0, b.find('\n')), "n,N,jump_count,residual,sum_norm,bound,pass");
  std::istringstream lines(b);
  std::string line;
  int rows = -1;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 1);
  EXPECT_EQ(b.back(), '\n');
  EXPECT_NE(b.find(",1\n"), std::string::npos);
}

TEST_F(CliTest, FixedPointScanWritesDecreasingRows) {
  json inst = qubit_instance();
  inst["grid"]["N"] = 256;
  const json cfg{{"experiment", "fixed-point-scan"},
                 {"instance", inst},
                 {"sweep", {{"param", "sigma_t"}, {"values", {2, 4, 8, 16}}}}};
  const fs::path out = dir_ / "scan.csv";
  const auto r = run("fixed-point-scan --config " + write("c.json", cfg.dump()) + " --out " + out.string());
  ASSERT_EQ(r.code, 0) << stderr_text();
  const std::string text = read(out);
  EXPECT_EQ(text.rfind("# generated", 0), 0u);
  std::istringstream lines(body(text));
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "sigma_t,beta,N,trace_distance,t_mix_lb,runtime_s");
  double prev = 1e300;
  int rows = 0;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    const double d = std::stod(cells.at(3));
    EXPECT_LT(d, prev);
    prev = d;
    ++rows;
  }
  EXPECT_EQ(rows, 4);
  EXPECT_FALSE(fs::exists(out.string() + ".tmp"));
}

TEST_F(CliTest, MalformedConfigExitsTwoWithoutOutput) {
  const fs::path out = dir_ / "never.csv";
  const auto r = run("parseval --config " + write("bad.json", "{\"experiment\": \"parseval\", ") + " --out " +
                     out.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, UnknownExperimentAndSweep) {
  json cfg{{"experiment", "nope"}, {"instance", qubit_instance()}};
  EXPECT_EQ(run("nope --config " + write("a.json", cfg.dump())).code, 2);
  cfg = {{"experiment", "davies-exactness"},
         {"instance", qubit_instance()},
         {"sweep", {{"param", "sigma_t"}, {"values", {1}}}}};
  EXPECT_EQ(run("davies-exactness --config " + write("b.json", cfg.dump())).code, 2);
  EXPECT_EQ(run("parseval --config " + write("c.json", cfg.dump())).code, 2);  // name mismatch
}

TEST_F(CliTest, InvalidInstanceExitsThree) {
  json inst = qubit_instance();
  inst["jumps"] = json::array({{{"pauli", "XX"}}});
  const json cfg{{"experiment", "parseval"}, {"instance", inst}};
  EXPECT_EQ(run("parseval --config " + write("c.json", cfg.dump())).code, 3);
}

TEST_F(CliTest, FailingRowsExitOne) {
  json inst = qubit_instance();
  inst["grid"]["N"] = 256;
  const json cfg{{"experiment", "fixed-point-scan"},
                 {"instance", inst},
                 {"sweep", {{"param", "sigma_t"}, {"values", {8, 2}}}}};
  const auto r = run("fixed-point-scan --config " + write("c.json", cfg.dump()));
  EXPECT_EQ(r.code, 1);
  const std::string err = stderr_text();
  EXPECT_NE(err.find("failing rows"), std::string::npos);
  EXPECT_NE(err.find("  1:"), std::string::npos);
}

TEST_F(CliTest, DeterministicBodies) {
  const json cfg{{"experiment", "bound-suite"}, {"instance", qubit_instance()}, {"seed", 5}};
  const std::string path = write("c.json", cfg.dump());
  const auto a = run("bound-suite --config " + path);
  const auto b = run("bound-suite --config " + path);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(body(a.out), body(b.out));
}

TEST_F(CliTest, JsonEchoesConfig) {
  const json cfg{{"experiment", "davies-exactness"}, {"instance", qubit_instance()}};
  const auto r = run("davies-exactness --format json --config " + write("c.json", cfg.dump()));
  ASSERT_EQ(r.code, 0);
  const json rep = json::parse(r.out);
  EXPECT_EQ(rep["experiment"], "davies-exactness");
  EXPECT_EQ(rep["config"]["instance"]["beta"], 1.0);
  ASSERT_EQ(rep["rows"].size(), 1u);
  EXPECT_EQ(rep["rows"][0]["pass"], 1.0);
}

TEST_F(CliTest, HelpListsColumns) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sigma_t,beta,N,trace_distance,t_mix_lb,runtime_s"), std::string::npos);
}

TEST(Config, ParsesMatricesAndOverrides) {
  const json cfg = json::parse(R"({
    "experiment": "parseval",
    "instance": {
      "hamiltonian": {"kind": "explicit", "params": {"matrix": [[1, [0, 1]], [[0, -1], -1]]}},
      "beta": 0.5,
      "jumps": [{"matrix": [[0, 1], [1, 0]], "coeff": 0.5}],
      "normalize_jumps": false,
      "grid": {"N": 16, "omega0": 1.0}
    },
    "tolerances": {"parseval": 1e-8},
    "output": {"path": "x.csv", "format": "json"},
    "seed": 9
  })");
  const ExperimentConfig c = parse_config(cfg.dump());
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.format, "json");
  EXPECT_EQ(c.instance.n_points, 16);
  ASSERT_TRUE(c.instance.omega0.has_value());
  EXPECT_DOUBLE_EQ(*c.instance.omega0, 1.0);
  EXPECT_DOUBLE_EQ(c.tolerance("parseval", 1.0), 1e-8);
  EXPECT_DOUBLE_EQ(c.tolerance("other", 3.0), 3.0);
  const GibbsContext ctx = instance_context(c.instance);
  EXPECT_EQ(ctx.hamiltonian()(0, 1), Complex(0, 1));
  EXPECT_NEAR(instance_jumps(c.instance)[0](0, 1).real(), 0.5, 1e-15);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
  EXPECT_THROW(parse_config(R"({"instance": {}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"experiment": "parseval"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"experiment": "parseval", "instance": {"beta": "hot", "jumps": [{"pauli": "X"}]}})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"experiment": "parseval", "instance": {"jumps": []}})"), InstanceError);
  EXPECT_THROW(parse_config(R"({"experiment": "parseval", "instance": {"jumps": [{"pauli": "X"}],
                                 "grid": {"N": 8, "omega0": 0.01}}})"),
               Error);
}

TEST(Report, FormatsNumbers) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333");
}

TEST(Report, RegisteredExperimentsHaveColumns) {
  EXPECT_EQ(registered_experiments().size(), 14u);
  for (const auto& e : registered_experiments()) EXPECT_FALSE(experiment_columns(e).empty());
}
