#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "io.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/flows.hpp"

using namespace isoflow;
using namespace isoflow::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("isoflow-cli-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result run(const std::string& args) {
  static int calls = 0;
  const std::string tag = std::to_string(::getpid()) + "-" + std::to_string(calls++);
  const fs::path dir = fs::temp_directory_path();
  const fs::path out = dir / ("isoflow-cli-stdout-" + tag + ".txt");
  const fs::path err = dir / ("isoflow-cli-stderr-" + tag + ".txt");
  const std::string cmd = std::string(ISOFLOW_EXE) + " " + args + " >" + out.string() + " 2>" +
                          err.string();
  const int raw = std::system(cmd.c_str());
  Result r{WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
  fs::remove(out);
  fs::remove(err);
  return r;
}

// Largest drift of any column of a monitor CSV from its first row.
double column_drift(const fs::path& csv) {
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<double> first;
  double worst = 0.0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (first.empty()) {
      first = row;
      continue;
    }
    for (std::size_t i = 1; i < row.size(); ++i)
      worst = std::max(worst, std::abs(row[i] - first[i]));
  }
  return worst;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST(Cli, RunTodaCasimirs) {
  const fs::path dir = scratch("toda");
  const auto r = run("run --flow toda-4 --order 2 --h 0.1 --T 100 --out " + dir.string());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_LE(column_drift(dir / "monitor_casimir.csv"), 1e-11);
  EXPECT_TRUE(fs::exists(dir / "trajectory.csv"));
  EXPECT_EQ(count_lines(slurp(dir / "trajectory.csv")), 1002u);
  fs::remove_all(dir);
}

TEST(Cli, RunRigidBodyWritesOutputFiles) {
  const fs::path dir = scratch("rigid");
  const auto r = run("run --flow rigid-body-10 --order 2 --h 0.1 --T 100 --out " + dir.string());
  ASSERT_EQ(r.status, 0) << r.err;
  for (const char* f : {"trajectory.csv", "monitor_casimir.csv", "monitor_hamiltonian.csv",
                        "monitor_subspace.csv", "monitor_iterations.csv", "manifest.json"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const Json man = Json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(man.at("command"), "run");
  EXPECT_EQ(man.at("status").at("complete"), true);
  EXPECT_EQ(man.at("status").at("steps"), 1000);
  EXPECT_EQ(man.at("config").at("h"), 0.1);
  EXPECT_NE(r.out.find("rigid-body-10: 1000 steps of h=0.1"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, NonPositiveStepIsConfigError) {
  auto r = run("run --flow toda-4 --h -0.1 --T 1 --out " + scratch("bad-h").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("'h'"), std::string::npos) << r.err;

  const fs::path dir = scratch("bad-h-file");
  std::ofstream(dir / "cfg.json") << R"({"flow": "toda-4", "h": 0, "T": 1})";
  r = run("run --config " + (dir / "cfg.json").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("'h'"), std::string::npos) << r.err;
  fs::remove_all(dir);
}

TEST(Cli, ConfigErrors) {
  const fs::path dir = scratch("cfg-errors");
  EXPECT_EQ(run("run --flow nope --out " + dir.string()).status, 2);
  EXPECT_EQ(run("run --flow toda-4 --h 0.3 --T 1 --out " + dir.string()).status, 2);
  EXPECT_EQ(run("run --flow toda-4 --variant jquad --T 1 --out " + dir.string()).status, 2);
  EXPECT_EQ(run("run --flow toda-4 --order 5 --T 1 --out " + dir.string()).status, 2);
  EXPECT_EQ(run("run --bogus-flag").status, 2);
  std::ofstream(dir / "unknown.json") << R"({"flow": "toda-4", "colour": 1})";
  const auto r = run("run --config " + (dir / "unknown.json").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
  std::ofstream(dir / "broken.json") << "{";
  EXPECT_EQ(run("run --config " + (dir / "broken.json").string()).status, 2);
  std::ofstream(dir / "lobatto.json")
      << Json(partitioned_to_json(lobatto_iiia_iiib_2())).dump();
  EXPECT_EQ(run("run --flow brockett-3 --T 1 --partitioned " + (dir / "lobatto.json").string() +
                " --out " + dir.string())
                .status,
            2);
  fs::remove_all(dir);
}

TEST(Cli, SolverFailureIsStatusThree) {
  const fs::path dir = scratch("solver");
  const auto r = run("run --flow rigid-body-10 --h 0.1 --T 1 --max-iter 1 --out " + dir.string());
  EXPECT_EQ(r.status, 3);
  const Json man = Json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(man.at("status").at("complete"), false);
  EXPECT_TRUE(man.at("status").contains("failure"));
  fs::remove_all(dir);
}

TEST(Cli, RerunIsByteIdentical) {
  const fs::path a = scratch("det-a"), b = scratch("det-b");
  const std::string args = "run --flow brockett-3 --seed 11 --order 4 --T 5 --out ";
  ASSERT_EQ(run(args + a.string()).status, 0);
  ASSERT_EQ(run(args + b.string()).status, 0);
  for (const auto& e : fs::directory_iterator(a)) {
    if (e.path().extension() != ".csv") continue;
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path().filename();
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, ManifestReproducesRun) {
  const fs::path a = scratch("man-a"), b = scratch("man-b");
  ASSERT_EQ(run("run --flow heisenberg-3 --seed 5 --T 2 --stride 2 --out " + a.string()).status, 0);
  ASSERT_EQ(run("run --config " + (a / "manifest.json").string() + " --out " + b.string()).status,
            0);
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (e.path().extension() != ".csv") continue;
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path().filename();
    ++compared;
  }
  EXPECT_GE(compared, 4u);
  Json ma = Json::parse(slurp(a / "manifest.json")), mb = Json::parse(slurp(b / "manifest.json"));
  ma["config"].erase("out");
  mb["config"].erase("out");
  EXPECT_EQ(ma, mb);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, ConfigJsonRoundTrip) {
  ExperimentConfig c;
  c.flow = "chu-4";
  c.order = 4;
  c.h = 0.05;
  c.t_final = 2.0;
  c.partitioned = lobatto_iiia_iiib_2();
  c.solver.method = SolverMethod::kNewton;
  c.monitors = std::vector<std::string>{"casimir"};
  const Json j = config_to_json(c);
  EXPECT_EQ(config_to_json(config_from_json(j)), j);
  const Json wrapped = {{"command", "run"}, {"config", j}};
  EXPECT_EQ(config_to_json(config_from_json(wrapped)), j);
}

TEST(Cli, MatrixJsonFormat) {
  const Matrix m{{Complex(1, 2), 3}, {0, Complex(0, -1)}};
  const Json j = matrix_to_json(m);
  EXPECT_EQ(j[0][0], Json::array({1.0, 2.0}));
  EXPECT_EQ(matrix_from_json(j, "W0"), m);
  EXPECT_EQ(matrix_from_json(Json::parse("[[1, 2], [3, 4]]"), "W0"), (Matrix{{1, 2}, {3, 4}}));
  EXPECT_THROW(matrix_from_json(Json::parse("[[1, 2], [3]]"), "W0"), ConfigurationError);
}

TEST(Cli, TableauFile) {
  const fs::path dir = scratch("tableau");
  std::ofstream(dir / "euler.json") << R"({"s": 1, "A": [[0]], "b": [1], "c": [0]})";
  const auto r = run("run --flow rigid-body-10 --T 1 --tableau " + (dir / "euler.json").string() +
                     " --out " + dir.string());
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.err.find("not symplectic"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, ConvergeSingleStepIsDegenerate) {
  const fs::path dir = scratch("conv-single");
  EXPECT_EQ(run("converge --flow toda-4 --order 2 --h 0.125 --out " + dir.string()).status, 4);
  fs::remove_all(dir);
}

TEST(Cli, ConvergeTodaSecondOrder) {
  const fs::path dir = scratch("conv-toda");
  const auto r = run("converge --flow toda-4 --order 2 --h-range 3 7 --json --out " + dir.string());
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j.at("series")[0].at("slope").get<double>(), 2.0, 0.2);
  EXPECT_TRUE(fs::exists(dir / "convergence.csv"));
  EXPECT_EQ(Json::parse(slurp(dir / "convergence.json")), j);
  fs::remove_all(dir);
}

TEST(Cli, ListFlows) {
  auto r = run("list-flows");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(count_lines(r.out), 8u);
  for (const auto& name : preset_names()) EXPECT_NE(r.out.find(name), std::string::npos);

  r = run("list-flows --json");
  ASSERT_EQ(r.status, 0);
  const Json j = Json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), 8u);
  EXPECT_EQ(j[0].at("name"), "rigid-body-10");
  EXPECT_EQ(j[0].at("dimension"), 10);
  EXPECT_EQ(j[0].at("hamiltonian"), true);

  const fs::path empty = scratch("empty-flows");
  r = run("list-flows --json --flow-dir " + empty.string());
  EXPECT_EQ(Json::parse(r.out).size(), 8u);
  fs::remove_all(empty);
}

TEST(Cli, CustomFlowDirectory) {
  const fs::path dir = scratch("custom-flows");
  std::ofstream(dir / "my-toda.json") << R"({"kind": "toda", "a": [1, 2, 3], "b": [0.5, 0.5, 0.5]})";
  auto r = run("list-flows --json --flow-dir " + dir.string());
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j.size(), 9u);
  EXPECT_EQ(j[8].at("name"), "my-toda");
  EXPECT_EQ(j[8].at("custom"), true);

  const fs::path out = dir / "out";
  r = run("run --flow my-toda --flow-dir " + dir.string() + " --T 1 --out " + out.string());
  ASSERT_EQ(r.status, 0) << r.err;
  const Json man = Json::parse(slurp(out / "manifest.json"));
  EXPECT_TRUE(man.at("config").at("flow").is_object());
  fs::remove_all(dir);
}

TEST(Cli, InProcessCommands) {
  std::ostringstream out, err;
  EXPECT_EQ(list_flows_command("", false, out, err), kExitOk);
  EXPECT_EQ(count_lines(out.str()), 8u);

  ExperimentConfig c;
  c.flow = "toda-4";
  c.h = 0.1;
  c.t_final = 0.25;
  c.out = scratch("inproc").string();
  std::ostringstream o2, e2;
  EXPECT_EQ(run_command(c, false, o2, e2), kExitConfig);
  EXPECT_NE(e2.str().find("multiple"), std::string::npos);
  fs::remove_all(c.out);
}
