#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "extinctlab/cli.hpp"
#include "extinctlab/error.hpp"
#include "extinctlab/report.hpp"

using namespace extinctlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / "extinctlab_tests" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "extinctlab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

const std::string kConfigs = EXTINCTLAB_CONFIG_DIR;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config defaults and overrides") {
  const auto c = parse_config("[profile]\nkind = log_power\nbeta = 3\n[odi]\ngamma = 0.5\n");
  CHECK(c.seed == 42);
  CHECK(c.profile.beta == 3.0);
  CHECK(c.odi.gamma == 0.5);
  CHECK(c.problem.q == 0.5);
  CHECK(c.spectral_q() == 0.5);
  CHECK(c.profile.omega().kind() == OmegaKind::log_power);
}

TEST_CASE("inline comments are ignored") {
  const auto c = parse_config("[problem]\nq = 0.25   ; exponent\nu0 = 0.5\t# level\n; whole line\n");
  CHECK(c.problem.q == 0.25);
  CHECK(c.problem.u0 == 0.5);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("[profile]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[problem]\nq = half\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[problem]\nbackend = gpu\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/x.ini"), ConfigError);
}

TEST_CASE("dini exit codes") {
  CHECK(cli({"dini", "--config", kConfigs + "/logbeta2.ini", "--out", scratch("d1").string()}) == kExitOk);
  CHECK(cli({"dini", "--config", kConfigs + "/constant.ini", "--out", scratch("d2").string()}) ==
        kExitNegative);
  const auto bad = scratch("bad");
  fs::create_directories(bad);
  std::ofstream(bad / "bad.ini") << "[profile]\nkind = spline\n";
  CHECK(cli({"dini", "--config", (bad / "bad.ini").string(), "--out", (bad / "o").string()}) == kExitUsage);
  CHECK(cli({"dini"}) == kExitUsage);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  const auto cfg = load_config(kConfigs + "/linear.ini");
  const auto a = scratch("det_a"), b = scratch("det_b");
  cmd_dini(cfg, a);
  cmd_dini(cfg, b);
  const auto ra = cmd_bound(cfg, a / "bound");
  cmd_bound(cfg, b / "bound");
  for (const auto& f : ra.files) CHECK(slurp(a / "bound" / f) == slurp(b / "bound" / f));
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
}

TEST_CASE("manifest lists every file left in the directory") {
  auto cfg = load_config(kConfigs + "/linear.ini");
  cfg.problem.horizon = 2.0;
  const auto d = scratch("manifest");
  const auto r = cmd_simulate(cfg, d);
  std::set<std::string> on_disk, listed(r.files.begin(), r.files.end());
  for (const auto& e : fs::directory_iterator(d)) on_disk.insert(e.path().filename().string());
  CHECK(on_disk == listed);
  CHECK(listed.count("summary.json") == 1);
  CHECK(r.exit_code == kExitNegative);  // still positive at t = 2
}

TEST_CASE("an output directory has one owner") {
  const auto d = scratch("lock");
  OutputDir first(d);
  CHECK_THROWS_AS(OutputDir second(d), Error);
}

TEST_CASE("zero potential reaches the horizon, constant potential dies") {
  auto cfg = parse_config("[problem]\npotential = zero\nhorizon = 1\ncells = 100\n");
  CHECK(cmd_simulate(cfg, scratch("zero")).summary["verdict"] == "horizon-reached");
  cfg = parse_config("[problem]\npotential = constant\nepsilon = 1\nu0 = 1\nhorizon = 5\ncells = 100\n");
  const auto r = cmd_simulate(cfg, scratch("const"));
  CHECK(r.exit_code == kExitOk);
  CHECK(r.summary["extinction_time"].get<double>() == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("bound refuses y0 >= 1 and reports unbounded for constant omega") {
  auto cfg = parse_config("[problem]\nu0 = 1\n");
  CHECK_THROWS_AS(cmd_bound(cfg, scratch("b_big")), ConfigError);
  cfg = load_config(kConfigs + "/constant.ini");
  const auto r = cmd_bound(cfg, scratch("b_const"));
  CHECK(r.exit_code == kExitNegative);
  CHECK(r.summary["verdict"] == "unbounded");
}

TEST_CASE("spectral on a zero potential") {
  const auto cfg = parse_config("[spectral]\npotential = constant\nconstant = 0\nkv_n_max = 5\nn_hi = 10\n");
  const auto r = cmd_spectral(cfg, scratch("sp0"));
  CHECK(r.summary["lambda1_worst_residual"].get<double>() < 1e-9);
  std::ifstream f(scratch("sp0").parent_path() / "sp0" / "lambda1.csv");
  std::string line;
  std::getline(f, line);
  while (std::getline(f, line)) {
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    CHECK(std::abs(std::stod(line.substr(c1 + 1, c2 - c1 - 1))) < 1e-10);
  }
}

TEST_CASE("CLI overrides reach the bound") {
  const auto d = scratch("ovr");
  CHECK(cli({"bound", "--config", kConfigs + "/linear.ini", "--out", d.string(), "--gamma", "0.5", "--c7",
             "2"}) == kExitOk);
  const auto s = nlohmann::json::parse(slurp(d / "summary.json"));
  CHECK(s["config"]["odi"]["gamma"] == 0.5);
  CHECK(s["config"]["odi"]["c7"] == 2.0);
}

}
