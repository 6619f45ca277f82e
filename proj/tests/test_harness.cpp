#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hiergov/error.hpp"
#include "hiergov/harness.hpp"

using namespace hiergov;
using namespace hiergov::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hiergov_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Shell {
  int status;
  std::string err;
};

Shell shell(const std::string& args, const std::string& env = "") {
  const auto err = fs::temp_directory_path() / "hiergov_test_stderr.txt";
  const std::string cmd =
      env + " \"" HIERGOV_CLI "\" " + args + " > /dev/null 2> \"" + err.string() + "\"";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(err)};
}

ExperimentConfig small_norm(int side, std::vector<int> sizes, int trials, int steps) {
  ExperimentConfig c;
  c.experiment = Case::NormLearning;
  c.grid_side = side;
  c.subgroup_sizes = std::move(sizes);
  c.trials = trials;
  c.steps = steps;
  return c;
}

}  // namespace

TEST_CASE("default sweep") {
  CHECK(default_sweep(30) == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 15, 20, 30});
  CHECK(default_sweep(10) == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 10});
  CHECK(default_sweep(9) == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("trial seeds are distinct and stable") {
  CHECK(trial_seed(1, Case::NormLearning, 4, 0) == trial_seed(1, Case::NormLearning, 4, 0));
  CHECK(trial_seed(1, Case::NormLearning, 4, 0) != trial_seed(1, Case::NormLearning, 4, 1));
  CHECK(trial_seed(1, Case::NormLearning, 4, 0) != trial_seed(1, Case::ElFarol, 4, 0));
  CHECK(trial_seed(1, Case::NormLearning, 4, 0) != trial_seed(2, Case::NormLearning, 4, 0));
  CHECK(trial_seed(1, Case::NormLearning, 4, 0) != trial_seed(1, Case::NormLearning, 5, 0));
}

TEST_CASE("identical configs give identical bytes") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  auto c = small_norm(4, {1}, 1, 1);
  c.seed = 42;
  emit_csv(run_experiment(c), a);
  emit_csv(run_experiment(c), b);
  CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
  CHECK(slurp(a / "series_1.csv") == slurp(b / "series_1.csv"));
  CHECK_FALSE(slurp(a / "sweep.csv").empty());
}

TEST_CASE("thread count does not change results") {
  for (auto experiment : {Case::NormLearning, Case::ElFarol}) {
    auto c = small_norm(6, {1, 2, 3, 6}, 6, 60);
    c.experiment = experiment;
    c.bar.benchmark = true;
    c.threads = 1;
    const auto dir1 = scratch("thr1"), dir4 = scratch("thr4");
    emit_csv(run_experiment(c), dir1);
    c.threads = 4;
    emit_csv(run_experiment(c), dir4);
    for (const auto& entry : fs::directory_iterator(dir1)) {
      CAPTURE(entry.path().string());
      CHECK(slurp(entry.path()) == slurp(dir4 / entry.path().filename()));
    }
  }
}

TEST_CASE("a single action is trivially consensual") {
  auto c = small_norm(2, {1, 2}, 3, 5);
  c.norm.actions = 1;
  const auto r = run_experiment(c);
  for (const auto& cell : r.cells) {
    CHECK(cell.sample.poa == 0.0);
    CHECK(cell.series[0].mean.front() == 1.0);
  }
}

TEST_CASE("aggregate PoA is stable under a change of master seed") {
  auto c = small_norm(10, {2, 5}, 200, 1000);
  c.seed = 1;
  const auto a = run_experiment(c);
  c.seed = 987654321;
  const auto b = run_experiment(c);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CAPTURE(a.cells[i].n);
    CHECK(std::abs(a.cells[i].sample.poa - b.cells[i].sample.poa) <= 0.05);
    CHECK(a.cells[i].series[0].mean != b.cells[i].series[0].mean);
  }
}

TEST_CASE("sweep rows stay in range and runs are kept on request") {
  auto c = small_norm(6, {}, 4, 80);
  c.keep_runs = true;
  const auto r = run_experiment(c);
  REQUIRE(r.cells.size() == 6);
  for (const auto& cell : r.cells) {
    CHECK(cell.sample.poa >= 0.0);
    CHECK(cell.sample.poa <= 1.0);
    CHECK(cell.sample.pom >= 0.0);
    CHECK(cell.sample.pom <= 1.0);
    REQUIRE(cell.runs.size() == 4);
    for (const auto& run : cell.runs) {
      REQUIRE(run.series.size() == 3);
      for (const auto& s : run.series) CHECK(s.size() == 80);
    }
  }
  CHECK(r.cells.front().sample.pom == 0.0);
  CHECK(r.cells.back().sample.pom == doctest::Approx(1.0));
}

TEST_CASE("bar sweep normalises and keeps the benchmark apart") {
  ExperimentConfig c;
  c.experiment = Case::ElFarol;
  c.grid_side = 10;
  c.subgroup_sizes = {1, 2, 5, 10};
  c.trials = 3;
  c.steps = 100;
  c.bar.benchmark = true;
  const auto r = run_experiment(c);
  REQUIRE(r.benchmark.has_value());
  CHECK(r.benchmark->label == "benchmark");
  CHECK(r.cells.size() == 4);
  CHECK(r.cells.front().sample.pom == 0.0);
  CHECK(r.cells.back().sample.pom == 1.0);
  double lo = 1, hi = 0;
  for (const auto& cell : r.cells) {
    lo = std::min(lo, cell.sample.poa);
    hi = std::max(hi, cell.sample.poa);
  }
  CHECK(lo == 0.0);
  CHECK(hi == 1.0);
  CHECK(c.bar_config().threshold == 60);

  const auto dir = scratch("bar");
  emit_csv(r, dir);
  CHECK(fs::exists(dir / "series_benchmark.csv"));
  CHECK(slurp(dir / "sweep.csv").find("benchmark") == std::string::npos);
}

TEST_CASE("one sample gives a two-line sweep file") {
  SweepResult r;
  r.config.experiment = Case::NormLearning;
  SweepCell cell;
  cell.n = 1;
  cell.label = "1";
  cell.trials = 1;
  cell.sample = {1, 1.0, 0.0, 0.0, 0.0};
  r.cells.push_back(cell);
  const auto dir = scratch("two_lines");
  emit_csv(r, dir);
  const auto text = slurp(dir / "sweep.csv");
  CHECK(text == "case,n,poa,pom,raw_performance,raw_cost,trials\nnorm-learning,1,1,0,0,0,1\n");
  CHECK_FALSE(fs::exists(dir / "pog.json"));
}

TEST_CASE("empty results are rejected without writing") {
  const auto dir = scratch("empty");
  SweepResult r;
  CHECK_THROWS_AS(emit_csv(r, dir), Error);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("unwritable output directories report the path") {
  const auto blocker = scratch("blocker");
  std::ofstream(blocker) << "file";
  auto c = small_norm(2, {1}, 1, 1);
  const auto r = run_experiment(c);
  try {
    emit_csv(r, blocker / "sub");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
    CHECK(std::string(e.what()).find(blocker.string()) != std::string::npos);
  }
  fs::remove(blocker);
}

TEST_CASE("emit then parse recovers 9 significant digits") {
  SweepResult r;
  r.config.experiment = Case::ElFarol;
  Rng rng(12);
  for (int n = 1; n <= 12; ++n) {
    SweepCell cell;
    cell.n = n;
    cell.label = std::to_string(n);
    cell.trials = 7;
    cell.sample = {n, rng.uniform(), rng.uniform(), rng.uniform() * 2 - 1, rng.uniform() * 1e4};
    r.cells.push_back(cell);
  }
  const auto dir = scratch("roundtrip");
  emit_csv(r, dir);
  const auto parsed = read_sweep_csv(dir / "sweep.csv");
  CHECK(parsed.experiment == "el-farol");
  REQUIRE(parsed.samples.size() == r.cells.size());
  for (std::size_t i = 0; i < parsed.samples.size(); ++i) {
    const auto& want = r.cells[i].sample;
    const auto& got = parsed.samples[i];
    CHECK(got.n == want.n);
    CHECK(format_number(got.poa) == format_number(want.poa));
    CHECK(format_number(got.pom) == format_number(want.pom));
    CHECK(format_number(got.raw_performance) == format_number(want.raw_performance));
    CHECK(format_number(got.raw_cost) == format_number(want.raw_cost));
    CHECK(std::abs(got.poa - want.poa) <= 1e-9 * std::max(1.0, std::abs(want.poa)));
    CHECK(parsed.trials[i] == 7);
  }
}

TEST_CASE("malformed sweep files") {
  const auto dir = scratch("malformed");
  fs::create_directories(dir);
  std::ofstream(dir / "bad_header.csv") << "n,poa\n1,0.5\n";
  std::ofstream(dir / "bad_row.csv")
      << "case,n,poa,pom,raw_performance,raw_cost,trials\nnorm-learning,1,x,0,0,0,1\n";
  CHECK_THROWS_AS(read_sweep_csv(dir / "bad_header.csv"), Error);
  CHECK_THROWS_AS(read_sweep_csv(dir / "bad_row.csv"), Error);
  CHECK_THROWS_AS(read_sweep_csv(dir / "absent.csv"), Error);
}

TEST_CASE("config JSON") {
  const auto c = ExperimentConfig::from_json(nlohmann::json::parse(R"({
    "case": "el-farol", "grid_side": 20, "subgroup_sizes": [2, 4, 20],
    "trials": 5, "bar": {"credit": "chosen-action", "benchmark": true}
  })"));
  CHECK(c.experiment == Case::ElFarol);
  CHECK(c.sweep() == std::vector<int>{2, 4, 20});
  CHECK(c.bar.credit == bar::CreditTarget::ChosenAction);
  CHECK(c.bar_config().population == 400);
  CHECK(c.bar_config().threshold == 240);

  const auto back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());

  auto bad = [](const char* text) {
    try {
      ExperimentConfig::from_json(nlohmann::json::parse(text));
    } catch (const Error& e) {
      return e.kind() == ErrorKind::InvalidConfiguration;
    }
    return false;
  };
  CHECK(bad(R"({"case": "norm-learning", "colour": 1})"));
  CHECK(bad(R"({"case": "chess"})"));
  CHECK(bad(R"({"case": "norm-learning", "grid_side": 5, "subgroup_sizes": [6]})"));
  CHECK(bad(R"({"case": "norm-learning", "subgroup_sizes": [2, 2]})"));
  CHECK(bad(R"({"case": "norm-learning", "trials": 0})"));
  CHECK(bad(R"({"case": "norm-learning", "norm": {"alpha": 1.5}})"));
  CHECK(bad(R"({"case": "norm-learning", "grid_side": 1})"));
  CHECK(bad(R"({"case": "el-farol", "bar": {"threshold": 5000}})"));
  CHECK(bad(R"({"case": "el-farol", "gamma": "chebyshev"})"));
  CHECK(bad(R"({"case": "norm-learning", "steps": "many"})"));
}

TEST_CASE("presets") {
  const auto fig1 = preset(Replication::Fig1);
  CHECK(fig1.size() == 6);
  for (const auto& r : fig1) {
    CHECK(r.config.grid_side == 10);
    CHECK(r.config.sweep() == std::vector<int>{4});
    CHECK(r.config.remainder == topology::RemainderPolicy::Merged);
  }
  CHECK(preset(Replication::Fig3).front().config.sweep() == default_sweep(30));
  CHECK(preset(Replication::BarDynamics).front().config.bar.benchmark);
  CHECK(preset(Replication::PopulationSize).size() == 3);
  for (auto r : {Replication::Fig1, Replication::Fig3, Replication::BarDynamics,
                 Replication::PopulationSize}) {
    CHECK(parse_replication(to_string(r)) == r);
    for (const auto& p : preset(r)) CHECK_NOTHROW(p.config.validate());
  }
  auto c = preset(Replication::Fig3).front().config;
  apply(c, {7u, 3, 11, 2u});
  CHECK(c.seed == 7);
  CHECK(c.trials == 3);
  CHECK(c.steps == 11);
  CHECK(c.threads == 2);
}

TEST_CASE("cli: usage errors exit 2") {
  CHECK(shell("").status == 2);
  CHECK(shell("frobnicate").status == 2);
  CHECK(shell("run --bogus x.json").status == 2);
  CHECK(shell("replicate fig9").status == 2);
  CHECK(shell("--help").status == 0);
}

TEST_CASE("cli: a missing config names the path") {
  const auto r = shell("run /nonexistent/missing.json");
  CHECK(r.status == 1);
  CHECK(r.err.find("/nonexistent/missing.json") != std::string::npos);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
}

TEST_CASE("cli: fit recovers the generating coefficients") {
  const auto dir = scratch("cli_fit");
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "sweep.csv");
    out << "case,n,poa,pom,raw_performance,raw_cost,trials\n";
    const std::vector<int> ns{1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 15, 20, 30};
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double x = 0.02 + 0.98 * static_cast<double>(i) / (ns.size() - 1);
      const double y = 0.0174 / (x + 0.0299) + 0.0821;
      out << "norm-learning," << ns[i] << ',' << format_number(y) << ',' << format_number(x)
          << ",0,0,1\n";
    }
  }
  const auto r = shell("fit \"" + (dir / "sweep.csv").string() + "\"");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "pog.json"));
  CHECK(std::abs(j["a"].get<double>() - 0.0174) < 1e-6);
  CHECK(std::abs(j["b"].get<double>() - 0.0299) < 1e-6);
  CHECK(std::abs(j["c"].get<double>() - 0.0821) < 1e-6);
  CHECK(j["gamma"] == "euclidean");
  for (const char* key : {"residual", "optimal_x", "optimal_pog", "optimal_n"}) {
    CHECK(j.contains(key));
  }
}

TEST_CASE("cli: run honours the output directory override") {
  const auto dir = scratch("cli_env");
  const auto cfg = scratch("cli_cfg.json");
  std::ofstream(cfg) << R"({"case": "norm-learning", "grid_side": 4, "steps": 20, "trials": 2})";
  const auto r = shell("run \"" + cfg.string() + "\" --seed 3",
                       "HIERGOV_OUTPUT_DIR=\"" + dir.string() + "\"");
  CHECK(r.status == 0);
  CHECK(fs::exists(dir / "sweep.csv"));
  CHECK(fs::exists(dir / "series_4.csv"));
  CHECK(fs::exists(dir / "pog.json"));

  // fit on the output of run succeeds when there are >= 4 distinct n.
  CHECK(shell("fit \"" + (dir / "sweep.csv").string() + "\"").status == 0);
  fs::remove(cfg);
}

TEST_CASE("slow: cli replicate fig3 with 50 trials") {
  const auto dir = scratch("cli_fig3");
  const auto r = shell("replicate fig3 --trials 50 --out \"" + dir.string() + "\"");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "pog.json"));
  const int n = j["optimal_n"].get<int>();
  CHECK(n >= 5);
  CHECK(n <= 9);
}
