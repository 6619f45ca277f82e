#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hiergov/error.hpp"
#include "hiergov/harness.hpp"

namespace fs = std::filesystem;
using namespace hiergov;
using harness::format_number;

namespace {

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> steps;
  std::optional<unsigned> threads;
  std::string out;

  harness::Overrides overrides() const { return {seed, trials, steps, threads}; }
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--trials", f.trials, "trials per subgroup size")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", f.steps, "steps per run")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  cmd->add_option("--out", f.out, "output directory");
}

// --out, then HIERGOV_OUTPUT_DIR, then the fallback.
fs::path output_dir(const std::string& flag, const fs::path& fallback) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("HIERGOV_OUTPUT_DIR"); env && *env) return env;
  return fallback;
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = fs::path(path) += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw Error(ErrorKind::Io, "failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot move " + tmp.string() + " to " + path.string());
}

void report(const harness::SweepResult& r, const fs::path& dir) {
  std::cout << harness::to_string(r.config.experiment) << " R=" << r.config.grid_side
            << " trials=" << r.config.trials << " -> " << dir.string() << '\n';
  for (const auto& c : r.cells) {
    std::cout << "  n=" << c.n << " poa=" << format_number(c.sample.poa)
              << " pom=" << format_number(c.sample.pom) << '\n';
  }
  if (r.fit && r.pog) {
    std::cout << "  fit a=" << format_number(r.fit->a) << " b=" << format_number(r.fit->b)
              << " c=" << format_number(r.fit->c) << "; optimal PoG "
              << format_number(r.pog->optimal_pog) << " at n=" << r.pog->optimal_n << '\n';
  } else if (!r.fit_note.empty()) {
    std::cout << "  no fit: " << r.fit_note << '\n';
  }
}

harness::SweepResult run_and_emit(const harness::ExperimentConfig& config, const fs::path& dir) {
  auto result = harness::run_experiment(config);
  harness::emit_csv(result, dir);
  report(result, dir);
  return result;
}

double final_mean(const harness::SweepCell& cell, std::size_t metric, int window) {
  const auto& v = cell.series.at(metric).mean;
  const auto w = std::min<std::size_t>(v.size(), static_cast<std::size_t>(window));
  double sum = 0.0;
  for (std::size_t k = v.size() - w; k < v.size(); ++k) sum += v[k];
  return sum / static_cast<double>(w);
}

int cmd_run(const std::string& path, const CommonFlags& f) {
  auto config = harness::load_config(path);
  harness::apply(config, f.overrides());
  config.validate();
  run_and_emit(config, output_dir(f.out, config.output_dir));
  return 0;
}

int cmd_fit(const std::string& path, const std::string& gamma_name, const std::string& out) {
  const auto csv = harness::read_sweep_csv(path);
  const auto gamma = governance::Gamma::parse(gamma_name);
  fs::path fallback = fs::path(path).parent_path();
  if (fallback.empty()) fallback = ".";
  const auto dir = output_dir(out, fallback);
  const auto pog = harness::fit_and_emit(csv.samples, gamma, dir);
  std::cout << "optimal PoG " << format_number(pog.optimal_pog) << " at x="
            << format_number(pog.optimal_x) << " (n=" << pog.optimal_n << ") -> "
            << (dir / "pog.json").string() << '\n';
  return 0;
}

int cmd_replicate(const std::string& name, const CommonFlags& f) {
  const auto which = harness::parse_replication(name);
  const fs::path root = output_dir(f.out, fs::path("out") / std::string(harness::to_string(which)));
  auto runs = harness::preset(which);
  for (auto& r : runs) harness::apply(r.config, f.overrides());

  std::string summary;
  std::string summary_name;
  for (const auto& r : runs) {
    const fs::path dir = r.name.empty() ? root : root / r.name;
    const auto result = run_and_emit(r.config, dir);
    switch (which) {
      case harness::Replication::Fig1: {
        // IL decay baselines multiply the decayed rate by NormSettings::decay each step.
        if (summary.empty()) summary = "mode,coordination,alpha,epsilon\n";
        const auto& cell = result.cells.front();
        const int w = r.config.final_window;
        summary += r.name + ',' + format_number(final_mean(cell, 0, w)) + ',' +
                   format_number(final_mean(cell, 1, w)) + ',' +
                   format_number(final_mean(cell, 2, w)) + '\n';
        summary_name = "fig1_summary.csv";
        break;
      }
      case harness::Replication::BarDynamics: {
        summary = "population,overcrowded_nights\n";
        if (result.benchmark) {
          summary += "benchmark," + format_number(result.benchmark->mean_overcrowded) + '\n';
        }
        for (const auto& c : result.cells) {
          summary += "n=" + c.label + ',' + format_number(c.mean_overcrowded) + '\n';
        }
        summary_name = "overcrowding.csv";
        break;
      }
      case harness::Replication::PopulationSize: {
        if (summary.empty()) summary = "R,optimal_pog,optimal_x,optimal_n\n";
        if (!result.pog) {
          throw Error(ErrorKind::FitRejected,
                      "R=" + std::to_string(r.config.grid_side) + ": " + result.fit_note);
        }
        summary += std::to_string(r.config.grid_side) + ',' +
                   format_number(result.pog->optimal_pog) + ',' +
                   format_number(result.pog->optimal_x) + ',' +
                   std::to_string(result.pog->optimal_n) + '\n';
        summary_name = "population_size.csv";
        break;
      }
      case harness::Replication::Fig3:
        break;
    }
  }
  if (!summary_name.empty()) {
    write_text(root / summary_name, summary);
    std::cout << summary;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical governance simulations: sweeps, fits and reproductions"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string config_path;
  auto* run = app.add_subcommand("run", "run the subgroup-size sweep described by a JSON config");
  run->add_option("config", config_path, "config file")->required();
  add_common(run, run_flags);

  std::string sweep_path;
  std::string gamma = "euclidean";
  std::string fit_out;
  auto* fit = app.add_subcommand("fit", "fit PoA against PoM and locate the optimal PoG");
  fit->add_option("sweep", sweep_path, "sweep.csv produced by run")->required();
  fit->add_option("--gamma", gamma, "euclidean | weighted-euclidean(w) | weighted-sum(w)");
  fit->add_option("--out", fit_out, "output directory (default: next to sweep.csv)");

  CommonFlags rep_flags;
  std::string rep_name;
  auto* rep = app.add_subcommand("replicate", "run a preconfigured reproduction");
  rep->add_option("name", rep_name, "fig1 | fig3 | bar-dynamics | population-size")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig3", "bar-dynamics", "population-size"}));
  add_common(rep, rep_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "hiergov: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (*run) return cmd_run(config_path, run_flags);
    if (*fit) return cmd_fit(sweep_path, gamma, fit_out);
    return cmd_replicate(rep_name, rep_flags);
  } catch (const Error& e) {
    std::cerr << "hiergov: " << to_string(e.kind()) << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "hiergov: " << e.what() << '\n';
  }
  return 1;
}
