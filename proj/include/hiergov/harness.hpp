#ifndef HIERGOV_HARNESS_HPP
#define HIERGOV_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hiergov/el_farol.hpp"
#include "hiergov/governance.hpp"
#include "hiergov/norm_learning.hpp"
#include "hiergov/topology.hpp"

namespace hiergov::harness {

enum class Case { NormLearning, ElFarol };

std::string_view to_string(Case c);
Case parse_case(std::string_view name);

// Subgroup sizes swept when a config does not list them: {1..8, 10, 12, 15,
// 20, 30} restricted to [1, R], plus R itself.
std::vector<int> default_sweep(int side);

struct NormSettings {
  int actions = 4;
  double alpha = 0.1;
  double epsilon = 0.01;
  double beta = 0.1;
  // Adaptation rate of the rate updates. Published as "gamma = 0.1" alongside
  // beta; no other parameter of the model matches that name.
  double lambda = 0.1;
  norm::AdaptationMode mode = norm::AdaptationMode::HlAlphaEpsilon;
  norm::RateIncrease rate_increase = norm::RateIncrease::AsPrinted;
  double decay = 0.99;
  norm::CoordinationGamePayoff payoff;
};

struct BarSettings {
  std::optional<int> threshold;  // defaults to 60% of the population
  double diffusion = 0.1;
  int actions = 50;
  double action_spacing = 0.02;
  double epsilon = 0.01;
  double learning_rate = 0.1;
  double beta = 0.1;
  double initial_q = 0.0;
  bar::CreditTarget credit = bar::CreditTarget::ObservedRatio;
  bool benchmark = false;  // also run the governor-free imitation population
};

struct ExperimentConfig {
  Case experiment = Case::NormLearning;
  int grid_side = 30;
  std::vector<int> subgroup_sizes;  // empty -> default_sweep(grid_side)
  topology::Neighborhood neighborhood = topology::Neighborhood::VonNeumann;
  topology::RemainderPolicy remainder = topology::RemainderPolicy::PartialTiles;
  int steps = 1000;
  int trials = 1000;
  int final_window = 100;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 -> hardware concurrency
  bool keep_runs = false;
  std::string gamma = "euclidean";
  std::string output_dir = "out";
  NormSettings norm;
  BarSettings bar;

  std::vector<int> sweep() const;
  norm::NormParams norm_params() const;
  bar::BarConfig bar_config() const;

  // Throws InvalidConfiguration on any violated constraint.
  void validate() const;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);

// hash(master, case, n, trial); n = 0 denotes the benchmark population.
std::uint64_t trial_seed(std::uint64_t master, Case c, int n, int trial);

// Per-step metric names, in series order.
std::vector<std::string> metric_names(Case c);

struct RunRecord {
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> series;  // [metric][step]
  double final_performance = 0.0;  // final-window coordination ratio / mean reward
  double final_poa = 0.0;          // norm case only: 1 - final_performance
  int overcrowded_nights = 0;      // bar case only, inside the final window
};

// One trial of one cell. partition empty -> bar benchmark.
RunRecord run_trial(const ExperimentConfig& config,
                    const std::optional<topology::GridPartition>& partition, std::uint64_t seed);

struct SeriesSummary {
  std::string metric;
  std::vector<double> mean;
  std::vector<double> stddev;
};

struct SweepCell {
  int n = 0;  // 0 for the benchmark
  std::string label;
  int trials = 0;
  governance::GovernanceSample sample;
  double mean_overcrowded = 0.0;  // bar case
  std::vector<SeriesSummary> series;
  std::vector<RunRecord> runs;  // filled when keep_runs is set
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<SweepCell> cells;
  std::optional<SweepCell> benchmark;
  std::optional<governance::FittedRelationship> fit;
  std::optional<governance::PoGResult> pog;
  std::string fit_note;  // why no fit was produced, if none was
};

// Runs every trial of every cell (trials in parallel), aggregates in (n, trial)
// order and derives PoA / PoM / the fitted relationship. Does not write files.
SweepResult run_experiment(const ExperimentConfig& config);

// Writes sweep.csv, series_<n>.csv (series_benchmark.csv) and, when a fit
// exists, pog.json into `dir`. Files are staged and renamed only after all of
// them were written.
void emit_csv(const SweepResult& result, const std::filesystem::path& dir);

// Shortest "%.9g" rendering.
std::string format_number(double value);

struct SweepCsv {
  std::string experiment;
  std::vector<governance::GovernanceSample> samples;
  std::vector<int> trials;
};

SweepCsv read_sweep_csv(const std::filesystem::path& path);

nlohmann::json pog_json(const governance::FittedRelationship& fit,
                        const governance::PoGResult& pog);

// Fit + optimal PoG over parsed samples, written as pog.json into `dir`.
governance::PoGResult fit_and_emit(const std::vector<governance::GovernanceSample>& samples,
                                   const governance::Gamma& gamma,
                                   const std::filesystem::path& dir);

// Preconfigured desk-scale reproductions.
enum class Replication { Fig1, Fig3, BarDynamics, PopulationSize };

Replication parse_replication(std::string_view name);
std::string_view to_string(Replication r);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> steps;
  std::optional<unsigned> threads;
};

void apply(ExperimentConfig& config, const Overrides& overrides);

// The experiments behind a replication, each with its own output subdirectory
// name (empty for a single experiment).
struct PresetRun {
  std::string name;
  ExperimentConfig config;
};
std::vector<PresetRun> preset(Replication r);

}  // namespace hiergov::harness

#endif
