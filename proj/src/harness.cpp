#include "hiergov/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "hiergov/error.hpp"
#include "hiergov/random.hpp"

namespace hiergov::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Case c) {
  return c == Case::NormLearning ? "norm-learning" : "el-farol";
}

Case parse_case(std::string_view name) {
  if (name == "norm-learning") return Case::NormLearning;
  if (name == "el-farol") return Case::ElFarol;
  throw Error(ErrorKind::InvalidConfiguration, "unknown case '" + std::string(name) + "'");
}

std::vector<int> default_sweep(int side) {
  static constexpr int kSizes[] = {1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 15, 20, 30};
  std::vector<int> out;
  for (int n : kSizes) {
    if (n <= side) out.push_back(n);
  }
  if (out.empty() || out.back() != side) out.push_back(side);
  return out;
}

std::vector<int> ExperimentConfig::sweep() const {
  return subgroup_sizes.empty() ? default_sweep(grid_side) : subgroup_sizes;
}

norm::NormParams ExperimentConfig::norm_params() const {
  norm::NormParams p;
  p.action_count = norm.actions;
  p.initial_alpha = norm.alpha;
  p.initial_epsilon = norm.epsilon;
  p.beta = norm.beta;
  p.lambda = norm.lambda;
  p.mode = norm.mode;
  p.increase = norm.rate_increase;
  p.decay = norm.decay;
  p.payoff = norm.payoff;
  return p;
}

bar::BarConfig ExperimentConfig::bar_config() const {
  bar::BarConfig c;
  c.population = grid_side * grid_side;
  c.threshold = bar.threshold.value_or(static_cast<int>(std::lround(0.6 * c.population)));
  c.diffusion = bar.diffusion;
  c.action_count = bar.actions;
  c.action_spacing = bar.action_spacing;
  c.governor_epsilon = bar.epsilon;
  c.governor_learning_rate = bar.learning_rate;
  c.governor_initial_q = bar.initial_q;
  c.credit = bar.credit;
  c.beta = bar.beta;
  c.horizon = steps;
  return c;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidConfiguration, what);
}

bool unit(double v) { return v >= 0.0 && v <= 1.0; }

void reject_unknown(const json& j, std::initializer_list<std::string_view> known,
                    const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidConfiguration, where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorKind::InvalidConfiguration, "unknown key '" + key + "' in " + where);
    }
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  require(grid_side >= 1, "grid_side must be positive");
  if (experiment == Case::NormLearning) {
    require(grid_side >= 2, "the norm-learning case needs a grid of side >= 2");
  }
  const auto sizes = sweep();
  std::set<int> seen;
  for (int n : sizes) {
    require(n >= 1 && n <= grid_side,
            "subgroup size " + std::to_string(n) + " outside [1, " + std::to_string(grid_side) + "]");
    require(seen.insert(n).second, "subgroup size " + std::to_string(n) + " listed twice");
  }
  require(steps >= 1, "steps must be positive");
  require(trials >= 1, "trials must be positive");
  require(final_window >= 1, "final_window must be positive");
  governance::Gamma::parse(gamma);
  if (experiment == Case::NormLearning) {
    require(norm.actions >= 1, "norm.actions must be positive");
    require(unit(norm.alpha) && unit(norm.epsilon) && unit(norm.lambda) && unit(norm.decay),
            "norm rates must lie in [0, 1]");
    require(norm.beta > 0.0, "norm.beta must be positive");
    require(norm.payoff.match_reward > norm.payoff.mismatch_penalty,
            "match reward must exceed the mismatch penalty");
  } else {
    bar_config().validate();
  }
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  reject_unknown(j,
                 {"case", "grid_side", "subgroup_sizes", "neighborhood", "remainder", "steps",
                  "trials", "final_window", "seed", "threads", "keep_runs", "gamma", "output_dir",
                  "norm", "bar"},
                 "config");
  ExperimentConfig c;
  try {
    c.experiment = parse_case(j.at("case").get<std::string>());
    c.grid_side = j.value("grid_side", c.grid_side);
    c.subgroup_sizes = j.value("subgroup_sizes", c.subgroup_sizes);
    const auto nb = j.value("neighborhood", std::string("von-neumann"));
    if (nb == "von-neumann") {
      c.neighborhood = topology::Neighborhood::VonNeumann;
    } else if (nb == "moore") {
      c.neighborhood = topology::Neighborhood::Moore;
    } else {
      throw Error(ErrorKind::InvalidConfiguration, "unknown neighborhood '" + nb + "'");
    }
    c.remainder = topology::parse_remainder_policy(
        j.value("remainder", std::string(topology::to_string(c.remainder))));
    c.steps = j.value("steps", c.steps);
    c.trials = j.value("trials", c.trials);
    c.final_window = j.value("final_window", c.final_window);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.keep_runs = j.value("keep_runs", c.keep_runs);
    c.gamma = j.value("gamma", c.gamma);
    c.output_dir = j.value("output_dir", c.output_dir);

    if (j.contains("norm")) {
      const auto& n = j["norm"];
      reject_unknown(n,
                     {"actions", "alpha", "epsilon", "beta", "lambda", "mode", "rate_increase",
                      "decay", "match_reward", "mismatch_penalty"},
                     "norm");
      auto& s = c.norm;
      s.actions = n.value("actions", s.actions);
      s.alpha = n.value("alpha", s.alpha);
      s.epsilon = n.value("epsilon", s.epsilon);
      s.beta = n.value("beta", s.beta);
      s.lambda = n.value("lambda", s.lambda);
      s.mode = norm::parse_adaptation_mode(
          n.value("mode", std::string(norm::to_string(s.mode))));
      s.rate_increase = norm::parse_rate_increase(
          n.value("rate_increase", std::string(norm::to_string(s.rate_increase))));
      s.decay = n.value("decay", s.decay);
      s.payoff.match_reward = n.value("match_reward", s.payoff.match_reward);
      s.payoff.mismatch_penalty = n.value("mismatch_penalty", s.payoff.mismatch_penalty);
    }
    if (j.contains("bar")) {
      const auto& b = j["bar"];
      reject_unknown(b,
                     {"threshold", "diffusion", "actions", "action_spacing", "epsilon",
                      "learning_rate", "beta", "initial_q", "credit", "benchmark"},
                     "bar");
      auto& s = c.bar;
      if (b.contains("threshold") && !b["threshold"].is_null()) {
        s.threshold = b["threshold"].get<int>();
      }
      s.diffusion = b.value("diffusion", s.diffusion);
      s.actions = b.value("actions", s.actions);
      s.action_spacing = b.value("action_spacing", s.action_spacing);
      s.epsilon = b.value("epsilon", s.epsilon);
      s.learning_rate = b.value("learning_rate", s.learning_rate);
      s.beta = b.value("beta", s.beta);
      s.initial_q = b.value("initial_q", s.initial_q);
      s.credit = bar::parse_credit_target(
          b.value("credit", std::string(bar::to_string(s.credit))));
      s.benchmark = b.value("benchmark", s.benchmark);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfiguration, std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["case"] = std::string(harness::to_string(experiment));
  j["grid_side"] = grid_side;
  j["subgroup_sizes"] = sweep();
  j["neighborhood"] = neighborhood == topology::Neighborhood::VonNeumann ? "von-neumann" : "moore";
  j["remainder"] = std::string(topology::to_string(remainder));
  j["steps"] = steps;
  j["trials"] = trials;
  j["final_window"] = final_window;
  j["seed"] = seed;
  j["threads"] = threads;
  j["keep_runs"] = keep_runs;
  j["gamma"] = gamma;
  j["output_dir"] = output_dir;
  j["norm"] = {{"actions", norm.actions},
               {"alpha", norm.alpha},
               {"epsilon", norm.epsilon},
               {"beta", norm.beta},
               {"lambda", norm.lambda},
               {"mode", std::string(norm::to_string(norm.mode))},
               {"rate_increase", std::string(norm::to_string(norm.rate_increase))},
               {"decay", norm.decay},
               {"match_reward", norm.payoff.match_reward},
               {"mismatch_penalty", norm.payoff.mismatch_penalty}};
  j["bar"] = {{"threshold", bar.threshold ? json(*bar.threshold) : json(nullptr)},
              {"diffusion", bar.diffusion},
              {"actions", bar.actions},
              {"action_spacing", bar.action_spacing},
              {"epsilon", bar.epsilon},
              {"learning_rate", bar.learning_rate},
              {"beta", bar.beta},
              {"initial_q", bar.initial_q},
              {"credit", std::string(bar::to_string(bar.credit))},
              {"benchmark", bar.benchmark}};
  return j;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfiguration, path.string() + ": " + e.what());
  }
  try {
    return ExperimentConfig::from_json(j);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::uint64_t trial_seed(std::uint64_t master, Case c, int n, int trial) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ (c == Case::NormLearning ? 0x6e6f726dULL : 0x62617221ULL));
  h = mix64(h ^ static_cast<std::uint64_t>(n));
  return mix64(h ^ static_cast<std::uint64_t>(trial));
}

std::vector<std::string> metric_names(Case c) {
  if (c == Case::NormLearning) return {"coordination", "alpha", "epsilon"};
  return {"attendance", "probability", "reward"};
}

RunRecord run_trial(const ExperimentConfig& config,
                    const std::optional<topology::GridPartition>& partition, std::uint64_t seed) {
  RunRecord rec;
  rec.seed = seed;
  const auto steps = static_cast<std::size_t>(config.steps);
  const auto window = std::min(steps, static_cast<std::size_t>(config.final_window));
  rec.series.assign(3, std::vector<double>(steps));

  if (config.experiment == Case::NormLearning) {
    if (!partition) throw Error(ErrorKind::InvalidConfiguration, "norm runs need a partition");
    norm::NormLearningRun run(*partition, config.norm_params(), seed);
    for (std::size_t s = 0; s < steps; ++s) {
      const auto m = run.step();
      rec.series[0][s] = m.coordination;
      rec.series[1][s] = m.mean_alpha;
      rec.series[2][s] = m.mean_epsilon;
    }
  } else {
    const auto cfg = config.bar_config();
    bar::BarRun run(cfg, partition, seed);
    for (std::size_t s = 0; s < steps; ++s) {
      const auto m = run.night();
      rec.series[0][s] = m.attendance;
      rec.series[1][s] = m.mean_probability;
      rec.series[2][s] = m.mean_reward;
      if (s + window >= steps && m.attendance > cfg.threshold) ++rec.overcrowded_nights;
    }
  }

  // Coordination ratio for the norm case, mean reward for the bar case.
  const auto& perf = config.experiment == Case::NormLearning ? rec.series[0] : rec.series[2];
  double sum = 0.0;
  for (std::size_t s = steps - window; s < steps; ++s) sum += perf[s];
  rec.final_performance = sum / static_cast<double>(window);
  rec.final_poa = config.experiment == Case::NormLearning ? 1.0 - rec.final_performance : 0.0;
  return rec;
}

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any task is rethrown after all workers joined.
template <class Body>
void parallel_for(int count, unsigned threads, Body body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(count));
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (int i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

SweepCell run_cell(const ExperimentConfig& config,
                   const std::optional<topology::GridPartition>& partition, int n) {
  std::vector<RunRecord> runs(config.trials);
  parallel_for(config.trials, config.threads, [&](int t) {
    runs[t] = run_trial(config, partition, trial_seed(config.seed, config.experiment, n, t));
  });

  SweepCell cell;
  cell.n = n;
  cell.label = n == 0 ? "benchmark" : std::to_string(n);
  cell.trials = config.trials;
  const auto names = metric_names(config.experiment);
  const auto steps = static_cast<std::size_t>(config.steps);
  const auto trials = static_cast<double>(config.trials);
  for (std::size_t m = 0; m < names.size(); ++m) {
    SeriesSummary s;
    s.metric = names[m];
    s.mean.assign(steps, 0.0);
    s.stddev.assign(steps, 0.0);
    for (const auto& r : runs) {
      for (std::size_t k = 0; k < steps; ++k) s.mean[k] += r.series[m][k];
    }
    for (auto& v : s.mean) v /= trials;
    if (config.trials > 1) {
      for (const auto& r : runs) {
        for (std::size_t k = 0; k < steps; ++k) {
          const double d = r.series[m][k] - s.mean[k];
          s.stddev[k] += d * d;
        }
      }
      for (auto& v : s.stddev) v = std::sqrt(v / (trials - 1.0));
    }
    cell.series.push_back(std::move(s));
  }

  double perf = 0.0, crowded = 0.0;
  for (const auto& r : runs) {
    perf += r.final_performance;
    crowded += r.overcrowded_nights;
  }
  cell.sample.n = n;
  cell.sample.raw_performance = perf / trials;
  cell.mean_overcrowded = crowded / trials;
  if (partition) cell.sample.raw_cost = topology::communication_cost(*partition);
  if (config.keep_runs) cell.runs = std::move(runs);
  return cell;
}

}  // namespace

SweepResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  SweepResult result;
  result.config = config;
  const auto grid = topology::build_grid(config.grid_side, config.neighborhood);

  for (int n : config.sweep()) {
    const auto partition = topology::partition_grid(grid, n, config.remainder);
    result.cells.push_back(run_cell(config, partition, n));
  }
  if (config.experiment == Case::ElFarol && config.bar.benchmark) {
    result.benchmark = run_cell(config, std::nullopt, 0);
  }

  if (config.experiment == Case::NormLearning) {
    const auto centralized = topology::partition_grid(grid, config.grid_side, config.remainder);
    for (auto& cell : result.cells) {
      cell.sample.poa = governance::poa_general(1.0, cell.sample.raw_performance);
      cell.sample.pom = topology::pom(topology::partition_grid(grid, cell.n, config.remainder),
                                      centralized);
    }
  } else {
    std::map<int, double> rewards, costs;
    for (const auto& cell : result.cells) {
      rewards[cell.n] = cell.sample.raw_performance;
      costs[cell.n] = cell.sample.raw_cost;
    }
    const auto poa = bar::mars_poa(rewards);
    const auto pom = bar::mars_pom(costs);
    for (auto& cell : result.cells) {
      cell.sample.poa = poa.at(cell.n);
      cell.sample.pom = pom.at(cell.n);
    }
  }

  std::vector<governance::GovernanceSample> samples;
  std::set<double> distinct;
  for (const auto& cell : result.cells) {
    samples.push_back(cell.sample);
    distinct.insert(cell.sample.pom);
  }
  if (distinct.size() < 4) {
    result.fit_note = "fewer than 4 distinct PoM values; no relationship fitted";
    return result;
  }
  try {
    result.fit = governance::fit_relationship(samples);
    result.pog =
        governance::optimal_pog(*result.fit, governance::Gamma::parse(config.gamma), samples);
  } catch (const Error& e) {
    result.fit.reset();
    result.fit_note = e.what();
  }
  return result;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

namespace {

double rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

// Writes every file under a temporary name first; nothing is renamed into
// place unless all writes succeeded.
class StagedWrite {
 public:
  explicit StagedWrite(fs::path dir) : dir_(std::move(dir)) {}
  ~StagedWrite() {
    std::error_code ec;
    for (const auto& [tmp, final] : files_) fs::remove(tmp, ec);
  }

  void add(const std::string& name, const std::string& content) {
    const fs::path final = dir_ / name;
    fs::path tmp = final;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    files_.emplace_back(tmp, final);
    out << content;
    out.close();
    if (!out) throw Error(ErrorKind::Io, "failed writing " + tmp.string());
  }

  void commit() {
    for (const auto& [tmp, final] : files_) {
      std::error_code ec;
      fs::rename(tmp, final, ec);
      if (ec) throw Error(ErrorKind::Io, "cannot move " + tmp.string() + " to " + final.string());
    }
    files_.clear();
  }

 private:
  fs::path dir_;
  std::vector<std::pair<fs::path, fs::path>> files_;
};

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorKind::Io, "cannot create output directory " + dir.string());
  }
}

std::string series_csv(const SweepCell& cell) {
  std::string out = "step,metric,mean,stddev\n";
  const auto steps = cell.series.empty() ? 0 : cell.series.front().mean.size();
  for (std::size_t k = 0; k < steps; ++k) {
    for (const auto& s : cell.series) {
      out += std::to_string(k + 1) + ',' + s.metric + ',' + format_number(s.mean[k]) + ',' +
             format_number(s.stddev[k]) + '\n';
    }
  }
  return out;
}

}  // namespace

json pog_json(const governance::FittedRelationship& fit, const governance::PoGResult& pog) {
  json j;
  j["a"] = rounded(fit.a);
  j["b"] = rounded(fit.b);
  j["c"] = rounded(fit.c);
  j["residual"] = rounded(fit.residual);
  j["gamma"] = pog.gamma_name;
  j["optimal_x"] = rounded(pog.optimal_x);
  j["optimal_pog"] = rounded(pog.optimal_pog);
  j["optimal_n"] = pog.optimal_n;
  return j;
}

void emit_csv(const SweepResult& result, const fs::path& dir) {
  if (result.cells.empty()) throw Error(ErrorKind::InvalidInput, "empty sweep; nothing written");
  ensure_directory(dir);
  StagedWrite staged(dir);

  std::string sweep = "case,n,poa,pom,raw_performance,raw_cost,trials\n";
  const std::string name(to_string(result.config.experiment));
  for (const auto& cell : result.cells) {
    const auto& s = cell.sample;
    sweep += name + ',' + std::to_string(s.n) + ',' + format_number(s.poa) + ',' +
             format_number(s.pom) + ',' + format_number(s.raw_performance) + ',' +
             format_number(s.raw_cost) + ',' + std::to_string(cell.trials) + '\n';
  }
  staged.add("sweep.csv", sweep);
  for (const auto& cell : result.cells) staged.add("series_" + cell.label + ".csv", series_csv(cell));
  if (result.benchmark) staged.add("series_benchmark.csv", series_csv(*result.benchmark));
  if (result.fit && result.pog) staged.add("pog.json", pog_json(*result.fit, *result.pog).dump(2) + "\n");
  staged.commit();
}

SweepCsv read_sweep_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open sweep file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "case,n,poa,pom,raw_performance,raw_cost,trials") {
    throw Error(ErrorKind::InvalidInput, path.string() + ": unexpected header");
  }
  SweepCsv out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7) {
      throw Error(ErrorKind::InvalidInput,
                  path.string() + ":" + std::to_string(lineno) + ": expected 7 fields");
    }
    auto number = [&](const std::string& f) {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size()) {
        throw Error(ErrorKind::InvalidInput,
                    path.string() + ":" + std::to_string(lineno) + ": bad number '" + f + "'");
      }
      return v;
    };
    if (out.experiment.empty()) out.experiment = fields[0];
    governance::GovernanceSample s;
    s.n = static_cast<int>(number(fields[1]));
    s.poa = number(fields[2]);
    s.pom = number(fields[3]);
    s.raw_performance = number(fields[4]);
    s.raw_cost = number(fields[5]);
    out.samples.push_back(s);
    out.trials.push_back(static_cast<int>(number(fields[6])));
  }
  if (out.samples.empty()) throw Error(ErrorKind::InvalidInput, path.string() + ": no rows");
  return out;
}

governance::PoGResult fit_and_emit(const std::vector<governance::GovernanceSample>& samples,
                                   const governance::Gamma& gamma, const fs::path& dir) {
  const auto fit = governance::fit_relationship(samples);
  const auto pog = governance::optimal_pog(fit, gamma, samples);
  ensure_directory(dir);
  StagedWrite staged(dir);
  staged.add("pog.json", pog_json(fit, pog).dump(2) + "\n");
  staged.commit();
  return pog;
}

Replication parse_replication(std::string_view name) {
  if (name == "fig1") return Replication::Fig1;
  if (name == "fig3") return Replication::Fig3;
  if (name == "bar-dynamics") return Replication::BarDynamics;
  if (name == "population-size") return Replication::PopulationSize;
  throw Error(ErrorKind::InvalidConfiguration, "unknown replication '" + std::string(name) + "'");
}

std::string_view to_string(Replication r) {
  switch (r) {
    case Replication::Fig1: return "fig1";
    case Replication::Fig3: return "fig3";
    case Replication::BarDynamics: return "bar-dynamics";
    case Replication::PopulationSize: return "population-size";
  }
  return "unknown";
}

void apply(ExperimentConfig& config, const Overrides& o) {
  if (o.seed) config.seed = *o.seed;
  if (o.trials) config.trials = *o.trials;
  if (o.steps) config.steps = *o.steps;
  if (o.threads) config.threads = *o.threads;
}

std::vector<PresetRun> preset(Replication r) {
  std::vector<PresetRun> runs;
  switch (r) {
    case Replication::Fig1: {
      // 10x10 grid, 4x4 clusters with the border agents merged into one group.
      for (auto mode : {norm::AdaptationMode::IlFixed, norm::AdaptationMode::IlDecayingAlpha,
                        norm::AdaptationMode::IlDecayingEpsilon, norm::AdaptationMode::HlAlpha,
                        norm::AdaptationMode::HlEpsilon, norm::AdaptationMode::HlAlphaEpsilon}) {
        ExperimentConfig c;
        c.experiment = Case::NormLearning;
        c.grid_side = 10;
        c.subgroup_sizes = {4};
        c.remainder = topology::RemainderPolicy::Merged;
        c.trials = 200;
        c.norm.mode = mode;
        runs.push_back({std::string(norm::to_string(mode)), c});
      }
      break;
    }
    case Replication::Fig3: {
      ExperimentConfig c;
      c.experiment = Case::NormLearning;
      c.grid_side = 30;
      c.trials = 200;
      c.norm.mode = norm::AdaptationMode::HlAlphaEpsilon;
      runs.push_back({"", c});
      break;
    }
    case Replication::BarDynamics: {
      ExperimentConfig c;
      c.experiment = Case::ElFarol;
      c.grid_side = 30;
      c.subgroup_sizes = {10, 30};
      c.trials = 100;
      c.bar.benchmark = true;
      runs.push_back({"", c});
      break;
    }
    case Replication::PopulationSize: {
      for (int side : {10, 20, 30}) {
        ExperimentConfig c;
        c.experiment = Case::ElFarol;
        c.grid_side = side;
        c.trials = 100;
        runs.push_back({"R" + std::to_string(side), c});
      }
      break;
    }
  }
  return runs;
}

}  // namespace hiergov::harness
