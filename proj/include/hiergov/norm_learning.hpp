#ifndef HIERGOV_NORM_LEARNING_HPP
#define HIERGOV_NORM_LEARNING_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hiergov/random.hpp"
#include "hiergov/topology.hpp"

namespace hiergov::norm {

using Action = int;

struct NormAgentState {
  std::vector<double> q;  // one entry per action
  double alpha = 0.1;
  double epsilon = 0.01;
  Action last_action = 0;
  double last_reward = 0.0;
};

NormAgentState make_agent(int action_count, double alpha, double epsilon);

struct GovernorRecord {
  std::vector<int> frequency;       // F_x
  std::vector<double> mean_reward;  // R_x, 0 where F_x(a) = 0
  Action public_opinion = 0;        // o_x
  Action supervision_policy = 0;    // a_x
  double fitness = 0.0;             // u_x = R_x(o_x)
};

enum class AdaptationMode {
  IlFixed,
  IlDecayingAlpha,
  IlDecayingEpsilon,
  HlAlpha,
  HlEpsilon,
  HlAlphaEpsilon,
};

// How a "losing" agent raises its rate.
//   AsPrinted: rate <- (1 - rate) * lambda + lambda
//   Smoothed:  rate <- (1 - lambda) * rate + lambda
enum class RateIncrease { AsPrinted, Smoothed };

std::string_view to_string(AdaptationMode mode);
AdaptationMode parse_adaptation_mode(std::string_view name);
std::string_view to_string(RateIncrease variant);
RateIncrease parse_rate_increase(std::string_view name);

bool is_hierarchical(AdaptationMode mode);

struct CoordinationGamePayoff {
  double match_reward = 1.0;
  double mismatch_penalty = -1.0;
};

struct Report {
  Action action = 0;
  double reward = 0.0;
};

// epsilon-greedy; greedy ties are broken uniformly at random.
Action select_action(const NormAgentState& agent, Rng& rng);

// Index of the largest Q-value, lowest id on ties.
Action greedy_action(const NormAgentState& agent);

// One interaction round. All agents first choose their action for the round
// (row-major order); then each agent, again row-major, samples one uniformly
// random neighbor and is paid according to whether the two actions match.
// Writes one report per agent to `reports` and mirrors it into the agent's
// last_action / last_reward.
void play_round(std::span<NormAgentState> agents, const topology::GridTopology& grid,
                const CoordinationGamePayoff& payoff, Rng& rng, std::vector<Report>& reports);
std::vector<Report> play_round(std::span<NormAgentState> agents,
                               const topology::GridTopology& grid,
                               const CoordinationGamePayoff& payoff, Rng& rng);

// Counting vote over the reports of one subgroup. The supervision policy is
// initialised to the public opinion.
GovernorRecord aggregate_opinion(std::span<const Report> reports, int action_count);

// Fermi imitation probability 1 / (1 + exp(-beta (u_peer - u_self))).
double fermi_probability(double u_self, double u_peer, double beta);

// Returns the peer's public opinion with the Fermi probability, otherwise the
// governor's own. Without a peer the own opinion is returned and no random
// number is consumed.
Action generate_supervision_policy(const GovernorRecord& self, const GovernorRecord* peer,
                                   double beta, Rng& rng);

double raise_rate(double rate, double lambda, RateIncrease variant);
double lower_rate(double rate, double lambda);

// WoLF-style adaptation against the supervision policy. IL modes leave the
// agent untouched.
void adapt_parameters(NormAgentState& agent, Action supervision_policy, double lambda,
                      AdaptationMode mode, RateIncrease variant);

// Stateless Q-learning: Q(a) <- Q(a) + alpha (r - Q(a)).
void q_update(NormAgentState& agent, Action action, double reward);

// Share of agents whose greedy action equals the population's modal greedy
// action.
double coordination_ratio(std::span<const NormAgentState> agents);

// 1 - coordination_ratio.
double norm_poa(std::span<const NormAgentState> agents);

struct NormParams {
  int action_count = 4;
  double initial_alpha = 0.1;
  double initial_epsilon = 0.01;
  double beta = 0.1;
  double lambda = 0.1;
  AdaptationMode mode = AdaptationMode::HlAlphaEpsilon;
  RateIncrease increase = RateIncrease::AsPrinted;
  double decay = 0.99;  // per-step factor of the IL decaying baselines
  CoordinationGamePayoff payoff;
};

struct NormStepMetrics {
  double coordination = 0.0;
  double mean_alpha = 0.0;
  double mean_epsilon = 0.0;
};

// A single seeded run on a partitioned grid. Per step:
// play round -> aggregate -> governors imitate (simultaneously, from this
// step's records) -> agents adapt rates -> agents Q-update.
class NormLearningRun {
 public:
  NormLearningRun(topology::GridPartition partition, NormParams params, std::uint64_t seed);

  NormStepMetrics step();

  const std::vector<NormAgentState>& agents() const { return agents_; }
  const std::vector<GovernorRecord>& governors() const { return governors_; }
  const topology::GridPartition& partition() const { return partition_; }
  const NormParams& params() const { return params_; }

 private:
  topology::GridPartition partition_;
  NormParams params_;
  Rng rng_;
  std::vector<NormAgentState> agents_;
  std::vector<GovernorRecord> governors_;
  std::vector<Report> reports_;
  std::vector<Report> scratch_;
};

}  // namespace hiergov::norm

#endif
