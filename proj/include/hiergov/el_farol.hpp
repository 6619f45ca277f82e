#ifndef HIERGOV_EL_FAROL_HPP
#define HIERGOV_EL_FAROL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hiergov/random.hpp"
#include "hiergov/topology.hpp"

namespace hiergov::bar {

// Which Q entry a governor credits with the night's mean reward.
//   ObservedRatio: the action nearest to the subgroup's observed attendance
//                  ratio (the governor learns the value of attendance levels).
//   ChosenAction:  the action it broadcast the previous night.
enum class CreditTarget { ObservedRatio, ChosenAction };

std::string_view to_string(CreditTarget target);
CreditTarget parse_credit_target(std::string_view name);

struct BarConfig {
  int population = 900;
  int threshold = 540;          // zeta; attendance <= threshold is uncrowded
  double diffusion = 0.1;       // mu
  int action_count = 50;        // action k broadcasts probability k * action_spacing
  double action_spacing = 0.02;
  double governor_epsilon = 0.01;
  double governor_learning_rate = 0.1;
  double governor_initial_q = 0.0;
  CreditTarget credit = CreditTarget::ObservedRatio;
  double beta = 0.1;
  int horizon = 1000;

  void validate() const;
  double action_probability(int action) const { return action_spacing * action; }
  // Nearest action to an attendance ratio, clamped to the action range.
  int nearest_action(double ratio) const;
};

struct BarAgentState {
  double p = 0.0;  // attendance probability
  bool attended = false;
  double last_reward = 0.0;
};

struct BarGovernorState {
  std::vector<double> q;
  int chosen_action = -1;  // -1 until the first decision
  double fitness = 0.0;    // mean subordinate reward of the last night
  double observed_ratio = 0.0;
};

BarGovernorState make_governor(int action_count, double initial_q = 0.0);

struct Attendance {
  int count = 0;
  std::vector<bool> attended;
};

// Each agent attends independently with probability p (agent order).
Attendance attend_night(std::span<BarAgentState> agents, Rng& rng);

// Attendee: +1 if attendance <= threshold, -1 otherwise. Non-attendee: 0.
double bar_reward(int attendance, bool attended, int threshold);

// Pays every agent for the night given the attendance count.
void pay_agents(std::span<BarAgentState> agents, int attendance, int threshold);

struct Observation {
  double attendance_ratio = 0.0;
  double mean_reward = 0.0;
};

Observation governor_observe(std::span<const BarAgentState> agents,
                             std::span<const std::size_t> members);

// What a governor exposes to its peers: last night's fitness and the action
// that produced it.
struct PeerView {
  double fitness = 0.0;
  int action = -1;
};

struct GovernorLearning {
  double beta = 0.1;
  double epsilon = 0.01;
  double learning_rate = 0.1;
  CreditTarget credit = CreditTarget::ObservedRatio;
  double action_spacing = 0.02;
};

// Q-update with the observed mean reward (on the entry selected by the credit
// target; skipped for ChosenAction before the first decision), then Fermi
// imitation of one uniformly random peer; if that does not fire, epsilon-greedy
// over Q (greedy ties broken uniformly at random). Returns the new action.
int governor_step(BarGovernorState& governor, const Observation& observation,
                  std::span<const PeerView> peers, const GovernorLearning& learning, Rng& rng);

// p <- (1 - mu) p + mu * target.
void diffuse_policy(BarAgentState& agent, double target_probability, double mu);

// Imitation-only population: every agent compares its last reward with a
// uniformly random other agent and copies that agent's p with the Fermi
// probability. Reads the pre-step p values only.
void benchmark_step(std::span<BarAgentState> agents, double beta, Rng& rng);

// PoA_n = 1 - (r_n - r_min) / (r_max - r_min).
std::map<int, double> mars_poa(const std::map<int, double>& mean_rewards);

// PoM_n = (c_n - c_min) / (c_max - c_min).
std::map<int, double> mars_pom(const std::map<int, double>& costs);

struct NightMetrics {
  int attendance = 0;
  double mean_reward = 0.0;
  double mean_probability = 0.0;
};

// One seeded run. With a partition the population is supervised by one
// governor per subgroup; without one it runs the imitation benchmark.
// Per night: attendance -> rewards -> observe -> governors decide -> diffuse.
class BarRun {
 public:
  BarRun(const BarConfig& config, std::optional<topology::GridPartition> partition,
         std::uint64_t seed);

  NightMetrics night();

  const std::vector<BarAgentState>& agents() const { return agents_; }
  const std::vector<BarGovernorState>& governors() const { return governors_; }
  bool benchmark() const { return !partition_.has_value(); }

 private:
  BarConfig config_;
  std::optional<topology::GridPartition> partition_;
  Rng rng_;
  std::vector<BarAgentState> agents_;
  std::vector<BarGovernorState> governors_;
  std::vector<PeerView> snapshot_;
  std::vector<PeerView> peer_buffer_;
};

}  // namespace hiergov::bar

#endif
