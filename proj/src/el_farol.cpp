#include "hiergov/el_farol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hiergov/error.hpp"
#include "hiergov/norm_learning.hpp"

namespace hiergov::bar {

std::string_view to_string(CreditTarget target) {
  return target == CreditTarget::ObservedRatio ? "observed-ratio" : "chosen-action";
}

CreditTarget parse_credit_target(std::string_view name) {
  if (name == "observed-ratio") return CreditTarget::ObservedRatio;
  if (name == "chosen-action") return CreditTarget::ChosenAction;
  throw Error(ErrorKind::InvalidConfiguration, "unknown credit target '" + std::string(name) + "'");
}

namespace {

int nearest_lattice_action(double ratio, double spacing, int count) {
  const auto k = static_cast<long>(std::floor(ratio / spacing + 0.5));
  return static_cast<int>(std::clamp<long>(k, 0, count - 1));
}

}  // namespace

int BarConfig::nearest_action(double ratio) const {
  return nearest_lattice_action(ratio, action_spacing, action_count);
}

void BarConfig::validate() const {
  if (population < 1) throw Error(ErrorKind::InvalidConfiguration, "population must be positive");
  if (threshold < 1 || threshold > population) {
    throw Error(ErrorKind::InvalidConfiguration, "threshold must lie in [1, population]");
  }
  if (diffusion < 0.0 || diffusion > 1.0) {
    throw Error(ErrorKind::InvalidConfiguration, "diffusion rate must lie in [0, 1]");
  }
  if (action_count < 1 || action_spacing <= 0.0 ||
      action_spacing * (action_count - 1) > 1.0 + 1e-12) {
    throw Error(ErrorKind::InvalidConfiguration, "governor actions must map into [0, 1]");
  }
  if (governor_epsilon < 0.0 || governor_epsilon > 1.0 || governor_learning_rate < 0.0 ||
      governor_learning_rate > 1.0) {
    throw Error(ErrorKind::InvalidConfiguration, "governor rates must lie in [0, 1]");
  }
  if (!(beta > 0.0)) throw Error(ErrorKind::InvalidConfiguration, "beta must be positive");
}

BarGovernorState make_governor(int action_count, double initial_q) {
  BarGovernorState g;
  g.q.assign(action_count, initial_q);
  return g;
}

Attendance attend_night(std::span<BarAgentState> agents, Rng& rng) {
  Attendance out;
  out.attended.resize(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const bool go = rng.uniform() < agents[i].p;
    agents[i].attended = go;
    out.attended[i] = go;
    out.count += go ? 1 : 0;
  }
  return out;
}

double bar_reward(int attendance, bool attended, int threshold) {
  if (!attended) return 0.0;
  return attendance <= threshold ? 1.0 : -1.0;
}

void pay_agents(std::span<BarAgentState> agents, int attendance, int threshold) {
  for (auto& a : agents) a.last_reward = bar_reward(attendance, a.attended, threshold);
}

Observation governor_observe(std::span<const BarAgentState> agents,
                             std::span<const std::size_t> members) {
  if (members.empty()) throw Error(ErrorKind::InvalidInput, "governor has no subordinates");
  int attendees = 0;
  double reward = 0.0;
  for (auto idx : members) {
    const auto& a = agents[idx];
    attendees += a.attended ? 1 : 0;
    reward += a.last_reward;
  }
  const auto size = static_cast<double>(members.size());
  return {attendees / size, reward / size};
}

int governor_step(BarGovernorState& governor, const Observation& observation,
                  std::span<const PeerView> peers, const GovernorLearning& learning, Rng& rng) {
  governor.fitness = observation.mean_reward;
  governor.observed_ratio = observation.attendance_ratio;
  const int credited =
      learning.credit == CreditTarget::ObservedRatio
          ? nearest_lattice_action(observation.attendance_ratio, learning.action_spacing,
                                   static_cast<int>(governor.q.size()))
          : governor.chosen_action;
  if (credited >= 0) {
    auto& q = governor.q[credited];
    q += learning.learning_rate * (observation.mean_reward - q);
  }

  if (!peers.empty()) {
    const PeerView& peer = peers[rng.below(peers.size())];
    if (peer.action >= 0) {
      const double p = norm::fermi_probability(governor.fitness, peer.fitness, learning.beta);
      if (rng.bernoulli(p)) {
        governor.chosen_action = peer.action;
        return governor.chosen_action;
      }
    }
  }

  const auto count = governor.q.size();
  if (rng.uniform() < learning.epsilon) {
    governor.chosen_action = static_cast<int>(rng.below(count));
    return governor.chosen_action;
  }
  const double best = *std::max_element(governor.q.begin(), governor.q.end());
  const auto ties = static_cast<std::size_t>(std::count(governor.q.begin(), governor.q.end(), best));
  std::size_t pick = ties > 1 ? rng.below(ties) : 0;
  for (std::size_t a = 0; a < count; ++a) {
    if (governor.q[a] == best && pick-- == 0) {
      governor.chosen_action = static_cast<int>(a);
      break;
    }
  }
  return governor.chosen_action;
}

void diffuse_policy(BarAgentState& agent, double target_probability, double mu) {
  agent.p = (1.0 - mu) * agent.p + mu * target_probability;
}

void benchmark_step(std::span<BarAgentState> agents, double beta, Rng& rng) {
  const auto n = agents.size();
  if (n < 2) {
    throw Error(ErrorKind::InvalidConfiguration, "the imitation benchmark needs two agents");
  }
  std::vector<double> before(n);
  for (std::size_t i = 0; i < n; ++i) before[i] = agents[i].p;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = rng.below(n - 1);
    if (j >= i) ++j;
    const double p = norm::fermi_probability(agents[i].last_reward, agents[j].last_reward, beta);
    if (rng.bernoulli(p)) agents[i].p = before[j];
  }
}

namespace {

std::map<int, double> min_max(const std::map<int, double>& values, bool invert,
                              const char* what) {
  if (values.empty()) throw Error(ErrorKind::InvalidInput, std::string("no ") + what);
  double lo = values.begin()->second;
  double hi = lo;
  for (const auto& [n, v] : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) {
    throw Error(ErrorKind::DegenerateNormalization,
                std::string("all ") + what + " are equal; cannot normalise");
  }
  std::map<int, double> out;
  for (const auto& [n, v] : values) {
    const double t = (v - lo) / (hi - lo);
    out[n] = invert ? 1.0 - t : t;
  }
  return out;
}

}  // namespace

std::map<int, double> mars_poa(const std::map<int, double>& mean_rewards) {
  return min_max(mean_rewards, true, "mean rewards");
}

std::map<int, double> mars_pom(const std::map<int, double>& costs) {
  return min_max(costs, false, "communication costs");
}

BarRun::BarRun(const BarConfig& config, std::optional<topology::GridPartition> partition,
               std::uint64_t seed)
    : config_(config), partition_(std::move(partition)), rng_(seed) {
  config_.validate();
  if (partition_ && partition_->topology().size() != static_cast<std::size_t>(config_.population)) {
    throw Error(ErrorKind::InvalidConfiguration,
                "population " + std::to_string(config_.population) + " does not fill a " +
                    std::to_string(partition_->topology().side()) + "x" +
                    std::to_string(partition_->topology().side()) + " grid");
  }
  if (!partition_ && config_.population < 2) {
    throw Error(ErrorKind::InvalidConfiguration, "the imitation benchmark needs two agents");
  }
  agents_.resize(config_.population);
  for (auto& a : agents_) a.p = rng_.uniform();
  if (partition_) {
    governors_.assign(partition_->subgroups().size(), make_governor(config_.action_count, config_.governor_initial_q));
    snapshot_.resize(governors_.size());
  }
}

NightMetrics BarRun::night() {
  const Attendance att = attend_night(agents_, rng_);
  pay_agents(agents_, att.count, config_.threshold);

  NightMetrics m;
  m.attendance = att.count;
  for (const auto& a : agents_) m.mean_reward += a.last_reward;
  m.mean_reward /= static_cast<double>(agents_.size());

  if (!partition_) {
    benchmark_step(agents_, config_.beta, rng_);
  } else {
    const auto& groups = partition_->subgroups();
    std::vector<Observation> obs(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
      obs[g] = governor_observe(agents_, groups[g].members);
      snapshot_[g] = {obs[g].mean_reward, governors_[g].chosen_action};
    }
    const GovernorLearning learning{config_.beta, config_.governor_epsilon,
                                    config_.governor_learning_rate, config_.credit,
                                    config_.action_spacing};
    for (std::size_t g = 0; g < groups.size(); ++g) {
      peer_buffer_.clear();
      for (int p : partition_->peers(static_cast<int>(g))) peer_buffer_.push_back(snapshot_[p]);
      governor_step(governors_[g], obs[g], peer_buffer_, learning, rng_);
    }
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      const auto& gov = governors_[partition_->subgroup_of(i)];
      diffuse_policy(agents_[i], config_.action_probability(gov.chosen_action), config_.diffusion);
    }
  }

  for (const auto& a : agents_) m.mean_probability += a.p;
  m.mean_probability /= static_cast<double>(agents_.size());
  return m;
}

}  // namespace hiergov::bar
