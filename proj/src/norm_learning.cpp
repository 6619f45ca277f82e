#include "hiergov/norm_learning.hpp"

#include <algorithm>
#include <cmath>

#include "hiergov/error.hpp"

namespace hiergov::norm {

namespace {

struct ModeName {
  AdaptationMode mode;
  std::string_view name;
};

constexpr ModeName kModeNames[] = {
    {AdaptationMode::IlFixed, "IL-fixed"},
    {AdaptationMode::IlDecayingAlpha, "IL-decaying-alpha"},
    {AdaptationMode::IlDecayingEpsilon, "IL-decaying-epsilon"},
    {AdaptationMode::HlAlpha, "HL-alpha"},
    {AdaptationMode::HlEpsilon, "HL-epsilon"},
    {AdaptationMode::HlAlphaEpsilon, "HL-alpha-epsilon"},
};

}  // namespace

std::string_view to_string(AdaptationMode mode) {
  for (const auto& m : kModeNames) {
    if (m.mode == mode) return m.name;
  }
  return "unknown";
}

AdaptationMode parse_adaptation_mode(std::string_view name) {
  for (const auto& m : kModeNames) {
    if (m.name == name) return m.mode;
  }
  throw Error(ErrorKind::InvalidConfiguration,
              "unknown adaptation mode '" + std::string(name) + "'");
}

std::string_view to_string(RateIncrease variant) {
  return variant == RateIncrease::AsPrinted ? "as-printed" : "smoothed";
}

RateIncrease parse_rate_increase(std::string_view name) {
  if (name == "as-printed") return RateIncrease::AsPrinted;
  if (name == "smoothed") return RateIncrease::Smoothed;
  throw Error(ErrorKind::InvalidConfiguration,
              "unknown rate-increase variant '" + std::string(name) + "'");
}

bool is_hierarchical(AdaptationMode mode) {
  return mode == AdaptationMode::HlAlpha || mode == AdaptationMode::HlEpsilon ||
         mode == AdaptationMode::HlAlphaEpsilon;
}

NormAgentState make_agent(int action_count, double alpha, double epsilon) {
  if (action_count < 1) {
    throw Error(ErrorKind::InvalidParameter, "action count must be positive");
  }
  NormAgentState agent;
  agent.q.assign(action_count, 0.0);
  agent.alpha = alpha;
  agent.epsilon = epsilon;
  return agent;
}

Action greedy_action(const NormAgentState& agent) {
  return static_cast<Action>(std::max_element(agent.q.begin(), agent.q.end()) - agent.q.begin());
}

Action select_action(const NormAgentState& agent, Rng& rng) {
  const auto count = agent.q.size();
  if (rng.uniform() < agent.epsilon) return static_cast<Action>(rng.below(count));

  double best = agent.q[0];
  std::size_t ties = 1;
  for (std::size_t a = 1; a < count; ++a) {
    if (agent.q[a] > best) {
      best = agent.q[a];
      ties = 1;
    } else if (agent.q[a] == best) {
      ++ties;
    }
  }
  if (ties == 1) return greedy_action(agent);
  std::size_t pick = rng.below(ties);
  for (std::size_t a = 0; a < count; ++a) {
    if (agent.q[a] == best && pick-- == 0) return static_cast<Action>(a);
  }
  return greedy_action(agent);
}

void play_round(std::span<NormAgentState> agents, const topology::GridTopology& grid,
                const CoordinationGamePayoff& payoff, Rng& rng, std::vector<Report>& reports) {
  if (agents.size() != grid.size()) {
    throw Error(ErrorKind::InvalidInput, "agent count does not match the grid");
  }
  if (grid.size() < 2) {
    throw Error(ErrorKind::TopologyTooSmall, "an agent on a 1x1 grid has no neighbor");
  }
  reports.resize(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    reports[i].action = select_action(agents[i], rng);
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto nb = grid.neighbors(i);
    const auto j = nb[rng.below(nb.size())];
    const bool match = reports[i].action == reports[j].action;
    reports[i].reward = match ? payoff.match_reward : payoff.mismatch_penalty;
    agents[i].last_action = reports[i].action;
    agents[i].last_reward = reports[i].reward;
  }
}

std::vector<Report> play_round(std::span<NormAgentState> agents,
                               const topology::GridTopology& grid,
                               const CoordinationGamePayoff& payoff, Rng& rng) {
  std::vector<Report> reports;
  play_round(agents, grid, payoff, rng, reports);
  return reports;
}

GovernorRecord aggregate_opinion(std::span<const Report> reports, int action_count) {
  if (reports.empty()) {
    throw Error(ErrorKind::InvalidInput, "cannot aggregate an empty report list");
  }
  GovernorRecord rec;
  rec.frequency.assign(action_count, 0);
  rec.mean_reward.assign(action_count, 0.0);
  for (const auto& r : reports) {
    if (r.action < 0 || r.action >= action_count) {
      throw Error(ErrorKind::InvalidInput, "reported action out of range");
    }
    ++rec.frequency[r.action];
    rec.mean_reward[r.action] += r.reward;
  }
  for (int a = 0; a < action_count; ++a) {
    if (rec.frequency[a] > 0) rec.mean_reward[a] /= rec.frequency[a];
  }
  rec.public_opinion = static_cast<Action>(
      std::max_element(rec.frequency.begin(), rec.frequency.end()) - rec.frequency.begin());
  rec.supervision_policy = rec.public_opinion;
  rec.fitness = rec.mean_reward[rec.public_opinion];
  return rec;
}

double fermi_probability(double u_self, double u_peer, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorKind::InvalidParameter, "beta must be positive");
  const double z = beta * (u_peer - u_self);
  // Evaluate on the side that cannot overflow.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Action generate_supervision_policy(const GovernorRecord& self, const GovernorRecord* peer,
                                   double beta, Rng& rng) {
  if (peer == nullptr) return self.public_opinion;
  const double p = fermi_probability(self.fitness, peer->fitness, beta);
  return rng.bernoulli(p) ? peer->public_opinion : self.public_opinion;
}

double raise_rate(double rate, double lambda, RateIncrease variant) {
  if (variant == RateIncrease::AsPrinted) return (1.0 - rate) * lambda + lambda;
  return (1.0 - lambda) * rate + lambda;
}

double lower_rate(double rate, double lambda) { return (1.0 - lambda) * rate; }

void adapt_parameters(NormAgentState& agent, Action supervision_policy, double lambda,
                      AdaptationMode mode, RateIncrease variant) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "lambda must lie in [0, 1]");
  }
  if (!is_hierarchical(mode)) return;
  const bool winning = agent.last_action == supervision_policy;
  auto update = [&](double rate) {
    const double next = winning ? lower_rate(rate, lambda) : raise_rate(rate, lambda, variant);
    return std::clamp(next, 0.0, 1.0);
  };
  if (mode != AdaptationMode::HlEpsilon) agent.alpha = update(agent.alpha);
  if (mode != AdaptationMode::HlAlpha) agent.epsilon = update(agent.epsilon);
}

void q_update(NormAgentState& agent, Action action, double reward) {
  auto& q = agent.q.at(static_cast<std::size_t>(action));
  q += agent.alpha * (reward - q);
}

double coordination_ratio(std::span<const NormAgentState> agents) {
  if (agents.empty()) throw Error(ErrorKind::InvalidInput, "empty population");
  std::vector<std::size_t> counts(agents.front().q.size(), 0);
  for (const auto& a : agents) ++counts[greedy_action(a)];
  const auto modal = *std::max_element(counts.begin(), counts.end());
  return static_cast<double>(modal) / static_cast<double>(agents.size());
}

double norm_poa(std::span<const NormAgentState> agents) { return 1.0 - coordination_ratio(agents); }

NormLearningRun::NormLearningRun(topology::GridPartition partition, NormParams params,
                                 std::uint64_t seed)
    : partition_(std::move(partition)), params_(params), rng_(seed) {
  if (params_.lambda < 0.0 || params_.lambda > 1.0 || params_.initial_alpha < 0.0 ||
      params_.initial_alpha > 1.0 || params_.initial_epsilon < 0.0 ||
      params_.initial_epsilon > 1.0) {
    throw Error(ErrorKind::InvalidParameter, "rates must lie in [0, 1]");
  }
  agents_.assign(partition_.topology().size(),
                 make_agent(params_.action_count, params_.initial_alpha, params_.initial_epsilon));
  governors_.resize(partition_.subgroups().size());
}

NormStepMetrics NormLearningRun::step() {
  const auto& grid = partition_.topology();
  play_round(agents_, grid, params_.payoff, rng_, reports_);

  const bool hierarchical = is_hierarchical(params_.mode);
  if (hierarchical) {
    const auto& groups = partition_.subgroups();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      scratch_.clear();
      for (auto idx : groups[g].members) scratch_.push_back(reports_[idx]);
      governors_[g] = aggregate_opinion(scratch_, params_.action_count);
    }
    // Peers read the records aggregated above; only supervision_policy is
    // written here, so the update is simultaneous.
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& peers = partition_.peers(static_cast<int>(g));
      const GovernorRecord* peer =
          peers.empty() ? nullptr : &governors_[peers[rng_.below(peers.size())]];
      governors_[g].supervision_policy =
          generate_supervision_policy(governors_[g], peer, params_.beta, rng_);
    }
  }

  NormStepMetrics m;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    auto& agent = agents_[i];
    switch (params_.mode) {
      case AdaptationMode::IlFixed:
        break;
      case AdaptationMode::IlDecayingAlpha:
        agent.alpha *= params_.decay;
        break;
      case AdaptationMode::IlDecayingEpsilon:
        agent.epsilon *= params_.decay;
        break;
      default:
        adapt_parameters(agent, governors_[partition_.subgroup_of(i)].supervision_policy,
                         params_.lambda, params_.mode, params_.increase);
    }
    q_update(agent, reports_[i].action, reports_[i].reward);
    m.mean_alpha += agent.alpha;
    m.mean_epsilon += agent.epsilon;
  }
  const auto count = static_cast<double>(agents_.size());
  m.mean_alpha /= count;
  m.mean_epsilon /= count;
  m.coordination = coordination_ratio(agents_);
  return m;
}

}  // namespace hiergov::norm
