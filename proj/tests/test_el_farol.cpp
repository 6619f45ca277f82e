#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "hiergov/el_farol.hpp"
#include "hiergov/error.hpp"

using namespace hiergov;
using namespace hiergov::bar;

namespace {

std::vector<BarAgentState> population(int n, double p) {
  std::vector<BarAgentState> agents(n);
  for (auto& a : agents) a.p = p;
  return agents;
}

GovernorLearning learning(double epsilon) {
  GovernorLearning l;
  l.epsilon = epsilon;
  return l;
}

}  // namespace

TEST_CASE("attendance") {
  Rng rng(1);
  auto none = population(900, 0.0);
  CHECK(attend_night(none, rng).count == 0);
  auto all = population(900, 1.0);
  const auto full = attend_night(all, rng);
  CHECK(full.count == 900);
  CHECK(full.attended.size() == 900);

  auto mixed = population(900, 0.6);
  double sum = 0.0;
  for (int night = 0; night < 10000; ++night) sum += attend_night(mixed, rng).count;
  // Standard error of the mean is sqrt(900 * 0.24 / 10000) ~ 0.15.
  CHECK(std::abs(sum / 10000.0 - 540.0) < 5.0);
}

TEST_CASE("bar rewards") {
  CHECK(bar_reward(540, true, 540) == 1.0);
  CHECK(bar_reward(541, true, 540) == -1.0);
  CHECK(bar_reward(900, false, 540) == 0.0);
  CHECK(bar_reward(0, false, 540) == 0.0);

  Rng rng(2);
  auto home = population(50, 0.0);
  const auto att = attend_night(home, rng);
  pay_agents(home, att.count, 30);
  double total = 0.0;
  for (const auto& a : home) total += a.last_reward;
  CHECK(total == 0.0);
}

TEST_CASE("governor_observe") {
  std::vector<BarAgentState> agents(16);
  for (int i = 0; i < 16; ++i) agents[i].attended = i < 8;
  pay_agents(agents, 8, 540);
  std::vector<std::size_t> members(16);
  std::iota(members.begin(), members.end(), 0);
  auto obs = governor_observe(agents, members);
  CHECK(obs.attendance_ratio == 0.5);
  CHECK(obs.mean_reward == 0.5);

  for (auto& a : agents) a.attended = false;
  pay_agents(agents, 0, 540);
  obs = governor_observe(agents, members);
  CHECK(obs.attendance_ratio == 0.0);
  CHECK(obs.mean_reward == 0.0);

  for (auto& a : agents) a.attended = true;
  pay_agents(agents, 600, 540);
  obs = governor_observe(agents, members);
  CHECK(obs.attendance_ratio == 1.0);
  CHECK(obs.mean_reward == -1.0);

  try {
    governor_observe(agents, {});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
  }
}

TEST_CASE("governor_step") {
  Rng rng(3);
  SUBCASE("greedy without peers") {
    auto g = make_governor(50);
    g.q[30] = 1.0;
    for (int i = 0; i < 100; ++i) {
      // Credit lands on the zero-ratio action, leaving the peak intact.
      CHECK(governor_step(g, {0.0, 0.0}, {}, learning(0.0), rng) == 30);
    }
    BarConfig cfg;
    CHECK(cfg.action_probability(30) == doctest::Approx(0.6));
  }
  SUBCASE("imitates a much fitter peer") {
    auto g = make_governor(50);
    g.q[5] = 1.0;
    const std::vector<PeerView> peers{{1000.0, 42}};
    for (int i = 0; i < 100; ++i) CHECK(governor_step(g, {0.1, 0.0}, peers, learning(0.0), rng) == 42);
  }
  SUBCASE("peers without a decision are not imitated") {
    auto g = make_governor(50);
    g.q[7] = 1.0;
    const std::vector<PeerView> peers{{1000.0, -1}};
    CHECK(governor_step(g, {0.0, 0.0}, peers, learning(0.0), rng) == 7);
  }
  SUBCASE("one-step Q arithmetic on the credited action") {
    auto g = make_governor(50);
    auto l = learning(0.0);
    governor_step(g, {0.5, -1.0}, {}, l, rng);
    CHECK(g.q[25] == doctest::Approx(-0.1));
    CHECK(g.fitness == -1.0);

    auto h = make_governor(50);
    l.credit = CreditTarget::ChosenAction;
    governor_step(h, {0.5, -1.0}, {}, l, rng);
    for (double q : h.q) CHECK(q == 0.0);  // nothing chosen yet
    const int chosen = h.chosen_action;
    governor_step(h, {0.5, -1.0}, {}, l, rng);
    CHECK(h.q[chosen] == doctest::Approx(-0.1));
  }
  SUBCASE("Q-update contraction") {
    auto l = learning(0.0);
    for (int i = 0; i < 500; ++i) {
      auto g = make_governor(50);
      const double ratio = rng.uniform();
      const int k = BarConfig{}.nearest_action(ratio);
      g.q[k] = rng.uniform() * 2 - 1;
      const double before = g.q[k];
      const double r = rng.uniform() * 2 - 1;
      governor_step(g, {ratio, r}, {}, l, rng);
      CHECK(std::abs(g.q[k] - r) == doctest::Approx(0.9 * std::abs(before - r)));
    }
  }
}

TEST_CASE("nearest action clamps to the lattice") {
  BarConfig cfg;
  CHECK(cfg.nearest_action(0.0) == 0);
  CHECK(cfg.nearest_action(0.6) == 30);
  CHECK(cfg.nearest_action(0.611) == 31);
  CHECK(cfg.nearest_action(1.0) == 49);
}

TEST_CASE("diffuse_policy") {
  BarAgentState a;
  a.p = 0.3;
  diffuse_policy(a, 0.9, 0.0);
  CHECK(a.p == 0.3);
  diffuse_policy(a, 0.9, 1.0);
  CHECK(a.p == 0.9);
  a.p = 0.5;
  diffuse_policy(a, 0.9, 0.1);
  CHECK(a.p == doctest::Approx(0.54));

  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    a.p = rng.uniform();
    diffuse_policy(a, rng.uniform(), rng.uniform());
    CHECK(a.p >= 0.0);
    CHECK(a.p <= 1.0);
  }
}

TEST_CASE("benchmark_step") {
  Rng rng(5);
  SUBCASE("copies are exact and stay in [0,1]") {
    std::vector<BarAgentState> agents(200);
    for (auto& a : agents) {
      a.p = rng.uniform();
      a.last_reward = 1.0;
    }
    std::vector<double> before;
    for (const auto& a : agents) before.push_back(a.p);
    benchmark_step(agents, 0.1, rng);
    int changed = 0;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      CHECK(agents[i].p >= 0.0);
      CHECK(agents[i].p <= 1.0);
      CHECK(std::find(before.begin(), before.end(), agents[i].p) != before.end());
      changed += agents[i].p != before[i];
    }
    CHECK(changed > 60);
    CHECK(changed < 140);
  }
  SUBCASE("others copy the only winner with the Fermi probability") {
    // Two agents: agent 1 (reward -1) always compares with agent 0 (reward +1).
    int copies = 0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
      std::vector<BarAgentState> agents(2);
      agents[0] = {0.9, true, 1.0};
      agents[1] = {0.2, true, -1.0};
      benchmark_step(agents, 0.1, rng);
      copies += agents[1].p == 0.9;
    }
    const double expected = 1.0 / (1.0 + std::exp(-0.2));
    CHECK(expected == doctest::Approx(0.549834).epsilon(1e-6));
    CHECK(std::abs(copies / double(trials) - expected) < 0.015);
  }
  std::vector<BarAgentState> lonely(1);
  CHECK_THROWS_AS(benchmark_step(lonely, 0.1, rng), Error);
}

TEST_CASE("min-max normalisation") {
  const auto poa = mars_poa({{1, -0.2}, {5, 0.4}, {10, 0.1}});
  CHECK(poa.at(5) == 0.0);
  CHECK(poa.at(1) == 1.0);
  CHECK(poa.at(10) == doctest::Approx(0.5));
  const auto pom = mars_pom({{1, 0.0}, {5, 50.0}, {30, 100.0}});
  CHECK(pom.at(1) == 0.0);
  CHECK(pom.at(30) == 1.0);
  CHECK(pom.at(5) == doctest::Approx(0.5));
  try {
    mars_poa({{1, 0.3}, {2, 0.3}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateNormalization);
  }
  CHECK_THROWS_AS(mars_pom({{1, 2.0}}), Error);

  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    std::map<int, double> values;
    for (int n = 1; n <= 8; ++n) values[n] = rng.uniform() * 10 - 5;
    double lo = 2, hi = -1;
    for (const auto& [n, v] : mars_pom(values)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);
  }
}

TEST_CASE("a centralized governor settles just under the threshold") {
  BarConfig cfg;
  cfg.governor_epsilon = 0.0;
  BarRun run(cfg, topology::partition_grid(topology::build_grid(30), 30), 2024);
  double sum = 0.0;
  for (int night = 0; night < 1000; ++night) {
    const auto m = run.night();
    if (night >= 900) sum += m.attendance;
  }
  const double mean = sum / 100.0;
  const double sigma = std::sqrt(900 * 0.6 * 0.4);
  CHECK(mean >= 540 - 2 * sigma);
  CHECK(mean <= 540);
}

TEST_CASE("runs validate their configuration") {
  BarConfig cfg;
  CHECK_THROWS_AS(BarRun(cfg, topology::partition_grid(topology::build_grid(10), 2), 1), Error);
  cfg.threshold = 1000;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = BarConfig{};
  cfg.population = 1;
  cfg.threshold = 1;
  CHECK_THROWS_AS(BarRun(cfg, std::nullopt, 1), Error);
}

TEST_CASE("probabilities stay in [0,1] during runs") {
  BarConfig cfg;
  cfg.population = 100;
  cfg.threshold = 60;
  BarRun supervised(cfg, topology::partition_grid(topology::build_grid(10), 5), 9);
  BarRun bench(cfg, std::nullopt, 9);
  for (int night = 0; night < 200; ++night) {
    supervised.night();
    bench.night();
  }
  for (const auto* run : {&supervised, &bench}) {
    for (const auto& a : run->agents()) {
      CHECK(a.p >= 0.0);
      CHECK(a.p <= 1.0);
    }
  }
  for (const auto& g : supervised.governors()) {
    CHECK(g.chosen_action >= 0);
    CHECK(g.chosen_action < 50);
    CHECK(g.q.size() == 50);
  }
}
