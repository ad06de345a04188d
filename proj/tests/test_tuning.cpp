#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include "doctest.h"
#include "support.hpp"
#include "wargame/errors.hpp"
#include "wargame/rng.hpp"
#include "wargame/tuning.hpp"

using namespace wargame;

namespace {

ParamSpace binary_space(int dims) {
  ParamSpace s;
  for (int d = 0; d < dims; ++d) s.dims.push_back({"x" + std::to_string(d), {0.0, 1.0}});
  return s;
}

int ones(const std::vector<int>& p) {
  int n = 0;
  for (int v : p) n += v;
  return n;
}

// Wilson score interval bound for k successes in n trials.
double wilson(double k, double n, double z, int sign) {
  const double p = k / n;
  const double centre = p + z * z / (2 * n);
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  return (centre + sign * half) / (1 + z * z / n);
}

}  // namespace

TEST_CASE("a one-point space is evaluated once") {
  ParamSpace s{{{"only", {3.0}}}};
  int calls = 0;
  const NtbeaResult r = ntbea_optimize(s, [&](const std::vector<int>&) { ++calls; return 1.0; }, 20, 1);
  CHECK(calls == 1);
  CHECK(r.best == std::vector<int>{0});
  CHECK(s.size() == 1.0);
}

TEST_CASE("ntbea rejects an empty space or budget") {
  auto f = [](const std::vector<int>&) { return 0.0; };
  CHECK_THROWS_AS(ntbea_optimize(ParamSpace{}, f, 5, 1), RuleError);
  CHECK_THROWS_AS(ntbea_optimize(ParamSpace{{{"x", {}}}}, f, 5, 1), RuleError);
  CHECK_THROWS_AS(ntbea_optimize(binary_space(2), f, 0, 1), RuleError);
}

TEST_CASE("ntbea finds the optimum of noisy onemax") {
  const ParamSpace space = binary_space(8);
  CHECK(space.size() == 256.0);
  int found = 0;
  for (int run = 0; run < 5; ++run) {
    SplitMix64 noise(1000 + run);
    auto fitness = [&](const std::vector<int>& p) { return ones(p) + 0.5 * noise.normal(); };
    const NtbeaResult r = ntbea_optimize(space, fitness, 500, run);
    CHECK(r.log.size() <= 500);
    found += ones(r.best) == 8;
  }
  CHECK(found >= 4);
}

TEST_CASE("tuple statistics match a recount of the log") {
  const ParamSpace space{{{"a", {0, 1, 2}}, {"b", {0, 1}}, {"c", {0, 1, 2, 3}}}};
  SplitMix64 noise(3);
  const NtbeaResult r =
      ntbea_optimize(space, [&](const std::vector<int>& p) { return p[0] - p[1] + 0.3 * p[2] + noise.normal(); }, 60, 8);
  CHECK(r.log.size() == 60);
  CHECK(r.model.evaluations() == 60);
  const auto& tuples = r.model.tuples();
  CHECK(tuples.size() == 3 + 3 + 1);
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    std::map<std::vector<int>, std::pair<int, double>> recount;
    for (const auto& e : r.log) {
      std::vector<int> key;
      for (std::size_t d : tuples[t]) key.push_back(e.point[d]);
      recount[key].first += 1;
      recount[key].second += e.fitness;
    }
    for (const auto& [key, cs] : recount) {
      std::vector<int> point(3, 0);
      for (std::size_t i = 0; i < key.size(); ++i) point[tuples[t][i]] = key[i];
      const ArmStat* s = r.model.stat(t, point);
      REQUIRE(s != nullptr);
      CHECK(s->count == static_cast<std::uint64_t>(cs.first));
      CHECK(s->mean == doctest::Approx(cs.second / cs.first).epsilon(1e-12));
    }
  }
}

TEST_CASE("ntbea is deterministic under seed") {
  const ParamSpace space = binary_space(6);
  auto run = [&] {
    SplitMix64 noise(5);
    return ntbea_optimize(space, [&](const std::vector<int>& p) { return ones(p) + noise.normal(); }, 80, 12);
  };
  const NtbeaResult a = run();
  const NtbeaResult b = run();
  CHECK(a.best == b.best);
  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) CHECK(a.log[i].point == b.log[i].point);
}

TEST_CASE("pair statistics beat a one-tuple ablation on a xor landscape") {
  // Every value of either dimension has the same marginal mean; only the pair
  // (a, a + 1 mod 4) pays.
  ParamSpace space{{{"a", {0, 1, 2, 3}}, {"b", {0, 1, 2, 3}}}};
  auto optimal = [](const std::vector<int>& p) { return p[1] == (p[0] + 1) % 4; };
  NtbeaOptions full;
  NtbeaOptions ablated;
  ablated.tuples = {true, false, false};
  int wins_full = 0;
  int wins_ablated = 0;
  for (int run = 0; run < 50; ++run) {
    for (int variant = 0; variant < 2; ++variant) {
      SplitMix64 noise(7000 + run);
      auto f = [&](const std::vector<int>& p) { return (optimal(p) ? 1.0 : 0.0) + 0.3 * noise.normal(); };
      const NtbeaResult r = ntbea_optimize(space, f, 30, run, variant == 0 ? full : ablated);
      (variant == 0 ? wins_full : wins_ablated) += optimal(r.best);
    }
  }
  MESSAGE("xor successes: full " << wins_full << ", one-tuple " << wins_ablated);
  CHECK(wins_full > wins_ablated);
}

TEST_CASE("tuning log has one line per evaluation") {
  const ParamSpace space = binary_space(3);
  const NtbeaResult r = ntbea_optimize(space, [](const std::vector<int>& p) { return ones(p); }, 7, 2);
  const auto path = std::filesystem::temp_directory_path() / "wargame_tuning.tsv";
  write_tuning_log(path.string(), space, r.log);
  const std::string text = test::read_text(path.string());
  CHECK(text.rfind("evalIndex\tx0\tx1\tx2\tfitness\n", 0) == 0);
  CHECK(std::ranges::count(text, '\n') == 8);
  std::filesystem::remove(path);
}

TEST_CASE("default tuning spaces name real parameters") {
  for (AgentKind k : {AgentKind::Mcts, AgentKind::Rhea, AgentKind::Cmab, AgentKind::Sss, AgentKind::Mpc}) {
    const ParamSpace s = default_tuning_space(k);
    AgentConfig c;
    c.kind = k;
    std::vector<int> last;
    for (const auto& d : s.dims) last.push_back(static_cast<int>(d.values.size()) - 1);
    CHECK_NOTHROW(validate_config(apply_point(c, s, last)));
    CHECK_NOTHROW(validate_config(apply_point(c, s, std::vector<int>(s.dims.size(), 0))));
  }
}

TEST_CASE("tune_agent with budget one returns the evaluated point") {
  auto rules = test::rules("tiny-duel.wg");
  AgentConfig base;
  base.kind = AgentKind::Mcts;
  base.budget.max_forward_calls = 100;
  const ParamSpace space = default_tuning_space(AgentKind::Mcts);
  const TuneResult a = tune_agent(base, space, rules, scripted_player(ScriptId::AttackNearest), 2, 1, 6);
  REQUIRE(a.search.log.size() == 1);
  CHECK(a.best_point == a.search.log[0].point);
  const TuneResult b = tune_agent(base, space, rules, scripted_player(ScriptId::AttackNearest), 2, 1, 6);
  CHECK(a.best_point == b.best_point);
  CHECK(a.best.exploration == b.best.exploration);
}

TEST_CASE("tuned mcts is not worse than the default against a scripted opponent") {
  auto rules = test::rules("tiny-duel.wg");
  AgentConfig base;
  base.kind = AgentKind::Mcts;
  base.budget.max_forward_calls = 150;
  const PlayerSpec opponent = scripted_player(ScriptId::AttackNearest);
  const TuneResult tuned = tune_agent(base, default_tuning_space(AgentKind::Mcts), rules, opponent, 4, 12, 17);

  auto score = [&](const AgentConfig& cfg) {
    double wins = 0.0;
    for (int g = 0; g < 100; ++g) {
      const std::uint64_t seed = derive_seed(99, g);
      wins += g % 2 == 0 ? run_match(rules, player(cfg), opponent, seed).outcome(Side::Blue)
                         : run_match(rules, opponent, player(cfg), seed).outcome(Side::Red);
    }
    return wins;
  };
  const double t = score(tuned.best);
  const double d = score(base);
  MESSAGE("tuned " << t << "/100, default " << d << "/100");
  CHECK(wilson(t, 100, 1.96, +1) >= d / 100.0);
}
