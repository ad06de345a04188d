#include "wargame/bandit.hpp"

#include <algorithm>
#include <limits>

#include "planning.hpp"
#include "wargame/agents.hpp"

namespace wargame {

NaiveSampler::NaiveSampler(std::vector<int> arms_per_unit, NaiveSamplerParams params, std::uint64_t seed)
    : arms_(std::move(arms_per_unit)), params_(params), rng_(mix_seed(seed)) {
  for (int n : arms_) local_.emplace_back(static_cast<std::size_t>(std::max(1, n)));
}

std::vector<int> NaiveSampler::explore() {
  std::vector<int> arm(arms_.size());
  for (std::size_t u = 0; u < arms_.size(); ++u) {
    const auto& stats = local_[u];
    std::vector<int> untried;
    for (std::size_t a = 0; a < stats.size(); ++a) {
      if (stats[a].count == 0) untried.push_back(static_cast<int>(a));
    }
    if (!untried.empty()) {
      arm[u] = untried[rng_.below(untried.size())];
    } else if (rng_.uniform() < params_.epsilon_local) {
      arm[u] = static_cast<int>(rng_.below(stats.size()));
    } else {
      int best = 0;
      for (std::size_t a = 1; a < stats.size(); ++a) {
        if (stats[a].mean > stats[best].mean) best = static_cast<int>(a);
      }
      arm[u] = best;
    }
  }
  return arm;
}

std::vector<int> NaiveSampler::next() {
  if (global_.empty() || rng_.uniform() < params_.epsilon) return explore();
  const std::vector<int>* best = nullptr;
  double best_mean = -std::numeric_limits<double>::infinity();
  for (const auto& [arm, stat] : global_) {
    if (stat.mean > best_mean) {
      best_mean = stat.mean;
      best = &arm;
    }
  }
  return *best;
}

void NaiveSampler::update(const std::vector<int>& arm, double reward) {
  ++evaluations_;
  global_[arm].add(reward);
  for (std::size_t u = 0; u < arm.size(); ++u) local_[u][arm[u]].add(reward);
}

std::vector<int> NaiveSampler::best() const {
  const std::vector<int>* best = nullptr;
  const ArmStat* stat = nullptr;
  for (const auto& [arm, s] : global_) {
    if (!best || s.count > stat->count || (s.count == stat->count && s.mean > stat->mean)) {
      best = &arm;
      stat = &s;
    }
  }
  return best ? *best : std::vector<int>(arms_.size(), 0);
}

Decision cmab_decide(const GameState& root, Side side, const SearchBudget& budget, const AgentConfig& cfg,
                     std::uint64_t seed) {
  planning::require_root(root);
  SearchContext ctx(budget);
  const auto& roster = root.rules->side_roster[side_index(side)];
  std::vector<int> arms;
  for (int id : roster) arms.push_back(root.find(id) ? static_cast<int>(cfg.scripts.size()) : 1);
  NaiveSampler sampler(arms, {cfg.epsilon, cfg.epsilon_local}, seed);
  SplitMix64 chance(derive_seed(seed, 5));
  const int cycles = std::max(1, cfg.rollout_depth);

  auto to_assignment = [&](const std::vector<int>& arm) {
    ScriptAssignment a(arm.size());
    for (std::size_t i = 0; i < arm.size(); ++i) a[i] = cfg.scripts[arm[i]];
    return a;
  };

  try {
    while (!cfg.max_iterations || sampler.evaluations() < *cfg.max_iterations) {
      const std::vector<int> arm = sampler.next();
      const ScriptAssignment a = to_assignment(arm);
      const double v = planning::evaluate_plan(ctx, root, side, std::span(&a, 1), cycles, cfg, chance.next());
      sampler.update(arm, v);
    }
  } catch (const BudgetExhausted&) {
  }
  if (sampler.evaluations() == 0) throw SearchError("search budget exhausted before one evaluation");

  Decision d;
  d.record = planning::base_record(root, side, cfg);
  const Observation obs = observe_as_played(root, side);
  const std::vector<int> best = sampler.best();
  for (const auto& [arm, stat] : sampler.global()) {
    GlobalAction act = orders_from_assignment(obs, to_assignment(arm), cfg.script_params);
    if (arm == best) {
      d.record.chosen = static_cast<int>(d.record.candidates.size());
      d.action = act;
    }
    d.record.candidates.push_back({action_summary(*root.rules, act), std::move(act), stat.count, stat.mean});
  }
  d.record.iterations = sampler.evaluations();
  d.record.forward_calls = ctx.used();
  return d;
}

}  // namespace wargame
