#include <algorithm>
#include <limits>
#include <map>

#include "planning.hpp"
#include "wargame/agents.hpp"

namespace wargame {

namespace {

struct Member {
  Genome genome;
  double fitness = 0.0;
};

Genome random_genome(int length, std::size_t units, const std::vector<ScriptId>& scripts, SplitMix64& rng) {
  Genome g;
  for (int i = 0; i < length; ++i) g.push_back(planning::random_assignment(units, scripts, rng));
  return g;
}

bool valid_genome(const Genome& g, int length, std::size_t units) {
  return static_cast<int>(g.size()) == length &&
         std::ranges::all_of(g, [units](const ScriptAssignment& a) { return a.size() == units; });
}

}  // namespace

Decision rhea_decide(const GameState& root, Side side, const SearchBudget& budget, const AgentConfig& cfg,
                     std::uint64_t seed, RheaMemory* memory, RheaTrace* trace) {
  planning::require_root(root);
  const int length = cfg.horizon;
  const std::size_t units = planning::roster_size(root, side);
  const std::uint64_t per_eval = 1 + static_cast<std::uint64_t>(length) * root.ticks_per_command();
  const std::uint64_t generation_cost = per_eval * static_cast<std::uint64_t>(cfg.population);
  if (budget.max_forward_calls < generation_cost) {
    throw SearchError("budget of " + std::to_string(budget.max_forward_calls) +
                      " forward calls is below one generation (" + std::to_string(generation_cost) + ")");
  }
  SearchContext ctx(budget);
  SplitMix64 rng(mix_seed(seed));

  std::vector<Genome> start;
  if (memory && !memory->initial_population.empty()) {
    start = std::move(memory->initial_population);
    memory->initial_population.clear();
  } else if (memory && valid_genome(memory->best, length, units)) {
    Genome shifted(memory->best.begin() + 1, memory->best.end());
    shifted.push_back(planning::random_assignment(units, cfg.scripts, rng));
    start.push_back(std::move(shifted));
  }
  while (static_cast<int>(start.size()) < cfg.population) start.push_back(random_genome(length, units, cfg.scripts, rng));
  start.resize(cfg.population);

  auto evaluate = [&](const Genome& g) {
    return planning::evaluate_plan(ctx, root, side, g, length, cfg, rng.next());
  };

  std::vector<Member> pop;
  for (auto& g : start) {
    const double f = evaluate(g);
    pop.push_back({std::move(g), f});
  }
  auto by_fitness = [](const Member& a, const Member& b) { return a.fitness > b.fitness; };
  std::ranges::stable_sort(pop, by_fitness);
  std::uint64_t evaluations = pop.size();
  if (trace) trace->best_fitness.push_back(pop.front().fitness);

  auto pick_parent = [&]() -> const Member& {
    int best = static_cast<int>(rng.below(pop.size()));
    for (int i = 1; i < cfg.tournament; ++i) {
      const int other = static_cast<int>(rng.below(pop.size()));
      if (pop[other].fitness > pop[best].fitness) best = other;
    }
    return pop[best];
  };

  try {
    while (ctx.can_afford(generation_cost)) {
      std::vector<Member> next(pop.begin(), pop.begin() + cfg.elites);
      while (static_cast<int>(next.size()) < cfg.population) {
        const Member& a = pick_parent();
        const Member& b = pick_parent();
        Genome child = a.genome;
        for (int c = 0; c < length; ++c) {
          for (std::size_t u = 0; u < units; ++u) {
            if (rng.uniform() < cfg.crossover) child[c][u] = b.genome[c][u];
            if (rng.uniform() < cfg.mutation) child[c][u] = cfg.scripts[rng.below(cfg.scripts.size())];
          }
        }
        const double f = evaluate(child);
        ++evaluations;
        next.push_back({std::move(child), f});
      }
      pop = std::move(next);
      std::ranges::stable_sort(pop, by_fitness);
      if (trace) trace->best_fitness.push_back(pop.front().fitness);
    }
  } catch (const BudgetExhausted&) {
  }

  const Member& best = pop.front();
  if (memory) memory->best = best.genome;

  Decision d;
  d.record = planning::base_record(root, side, cfg);
  const Observation obs = observe_as_played(root, side);
  d.action = orders_from_assignment(obs, best.genome.front(), cfg.script_params);
  std::map<std::string, std::size_t> index;
  for (const Member& m : pop) {
    GlobalAction act = orders_from_assignment(obs, m.genome.front(), cfg.script_params);
    std::string key = action_summary(*root.rules, act);
    auto [it, fresh] = index.try_emplace(key, d.record.candidates.size());
    if (fresh) d.record.candidates.push_back({key, std::move(act), 0, 0.0});
    CandidateStat& c = d.record.candidates[it->second];
    c.mean += (m.fitness - c.mean) / static_cast<double>(++c.visits);
  }
  d.record.chosen = static_cast<int>(index.at(action_summary(*root.rules, d.action)));
  d.record.iterations = evaluations;
  d.record.forward_calls = ctx.used();
  return d;
}

Decision mpc_decide(const GameState& root, Side side, const SearchBudget& budget, const AgentConfig& config,
                    std::uint64_t seed, RheaMemory* memory) {
  AgentConfig inner = config;
  switch (config.inner) {
    case AgentKind::Cmab:
      inner.rollout_depth = config.horizon;
      return cmab_decide(root, side, budget, inner, seed);
    case AgentKind::Sss:
      inner.rollout_depth = config.horizon;
      return sss_decide(root, side, budget, inner, seed);
    case AgentKind::Mcts:
      inner.max_depth = 2 * config.horizon;
      inner.rollout_depth = 0;
      return mcts_decide(root, side, budget, inner, seed);
    default: return rhea_decide(root, side, budget, inner, seed, memory);
  }
}

}  // namespace wargame
