#include "wargame/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "wargame/errors.hpp"
#include "wargame/tooling.hpp"

namespace wargame {

PlayerSpec player(AgentConfig config) { return PlayerSpec{std::move(config), {}, {}}; }

PlayerSpec scripted_player(ScriptId script) {
  AgentConfig c;
  c.kind = AgentKind::Scripted;
  c.script = script;
  return player(std::move(c));
}

namespace {

double vp_outcome(const std::array<double, 2>& vp) {
  if (vp[0] > vp[1]) return 1.0;
  if (vp[0] < vp[1]) return 0.0;
  return 0.5;
}

}  // namespace

GameResult run_match(std::shared_ptr<const Rules> rules, const PlayerSpec& blue, const PlayerSpec& red,
                     std::uint64_t seed, const MatchOptions& options) {
  GameResult result;
  result.scenario = rules->doc.name;
  result.seed = seed;
  result.blue = blue.name();
  result.red = red.name();
  result.ticks_per_command = rules->doc.ticks_per_command;
  result.initial_strength = rules->initial_strength;
  result.replay_path = options.replay_path;

  const std::array<const PlayerSpec*, 2> specs{&blue, &red};
  std::array<std::unique_ptr<Agent>, 2> agents;
  for (int i = 0; i < 2; ++i) {
    if (!specs[i]->custom) agents[i] = std::make_unique<Agent>(specs[i]->config, derive_seed(seed, 101 + i));
  }

  GameState s = instantiate(rules, seed, InstantiateOptions{options.fog});
  std::optional<ReplayWriter> writer;
  if (options.replay_path) {
    ReplayHeader h;
    h.scenario_sha256 = sha256_hex(serialize_scenario(rules->doc));
    h.seed = seed;
    h.blue = result.blue;
    h.red = result.red;
    h.fog = options.fog;
    writer.emplace(*options.replay_path, h, rules);
  }

  std::size_t live = s.units.size();
  while (!s.terminal) {
    if (is_command_phase(s)) {
      std::array<GlobalAction, 2> actions;
      for (Side side : {Side::Blue, Side::Red}) {
        const int i = side_index(side);
        const Observation obs = observe_as_played(s, side);
        const auto t0 = std::chrono::steady_clock::now();
        GlobalAction act = specs[i]->custom ? specs[i]->custom(obs) : agents[i]->decide(obs);
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
        const auto& limit = specs[i]->config.budget.max_millis;
        if (limit && static_cast<std::uint64_t>(ms.count()) > *limit + options.grace_ms) {
          result.forfeit = side;
          break;
        }
        if (!options.doctrine[i].empty()) act = filter_doctrine(act, options.doctrine[i], obs);
        if (options.keep_decisions && agents[i] && agents[i]->last_record()) {
          result.decisions.push_back(*agents[i]->last_record());
        }
        actions[i] = std::move(act);
      }
      if (result.forfeit) break;
      const std::uint64_t h = state_hash(s);
      for (Side side : {Side::Blue, Side::Red}) {
        if (writer) writer->orders(s.tick, side, h, actions[side_index(side)]);
        apply_orders(s, side, actions[side_index(side)]);
      }
    }
    step(s);
    if (writer) writer->drain_chance(s);
    if (s.units.size() < live && !result.first_loss_tick) result.first_loss_tick = s.tick;
    live = s.units.size();
  }

  const ScoreReport report = score_state(s);
  result.score = report.score;
  result.vp = report.vp;
  result.ticks = s.tick;
  result.termination = s.terminal;
  result.final_hash = state_hash(s);
  if (result.forfeit) {
    result.outcome_blue = *result.forfeit == Side::Blue ? 0.0 : 1.0;
  } else {
    result.outcome_blue = vp_outcome(result.vp);
  }
  if (writer) writer->terminal(s, result.forfeit ? "forfeit" : termination_name(*s.terminal));
  return result;
}

ResultMatrix round_robin(const std::vector<PlayerSpec>& agents, const std::vector<std::shared_ptr<const Rules>>& scenarios,
                         int n_seeds, const std::vector<PlayerSpec>& hall_of_fame, std::uint64_t seed,
                         const MatchOptions& options) {
  if (agents.size() < 2) throw RuleError("a round robin needs at least two agents");
  const std::size_t ranked = agents.size();
  std::vector<const PlayerSpec*> all;
  for (const auto& a : agents) all.push_back(&a);
  for (const auto& a : hall_of_fame) all.push_back(&a);

  ResultMatrix m;
  for (const auto& a : agents) m.agents.push_back(a.name());
  m.w.assign(ranked, std::vector<double>(ranked, 0.5));
  m.games.assign(ranked, 0);
  m.mean_outcome.assign(ranked, 0.0);
  std::vector<double> outcome_sum(ranked, 0.0);

  std::uint64_t game = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (i >= ranked && j >= ranked) continue;
      double sum_i = 0.0;
      int n = 0;
      for (const auto& rules : scenarios) {
        for (int k = 0; k < n_seeds; ++k) {
          for (int swap = 0; swap < 2; ++swap) {
            const std::uint64_t gs = derive_seed(seed, game++);
            const PlayerSpec& b = swap ? *all[j] : *all[i];
            const PlayerSpec& r = swap ? *all[i] : *all[j];
            GameResult res = run_match(rules, b, r, gs, options);
            const double oi = res.outcome(swap ? Side::Red : Side::Blue);
            sum_i += oi;
            ++n;
            if (i < ranked) {
              outcome_sum[i] += oi;
              ++m.games[i];
            }
            if (j < ranked) {
              outcome_sum[j] += 1.0 - oi;
              ++m.games[j];
            }
            m.results.push_back(std::move(res));
          }
        }
      }
      if (i < ranked && j < ranked && n > 0) {
        m.w[i][j] = sum_i / n;
        m.w[j][i] = 1.0 - m.w[i][j];
      }
    }
  }
  for (std::size_t i = 0; i < ranked; ++i) m.mean_outcome[i] = m.games[i] ? outcome_sum[i] / m.games[i] : 0.5;
  return m;
}

std::vector<std::vector<double>> pareto_front(const std::vector<std::vector<double>>& points) {
  if (points.empty()) return {};
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("pareto_front: points differ in dimension");
  }
  std::vector<std::vector<double>> unique = points;
  std::ranges::sort(unique);
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  auto dominates = [dim](const std::vector<double>& a, const std::vector<double>& b) {
    bool strict = false;
    for (std::size_t k = 0; k < dim; ++k) {
      if (a[k] < b[k]) return false;
      if (a[k] > b[k]) strict = true;
    }
    return strict;
  };
  std::vector<std::vector<double>> front;
  for (const auto& p : unique) {
    const bool dominated = std::ranges::any_of(unique, [&](const auto& q) { return dominates(q, p); });
    if (!dominated) front.push_back(p);
  }
  return front;
}

void write_tournament_report(const std::string& path, const ResultMatrix& m, const NashResult& nash) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open report file '" + path + "'");
  out << "name\tgames\tmeanOutcome\tnashWeight\tskill\n";
  for (std::size_t i = 0; i < m.agents.size(); ++i) {
    out << m.agents[i] << '\t' << m.games[i] << '\t' << m.mean_outcome[i] << '\t' << nash.p[i] << '\t' << nash.skill[i]
        << '\n';
  }
}

int MapElitesArchive::cell_of(const BehaviorDescriptor& d) {
  auto bin = [](double x) { return std::clamp(static_cast<int>(std::floor(x * kBins)), 0, kBins - 1); };
  return bin(d.casualties) * kBins + bin(d.movement);
}

int MapElitesArchive::occupied() const {
  return static_cast<int>(std::ranges::count_if(cells, [](const auto& c) { return c.has_value(); }));
}

std::vector<ParamRange> default_param_space(AgentKind kind) {
  switch (kind) {
    case AgentKind::Mcts:
    case AgentKind::Ismcts: return {{"exploration", 0.1, 3.0}, {"w2", 0.0, 1.0}, {"w4", 0.0, 1.0}};
    case AgentKind::Rhea:
    case AgentKind::Mpc: return {{"mutation", 0.05, 0.9}, {"crossover", 0.0, 1.0}, {"w4", 0.0, 1.0}};
    case AgentKind::Cmab: return {{"epsilon", 0.0, 1.0}, {"epsilon_local", 0.0, 1.0}, {"w4", 0.0, 1.0}};
    default: {
      std::vector<ParamRange> space;
      for (ScriptId id : kAllScripts) space.push_back({"weight." + std::string(script_name(id)), 0.0, 1.0});
      space.push_back({"aggression", 0.0, 2.0});
      return space;
    }
  }
}

MapElitesArchive map_elites_run(AgentKind base, const std::vector<ParamRange>& space,
                                std::shared_ptr<const Rules> rules, int iterations, std::uint64_t seed,
                                const MapElitesOptions& options) {
  if (iterations < 1) throw RuleError("MAP-Elites needs at least one iteration");
  MapElitesArchive archive;
  archive.space = space;
  SplitMix64 rng(mix_seed(seed));
  std::vector<std::uint64_t> game_seeds;
  for (int g = 0; g < options.games; ++g) game_seeds.push_back(derive_seed(seed, 1000 + g));

  double mp_capacity = 0.0;
  for (int id : rules->side_roster[0]) mp_capacity += rules->type_of(id).mp_per_tick;
  mp_capacity *= rules->doc.max_ticks;
  MatchOptions match;
  match.fog = options.fog;

  for (int it = 0; it < iterations; ++it) {
    std::vector<double> params(space.size());
    std::vector<int> filled;
    for (int c = 0; c < MapElitesArchive::kBins * MapElitesArchive::kBins; ++c) {
      if (archive.cells[c]) filled.push_back(c);
    }
    if (filled.empty()) {
      for (std::size_t k = 0; k < space.size(); ++k) params[k] = space[k].lo + rng.uniform() * (space[k].hi - space[k].lo);
    } else {
      const Elite& parent = *archive.cells[filled[rng.below(filled.size())]];
      for (std::size_t k = 0; k < space.size(); ++k) {
        const double sigma = 0.1 * (space[k].hi - space[k].lo);
        params[k] = std::clamp(parent.params[k] + sigma * rng.normal(), space[k].lo, space[k].hi);
      }
    }

    AgentConfig cfg;
    cfg.kind = base;
    for (std::size_t k = 0; k < space.size(); ++k) set_agent_param(cfg, space[k].name, params[k]);
    double fitness = 0.0;
    BehaviorDescriptor d;
    for (std::uint64_t gs : game_seeds) {
      const GameResult r = run_match(rules, player(cfg), options.opponent, gs, match);
      fitness += r.outcome_blue;
      d.casualties += rules->initial_strength[0] > 0
                          ? static_cast<double>(r.score.suffered[0]) / rules->initial_strength[0]
                          : 0.0;
      d.movement += mp_capacity > 0 ? std::min(1.0, r.score.mp_expended[0] / mp_capacity) : 0.0;
    }
    const double n = static_cast<double>(game_seeds.size());
    fitness /= n;
    d.casualties = std::clamp(d.casualties / n, 0.0, 1.0);
    d.movement = std::clamp(d.movement / n, 0.0, 1.0);

    const int cell = MapElitesArchive::cell_of(d);
    auto& slot = archive.cells[cell];
    if (!slot || fitness > slot->fitness) {
      slot = Elite{params, fitness, d};
      archive.history.push_back({it, cell, fitness});
    }
  }
  return archive;
}

}  // namespace wargame
