#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wargame/belief.hpp"
#include "wargame/features.hpp"
#include "wargame/rng.hpp"
#include "wargame/scripts.hpp"
#include "wargame/search_context.hpp"

namespace wargame {

struct HeuristicWeights {
  double vp = 1.0;        // w1: victory-point margin
  double strength = 0.5;  // w2: own strength minus known enemy strength
  double spotted = 0.1;   // w3: fraction of the enemy roster currently spotted
  double distance = 0.2;  // w4: penalty on mean distance to objectives / map diameter
};

enum class AgentKind : std::uint8_t { Random, Scripted, Mcts, Ismcts, Rhea, Cmab, Sss, TwoStage, Mpc };

std::string_view agent_kind_name(AgentKind k);
std::optional<AgentKind> parse_agent_kind(std::string_view name);

struct AgentConfig {
  AgentKind kind = AgentKind::Random;
  std::string name;  // display name; empty means the kind name
  SearchBudget budget;
  HeuristicWeights weights;

  std::vector<ScriptId> scripts{kAllScripts.begin(), kAllScripts.end()};  // search portfolio
  ScriptParams script_params;

  // scripted: one script for every unit, or a per-unit draw proportional to
  // script_weights (indexed by ScriptId) when those are given.
  ScriptId script = ScriptId::AttackNearest;
  std::vector<double> script_weights;

  int rollout_depth = 2;                    // command cycles simulated past the tree / plan
  std::optional<ScriptId> opponent_script;  // opponent model in simulations; default uniform scripts

  double exploration = 1.4142135623730951;
  double pw_c = 2.0;
  double pw_alpha = 0.5;
  int max_depth = 4;  // tree plies; one command cycle is two plies
  std::optional<std::uint64_t> max_iterations;
  int particles = 64;

  int horizon = 5;
  int population = 10;
  int elites = 1;
  int tournament = 2;
  double crossover = 0.5;
  double mutation = 0.3;
  bool shift_buffer = true;
  AgentKind inner = AgentKind::Rhea;

  double epsilon = 0.4;
  double epsilon_local = 0.3;

  std::string display_name() const;
};

// Throws RuleError when a parameter is outside its documented range.
void validate_config(const AgentConfig& config);

// Sets a named numeric parameter (exploration, pw_c, pw_alpha, max_depth,
// rollout_depth, horizon, population, mutation, crossover, epsilon,
// epsilon_local, aggression, scout_radius, w1..w4, weight.<Script>,
// budget_calls). Throws RuleError for unknown names.
void set_agent_param(AgentConfig& config, std::string_view name, double value);

struct CandidateStat {
  std::string summary;
  GlobalAction action;
  std::uint64_t visits = 0;
  double mean = 0.0;
};

struct DecisionRecord {
  int tick = 0;
  Side side = Side::Blue;
  std::string agent;
  std::vector<CandidateStat> candidates;
  int chosen = -1;
  std::uint64_t forward_calls = 0;
  std::uint64_t iterations = 0;
  FeatureVector features;
};

struct Decision {
  GlobalAction action;
  DecisionRecord record;
};

std::string action_summary(const Rules& rules, const GlobalAction& action);

double heuristic_value(const GameState& state, Side side, const HeuristicWeights& weights = {});
// w1 * (+1 win, -1 loss, 0 draw) by victory-point comparison.
double terminal_value(const GameState& state, Side side, const HeuristicWeights& weights = {});
double state_value(const GameState& state, Side side, const HeuristicWeights& weights = {});

using RolloutPolicy = std::function<GlobalAction(const Observation&, SplitMix64&)>;
RolloutPolicy random_script_policy(std::vector<ScriptId> scripts = {kAllScripts.begin(), kAllScripts.end()},
                                   ScriptParams params = {});

// Copies the state, advances `depth` command cycles with both sides driven by
// `policy` (uniform random scripts when empty) and fresh chance seeded from
// `seed`, then scores it. Calls are charged to `ctx` when given.
double rollout_value(const GameState& state, Side side, const RolloutPolicy& policy, int depth, std::uint64_t seed,
                     const HeuristicWeights& weights = {}, SearchContext* ctx = nullptr);

using Genome = std::vector<ScriptAssignment>;

// Carried between decisions of one evolutionary agent.
struct RheaMemory {
  Genome best;
  std::vector<Genome> initial_population;  // used verbatim once when non-empty
};

struct RheaTrace {
  std::vector<double> best_fitness;  // per generation, starting with the initial population
};

Decision random_decide(const Observation& obs, SplitMix64& rng);
Decision scripted_decide(const Observation& obs, const AgentConfig& config, SplitMix64& rng);

// All planners require a non-terminal command-phase root, never modify it, and
// throw SearchError when the budget does not cover one evaluation.
Decision mcts_decide(const GameState& root, Side side, const SearchBudget& budget, const AgentConfig& config,
                     std::uint64_t seed);
Decision ismcts_decide(const Observation& obs, const ParticleSet& particles, const SearchBudget& budget,
                       const AgentConfig& config, std::uint64_t seed);
Decision rhea_decide(const GameState& root, Side side, const SearchBudget& budget, const AgentConfig& config,
                     std::uint64_t seed, RheaMemory* memory = nullptr, RheaTrace* trace = nullptr);
Decision cmab_decide(const GameState& root, Side side, const SearchBudget& budget, const AgentConfig& config,
                     std::uint64_t seed);
Decision sss_decide(const GameState& root, Side side, const SearchBudget& budget, const AgentConfig& config,
                    std::uint64_t seed);
Decision two_stage_decide(const GameState& root, Side side, const SearchBudget& budget, const AgentConfig& config,
                          std::uint64_t seed);
Decision mpc_decide(const GameState& root, Side side, const SearchBudget& budget, const AgentConfig& config,
                    std::uint64_t seed, RheaMemory* memory = nullptr);

// Strata key of a unit: (type, objective distance band, strength band).
struct StratumKey {
  int type = 0;
  bool near_objective = false;  // within 3 hexes of the nearest own objective
  bool healthy = false;         // strength >= half of max strength
  auto operator<=>(const StratumKey&) const = default;
};
// Stratum index per own roster position (-1 for dead units) and the number of strata.
std::pair<std::vector<int>, int> stratify(const GameState& state, Side side);

// A stateful player: turns observations into orders with the configured
// method, keeping belief and plan memory across decisions.
class Agent {
 public:
  Agent(AgentConfig config, std::uint64_t seed);

  GlobalAction decide(const Observation& obs);
  const std::optional<DecisionRecord>& last_record() const { return last_record_; }
  const AgentConfig& config() const { return config_; }
  std::string name() const { return config_.display_name(); }

 private:
  AgentConfig config_;
  SplitMix64 rng_;
  RheaMemory memory_;
  std::optional<ParticleSet> belief_;
  std::optional<DecisionRecord> last_record_;
};

}  // namespace wargame
