#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wargame/agents.hpp"

namespace wargame {

// A match participant: a configured agent, or a custom decision function.
struct PlayerSpec {
  AgentConfig config;
  std::function<GlobalAction(const Observation&)> custom;
  std::string label;

  std::string name() const { return label.empty() ? config.display_name() : label; }
};

PlayerSpec player(AgentConfig config);
PlayerSpec scripted_player(ScriptId script);

struct MatchOptions {
  bool fog = true;
  std::optional<std::string> replay_path;
  std::array<std::vector<DoctrineRule>, 2> doctrine;
  bool keep_decisions = false;
  std::uint64_t grace_ms = 100;  // allowed overshoot of an agent's max_millis
};

struct GameResult {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string blue;
  std::string red;
  ScoreVector score;
  std::array<double, 2> vp{};
  double outcome_blue = 0.5;  // 1 win, 0.5 draw, 0 loss
  int ticks = 0;
  int ticks_per_command = 1;
  std::optional<Termination> termination;
  std::optional<Side> forfeit;  // side that exceeded its wall-clock budget
  std::optional<int> first_loss_tick;
  std::array<int, 2> initial_strength{};
  std::uint64_t final_hash = 0;
  std::optional<std::string> replay_path;
  std::vector<DecisionRecord> decisions;

  double outcome(Side side) const { return side == Side::Blue ? outcome_blue : 1.0 - outcome_blue; }
  double vp_margin() const { return vp[0] - vp[1]; }
};

// Plays one full game. Deterministic under seed unless wall-clock budgets bite.
GameResult run_match(std::shared_ptr<const Rules> rules, const PlayerSpec& blue, const PlayerSpec& red,
                     std::uint64_t seed, const MatchOptions& options = {});

struct ResultMatrix {
  std::vector<std::string> agents;
  std::vector<std::vector<double>> w;  // w[i][j]: mean outcome of i against j
  std::vector<int> games;              // per ranked agent, hall-of-fame games included
  std::vector<double> mean_outcome;
  std::vector<GameResult> results;
};

// Every pair with at least one ranked agent plays n_seeds games per scenario
// with each side assignment. Hall-of-fame members are opponents only.
ResultMatrix round_robin(const std::vector<PlayerSpec>& agents, const std::vector<std::shared_ptr<const Rules>>& scenarios,
                         int n_seeds, const std::vector<PlayerSpec>& hall_of_fame = {}, std::uint64_t seed = 1,
                         const MatchOptions& options = {});

struct NashOptions {
  double tolerance = 1e-9;
  int max_iterations = 100000;
};

struct NashResult {
  std::vector<double> p;      // maximum-entropy Nash distribution
  std::vector<double> skill;  // (W - 0.5) p
  double exploitability = 0.0;
  int iterations = 0;
  bool converged = false;
};

NashResult nash_average(const std::vector<std::vector<double>>& w, const NashOptions& options = {});

// Non-dominated subset under maximisation, each distinct point once.
// Throws std::invalid_argument on mixed dimensions.
std::vector<std::vector<double>> pareto_front(const std::vector<std::vector<double>>& points);

void write_tournament_report(const std::string& path, const ResultMatrix& matrix, const NashResult& nash);

struct ParamRange {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
};

struct BehaviorDescriptor {
  double casualties = 0.0;  // strength suffered / initial strength
  double movement = 0.0;    // movement points spent / (sum of mp per tick * max ticks)
};

struct Elite {
  std::vector<double> params;
  double fitness = 0.0;
  BehaviorDescriptor descriptor;
};

struct ArchiveInsertion {
  int iteration = 0;
  int cell = 0;
  double fitness = 0.0;
};

struct MapElitesArchive {
  static constexpr int kBins = 5;
  std::vector<ParamRange> space;
  std::array<std::optional<Elite>, kBins * kBins> cells;
  std::vector<ArchiveInsertion> history;

  static int cell_of(const BehaviorDescriptor& d);
  int occupied() const;
};

struct MapElitesOptions {
  PlayerSpec opponent = scripted_player(ScriptId::AttackNearest);
  int games = 5;
  bool fog = true;
};

std::vector<ParamRange> default_param_space(AgentKind kind);

MapElitesArchive map_elites_run(AgentKind base, const std::vector<ParamRange>& space,
                                std::shared_ptr<const Rules> rules, int iterations, std::uint64_t seed,
                                const MapElitesOptions& options = {});

}  // namespace wargame
