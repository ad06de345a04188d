#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wargame/errors.hpp"
#include "wargame/evaluation.hpp"
#include "wargame/tooling.hpp"
#include "wargame/tuning.hpp"

using namespace wargame;
using nlohmann::json;

namespace {

// Bad flags, files or configurations; reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::vector<std::string> scenarios;
  std::uint64_t seed = 1;
  std::uint64_t budget_calls = 1000;
  std::optional<std::uint64_t> budget_ms;
  std::string fog = "on";
  std::string log;
  std::string doctrine;
};

void add_common(CLI::App* app, Common& c, bool many_scenarios = false) {
  auto* s = app->add_option("--scenario", c.scenarios, "scenario file")->required();
  if (!many_scenarios) s->expected(1);
  app->add_option("--seed", c.seed, "base seed");
  app->add_option("--budget-calls", c.budget_calls, "forward-model calls per decision")->check(CLI::PositiveNumber);
  app->add_option("--budget-ms", c.budget_ms, "wall-clock milliseconds per decision");
  app->add_option("--fog", c.fog, "fog of war")->check(CLI::IsMember({"on", "off"}));
  app->add_option("--log", c.log, "output log file");
  app->add_option("--doctrine", c.doctrine, "doctrine rules applied to both sides");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::shared_ptr<const Rules> load_rules(const std::string& path) {
  try {
    return compile_rules(parse_scenario(read_file(path)));
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const RuleError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// `kind` or `scripted:<Script>`.
PlayerSpec agent_spec(const std::string& text, const std::string& flag, const Common& c) {
  const auto colon = text.find(':');
  const std::string kind_name = text.substr(0, colon);
  const auto kind = parse_agent_kind(kind_name);
  if (!kind) throw UsageError(flag + ": unknown agent '" + text + "'");
  AgentConfig cfg;
  cfg.kind = *kind;
  cfg.budget.max_forward_calls = c.budget_calls;
  cfg.budget.max_millis = c.budget_ms;
  if (colon != std::string::npos) {
    const auto script = parse_script(text.substr(colon + 1));
    if (*kind != AgentKind::Scripted || !script) throw UsageError(flag + ": unknown agent '" + text + "'");
    cfg.script = *script;
  }
  try {
    validate_config(cfg);
  } catch (const RuleError& e) {
    throw UsageError(flag + ": " + e.what());
  }
  return player(cfg);
}

MatchOptions match_options(const Common& c) {
  MatchOptions m;
  m.fog = c.fog == "on";
  if (!c.doctrine.empty()) {
    try {
      const auto rules = parse_doctrine(read_file(c.doctrine));
      m.doctrine = {rules, rules};
    } catch (const ParseError& e) {
      throw UsageError("--doctrine: " + std::string(e.what()));
    }
  }
  return m;
}

json result_json(const GameResult& r) {
  return {{"scenario", r.scenario},
          {"seed", r.seed},
          {"blue", r.blue},
          {"red", r.red},
          {"outcomeBlue", r.outcome_blue},
          {"vp", r.vp},
          {"ticks", r.ticks},
          {"termination", r.forfeit ? "forfeit" : std::string(termination_name(*r.termination))},
          {"finalHash", hash_hex(r.final_hash)}};
}

std::ofstream open_log(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open log file '" + path + "'");
  return out;
}

int cmd_run(const Common& c, const std::string& blue, const std::string& red, const std::string& replay) {
  auto rules = load_rules(c.scenarios.front());
  const PlayerSpec b = agent_spec(blue, "--blue", c);
  const PlayerSpec r = agent_spec(red, "--red", c);
  MatchOptions m = match_options(c);
  if (!replay.empty()) m.replay_path = replay;
  m.keep_decisions = !c.log.empty();
  const GameResult g = run_match(rules, b, r, c.seed, m);
  if (!c.log.empty()) {
    auto out = open_log(c.log);
    for (const auto& d : g.decisions) out << decision_to_json(d).dump() << '\n';
    out << result_json(g).dump() << '\n';
  }
  std::cout << result_json(g).dump() << '\n';
  return 0;
}

int cmd_tournament(const Common& c, const std::vector<std::string>& agents, const std::vector<std::string>& hof,
                   int seeds, const std::string& report) {
  std::vector<std::shared_ptr<const Rules>> scenarios;
  for (const auto& p : c.scenarios) scenarios.push_back(load_rules(p));
  std::vector<PlayerSpec> ranked;
  for (const auto& a : agents) ranked.push_back(agent_spec(a, "--agents", c));
  std::vector<PlayerSpec> fame;
  for (const auto& a : hof) fame.push_back(agent_spec(a, "--hall-of-fame", c));
  if (ranked.size() < 2) throw UsageError("--agents: a tournament needs at least two agents");
  const ResultMatrix m = round_robin(ranked, scenarios, seeds, fame, c.seed, match_options(c));
  const NashResult n = nash_average(m.w);
  if (!report.empty()) write_tournament_report(report, m, n);
  if (!c.log.empty()) {
    auto out = open_log(c.log);
    for (const auto& g : m.results) out << result_json(g).dump() << '\n';
  }
  std::cout << "name\tgames\tmeanOutcome\tnashWeight\tskill\n";
  for (std::size_t i = 0; i < m.agents.size(); ++i) {
    std::cout << m.agents[i] << '\t' << m.games[i] << '\t' << m.mean_outcome[i] << '\t' << n.p[i] << '\t' << n.skill[i]
              << '\n';
  }
  if (!n.converged) std::cerr << "nash averaging did not converge; exploitability " << n.exploitability << '\n';
  return 0;
}

int cmd_tune(const Common& c, const std::string& agent, const std::string& opponent, int games, int evals) {
  auto rules = load_rules(c.scenarios.front());
  const PlayerSpec base = agent_spec(agent, "--agent", c);
  const PlayerSpec opp = agent_spec(opponent, "--opponent", c);
  const ParamSpace space = default_tuning_space(base.config.kind);
  const TuneResult t = tune_agent(base.config, space, rules, opp, games, evals, c.seed, {}, match_options(c));
  if (!c.log.empty()) write_tuning_log(c.log, space, t.search.log);
  json best;
  const auto values = space.values(t.best_point);
  for (std::size_t d = 0; d < space.dims.size(); ++d) best[space.dims[d].name] = values[d];
  std::cout << json{{"agent", base.name()}, {"evaluations", t.search.log.size()}, {"best", best}}.dump() << '\n';
  return 0;
}

int cmd_mapelites(const Common& c, const std::string& agent, const std::string& opponent, int iterations) {
  auto rules = load_rules(c.scenarios.front());
  const PlayerSpec base = agent_spec(agent, "--agent", c);
  MapElitesOptions o;
  o.opponent = agent_spec(opponent, "--opponent", c);
  o.fog = c.fog == "on";
  const auto space = default_param_space(base.config.kind);
  const MapElitesArchive a = map_elites_run(base.config.kind, space, rules, iterations, c.seed, o);
  json cells = json::array();
  for (int i = 0; i < MapElitesArchive::kBins * MapElitesArchive::kBins; ++i) {
    if (!a.cells[i]) continue;
    json params;
    for (std::size_t k = 0; k < space.size(); ++k) params[space[k].name] = a.cells[i]->params[k];
    cells.push_back({{"cell", i},
                     {"fitness", a.cells[i]->fitness},
                     {"casualties", a.cells[i]->descriptor.casualties},
                     {"movement", a.cells[i]->descriptor.movement},
                     {"params", params}});
  }
  if (!c.log.empty()) {
    auto out = open_log(c.log);
    for (const auto& cell : cells) out << cell.dump() << '\n';
  }
  std::cout << json{{"occupied", a.occupied()}, {"insertions", a.history.size()}}.dump() << '\n';
  return 0;
}

int cmd_replay(const std::string& scenario, const std::string& file) {
  const std::string text = read_file(scenario);
  VerifyResult v;
  try {
    v = replay_verify(file, text);
  } catch (const ReplayError& e) {
    throw UsageError(e.what());
  } catch (const ParseError& e) {
    throw UsageError(file + ": " + e.what());
  }
  if (v.ok) {
    std::cout << "ok " << hash_hex(v.final_hash) << '\n';
    return 0;
  }
  std::cout << "mismatch at tick " << v.mismatch_tick.value_or(-1) << ": " << v.message << '\n';
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Headless hex wargame engine and agents"};
  app.require_subcommand(1);

  Common run_opts;
  std::string blue = "random";
  std::string red = "random";
  std::string replay_out;
  auto* run = app.add_subcommand("run", "play one game");
  add_common(run, run_opts);
  run->add_option("--blue", blue, "blue agent");
  run->add_option("--red", red, "red agent");
  run->add_option("--replay", replay_out, "write a replay file");

  Common tour_opts;
  std::vector<std::string> agents;
  std::vector<std::string> hof;
  int seeds = 2;
  std::string report;
  auto* tour = app.add_subcommand("tournament", "round robin with nash averaging");
  add_common(tour, tour_opts, true);
  tour->add_option("--agents", agents, "ranked agents")->required()->delimiter(',');
  tour->add_option("--hall-of-fame", hof, "opponent-only agents")->delimiter(',');
  tour->add_option("--seeds", seeds, "games per pair, scenario and side")->check(CLI::PositiveNumber);
  tour->add_option("--report", report, "tab-separated report file");

  Common tune_opts;
  std::string tune_agent_name = "mcts";
  std::string tune_opponent = "scripted:AttackNearest";
  int games = 4;
  int evals = 50;
  auto* tune = app.add_subcommand("tune", "NTBEA parameter tuning");
  add_common(tune, tune_opts);
  tune->add_option("--agent", tune_agent_name, "agent kind to tune");
  tune->add_option("--opponent", tune_opponent, "fixed opponent");
  tune->add_option("--games", games, "games per evaluation")->check(CLI::PositiveNumber);
  tune->add_option("--evals", evals, "evaluation budget")->check(CLI::PositiveNumber);

  Common me_opts;
  std::string me_agent = "scripted";
  std::string me_opponent = "scripted:AttackNearest";
  int iterations = 100;
  auto* me = app.add_subcommand("mapelites", "MAP-Elites over agent parameters");
  add_common(me, me_opts);
  me->add_option("--agent", me_agent, "agent kind");
  me->add_option("--opponent", me_opponent, "fixed opponent");
  me->add_option("--iterations", iterations, "iterations")->check(CLI::PositiveNumber);

  std::string replay_scenario;
  std::string verify_file;
  auto* rep = app.add_subcommand("replay", "verify a replay file");
  rep->add_option("--scenario", replay_scenario, "scenario file")->required();
  rep->add_option("--verify", verify_file, "replay file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(run_opts, blue, red, replay_out);
    if (*tour) return cmd_tournament(tour_opts, agents, hof, seeds, report);
    if (*tune) return cmd_tune(tune_opts, tune_agent_name, tune_opponent, games, evals);
    if (*me) return cmd_mapelites(me_opts, me_agent, me_opponent, iterations);
    if (*rep) return cmd_replay(replay_scenario, verify_file);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
