#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wargame/errors.hpp"
#include "wargame/evaluation.hpp"
#include "wargame/tooling.hpp"

namespace py = pybind11;
using namespace wargame;

namespace {

// pybind11 holders cannot be pointers to const; rules are never mutated here.
using RulesPtr = std::shared_ptr<Rules>;

RulesPtr exposed(std::shared_ptr<const Rules> r) { return std::const_pointer_cast<Rules>(std::move(r)); }

Side side_arg(const std::string& name) {
  const auto s = parse_side(name);
  if (!s) throw py::value_error("side must be 'blue' or 'red', got '" + name + "'");
  return *s;
}

// `kind` or `scripted:<Script>`, with named parameters as accepted by set_agent_param.
AgentConfig agent_config(const std::string& spec, std::uint64_t budget_calls,
                         const std::map<std::string, double>& params) {
  const auto colon = spec.find(':');
  const auto kind = parse_agent_kind(spec.substr(0, colon));
  if (!kind) throw py::value_error("unknown agent '" + spec + "'");
  AgentConfig c;
  c.kind = *kind;
  c.budget.max_forward_calls = budget_calls;
  if (colon != std::string::npos) {
    const auto script = parse_script(spec.substr(colon + 1));
    if (!script || c.kind != AgentKind::Scripted) throw py::value_error("unknown agent '" + spec + "'");
    c.script = *script;
  }
  for (const auto& [name, value] : params) set_agent_param(c, name, value);
  validate_config(c);
  return c;
}

py::dict result_dict(const GameResult& r) {
  py::dict d;
  d["scenario"] = r.scenario;
  d["seed"] = r.seed;
  d["blue"] = r.blue;
  d["red"] = r.red;
  d["outcome_blue"] = r.outcome_blue;
  d["vp"] = std::vector<double>{r.vp[0], r.vp[1]};
  d["ticks"] = r.ticks;
  d["termination"] = r.forfeit ? std::string("forfeit") : std::string(termination_name(*r.termination));
  d["final_hash"] = hash_hex(r.final_hash);
  return d;
}

class Game {
 public:
  Game(RulesPtr rules, std::uint64_t seed, bool fog) : state_(instantiate(std::move(rules), seed, {fog})) {}
  explicit Game(GameState s) : state_(std::move(s)) {}

  void step() { wargame::step(state_); }
  int tick() const { return state_.tick; }
  bool command_phase() const { return is_command_phase(state_); }
  std::optional<std::string> terminal() const {
    if (!state_.terminal) return std::nullopt;
    return std::string(termination_name(*state_.terminal));
  }
  std::string hash() const { return hash_hex(state_hash(state_)); }
  Game copy() const { return Game(copy_state(state_)); }
  std::vector<double> vp() const {
    const ScoreReport r = score_state(state_);
    return {r.vp[0], r.vp[1]};
  }

  void apply_scripts(const std::string& side, const std::vector<std::string>& scripts) {
    const Side s = side_arg(side);
    const auto& roster = state_.rules->side_roster[side_index(s)];
    if (scripts.size() != roster.size()) {
      throw py::value_error("expected " + std::to_string(roster.size()) + " scripts, one per roster unit");
    }
    ScriptAssignment a;
    for (const auto& name : scripts) {
      const auto id = parse_script(name);
      if (!id) throw py::value_error("unknown script '" + name + "'");
      a.push_back(*id);
    }
    apply_orders(state_, s, orders_from_assignment(observe_as_played(state_, s), a));
  }

  std::vector<py::dict> units() const {
    std::vector<py::dict> out;
    for (const Unit& u : state_.units) {
      py::dict d;
      d["id"] = state_.rules->unit_id(u.id);
      d["side"] = std::string(side_name(u.side));
      d["q"] = u.pos.q;
      d["r"] = u.pos.r;
      d["strength"] = u.strength;
      d["order"] = std::string(order_kind_name(u.order.kind));
      out.push_back(d);
    }
    return out;
  }

  std::string render(const std::optional<std::string>& side) const {
    return side ? render_text(state_, side_arg(*side)) : render_text(state_);
  }

  GameState& state() { return state_; }
  const GameState& state() const { return state_; }

 private:
  GameState state_;
};

class PyAgent {
 public:
  PyAgent(const std::string& spec, std::uint64_t seed, std::uint64_t budget_calls,
          const std::map<std::string, double>& params)
      : agent_(agent_config(spec, budget_calls, params), seed) {}

  // Decides for `side` and applies the orders; returns the decision summary.
  py::dict act(Game& game, const std::string& side) {
    const Side s = side_arg(side);
    const GlobalAction a = agent_.decide(observe_as_played(game.state(), s));
    apply_orders(game.state(), s, a);
    py::dict d;
    d["action"] = action_summary(*game.state().rules, a);
    d["forward_calls"] = agent_.last_record() ? agent_.last_record()->forward_calls : 0;
    return d;
  }

  std::string name() const { return agent_.name(); }

 private:
  Agent agent_;
};

}  // namespace

PYBIND11_MODULE(_wargame, m) {
  m.doc() = "Headless hex wargame engine, planning agents and evaluation tools";

  py::register_exception<RuleError>(m, "RuleError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<SearchError>(m, "SearchError", PyExc_RuntimeError);
  py::register_exception<ReplayError>(m, "ReplayError", PyExc_ValueError);

  py::class_<Rules, RulesPtr>(m, "Rules")
      .def_property_readonly("name", [](const Rules& r) { return r.doc.name; })
      .def_property_readonly("width", [](const Rules& r) { return r.map().width(); })
      .def_property_readonly("height", [](const Rules& r) { return r.map().height(); })
      .def("roster_size", [](const Rules& r, const std::string& side) {
        return r.side_roster[side_index(side_arg(side))].size();
      });

  m.def("load_rules", [](const std::string& path) { return exposed(compile_rules(load_scenario_file(path))); }, py::arg("path"));
  m.def("parse_rules", [](const std::string& text) { return exposed(compile_rules(parse_scenario(text))); }, py::arg("text"));
  m.def("script_names", [] {
    std::vector<std::string> out;
    for (ScriptId id : kAllScripts) out.emplace_back(script_name(id));
    return out;
  });

  py::class_<Game>(m, "Game")
      .def(py::init<RulesPtr, std::uint64_t, bool>(), py::arg("rules"), py::arg("seed"), py::arg("fog") = true)
      .def("step", &Game::step)
      .def("copy", &Game::copy)
      .def("hash", &Game::hash)
      .def("vp", &Game::vp)
      .def("units", &Game::units)
      .def("apply_scripts", &Game::apply_scripts, py::arg("side"), py::arg("scripts"))
      .def("render", &Game::render, py::arg("side") = std::nullopt)
      .def_property_readonly("tick", &Game::tick)
      .def_property_readonly("command_phase", &Game::command_phase)
      .def_property_readonly("terminal", &Game::terminal);

  py::class_<PyAgent>(m, "Agent")
      .def(py::init<const std::string&, std::uint64_t, std::uint64_t, const std::map<std::string, double>&>(),
           py::arg("spec"), py::arg("seed") = 1, py::arg("budget_calls") = 1000,
           py::arg("params") = std::map<std::string, double>{})
      .def("act", &PyAgent::act, py::arg("game"), py::arg("side"))
      .def_property_readonly("name", &PyAgent::name);

  m.def(
      "run_match",
      [](RulesPtr rules, const std::string& blue, const std::string& red, std::uint64_t seed, bool fog,
         std::uint64_t budget_calls, const std::optional<std::string>& replay_path) {
        MatchOptions o;
        o.fog = fog;
        o.replay_path = replay_path;
        const GameResult r = run_match(rules, player(agent_config(blue, budget_calls, {})),
                                       player(agent_config(red, budget_calls, {})), seed, o);
        return result_dict(r);
      },
      py::arg("rules"), py::arg("blue"), py::arg("red"), py::arg("seed") = 1, py::arg("fog") = true,
      py::arg("budget_calls") = 1000, py::arg("replay_path") = std::nullopt);

  m.def(
      "replay_verify",
      [](const std::string& path, const std::string& scenario_text) {
        const VerifyResult v = replay_verify(path, scenario_text);
        py::dict d;
        d["ok"] = v.ok;
        d["mismatch_tick"] = v.mismatch_tick;
        d["message"] = v.message;
        d["final_hash"] = hash_hex(v.final_hash);
        return d;
      },
      py::arg("path"), py::arg("scenario_text"));

  m.def(
      "nash_average",
      [](const std::vector<std::vector<double>>& w) {
        const NashResult n = nash_average(w);
        py::dict d;
        d["p"] = n.p;
        d["skill"] = n.skill;
        d["exploitability"] = n.exploitability;
        d["converged"] = n.converged;
        return d;
      },
      py::arg("w"));

  m.def("pareto_front", &pareto_front, py::arg("points"));
}
