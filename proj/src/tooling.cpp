#include "wargame/tooling.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

#include "wargame/errors.hpp"
#include "wargame/evaluation.hpp"

namespace wargame {

using nlohmann::json;

std::string sha256_hex(std::string_view text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::uint64_t parse_hash(const std::string& s) {
  if (s.size() != 16) throw ParseError(0, "hash must have 16 hex digits");
  return std::stoull(s, nullptr, 16);
}

json hex_json(HexCoord h) { return json::array({h.q, h.r}); }

HexCoord hex_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

OrderKind parse_order_kind(const std::string& s) {
  for (OrderKind k : {OrderKind::Hold, OrderKind::Move, OrderKind::Attack, OrderKind::Scout}) {
    if (order_kind_name(k) == s) return k;
  }
  throw ParseError(0, "unknown order kind '" + s + "'");
}

ChancePurpose parse_purpose(const std::string& s) {
  if (s == "combat") return ChancePurpose::Combat;
  if (s == "spotting") return ChancePurpose::Spotting;
  throw ParseError(0, "unknown chance purpose '" + s + "'");
}

json score_json(const ScoreVector& s) {
  return {{"objectivesHeld", s.objectives_held},
          {"inflicted", s.inflicted},
          {"suffered", s.suffered},
          {"mpExpended", s.mp_expended}};
}

}  // namespace

json order_to_json(const Rules& rules, int unit, const UnitOrder& o) {
  json args = json::array();
  switch (o.kind) {
    case OrderKind::Hold: break;
    case OrderKind::Move:
      for (HexCoord h : o.path()) args.push_back(hex_json(h));
      break;
    case OrderKind::Attack: args.push_back(rules.unit_id(o.target)); break;
    case OrderKind::Scout: args = json::array({o.anchor.q, o.anchor.r, o.radius}); break;
  }
  return {{"unit", rules.unit_id(unit)}, {"order", order_kind_name(o.kind)}, {"args", args}};
}

std::pair<int, UnitOrder> order_from_json(const Rules& rules, const json& j) {
  const int unit = rules.unit_index(j.at("unit").get<std::string>());
  const json& args = j.at("args");
  switch (parse_order_kind(j.at("order").get<std::string>())) {
    case OrderKind::Hold: return {unit, UnitOrder::hold()};
    case OrderKind::Move: {
      std::vector<HexCoord> path;
      for (const json& h : args) path.push_back(hex_from(h));
      return {unit, UnitOrder::move(path)};
    }
    case OrderKind::Attack: return {unit, UnitOrder::attack(rules.unit_index(args.at(0).get<std::string>()))};
    case OrderKind::Scout:
      return {unit, UnitOrder::scout({args.at(0).get<int>(), args.at(1).get<int>()}, args.at(2).get<int>())};
  }
  return {unit, UnitOrder::hold()};
}

json chance_to_json(const Rules& rules, const ChanceEvent& e) {
  return {{"kind", "chance"},
          {"tick", e.tick},
          {"seq", e.seq},
          {"purpose", e.purpose == ChancePurpose::Combat ? "combat" : "spotting"},
          {"subjects", json::array({rules.unit_id(e.subjects[0]), rules.unit_id(e.subjects[1])})},
          {"draw", e.draw},
          {"outcome", e.outcome}};
}

ChanceEvent chance_from_json(const Rules& rules, const json& j) {
  ChanceEvent e;
  e.tick = j.at("tick").get<int>();
  e.seq = j.at("seq").get<std::uint32_t>();
  e.purpose = parse_purpose(j.at("purpose").get<std::string>());
  e.subjects = {rules.unit_index(j.at("subjects").at(0).get<std::string>()),
                rules.unit_index(j.at("subjects").at(1).get<std::string>())};
  e.draw = j.at("draw").get<std::uint64_t>();
  e.outcome = j.at("outcome").get<int>();
  return e;
}

ReplayWriter::ReplayWriter(const std::string& path, const ReplayHeader& header, std::shared_ptr<const Rules> rules)
    : out_(path), rules_(std::move(rules)) {
  if (!out_) throw std::runtime_error("cannot open replay file '" + path + "'");
  write({{"version", header.version},
         {"scenarioSha256", header.scenario_sha256},
         {"seed", header.seed},
         {"blue", header.blue},
         {"red", header.red},
         {"fog", header.fog}});
}

void ReplayWriter::write(const json& record) {
  out_ << record.dump() << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("replay write failed");
}

void ReplayWriter::orders(int tick, Side side, std::uint64_t state_hash, const GlobalAction& action) {
  json list = json::array();
  for (const auto& cmd : action.orders) list.push_back(order_to_json(*rules_, cmd.unit, cmd.order));
  write({{"kind", "orders"}, {"tick", tick}, {"side", side_name(side)}, {"hash", hash_hex(state_hash)}, {"orders", list}});
}

void ReplayWriter::chance(const ChanceEvent& event) { write(chance_to_json(*rules_, event)); }

void ReplayWriter::drain_chance(const GameState& state) {
  for (; chance_written_ < state.chance_log.size(); ++chance_written_) chance(state.chance_log[chance_written_]);
}

void ReplayWriter::terminal(const GameState& state, std::string_view reason) {
  drain_chance(state);
  write({{"kind", "terminal"},
         {"tick", state.tick},
         {"reason", reason},
         {"finalHash", hash_hex(state_hash(state))},
         {"score", score_json(state.score)}});
}

ReplayLog read_replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open replay file '" + path + "'");
  ReplayLog log;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("malformed record: ") + e.what());
    }
    if (line_no == 1) {
      try {
        log.header.version = j.at("version").get<int>();
        log.header.scenario_sha256 = j.at("scenarioSha256").get<std::string>();
        log.header.seed = j.at("seed").get<std::uint64_t>();
        log.header.blue = j.at("blue").get<std::string>();
        log.header.red = j.at("red").get<std::string>();
        log.header.fog = j.value("fog", true);
      } catch (const json::exception& e) {
        throw ParseError(line_no, std::string("malformed header: ") + e.what());
      }
      if (log.header.version != 1) throw ParseError(line_no, "unsupported replay version");
      continue;
    }
    if (!j.is_object() || !j.contains("kind")) throw ParseError(line_no, "record without kind");
    log.records.push_back(std::move(j));
  }
  if (line_no == 0) throw ParseError(0, "empty replay file");
  return log;
}

VerifyResult replay_verify(const std::string& path, std::string_view scenario_text) {
  const ReplayLog log = read_replay(path);
  const ScenarioDoc doc = parse_scenario(scenario_text);
  if (sha256_hex(serialize_scenario(doc)) != log.header.scenario_sha256) {
    throw ReplayError("replay header does not match the scenario text");
  }
  const auto rules = compile_rules(doc);

  struct OrdersRec {
    int tick;
    Side side;
    std::uint64_t hash;
    GlobalAction action;
  };
  std::vector<OrdersRec> orders;
  auto replay = std::make_shared<ChanceReplay>();
  std::optional<json> terminal;
  try {
    for (const json& r : log.records) {
      if (terminal) throw ParseError(0, "records after the terminal record");
      const std::string kind = r.at("kind").get<std::string>();
      if (kind == "orders") {
        OrdersRec o;
        o.tick = r.at("tick").get<int>();
        auto side = parse_side(r.at("side").get<std::string>());
        if (!side) throw ParseError(0, "bad side in orders record");
        o.side = *side;
        o.hash = parse_hash(r.at("hash").get<std::string>());
        for (const json& cmd : r.at("orders")) {
          auto [unit, order] = order_from_json(*rules, cmd);
          o.action.set(unit, order);
        }
        orders.push_back(std::move(o));
      } else if (kind == "chance") {
        replay->events.push_back(chance_from_json(*rules, r));
      } else if (kind == "terminal") {
        terminal = r;
      } else {
        throw ParseError(0, "unknown record kind '" + kind + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("malformed replay record: ") + e.what());
  } catch (const RuleError& e) {
    throw ParseError(0, std::string("replay record references unknown data: ") + e.what());
  }
  if (!terminal) throw ParseError(0, "replay has no terminal record");
  const int end_tick = terminal->at("tick").get<int>();
  const std::uint64_t final_hash = parse_hash(terminal->at("finalHash").get<std::string>());
  const std::string reason = terminal->at("reason").get<std::string>();

  VerifyResult result;
  GameState s = instantiate(rules, log.header.seed, InstantiateOptions{log.header.fog});
  s.replay = replay;
  std::size_t next = 0;
  auto fail = [&](int tick, std::string message) {
    result.ok = false;
    result.mismatch_tick = tick;
    result.message = std::move(message);
    result.final_hash = state_hash(s);
    return result;
  };
  try {
    while (!s.terminal && s.tick < end_tick) {
      if (is_command_phase(s)) {
        const std::uint64_t h = state_hash(s);
        for (; next < orders.size() && orders[next].tick == s.tick; ++next) {
          if (orders[next].hash != h) return fail(s.tick, "state hash differs before orders");
          apply_orders(s, orders[next].side, orders[next].action);
        }
      }
      if (next < orders.size() && orders[next].tick <= s.tick) return fail(s.tick, "orders recorded out of phase");
      step(s);
      if (replay->first_mismatch_tick) return fail(*replay->first_mismatch_tick, "chance outcome inconsistent with its draw");
    }
  } catch (const ReplayError& e) {
    return fail(replay->first_mismatch_tick.value_or(s.tick), e.what());
  } catch (const RuleError& e) {
    return fail(s.tick, e.what());
  }
  if (next != orders.size()) return fail(s.tick, "unused orders records");
  if (replay->cursor != replay->events.size()) return fail(replay->events[replay->cursor].tick, "unused chance records");
  if (s.tick != end_tick) return fail(s.tick, "game length differs");
  const std::string live_reason = s.terminal ? std::string(termination_name(*s.terminal)) : "forfeit";
  if (live_reason != reason) return fail(s.tick, "termination reason differs");
  result.final_hash = state_hash(s);
  if (result.final_hash != final_hash) return fail(s.tick, "final state hash differs");
  result.ok = true;
  return result;
}

json decision_to_json(const DecisionRecord& r) {
  json candidates = json::array();
  for (const auto& c : r.candidates) candidates.push_back({{"action", c.summary}, {"visits", c.visits}, {"mean", c.mean}});
  return {{"tick", r.tick},
          {"side", side_name(r.side)},
          {"agent", r.agent},
          {"candidates", candidates},
          {"chosen", r.chosen},
          {"forwardCalls", r.forward_calls},
          {"features", r.features.values}};
}

std::vector<ExItSample> export_exit_dataset(const std::vector<GameResult>& games, const std::optional<std::string>& path) {
  std::vector<ExItSample> samples;
  for (const GameResult& g : games) {
    for (const DecisionRecord& r : g.decisions) {
      double total = 0.0;
      for (const auto& c : r.candidates) total += static_cast<double>(c.visits);
      if (!(total > 0.0)) continue;
      ExItSample s;
      s.features = r.features;
      for (const auto& c : r.candidates) s.policy.push_back(static_cast<double>(c.visits) / total);
      s.value = g.outcome(r.side);
      samples.push_back(std::move(s));
    }
  }
  if (path) {
    std::ofstream out(*path);
    if (!out) throw std::runtime_error("cannot open dataset file '" + *path + "'");
    for (const auto& s : samples) {
      out << json{{"featureSet", FeatureVector::kFeatureSetId},
                  {"features", s.features.values},
                  {"policy", s.policy},
                  {"value", s.value}}
                 .dump()
          << '\n';
    }
  }
  return samples;
}

std::vector<AnomalyFlag> detect_anomalies(const std::vector<GameResult>& results, const AnomalyConfig& config) {
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < results.size(); ++i) {
    cells[{results[i].scenario, results[i].blue, results[i].red}].push_back(i);
  }
  std::vector<AnomalyFlag> flags;
  for (const auto& [key, runs] : cells) {
    if (runs.size() < config.min_cell_size) {
      throw RuleError("anomaly detection needs at least " + std::to_string(config.min_cell_size) +
                      " results per cell; " + std::get<0>(key) + " " + std::get<1>(key) + " vs " + std::get<2>(key) +
                      " has " + std::to_string(runs.size()));
    }
    double mean = 0.0;
    for (std::size_t i : runs) mean += results[i].vp_margin();
    mean /= static_cast<double>(runs.size());
    double var = 0.0;
    for (std::size_t i : runs) var += (results[i].vp_margin() - mean) * (results[i].vp_margin() - mean);
    const double sd = std::sqrt(var / static_cast<double>(runs.size()));
    for (std::size_t i : runs) {
      const double dev = std::abs(results[i].vp_margin() - mean);
      if (sd > 0.0 && dev > config.z_threshold * sd) flags.push_back({i, "vpMargin", results[i].vp_margin()});
      if (results[i].first_loss_tick && *results[i].first_loss_tick < results[i].ticks_per_command) {
        flags.push_back({i, "earlyLoss", static_cast<double>(*results[i].first_loss_tick)});
      }
    }
  }
  std::ranges::sort(flags, [](const AnomalyFlag& a, const AnomalyFlag& b) {
    return std::tie(a.run, a.metric) < std::tie(b.run, b.metric);
  });
  return flags;
}

namespace {

char terrain_char(Terrain t) {
  switch (t) {
    case Terrain::Clear: return '.';
    case Terrain::Woods: return '%';
    case Terrain::Urban: return '#';
    case Terrain::Hill: return '^';
    case Terrain::Water: return '~';
  }
  return '?';
}

char side_char(Side s, bool contact) {
  const char c = s == Side::Blue ? 'B' : 'R';
  return contact ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string draw_grid(const GameMap& map, const std::map<HexCoord, char>& overlay) {
  std::string out;
  for (int r = 0; r < map.height(); ++r) {
    out.append(static_cast<std::size_t>(r), ' ');
    for (int q = 0; q < map.width(); ++q) {
      if (q > 0) out += ' ';
      auto it = overlay.find({q, r});
      out += it != overlay.end() ? it->second : terrain_char(map.terrain({q, r}));
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string render_text(const Observation& obs) {
  std::map<HexCoord, char> overlay;
  for (const Contact& c : obs.contacts) overlay[c.last_seen_pos] = side_char(opponent(obs.side), true);
  for (const Unit& u : obs.own_units) overlay[u.pos] = side_char(u.side, false);
  return draw_grid(obs.map(), overlay);
}

std::string render_text(const GameState& state) {
  std::map<HexCoord, char> overlay;
  for (const Unit& u : state.units) overlay[u.pos] = side_char(u.side, false);
  return draw_grid(state.map(), overlay);
}

std::string render_text(const GameState& state, Side side) { return render_text(observe_as_played(state, side)); }

LogLevel log_level() {
  const char* env = std::getenv("WARGAME_LOG");
  if (!env) return LogLevel::Error;
  const std::string_view v(env);
  if (v == "debug") return LogLevel::Debug;
  if (v == "info") return LogLevel::Info;
  return LogLevel::Error;
}

void log_message(LogLevel level, std::string_view message) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  static constexpr std::string_view kNames[] = {"error", "info", "debug"};
  std::cerr << "[" << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace wargame
