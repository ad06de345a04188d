#include "wargame/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wargame/errors.hpp"
#include "wargame/rng.hpp"

namespace wargame {

std::string_view side_name(Side s) { return s == Side::Blue ? "blue" : "red"; }

std::optional<Side> parse_side(std::string_view name) {
  if (name == "blue") return Side::Blue;
  if (name == "red") return Side::Red;
  return std::nullopt;
}

const UnitTypeSpec* ScenarioDoc::find_type(std::string_view type_name) const {
  for (const auto& t : unit_types) {
    if (t.name == type_name) return &t;
  }
  return nullptr;
}

namespace {

struct Token {
  std::string text;
  bool quoted = false;
};

std::vector<Token> tokenize(std::string_view line, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '"') {
      const std::size_t end = line.find('"', i + 1);
      if (end == std::string_view::npos) throw ParseError(line_no, "unterminated string");
      out.push_back({std::string(line.substr(i + 1, end - i - 1)), true});
      i = end + 1;
      continue;
    }
    std::size_t end = i;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r' && line[end] != '#') ++end;
    out.push_back({std::string(line.substr(i, end - i)), false});
    i = end;
  }
  return out;
}

int to_int(const Token& tok, int line_no) {
  int value = 0;
  const auto* first = tok.text.data();
  const auto* last = first + tok.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (tok.quoted || ec != std::errc() || ptr != last) {
    throw ParseError(line_no, "expected integer, got '" + tok.text + "'");
  }
  return value;
}

double to_real(const Token& tok, int line_no) {
  double value = 0;
  const auto* first = tok.text.data();
  const auto* last = first + tok.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (tok.quoted || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError(line_no, "expected real number, got '" + tok.text + "'");
  }
  return value;
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void expect_keyword(const std::vector<Token>& toks, std::size_t at, std::string_view kw, int line_no) {
  if (at >= toks.size() || toks[at].quoted || toks[at].text != kw) {
    throw ParseError(line_no, "expected '" + std::string(kw) + "'");
  }
}

void expect_count(const std::vector<Token>& toks, std::size_t n, int line_no, std::string_view directive) {
  if (toks.size() != n) {
    throw ParseError(line_no, "malformed '" + std::string(directive) + "' directive: expected " +
                                  std::to_string(n) + " tokens, got " + std::to_string(toks.size()));
  }
}

Side to_side(const Token& tok, int line_no) {
  auto s = parse_side(tok.text);
  if (!s || tok.quoted) throw ParseError(line_no, "unknown side '" + tok.text + "'");
  return *s;
}

Terrain to_terrain(const Token& tok, int line_no) {
  auto t = parse_terrain(tok.text);
  if (!t || tok.quoted) throw ParseError(line_no, "unknown terrain '" + tok.text + "'");
  return *t;
}

// Source lines of declarations, used to locate validation failures.
struct LineIndex {
  int map = 0;
  int ticks = 0;
  std::vector<int> types;
  std::array<std::vector<int>, 2> forces;
  std::vector<int> objectives;
};

std::string hex_str(HexCoord h) { return "(" + std::to_string(h.q) + "," + std::to_string(h.r) + ")"; }

void validate_core(const ScenarioDoc& doc, const LineIndex* lines) {
  auto at = [&](auto member, std::size_t i) -> int {
    if (!lines) return 0;
    const auto& v = (*lines).*member;
    return i < v.size() ? v[i] : 0;
  };
  if (doc.map.width() <= 0 || doc.map.height() <= 0) throw ParseError(lines ? lines->map : 0, "missing map declaration");
  if (doc.name.find('"') != std::string::npos) throw ParseError(0, "scenario name may not contain '\"'");
  if (doc.ticks_per_command < 1) throw ParseError(lines ? lines->ticks : 0, "ticks_per_command must be >= 1");
  if (doc.max_ticks < doc.ticks_per_command) {
    throw ParseError(lines ? lines->ticks : 0, "max_ticks must be >= ticks_per_command");
  }

  std::set<std::string> type_names;
  for (std::size_t i = 0; i < doc.unit_types.size(); ++i) {
    const auto& t = doc.unit_types[i];
    const int ln = at(&LineIndex::types, i);
    if (!type_names.insert(t.name).second) throw ParseError(ln, "duplicate unit type '" + t.name + "'");
    if (t.attack < 0 || t.attack > 10) throw ParseError(ln, "atk must be in 0..10");
    if (t.defense < 0 || t.defense > 10) throw ParseError(ln, "def must be in 0..10");
    if (t.range < 0) throw ParseError(ln, "range must be >= 0");
    if (t.sight < 1) throw ParseError(ln, "sight must be >= 1");
    if (t.mp_per_tick < 1) throw ParseError(ln, "mp must be >= 1");
    if (t.max_strength < 1 || t.max_strength > 10) throw ParseError(ln, "maxstr must be in 1..10");
  }

  std::set<std::string> ids;
  std::map<HexCoord, std::string> occupied;
  for (int s = 0; s < 2; ++s) {
    for (std::size_t i = 0; i < doc.forces[s].size(); ++i) {
      const auto& f = doc.forces[s][i];
      const int ln = lines ? (i < lines->forces[s].size() ? lines->forces[s][i] : 0) : 0;
      if (!ids.insert(f.id).second) throw ParseError(ln, "duplicate unit id '" + f.id + "'");
      const UnitTypeSpec* type = doc.find_type(f.type_name);
      if (!type) throw ParseError(ln, "unit '" + f.id + "' references undeclared type '" + f.type_name + "'");
      if (!doc.map.in_bounds(f.pos)) throw ParseError(ln, "unit '" + f.id + "' placed out of bounds at " + hex_str(f.pos));
      if (!doc.map.passable(f.pos)) {
        throw ParseError(ln, "unit '" + f.id + "' placed on impassable terrain at " + hex_str(f.pos));
      }
      if (f.strength < 1 || f.strength > type->max_strength) {
        throw ParseError(ln, "unit '" + f.id + "' strength must be in 1.." + std::to_string(type->max_strength));
      }
      auto [it, fresh] = occupied.emplace(f.pos, f.id);
      if (!fresh) throw ParseError(ln, "units '" + it->second + "' and '" + f.id + "' overlap at " + hex_str(f.pos));
    }
  }

  for (std::size_t i = 0; i < doc.objectives.size(); ++i) {
    const auto& o = doc.objectives[i];
    const int ln = at(&LineIndex::objectives, i);
    if (!doc.map.passable(o.pos)) throw ParseError(ln, "objective at " + hex_str(o.pos) + " is not a passable in-bounds hex");
    if (!std::isfinite(o.weight)) throw ParseError(ln, "objective weight must be finite");
  }
}

}  // namespace

void validate_scenario(const ScenarioDoc& doc) { validate_core(doc, nullptr); }

ScenarioDoc parse_scenario(std::string_view text) {
  ScenarioDoc doc;
  LineIndex lines;
  bool have_header = false;
  bool have_map = false;
  std::optional<Side> current_side;
  std::optional<Terrain> default_terrain;
  std::vector<std::pair<int, std::pair<HexCoord, Terrain>>> hex_terrain;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto toks = tokenize(line, line_no);
    if (toks.empty()) continue;
    const std::string& kw = toks[0].text;

    if (!have_header) {
      if (kw != "scenario" || toks[0].quoted) throw ParseError(line_no, "missing scenario header");
      expect_count(toks, 4, line_no, "scenario");
      if (!toks[1].quoted) throw ParseError(line_no, "scenario name must be quoted");
      expect_keyword(toks, 2, "version", line_no);
      doc.name = toks[1].text;
      doc.version = to_int(toks[3], line_no);
      have_header = true;
      continue;
    }

    if (kw == "map") {
      expect_count(toks, 3, line_no, "map");
      if (have_map) throw ParseError(line_no, "duplicate map declaration");
      const int w = to_int(toks[1], line_no);
      const int h = to_int(toks[2], line_no);
      if (w <= 0 || h <= 0) throw ParseError(line_no, "map dimensions must be positive");
      doc.map = GameMap(w, h);
      lines.map = line_no;
      have_map = true;
    } else if (kw == "terrain") {
      if (toks.size() == 3 && toks[1].text == "default") {
        default_terrain = to_terrain(toks[2], line_no);
      } else if (toks.size() == 5 && toks[1].text == "hex") {
        hex_terrain.push_back({line_no, {{to_int(toks[2], line_no), to_int(toks[3], line_no)}, to_terrain(toks[4], line_no)}});
      } else {
        throw ParseError(line_no, "malformed 'terrain' directive");
      }
    } else if (kw == "unittype") {
      expect_count(toks, 14, line_no, "unittype");
      UnitTypeSpec t;
      t.name = toks[1].text;
      expect_keyword(toks, 2, "atk", line_no);
      t.attack = to_int(toks[3], line_no);
      expect_keyword(toks, 4, "def", line_no);
      t.defense = to_int(toks[5], line_no);
      expect_keyword(toks, 6, "range", line_no);
      t.range = to_int(toks[7], line_no);
      expect_keyword(toks, 8, "sight", line_no);
      t.sight = to_int(toks[9], line_no);
      expect_keyword(toks, 10, "mp", line_no);
      t.mp_per_tick = to_int(toks[11], line_no);
      expect_keyword(toks, 12, "maxstr", line_no);
      t.max_strength = to_int(toks[13], line_no);
      doc.unit_types.push_back(std::move(t));
      lines.types.push_back(line_no);
    } else if (kw == "side") {
      expect_count(toks, 2, line_no, "side");
      current_side = to_side(toks[1], line_no);
    } else if (kw == "unit") {
      expect_count(toks, 9, line_no, "unit");
      if (!current_side) throw ParseError(line_no, "'unit' before any 'side' directive");
      ForceEntry f;
      f.id = toks[1].text;
      expect_keyword(toks, 2, "type", line_no);
      f.type_name = toks[3].text;
      expect_keyword(toks, 4, "at", line_no);
      f.pos = {to_int(toks[5], line_no), to_int(toks[6], line_no)};
      expect_keyword(toks, 7, "strength", line_no);
      f.strength = to_int(toks[8], line_no);
      const int s = side_index(*current_side);
      doc.forces[s].push_back(std::move(f));
      lines.forces[s].push_back(line_no);
    } else if (kw == "objective") {
      expect_count(toks, 7, line_no, "objective");
      Objective o;
      o.side = to_side(toks[1], line_no);
      expect_keyword(toks, 2, "at", line_no);
      o.pos = {to_int(toks[3], line_no), to_int(toks[4], line_no)};
      expect_keyword(toks, 5, "weight", line_no);
      o.weight = to_real(toks[6], line_no);
      doc.objectives.push_back(o);
      lines.objectives.push_back(line_no);
    } else if (kw == "victory") {
      expect_count(toks, 10, line_no, "victory");
      const Side s = to_side(toks[1], line_no);
      VictoryWeights v;
      expect_keyword(toks, 2, "hold", line_no);
      v.hold = to_real(toks[3], line_no);
      expect_keyword(toks, 4, "inflicted", line_no);
      v.inflicted = to_real(toks[5], line_no);
      expect_keyword(toks, 6, "suffered", line_no);
      v.suffered = to_real(toks[7], line_no);
      expect_keyword(toks, 8, "moved", line_no);
      v.moved = to_real(toks[9], line_no);
      doc.victory[side_index(s)] = v;
    } else if (kw == "ticks_per_command") {
      expect_count(toks, 2, line_no, "ticks_per_command");
      doc.ticks_per_command = to_int(toks[1], line_no);
      lines.ticks = line_no;
    } else if (kw == "max_ticks") {
      expect_count(toks, 2, line_no, "max_ticks");
      doc.max_ticks = to_int(toks[1], line_no);
      lines.ticks = line_no;
    } else if (kw == "flag") {
      expect_count(toks, 2, line_no, "flag");
      if (toks[1].text != "deterministic_combat") throw ParseError(line_no, "unknown flag '" + toks[1].text + "'");
      doc.deterministic_combat = true;
    } else if (kw == "scenario") {
      throw ParseError(line_no, "duplicate scenario header");
    } else {
      throw ParseError(line_no, "unknown directive '" + kw + "'");
    }
  }

  if (!have_header) throw ParseError(0, "missing scenario header");
  if (!have_map) throw ParseError(0, "missing map declaration");
  if (default_terrain) {
    for (int i = 0; i < doc.map.cell_count(); ++i) doc.map.set_terrain(doc.map.coord(i), *default_terrain);
  }
  for (const auto& [ln, entry] : hex_terrain) {
    if (!doc.map.in_bounds(entry.first)) throw ParseError(ln, "terrain hex " + hex_str(entry.first) + " out of bounds");
    doc.map.set_terrain(entry.first, entry.second);
  }
  validate_core(doc, &lines);
  return doc;
}

ScenarioDoc load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioDoc& doc) {
  std::ostringstream out;
  out << "scenario \"" << doc.name << "\" version " << doc.version << "\n";
  out << "map " << doc.map.width() << " " << doc.map.height() << "\n";

  std::array<int, 5> counts{};
  for (int i = 0; i < doc.map.cell_count(); ++i) ++counts[static_cast<int>(doc.map.terrain(doc.map.coord(i)))];
  const auto fill = static_cast<Terrain>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  out << "terrain default " << terrain_name(fill) << "\n";
  for (int i = 0; i < doc.map.cell_count(); ++i) {
    const HexCoord h = doc.map.coord(i);
    const Terrain t = doc.map.terrain(h);
    if (t != fill) out << "terrain hex " << h.q << " " << h.r << " " << terrain_name(t) << "\n";
  }
  for (const auto& t : doc.unit_types) {
    out << "unittype " << t.name << " atk " << t.attack << " def " << t.defense << " range " << t.range << " sight "
        << t.sight << " mp " << t.mp_per_tick << " maxstr " << t.max_strength << "\n";
  }
  out << "ticks_per_command " << doc.ticks_per_command << "\n";
  out << "max_ticks " << doc.max_ticks << "\n";
  if (doc.deterministic_combat) out << "flag deterministic_combat\n";
  for (Side s : {Side::Blue, Side::Red}) {
    const auto& v = doc.victory[side_index(s)];
    out << "victory " << side_name(s) << " hold " << format_real(v.hold) << " inflicted " << format_real(v.inflicted)
        << " suffered " << format_real(v.suffered) << " moved " << format_real(v.moved) << "\n";
  }
  for (const auto& o : doc.objectives) {
    out << "objective " << side_name(o.side) << " at " << o.pos.q << " " << o.pos.r << " weight " << format_real(o.weight)
        << "\n";
  }
  for (Side s : {Side::Blue, Side::Red}) {
    const auto& forces = doc.forces[side_index(s)];
    if (forces.empty()) continue;
    out << "side " << side_name(s) << "\n";
    for (const auto& f : forces) {
      out << "unit " << f.id << " type " << f.type_name << " at " << f.pos.q << " " << f.pos.r << " strength " << f.strength
          << "\n";
    }
  }
  return out.str();
}

ScenarioDoc generate_variant(const ScenarioDoc& doc, const Perturbation& perturbation, std::uint64_t seed) {
  validate_scenario(doc);
  ScenarioDoc out = doc;
  SplitMix64 rng(mix_seed(seed));

  switch (perturbation.kind) {
    case Perturbation::Kind::JitterPositions: {
      if (perturbation.radius < 0) throw ParseError(0, "jitter radius must be >= 0");
      const int rad = perturbation.radius;
      std::vector<HexCoord> disc;
      for (int dq = -rad; dq <= rad; ++dq) {
        for (int dr = std::max(-rad, -dq - rad); dr <= std::min(rad, -dq + rad); ++dr) disc.push_back({dq, dr});
      }
      std::set<HexCoord> occupied;
      for (const auto& side : out.forces) {
        for (const auto& f : side) occupied.insert(f.pos);
      }
      for (auto& side : out.forces) {
        for (auto& f : side) {
          occupied.erase(f.pos);
          bool placed = false;
          for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
            const HexCoord d = disc[rng.below(disc.size())];
            const HexCoord cand{f.pos.q + d.q, f.pos.r + d.r};
            if (out.map.passable(cand) && !occupied.contains(cand)) {
              f.pos = cand;
              placed = true;
            }
          }
          if (!placed) throw ParseError(0, "jitter could not place unit '" + f.id + "' after 100 draws");
          occupied.insert(f.pos);
        }
      }
      break;
    }
    case Perturbation::Kind::ScaleStrength: {
      if (!(perturbation.factor > 0.0) || !std::isfinite(perturbation.factor)) {
        throw ParseError(0, "strength scale factor must be positive");
      }
      for (auto& side : out.forces) {
        for (auto& f : side) {
          const int max_str = out.find_type(f.type_name)->max_strength;
          const long scaled = std::lround(f.strength * perturbation.factor);
          f.strength = static_cast<int>(std::clamp<long>(scaled, 1, max_str));
        }
      }
      break;
    }
    case Perturbation::Kind::SwapObjective: {
      if (perturbation.objective_index < 0 || perturbation.objective_index >= static_cast<int>(out.objectives.size())) {
        throw ParseError(0, "objective index out of range");
      }
      out.objectives[perturbation.objective_index].pos = perturbation.hex;
      break;
    }
  }
  validate_scenario(out);
  return out;
}

std::optional<int> Rules::find_unit(std::string_view id) const {
  auto it = std::lower_bound(roster.begin(), roster.end(), id,
                             [](const RosterEntry& e, std::string_view key) { return e.id < key; });
  if (it == roster.end() || it->id != id) return std::nullopt;
  return static_cast<int>(it - roster.begin());
}

int Rules::unit_index(std::string_view id) const {
  auto idx = find_unit(id);
  if (!idx) throw RuleError("unknown unit id '" + std::string(id) + "'");
  return *idx;
}

std::shared_ptr<const Rules> compile_rules(const ScenarioDoc& doc) {
  std::map<HexCoord, std::string> occupied;
  for (const auto& side : doc.forces) {
    for (const auto& f : side) {
      if (!doc.map.passable(f.pos)) throw RuleError("unit '" + f.id + "' placed on impassable terrain at " + hex_str(f.pos));
      auto [it, fresh] = occupied.emplace(f.pos, f.id);
      if (!fresh) throw RuleError("units '" + it->second + "' and '" + f.id + "' overlap at " + hex_str(f.pos));
    }
  }
  validate_scenario(doc);

  auto rules = std::make_shared<Rules>();
  rules->doc = doc;
  for (Side s : {Side::Blue, Side::Red}) {
    for (const auto& f : doc.forces[side_index(s)]) {
      const int type = static_cast<int>(doc.find_type(f.type_name) - doc.unit_types.data());
      rules->roster.push_back({f.id, s, type, f.pos, f.strength});
    }
  }
  std::sort(rules->roster.begin(), rules->roster.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (int i = 0; i < static_cast<int>(rules->roster.size()); ++i) {
    const auto& e = rules->roster[i];
    rules->side_roster[side_index(e.side)].push_back(i);
    rules->initial_strength[side_index(e.side)] += e.start_strength;
  }
  return rules;
}

}  // namespace wargame
