#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "wargame/engine.hpp"
#include "wargame/scenario.hpp"

namespace test {

inline std::string scenario_path(const std::string& name) { return std::string(WARGAME_SCENARIO_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline wargame::ScenarioDoc load(const std::string& name) { return wargame::load_scenario_file(scenario_path(name)); }

inline std::shared_ptr<const wargame::Rules> rules(const std::string& name) { return wargame::compile_rules(load(name)); }

// Minimal one-type document on an all-clear map, filled in by each test.
inline wargame::ScenarioDoc blank_doc(int w, int h) {
  wargame::ScenarioDoc d;
  d.name = "blank";
  d.map = wargame::GameMap(w, h);
  d.unit_types.push_back({"inf", 5, 5, 1, 4, 1, 6});
  d.victory[0] = d.victory[1] = {1.0, 1.0, 0.0, 0.0};
  d.ticks_per_command = 2;
  d.max_ticks = 40;
  return d;
}

inline void add_unit(wargame::ScenarioDoc& d, wargame::Side side, const std::string& id, wargame::HexCoord at,
                     int strength = 6, const std::string& type = "inf") {
  d.forces[wargame::side_index(side)].push_back({id, type, at, strength});
}

}  // namespace test
