#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wargame/agents.hpp"

namespace wargame {

struct GameResult;

std::string sha256_hex(std::string_view text);
std::string hash_hex(std::uint64_t h);  // 16 lowercase hex digits

struct ReplayHeader {
  int version = 1;
  std::string scenario_sha256;
  std::uint64_t seed = 0;
  std::string blue;
  std::string red;
  bool fog = true;
};

// Line-delimited JSON replay log; every record is flushed as written.
class ReplayWriter {
 public:
  ReplayWriter(const std::string& path, const ReplayHeader& header, std::shared_ptr<const Rules> rules);

  void orders(int tick, Side side, std::uint64_t state_hash, const GlobalAction& action);
  void chance(const ChanceEvent& event);
  // Writes every chance event of the state not yet written.
  void drain_chance(const GameState& state);
  // reason is a termination name or "forfeit".
  void terminal(const GameState& state, std::string_view reason);

 private:
  void write(const nlohmann::json& record);

  std::ofstream out_;
  std::shared_ptr<const Rules> rules_;
  std::size_t chance_written_ = 0;
};

nlohmann::json order_to_json(const Rules& rules, int unit, const UnitOrder& order);
// Throws ParseError for malformed records or unknown units.
std::pair<int, UnitOrder> order_from_json(const Rules& rules, const nlohmann::json& j);
nlohmann::json chance_to_json(const Rules& rules, const ChanceEvent& e);
ChanceEvent chance_from_json(const Rules& rules, const nlohmann::json& j);

struct ReplayLog {
  ReplayHeader header;
  std::vector<nlohmann::json> records;  // in file order, header excluded
};

// Throws ParseError on a corrupt file (line numbers are file lines).
ReplayLog read_replay(const std::string& path);

struct VerifyResult {
  bool ok = false;
  std::optional<int> mismatch_tick;
  std::string message;
  std::uint64_t final_hash = 0;
};

// Re-runs the recorded game with recorded chance outcomes and compares state
// hashes. Throws ReplayError when the header does not match the scenario text
// and ParseError when the file is corrupt.
VerifyResult replay_verify(const std::string& path, std::string_view scenario_text);

nlohmann::json decision_to_json(const DecisionRecord& record);

struct ExItSample {
  FeatureVector features;
  std::vector<double> policy;  // visit distribution over the decision's candidates
  double value = 0.5;          // acting side's final outcome
};

// One sample per decision record that has visited candidates, labelled with
// the outcome of the game it came from. Writes one JSON object per line when
// a path is given.
std::vector<ExItSample> export_exit_dataset(const std::vector<GameResult>& games,
                                            const std::optional<std::string>& path = std::nullopt);

struct AnomalyConfig {
  double z_threshold = 2.5;
  std::size_t min_cell_size = 10;
};

struct AnomalyFlag {
  std::size_t run = 0;  // index into the result list
  std::string metric;   // "vpMargin" or "earlyLoss"
  double value = 0.0;
};

// Throws RuleError when any (scenario, blue, red) cell has too few results.
std::vector<AnomalyFlag> detect_anomalies(const std::vector<GameResult>& results, const AnomalyConfig& config = {});

// One character per hex: '.' clear, '%' woods, '#' urban, '^' hill, '~' water;
// units as 'B'/'R', contacts as 'b'/'r'. Row r is indented r spaces.
std::string render_text(const Observation& obs);
std::string render_text(const GameState& state);  // omniscient view
std::string render_text(const GameState& state, Side side);

// Diagnostics verbosity from WARGAME_LOG (error, info, debug).
enum class LogLevel { Error, Info, Debug };
LogLevel log_level();
void log_message(LogLevel level, std::string_view message);

}  // namespace wargame
