#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wargame/bandit.hpp"
#include "wargame/evaluation.hpp"

namespace wargame {

struct ParamDimension {
  std::string name;
  std::vector<double> values;
};

struct ParamSpace {
  std::vector<ParamDimension> dims;

  double size() const;  // product of dimension sizes
  std::vector<double> values(const std::vector<int>& point) const;
};

// Bandit statistics over the 1-tuples, 2-tuples and the full N-tuple of a
// discrete parameter space.
class NTupleModel {
 public:
  struct Options {
    bool one_tuples = true;
    bool two_tuples = true;
    bool n_tuple = true;
  };

  NTupleModel(std::size_t dims, Options options);

  void add(const std::vector<int>& point, double fitness);
  // Mean of the tuple means seen for this point (0 when none is seen).
  double mean(const std::vector<int>& point) const;
  // Mean of sqrt(log(N + 1) / (count + 1)) over the tuples.
  double exploration(const std::vector<int>& point) const;

  const std::vector<std::vector<std::size_t>>& tuples() const { return tuples_; }
  const ArmStat* stat(std::size_t tuple, const std::vector<int>& point) const;
  std::uint64_t evaluations() const { return evaluations_; }

 private:
  std::vector<int> key(std::size_t tuple, const std::vector<int>& point) const;

  std::vector<std::vector<std::size_t>> tuples_;
  std::vector<std::map<std::vector<int>, ArmStat>> tables_;
  std::uint64_t evaluations_ = 0;
};

struct NtbeaOptions {
  int neighbours = 50;
  double k = 2.0;
  NTupleModel::Options tuples;
};

struct NtbeaEvaluation {
  std::vector<int> point;
  double fitness = 0.0;
};

struct NtbeaResult {
  std::vector<int> best;
  std::vector<NtbeaEvaluation> log;
  NTupleModel model;
};

using FitnessFunction = std::function<double(const std::vector<int>&)>;

// Throws RuleError for an empty space or a budget below one evaluation.
NtbeaResult ntbea_optimize(const ParamSpace& space, const FitnessFunction& fitness, int budget, std::uint64_t seed,
                           const NtbeaOptions& options = {});

void write_tuning_log(const std::string& path, const ParamSpace& space, const std::vector<NtbeaEvaluation>& log);

struct TuneResult {
  AgentConfig best;
  std::vector<int> best_point;
  NtbeaResult search;
};

AgentConfig apply_point(AgentConfig base, const ParamSpace& space, const std::vector<int>& point);

// Fitness is the mean outcome over games_per_eval matches against the
// opponent, the tuned agent alternating sides.
TuneResult tune_agent(const AgentConfig& base, const ParamSpace& space, std::shared_ptr<const Rules> rules,
                      const PlayerSpec& opponent, int games_per_eval, int budget, std::uint64_t seed,
                      const NtbeaOptions& options = {}, const MatchOptions& match = {});

ParamSpace default_tuning_space(AgentKind kind);

}  // namespace wargame
