#include "wargame/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "wargame/errors.hpp"

namespace wargame {

double ParamSpace::size() const {
  double n = 1.0;
  for (const auto& d : dims) n *= static_cast<double>(d.values.size());
  return n;
}

std::vector<double> ParamSpace::values(const std::vector<int>& point) const {
  std::vector<double> out;
  for (std::size_t i = 0; i < dims.size(); ++i) out.push_back(dims[i].values[point[i]]);
  return out;
}

NTupleModel::NTupleModel(std::size_t dims, Options options) {
  std::set<std::vector<std::size_t>> chosen;
  if (options.one_tuples) {
    for (std::size_t i = 0; i < dims; ++i) chosen.insert({i});
  }
  if (options.two_tuples) {
    for (std::size_t i = 0; i < dims; ++i) {
      for (std::size_t j = i + 1; j < dims; ++j) chosen.insert({i, j});
    }
  }
  if (options.n_tuple && dims > 0) {
    std::vector<std::size_t> all(dims);
    for (std::size_t i = 0; i < dims; ++i) all[i] = i;
    chosen.insert(all);
  }
  std::vector<std::vector<std::size_t>> ordered(chosen.begin(), chosen.end());
  std::ranges::stable_sort(ordered, {}, [](const auto& t) { return t.size(); });
  tuples_ = std::move(ordered);
  tables_.resize(tuples_.size());
}

std::vector<int> NTupleModel::key(std::size_t tuple, const std::vector<int>& point) const {
  std::vector<int> k;
  for (std::size_t d : tuples_[tuple]) k.push_back(point[d]);
  return k;
}

void NTupleModel::add(const std::vector<int>& point, double fitness) {
  ++evaluations_;
  for (std::size_t t = 0; t < tuples_.size(); ++t) tables_[t][key(t, point)].add(fitness);
}

const ArmStat* NTupleModel::stat(std::size_t tuple, const std::vector<int>& point) const {
  auto it = tables_[tuple].find(key(tuple, point));
  return it == tables_[tuple].end() ? nullptr : &it->second;
}

double NTupleModel::mean(const std::vector<int>& point) const {
  double sum = 0.0;
  int seen = 0;
  for (std::size_t t = 0; t < tuples_.size(); ++t) {
    if (const ArmStat* s = stat(t, point)) {
      sum += s->mean;
      ++seen;
    }
  }
  return seen ? sum / seen : 0.0;
}

double NTupleModel::exploration(const std::vector<int>& point) const {
  if (tuples_.empty()) return 0.0;
  const double log_n = std::log(static_cast<double>(evaluations_) + 1.0);
  double sum = 0.0;
  for (std::size_t t = 0; t < tuples_.size(); ++t) {
    const ArmStat* s = stat(t, point);
    sum += std::sqrt(log_n / (static_cast<double>(s ? s->count : 0) + 1.0));
  }
  return sum / static_cast<double>(tuples_.size());
}

NtbeaResult ntbea_optimize(const ParamSpace& space, const FitnessFunction& fitness, int budget, std::uint64_t seed,
                           const NtbeaOptions& options) {
  if (space.dims.empty() || std::ranges::any_of(space.dims, [](const auto& d) { return d.values.empty(); })) {
    throw RuleError("parameter space is empty");
  }
  if (budget < 1) throw RuleError("tuning budget must be at least one evaluation");
  SplitMix64 rng(mix_seed(seed));
  NtbeaResult result{{}, {}, NTupleModel(space.dims.size(), options.tuples)};
  std::vector<int> current(space.dims.size());
  for (std::size_t d = 0; d < current.size(); ++d) current[d] = rng.below_int(static_cast<int>(space.dims[d].values.size()));

  std::vector<std::size_t> mutable_dims;
  for (std::size_t d = 0; d < space.dims.size(); ++d) {
    if (space.dims[d].values.size() > 1) mutable_dims.push_back(d);
  }

  std::set<std::vector<int>> evaluated;
  for (int e = 0; e < budget; ++e) {
    const double f = fitness(current);
    result.log.push_back({current, f});
    result.model.add(current, f);
    evaluated.insert(current);
    if (mutable_dims.empty() || e + 1 == budget) break;

    std::vector<int> best;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < options.neighbours; ++i) {
      std::vector<int> n = current;
      const std::size_t d = mutable_dims[rng.below(mutable_dims.size())];
      const int size = static_cast<int>(space.dims[d].values.size());
      n[d] = (n[d] + 1 + rng.below_int(size - 1)) % size;
      const double score = result.model.mean(n) + options.k * result.model.exploration(n);
      if (score > best_score) {
        best_score = score;
        best = std::move(n);
      }
    }
    current = std::move(best);
  }

  double best_mean = -std::numeric_limits<double>::infinity();
  for (const auto& p : evaluated) {
    const double m = result.model.mean(p);
    if (m > best_mean) {
      best_mean = m;
      result.best = p;
    }
  }
  return result;
}

void write_tuning_log(const std::string& path, const ParamSpace& space, const std::vector<NtbeaEvaluation>& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open tuning log '" + path + "'");
  out << "evalIndex";
  for (const auto& d : space.dims) out << '\t' << d.name;
  out << "\tfitness\n";
  for (std::size_t i = 0; i < log.size(); ++i) {
    out << i;
    for (double v : space.values(log[i].point)) out << '\t' << v;
    out << '\t' << log[i].fitness << '\n';
  }
}

AgentConfig apply_point(AgentConfig base, const ParamSpace& space, const std::vector<int>& point) {
  for (std::size_t d = 0; d < space.dims.size(); ++d) set_agent_param(base, space.dims[d].name, space.dims[d].values[point[d]]);
  return base;
}

TuneResult tune_agent(const AgentConfig& base, const ParamSpace& space, std::shared_ptr<const Rules> rules,
                      const PlayerSpec& opponent, int games_per_eval, int budget, std::uint64_t seed,
                      const NtbeaOptions& options, const MatchOptions& match) {
  if (games_per_eval < 1) throw RuleError("games per evaluation must be at least 1");
  std::uint64_t evaluation = 0;
  auto fitness = [&](const std::vector<int>& point) {
    const AgentConfig cfg = apply_point(base, space, point);
    validate_config(cfg);
    double sum = 0.0;
    for (int g = 0; g < games_per_eval; ++g) {
      const std::uint64_t gs = derive_seed(derive_seed(seed, evaluation), g);
      if (g % 2 == 0) {
        sum += run_match(rules, player(cfg), opponent, gs, match).outcome(Side::Blue);
      } else {
        sum += run_match(rules, opponent, player(cfg), gs, match).outcome(Side::Red);
      }
    }
    ++evaluation;
    return sum / games_per_eval;
  };
  TuneResult out{{}, {}, ntbea_optimize(space, fitness, budget, seed, options)};
  out.best_point = out.search.best;
  out.best = apply_point(base, space, out.best_point);
  return out;
}

ParamSpace default_tuning_space(AgentKind kind) {
  switch (kind) {
    case AgentKind::Mcts:
    case AgentKind::Ismcts:
      return {{{"exploration", {0.5, 1.0, 1.4142135623730951, 2.0}},
               {"rollout_depth", {0, 1, 2, 3}},
               {"max_depth", {2, 4, 6}},
               {"w4", {0.0, 0.2, 0.5, 1.0}}}};
    case AgentKind::Rhea:
    case AgentKind::Mpc:
      return {{{"horizon", {1, 2, 3, 5}},
               {"population", {4, 6, 10}},
               {"mutation", {0.1, 0.3, 0.5}},
               {"crossover", {0.3, 0.5, 0.7}}}};
    case AgentKind::Cmab:
      return {{{"epsilon", {0.1, 0.25, 0.4, 0.6}},
               {"epsilon_local", {0.1, 0.3, 0.5}},
               {"rollout_depth", {1, 2, 3}}}};
    case AgentKind::Sss:
    case AgentKind::TwoStage:
      return {{{"rollout_depth", {1, 2, 3}}, {"w2", {0.25, 0.5, 1.0}}, {"w4", {0.0, 0.2, 0.5}}}};
    default:
      return {{{"aggression", {0.5, 1.0, 1.5, 2.0}}, {"scout_radius", {1, 2, 3}}}};
  }
}

}  // namespace wargame
