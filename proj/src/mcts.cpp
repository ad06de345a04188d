#include <algorithm>
#include <cmath>
#include <limits>

#include "planning.hpp"
#include "wargame/agents.hpp"

namespace wargame {

using planning::advance_cycle;

namespace {

struct Child {
  ScriptAssignment assignment;
  GlobalAction action;  // orders the assignment produced when the child was created
  int node = -1;
};

struct Node {
  std::vector<Child> children;
  std::uint64_t visits = 0;
  double total = 0.0;
  int generated = 0;
  bool saturated = false;
};

// Open-loop UCT over command-phase decisions. Plies alternate between the
// searching side and its opponent; after the opponent's ply the state advances
// one command cycle. Children are script assignments.
class ScriptTree {
 public:
  ScriptTree(Side side, const AgentConfig& cfg, std::uint64_t seed) : side_(side), cfg_(cfg), rng_(mix_seed(seed)) {
    nodes_.emplace_back();
  }

  // One iteration on `s`, a private copy of the root (or of a determinization).
  void iterate(SearchContext& ctx, GameState& s) {
    const std::size_t node_mark = nodes_.size();
    std::vector<std::pair<int, std::size_t>> child_marks;
    try {
      run(ctx, s, child_marks);
    } catch (const BudgetExhausted&) {
      for (auto [n, size] : child_marks) nodes_[n].children.resize(size);
      nodes_.resize(node_mark);
      throw;
    }
    ++iterations_;
  }

  std::uint64_t iterations() const { return iterations_; }

  Decision result(const GameState& root, const Observation& root_obs) const {
    Decision d;
    d.record = planning::base_record(root, side_, cfg_);
    const Node& r = nodes_[0];
    int best = -1;
    for (std::size_t i = 0; i < r.children.size(); ++i) {
      const Node& c = nodes_[r.children[i].node];
      if (best < 0) {
        best = static_cast<int>(i);
        continue;
      }
      const Node& b = nodes_[r.children[best].node];
      const double cm = c.visits ? c.total / c.visits : -std::numeric_limits<double>::infinity();
      const double bm = b.visits ? b.total / b.visits : -std::numeric_limits<double>::infinity();
      if (c.visits > b.visits || (c.visits == b.visits && cm > bm)) best = static_cast<int>(i);
    }
    for (const Child& ch : r.children) {
      const Node& c = nodes_[ch.node];
      GlobalAction act = orders_from_assignment(root_obs, ch.assignment, cfg_.script_params);
      d.record.candidates.push_back({action_summary(*root.rules, act), std::move(act), c.visits,
                                     c.visits ? c.total / c.visits : 0.0});
    }
    d.record.chosen = best;
    d.record.iterations = iterations_;
    if (best >= 0) d.action = d.record.candidates[best].action;
    return d;
  }

 private:
  std::size_t allowed_children(const Node& n) const {
    const double cap = std::ceil(cfg_.pw_c * std::pow(static_cast<double>(n.visits), cfg_.pw_alpha));
    return static_cast<std::size_t>(std::max(1.0, cap));
  }

  ScriptAssignment candidate(Node& n, std::size_t units) {
    const int g = n.generated++;
    if (g == 0) return ScriptAssignment(units, ScriptId::AttackNearest);
    if (g == 1) return ScriptAssignment(units, ScriptId::AdvanceToObjective);
    return planning::random_assignment(units, cfg_.scripts, rng_);
  }

  // Adds a child whose orders differ from every existing child's in state `s`.
  int expand(int node, const GameState& s, Side mover, std::vector<std::pair<int, std::size_t>>& marks) {
    const Observation obs = observe_as_played(s, mover);
    const std::size_t units = planning::roster_size(s, mover);
    auto try_add = [&](ScriptAssignment a) {
      GlobalAction act = orders_from_assignment(obs, a, cfg_.script_params);
      const auto& kids = nodes_[node].children;
      if (std::ranges::any_of(kids, [&](const Child& c) { return c.action == act; })) return -1;
      marks.emplace_back(node, kids.size());
      const int id = static_cast<int>(nodes_.size());
      nodes_.emplace_back();
      nodes_[node].children.push_back({std::move(a), std::move(act), id});
      return static_cast<int>(nodes_[node].children.size()) - 1;
    };
    for (int attempt = 0; attempt < 20; ++attempt) {
      const int added = try_add(candidate(nodes_[node], units));
      if (added >= 0) return added;
    }
    // Small assignment spaces are scanned in full before giving up.
    const double space = std::pow(static_cast<double>(cfg_.scripts.size()), static_cast<double>(units));
    if (space <= 1024.0) {
      ScriptAssignment a(units, cfg_.scripts.front());
      std::vector<std::size_t> digit(units, 0);
      for (;;) {
        const int added = try_add(a);
        if (added >= 0) return added;
        std::size_t i = 0;
        while (i < units && ++digit[i] == cfg_.scripts.size()) {
          digit[i] = 0;
          a[i] = cfg_.scripts[0];
          ++i;
        }
        if (i == units) break;
        a[i] = cfg_.scripts[digit[i]];
      }
    }
    nodes_[node].saturated = true;
    return -1;
  }

  int select(const Node& n, bool maximize) const {
    const double span = vmax_ - vmin_;
    const double log_n = std::log(static_cast<double>(std::max<std::uint64_t>(1, n.visits)));
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const Node& c = nodes_[n.children[i].node];
      double score;
      if (c.visits == 0) {
        score = std::numeric_limits<double>::infinity();
      } else {
        double q = span > 0.0 ? (c.total / c.visits - vmin_) / span : 0.5;
        if (!maximize) q = 1.0 - q;
        score = q + cfg_.exploration * std::sqrt(log_n / c.visits);
      }
      if (score > best_score) {
        best_score = score;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  void run(SearchContext& ctx, GameState& s, std::vector<std::pair<int, std::size_t>>& marks) {
    const Side opp = opponent(side_);
    std::vector<int> path{0};
    int node = 0;
    int depth = 0;
    bool pending = false;
    while (!s.terminal && depth < cfg_.max_depth) {
      const Side mover = depth % 2 == 0 ? side_ : opp;
      int pick = -1;
      bool expanded = false;
      Node& n = nodes_[node];
      if (n.children.size() < allowed_children(n) && !n.saturated) {
        pick = expand(node, s, mover, marks);
        expanded = pick >= 0;
      }
      if (pick < 0) {
        if (nodes_[node].children.empty()) break;
        pick = select(nodes_[node], mover == side_);
      }
      const Child& ch = nodes_[node].children[pick];
      const GlobalAction act =
          expanded ? ch.action : orders_from_assignment(observe_as_played(s, mover), ch.assignment, cfg_.script_params);
      apply_orders(s, mover, act);
      node = ch.node;
      path.push_back(node);
      ++depth;
      if (mover == opp) {
        advance_cycle(ctx, s);
        pending = false;
      } else {
        pending = true;
      }
      if (expanded) break;
    }

    if (pending && !s.terminal) {
      apply_orders(s, opp, planning::opponent_orders(s, opp, cfg_, rng_));
      advance_cycle(ctx, s);
    }
    for (int c = 0; c < cfg_.rollout_depth && !s.terminal; ++c) {
      for (Side sd : {Side::Blue, Side::Red}) {
        const auto n = planning::roster_size(s, sd);
        apply_orders(s, sd, planning::orders_for(s, sd, planning::random_assignment(n, cfg_.scripts, rng_), {}));
      }
      advance_cycle(ctx, s);
    }
    const double value = state_value(s, side_, cfg_.weights);
    vmin_ = std::min(vmin_, value);
    vmax_ = std::max(vmax_, value);
    for (int id : path) {
      nodes_[id].visits += 1;
      nodes_[id].total += value;
    }
  }

  Side side_;
  const AgentConfig& cfg_;
  SplitMix64 rng_;
  std::vector<Node> nodes_;
  std::uint64_t iterations_ = 0;
  double vmin_ = std::numeric_limits<double>::infinity();
  double vmax_ = -std::numeric_limits<double>::infinity();
};

bool more_iterations(const AgentConfig& cfg, const ScriptTree& tree) {
  return !cfg.max_iterations || tree.iterations() < *cfg.max_iterations;
}

}  // namespace

Decision mcts_decide(const GameState& root, Side side, const SearchBudget& budget, const AgentConfig& config,
                     std::uint64_t seed) {
  planning::require_root(root);
  SearchContext ctx(budget);
  ScriptTree tree(side, config, seed);
  SplitMix64 chance(derive_seed(seed, 11));
  try {
    while (more_iterations(config, tree)) {
      GameState s = ctx.copy(root);
      chance.next();  // keeps the chance stream aligned with ismcts_decide
      s.rng = mix_seed(chance.next());
      tree.iterate(ctx, s);
    }
  } catch (const BudgetExhausted&) {
  }
  if (tree.iterations() == 0) throw SearchError("search budget exhausted before one iteration");
  Decision d = tree.result(root, observe_as_played(root, side));
  d.record.forward_calls = ctx.used();
  return d;
}

Decision ismcts_decide(const Observation& obs, const ParticleSet& particles, const SearchBudget& budget,
                       const AgentConfig& config, std::uint64_t seed) {
  if (particles.particles.empty()) throw SearchError("particle set is empty");
  SplitMix64 chance(derive_seed(seed, 11));
  const GameState base = state_from_observation(obs, derive_seed(seed, 12));
  planning::require_root(base);
  SearchContext ctx(budget);
  ScriptTree tree(obs.side, config, seed);
  try {
    while (more_iterations(config, tree)) {
      ctx.charge();
      GameState s = sample_determinization(particles, base, chance.next());
      s.record_chance = false;
      s.rng = mix_seed(chance.next());
      tree.iterate(ctx, s);
    }
  } catch (const BudgetExhausted&) {
  }
  if (tree.iterations() == 0) throw SearchError("search budget exhausted before one iteration");
  Decision d = tree.result(base, obs);
  d.record.forward_calls = ctx.used();
  return d;
}

}  // namespace wargame
