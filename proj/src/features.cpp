#include "wargame/features.hpp"

#include <algorithm>
#include <limits>

namespace wargame {

double mean_distance_to_objective(const Rules& rules, Side side, const std::vector<Unit>& units) {
  const auto& objectives = rules.doc.objectives;
  const bool has_own = std::ranges::any_of(objectives, [side](const Objective& o) { return o.side == side; });
  double total = 0.0;
  int counted = 0;
  for (const Unit& u : units) {
    if (u.side != side) continue;
    int best = std::numeric_limits<int>::max();
    for (const Objective& o : objectives) {
      if (has_own && o.side != side) continue;
      best = std::min(best, hex_distance(u.pos, o.pos));
    }
    if (best == std::numeric_limits<int>::max()) continue;
    total += best;
    ++counted;
  }
  return counted == 0 ? 0.0 : total / counted;
}

FeatureVector extract_features(const Observation& obs) {
  FeatureVector f;
  double own = 0.0;
  for (const Unit& u : obs.own_units) own += u.strength;
  double known_enemy = 0.0;
  double visible = 0.0;
  for (const Contact& c : obs.contacts) {
    known_enemy += c.last_seen_strength;
    if (c.staleness == 0) visible += 1.0;
  }
  double held = 0.0;
  for (const Objective& o : obs.rules->doc.objectives) {
    if (o.side != obs.side) continue;
    for (const Unit& u : obs.own_units) {
      if (u.pos == o.pos) {
        held += 1.0;
        break;
      }
    }
  }
  f.values[FeatureVector::OwnStrengthTotal] = own;
  f.values[FeatureVector::KnownEnemyStrength] = known_enemy;
  f.values[FeatureVector::ObjectivesHeldCount] = held;
  f.values[FeatureVector::MeanDistanceToNearestObjective] = mean_distance_to_objective(*obs.rules, obs.side, obs.own_units);
  f.values[FeatureVector::VisibleEnemyCount] = visible;
  f.values[FeatureVector::TickFraction] =
      std::clamp(static_cast<double>(obs.tick) / obs.rules->doc.max_ticks, 0.0, 1.0);
  return f;
}

}  // namespace wargame
