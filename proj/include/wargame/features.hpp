#pragma once

#include <array>
#include <string_view>

#include "wargame/interface.hpp"

namespace wargame {

// Feature set "wg-features-v1". Component order is fixed.
struct FeatureVector {
  static constexpr std::string_view kFeatureSetId = "wg-features-v1";
  static constexpr std::size_t kSize = 6;
  enum Index { OwnStrengthTotal, KnownEnemyStrength, ObjectivesHeldCount, MeanDistanceToNearestObjective,
               VisibleEnemyCount, TickFraction };

  std::array<double, kSize> values{};

  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const FeatureVector&) const = default;
};

FeatureVector extract_features(const Observation& obs);

// Mean over own units of the hex distance to the nearest own-side objective
// (any objective if the side has none); 0 without units or objectives.
double mean_distance_to_objective(const Rules& rules, Side side, const std::vector<Unit>& units);

}  // namespace wargame
