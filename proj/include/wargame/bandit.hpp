#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "wargame/rng.hpp"

namespace wargame {

struct ArmStat {
  std::uint64_t count = 0;
  double mean = 0.0;

  void add(double reward) { mean += (reward - mean) / static_cast<double>(++count); }
};

struct NaiveSamplerParams {
  double epsilon = 0.4;        // probability of exploring a new global arm
  double epsilon_local = 0.3;  // per-unit exploration while exploring
};

// Naive sampling for a combinatorial bandit: a global arm is one local arm per
// unit, and local statistics assume rewards add up across units.
class NaiveSampler {
 public:
  NaiveSampler(std::vector<int> arms_per_unit, NaiveSamplerParams params, std::uint64_t seed);

  std::vector<int> next();
  void update(const std::vector<int>& arm, double reward);
  // Most sampled global arm; ties go to the higher mean.
  std::vector<int> best() const;

  const std::map<std::vector<int>, ArmStat>& global() const { return global_; }
  const std::vector<std::vector<ArmStat>>& local() const { return local_; }
  std::uint64_t evaluations() const { return evaluations_; }

 private:
  std::vector<int> explore();

  std::vector<int> arms_;
  NaiveSamplerParams params_;
  SplitMix64 rng_;
  std::vector<std::vector<ArmStat>> local_;
  std::map<std::vector<int>, ArmStat> global_;
  std::uint64_t evaluations_ = 0;
};

}  // namespace wargame
