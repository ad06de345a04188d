#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

#include "wargame/engine.hpp"

namespace wargame {

struct SearchBudget {
  std::uint64_t max_forward_calls = 1000;
  std::optional<std::uint64_t> max_millis;
};

// Thrown inside a search when the next forward-model call would exceed the
// budget. Agents catch it and answer with what they have.
struct BudgetExhausted {};

// Counts forward-model invocations (step and copy) made on behalf of one
// decision and enforces the budget before each call.
class SearchContext {
 public:
  explicit SearchContext(const SearchBudget& budget);

  GameState copy(const GameState& state);
  void step(GameState& state);
  // Charges n calls; throws BudgetExhausted if that would overrun.
  void charge(std::uint64_t n = 1);
  bool can_afford(std::uint64_t n) const;

  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }
  std::uint64_t remaining() const { return limit_ - used_; }
  bool out_of_time() const;

  // A nested context limited to `calls` of this one's remaining budget. Calls
  // made through it must be reported back with absorb().
  SearchContext slice(std::uint64_t calls) const;
  void absorb(const SearchContext& child);

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
};

}  // namespace wargame
