#include "wargame/search_context.hpp"

#include <algorithm>

namespace wargame {

SearchContext::SearchContext(const SearchBudget& budget) : limit_(budget.max_forward_calls) {
  if (budget.max_millis) {
    deadline_ = std::chrono::steady_clock::now() + std::chrono::milliseconds(*budget.max_millis);
  }
}

bool SearchContext::can_afford(std::uint64_t n) const { return used_ + n <= limit_; }

bool SearchContext::out_of_time() const { return deadline_ && std::chrono::steady_clock::now() >= *deadline_; }

void SearchContext::charge(std::uint64_t n) {
  if (!can_afford(n) || out_of_time()) throw BudgetExhausted{};
  used_ += n;
}

GameState SearchContext::copy(const GameState& state) {
  charge();
  GameState out;
  out.tick = state.tick;
  out.rules = state.rules;
  out.units = state.units;
  out.score = state.score;
  out.rng = state.rng;
  out.contacts = state.contacts;
  out.terminal = state.terminal;
  out.fog = state.fog;
  out.chance_seq = state.chance_seq;
  out.record_chance = false;
  return out;
}

void SearchContext::step(GameState& state) {
  charge();
  wargame::step(state);
}

SearchContext SearchContext::slice(std::uint64_t calls) const {
  SearchContext child = *this;
  child.limit_ = used_ + std::min(calls, remaining());
  return child;
}

void SearchContext::absorb(const SearchContext& child) { used_ = std::max(used_, child.used_); }

}  // namespace wargame
