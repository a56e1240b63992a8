#pragma once

// Explicit-state reference implementations written directly from the
// semantics, sharing no code with the library beyond its data types.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "delplan/automata.hpp"
#include "delplan/del.hpp"
#include "delplan/formula.hpp"
#include "delplan/planner.hpp"

namespace delplan::testing {

/// Kripke model with each world labelled by the history that produced it.
struct Level {
  std::vector<std::vector<int>> histories;  // world index, then events
  std::vector<PropSet> valuation;
  std::vector<std::vector<std::vector<bool>>> rel;  // [agent][x][y]
};

bool naive_holds(const Level& lvl, const Vocabulary& vocab, int world, const Formula& f);

Level initial_level(const EpistemicModel& m);
Level naive_product(const Level& lvl, const EventModel& ev);

/// Levels 0..depth of the generated forest.
std::vector<Level> naive_forest(const EpistemicModel& m, const EventModel& ev, std::size_t depth);

/// Index of the history in its level, if it exists.
std::optional<int> find_history(const Level& lvl, const std::vector<int>& history);

/// Letter word w e1 .. en of a history (worlds first, then events).
Word to_word(const std::vector<int>& history, std::size_t world_count);

/// All event sequences over the allowed events, of length <= max_len, whose
/// pointed product satisfies the goal; in (length, declaration) order.
std::vector<Word> brute_force_plans(const PlanningInstance& inst, std::size_t max_len);

/// Words of length <= max_len accepted by `d`, by brute enumeration.
std::vector<Word> brute_language(const Dfa& d, std::size_t max_len);

}  // namespace delplan::testing
