#pragma once

// Propositional epistemic planning: the set of all event sequences, over an
// allowed subset of events, whose iterated pointed product satisfies a goal.
// The set is regular and is returned as an automaton over event letters.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "delplan/automata.hpp"
#include "delplan/del.hpp"
#include "delplan/formula.hpp"

namespace delplan {

struct PlanningInstance {
  EpistemicModel model;       // point is the initial world
  EventModel events;
  std::vector<int> allowed;   // event indices; the rest cannot be scheduled
  Formula goal = Formula::top();

  /// |M| + |E| + |E'| + |goal| + |AP|.
  std::size_t size() const;
};

/// Throws ValidationError for a missing point, unknown allowed events, or a
/// non-propositional event model.
void validate(const PlanningInstance& inst);

struct PlannerOptions {
  std::size_t max_states = kDefaultMaxStates;
};

/// Minimal automaton over event letters (letter e = event e) whose language
/// is the set of solution plans.
struct PlanAutomaton {
  Dfa dfa;
  Alphabet events;
  std::string instance_hash;  // FNV-1a of the canonical instance text
  std::size_t max_states = 0;
};

PlanAutomaton synthesize_plans(const PlanningInstance& inst, const PlannerOptions& options = {});

bool decide(const PlanAutomaton& plans);
bool decide(const PlanningInstance& inst, const PlannerOptions& options = {});

/// Shortest plan, ties broken by event declaration order.
std::optional<Word> shortest_plan(const PlanAutomaton& plans);
std::optional<Word> shortest_plan(const PlanningInstance& inst, const PlannerOptions& options = {});

struct PlanList {
  std::vector<Word> plans;  // sorted by (length, declaration order)
  bool truncated = false;   // some accepted plan was left out
};

PlanList enumerate_plans(const PlanAutomaton& plans, std::size_t max_len, std::size_t max_count);

/// Plan automaton as a JSON transition table.
std::string plan_automaton_json(const PlanAutomaton& plans);

/// Canonical, order-preserving text of an instance; the basis of instance_hash.
std::string canonical_text(const PlanningInstance& inst);

}  // namespace delplan
