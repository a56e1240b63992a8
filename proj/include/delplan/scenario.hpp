#pragma once

// JSON scenario files: vocabulary, pointed epistemic model, event model,
// optional allowed events and optional goal.
//
//   {
//     "agents": ["a"], "ap": ["p"],
//     "model": {"worlds": [{"id": "w1", "val": ["p"]}, {"id": "w2", "val": []}],
//               "relations": {"a": [["w1", "w2"]]}, "point": "w1"},
//     "events": {"events": [{"id": "e1", "pre": "true", "post": {"p": "true"}}],
//                "relations": {"a": [["e1", "e1"]]}},
//     "allowed": ["e1"], "goal": "K[a] p"
//   }
//
// Missing relations are empty, a missing precondition is `true`, and a
// proposition without a postcondition keeps its value.

#include <optional>
#include <string>
#include <vector>

#include "delplan/del.hpp"
#include "delplan/planner.hpp"

namespace delplan {

struct Scenario {
  EpistemicModel model;
  EventModel events;
  std::optional<std::vector<std::string>> allowed;
  std::optional<std::string> goal;
};

/// Throws ValidationError with a JSON path ("$.model.worlds[1].id: ...").
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

/// Canonical JSON: sorted keys, two-space indent, declaration order inside
/// arrays, identity postconditions omitted.
std::string save_scenario(const Scenario& s);

/// Planning instance from the scenario; `goal` overrides the file's goal.
/// Throws ValidationError if neither provides one.
PlanningInstance planning_instance(const Scenario& s, const std::optional<std::string>& goal = {});

}  // namespace delplan
