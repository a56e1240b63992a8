#pragma once

// The two-world model M0 (p true at w1 only, agent a cannot tell the worlds
// apart) and the event model E0 (e1 publicly sets p, e2 requires p).

#include "delplan/del.hpp"
#include "delplan/formula.hpp"
#include "delplan/planner.hpp"

namespace delplan::testing {

inline Vocabulary m0_vocab() { return Vocabulary({"a"}, {"p"}); }

inline EpistemicModel m0() {
  EpistemicModel m;
  m.vocab = m0_vocab();
  m.worlds = {"w1", "w2"};
  m.valuation = {1, 0};
  m.relations = {make_relation(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}})};
  return m;
}

inline EventModel e0() {
  EventModel ev;
  ev.vocab = m0_vocab();
  ev.events = {"e1", "e2"};
  ev.pre = {Formula::top(), Formula::atom("p")};
  ev.post = {{Formula::top()}, {Formula::atom("p")}};
  ev.relations = {make_relation(2, {{0, 0}, {1, 1}})};
  return ev;
}

inline Formula m0_formula(const std::string& text) {
  return parse_formula(text, {"p"}, {"a"});
}

inline PlanningInstance m0_instance(const std::string& goal, std::vector<int> allowed = {0, 1}) {
  PlanningInstance inst;
  inst.model = m0();
  inst.model.point = 0;
  inst.events = e0();
  inst.allowed = std::move(allowed);
  inst.goal = m0_formula(goal);
  return inst;
}

}  // namespace delplan::testing
