#include <string>

#include "doctest.h"

#include "delplan/error.hpp"
#include "delplan/planner.hpp"
#include "delplan/protocol.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace delplan;
using namespace delplan::testing;

namespace {

GoalFormula goal(TemporalHead head, Formula body) { return {head, std::move(body)}; }

State root_state(const Dfa& d) {
  for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
    if (d.next(d.initial(), a) != kNoState) return d.next(d.initial(), a);
  }
  return kNoState;
}

std::vector<std::pair<Letter, State>> children(const Dfa& d, State q) {
  std::vector<std::pair<Letter, State>> out;
  for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
    if (d.next(q, a) != kNoState) out.emplace_back(a, d.next(q, a));
  }
  return out;
}

}  // namespace

TEST_CASE("EF K[a] p on M0 and E0 follows the shortest plan") {
  RegularRepresentation rep = build_representation(m0(), e0());
  SatCompiler sat(rep);
  auto ef = synthesize_protocol(rep, sat, 0, goal(TemporalHead::EF, m0_formula("K[a] p")));
  REQUIRE(ef.has_value());
  CHECK(protocol_words(*ef, 5) == std::vector<Word>{{0}, {0, 2}});
  CHECK(check_protocol(*ef, goal(TemporalHead::EF, m0_formula("K[a] p")), sat));
  CHECK(protocol_json(*ef, rep.sigma, 5) ==
        "{\n  \"depth\": 5,\n  \"words\": [\n    \"w1\",\n    \"w1 e1\"\n  ]\n}\n");

  // Deleting the witness branch leaves only the root, where K[a] p fails.
  ProtocolAutomaton cut = *ef;
  State r = root_state(cut.dfa);
  cut.dfa.set_transition(r, 2, kNoState);
  CHECK_FALSE(check_protocol(cut, goal(TemporalHead::EF, m0_formula("K[a] p")), sat));
}

TEST_CASE("degenerate heads") {
  RegularRepresentation rep = build_representation(m0(), e0());
  SatCompiler sat(rep);
  CHECK_FALSE(synthesize_protocol(rep, sat, 0, goal(TemporalHead::AG, Formula::bottom())).has_value());
  CHECK_FALSE(synthesize_protocol(rep, sat, 0, goal(TemporalHead::AG, m0_formula("K[a] p"))).has_value());
  for (int w = 0; w < 2; ++w) {
    for (const char* text : {"p", "~p", "K[a] p", "~K[a] p"}) {
      Formula f = m0_formula(text);
      auto now = synthesize_protocol(rep, sat, w, goal(TemporalHead::Now, f));
      CHECK(now.has_value() == check(m0(), w, f));
      if (now) {
        CHECK(protocol_words(*now, 3) == std::vector<Word>{{w}});
        CHECK(check_protocol(*now, goal(TemporalHead::Now, f), sat));
      }
    }
  }
  CHECK(default_seriality(TemporalHead::AG));
  CHECK(default_seriality(TemporalHead::EG));
  CHECK_FALSE(default_seriality(TemporalHead::Now));
  CHECK_FALSE(default_seriality(TemporalHead::EF));
  CHECK_FALSE(default_seriality(TemporalHead::AF));
}

TEST_CASE("seriality flag") {
  RegularRepresentation rep = build_representation(m0(), e0());
  SatCompiler sat(rep);
  // From w2, p holds only after e1; AG p fails at the root either way.
  CHECK_FALSE(synthesize_protocol(rep, sat, 1, goal(TemporalHead::AG, m0_formula("p"))).has_value());
  auto ag = synthesize_protocol(rep, sat, 0, goal(TemporalHead::AG, m0_formula("p")));
  REQUIRE(ag.has_value());
  for (State q = 0; static_cast<std::size_t>(q) < ag->dfa.state_count(); ++q) {
    if (q != ag->dfa.initial()) CHECK_FALSE(children(ag->dfa, q).empty());
  }
  auto loose = synthesize_protocol(rep, sat, 0, goal(TemporalHead::AG, m0_formula("p")), {.serial = false});
  REQUIRE(loose.has_value());
  CHECK(check_protocol(*loose, goal(TemporalHead::AG, m0_formula("p")), sat));

  auto ef_serial = synthesize_protocol(rep, sat, 0, goal(TemporalHead::EF, m0_formula("K[a] p")), {.serial = true});
  REQUIRE(ef_serial.has_value());
  for (State q = 0; static_cast<std::size_t>(q) < ef_serial->dfa.state_count(); ++q) {
    if (q != ef_serial->dfa.initial()) CHECK_FALSE(children(ef_serial->dfa, q).empty());
  }
  CHECK(check_protocol(*ef_serial, goal(TemporalHead::EF, m0_formula("K[a] p")), sat));
}

TEST_CASE("validation of protocol automata") {
  RegularRepresentation rep = build_representation(m0(), e0());
  Dfa bad(rep.sigma.size());
  State r = bad.add_state(true);
  bad.set_transition(0, 0, r);
  State x = bad.add_state(true);
  bad.set_transition(r, 3, x);
  CHECK_NOTHROW(validate_protocol({bad}, rep));
  Dfa outside = bad;
  State y = outside.add_state(true);
  outside.set_transition(0, 0, kNoState);
  outside.set_transition(0, 1, r);  // w2 e2 is not a history
  (void)y;
  CHECK_THROWS_AS(validate_protocol({outside}, rep), ValidationError);
  Dfa gap = bad;
  gap.set_accepting(r, false);
  CHECK_THROWS_AS(validate_protocol({gap}, rep), ValidationError);
  Dfa two_roots = bad;
  two_roots.set_transition(0, 1, r);
  CHECK_THROWS_AS(validate_protocol({two_roots}, rep), ValidationError);
}

TEST_CASE("synthesized protocols on random instances") {
  Rng rng(61);
  const TemporalHead heads[] = {TemporalHead::Now, TemporalHead::AG, TemporalHead::AF,
                                TemporalHead::EF, TemporalHead::EG};
  int produced = 0, mutated = 0;
  for (int i = 0; i < 100; ++i) {
    PlanningInstance inst = random_instance(rng, {}, 1);
    RegularRepresentation rep = build_representation(inst.model, inst.events);
    SatCompiler sat(rep);
    const int w = *inst.model.point;
    for (TemporalHead head : heads) {
      for (bool serial : {false, true}) {
        GoalFormula g = goal(head, inst.goal);
        auto p = synthesize_protocol(rep, sat, w, g, {.serial = serial});
        if (head == TemporalHead::EF && !serial) {
          PlanningInstance all = inst;
          all.allowed.clear();
          for (std::size_t e = 0; e < inst.events.event_count(); ++e) all.allowed.push_back(static_cast<int>(e));
          CHECK(p.has_value() == decide(all));
          // Weakening the target never breaks reachability.
          if (p) {
            Formula weaker = Formula::disjunction(inst.goal, random_formula(rng, inst.model.vocab, 1, 3));
            CHECK(synthesize_protocol(rep, sat, w, goal(head, weaker)).has_value());
          }
        }
        if (!p) continue;
        ++produced;
        CHECK_NOTHROW(validate_protocol(*p, rep));
        CHECK(check_protocol(*p, g, sat, 8));
        if (serial) {
          for (State q = 0; static_cast<std::size_t>(q) < p->dfa.state_count(); ++q) {
            if (q != p->dfa.initial()) CHECK_FALSE(children(p->dfa, q).empty());
          }
        }
        // Knowledge inside the goal is judged against the whole universe.
        SatCompiler fresh(rep);
        for (const auto& word : protocol_words(*p, 3)) {
          CHECK(fresh.holds_at(inst.goal, word) == sat.holds_at(inst.goal, word));
        }
        if ((head == TemporalHead::EF || head == TemporalHead::AF) && !serial &&
            !sat.holds_at(inst.goal, Word{w})) {
          ProtocolAutomaton cut = *p;
          State r = root_state(cut.dfa);
          for (auto [a, t] : children(cut.dfa, r)) cut.dfa.set_transition(r, a, kNoState);
          CHECK_FALSE(check_protocol(cut, g, sat, 8));
          ++mutated;
        }
      }
    }
  }
  CHECK(produced > 100);
  CHECK(mutated > 5);
}
