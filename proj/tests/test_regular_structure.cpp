#include <algorithm>
#include <set>

#include "doctest.h"

#include "delplan/error.hpp"
#include "delplan/regular_structure.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace delplan;
using namespace delplan::testing;

namespace {

// Letters for M0/E0: w1 = 0, w2 = 1, e1 = 2, e2 = 3.
constexpr Letter w1 = 0, w2 = 1, e1 = 2, e2 = 3;

}  // namespace

TEST_CASE("domain automaton of M0 and E0") {
  DomainAutomaton d = build_domain_automaton(m0(), e0());
  CHECK(d.dfa.state_count() == 3);
  CHECK(d.dfa.accepts(Word{w1, e2}));
  CHECK_FALSE(d.dfa.accepts(Word{w2, e2}));
  CHECK(d.dfa.accepts(Word{w2, e1, e2}));
  CHECK_FALSE(d.dfa.accepts(Word{}));
  CHECK_FALSE(d.dfa.accepts(Word{e1}));
  CHECK_FALSE(d.dfa.accepts(Word{w1, w2}));

  Dfa ap = build_valuation_automaton("p", d);
  CHECK(ap.state_count() == d.dfa.state_count());
  CHECK_FALSE(ap.accepts(Word{w2}));
  CHECK(ap.accepts(Word{w2, e1}));
  CHECK(ap.accepts(Word{w1}));
  CHECK_THROWS_AS(build_valuation_automaton("q", d), ValidationError);
}

TEST_CASE("relation transducer of M0 and E0") {
  RegularRepresentation rep = build_representation(m0(), e0());
  const Transducer& ta = rep.relations[0];
  CHECK(ta.accepts(Word{w1, e1}, Word{w2, e1}));
  CHECK_FALSE(ta.accepts(Word{w1, e2}, Word{w2, e2}));
  CHECK(ta.accepts(Word{w1, e2}, Word{w1, e2}));
  CHECK_FALSE(ta.accepts(Word{w1, e1}, Word{w1, e2}));
  CHECK(ta.transition_count() <= rep.identity_size * rep.identity_size * rep.one_state_sizes[0]);
  CHECK(rep.one_state_sizes[0] == 6);
  CHECK_THROWS_AS(build_relation_transducer("z", m0(), e0(), rep.domain), ValidationError);
}

TEST_CASE("degenerate inputs") {
  EpistemicModel m = m0();
  m.valuation = {0, 0};
  EventModel ev = e0();
  ev.post = {{Formula::atom("p")}, {Formula::atom("p")}};
  m.relations = {make_relation(2, {})};
  ev.relations = {make_relation(2, {})};
  RegularRepresentation rep = build_representation(m, ev);
  CHECK(is_empty(rep.valuation[0]));
  CHECK(rep.relations[0].transition_count() == 0);
  for (std::size_t len = 0; len <= 3; ++len) CHECK(accepted_pairs(rep.relations[0], len).empty());

  EventModel epistemic = e0();
  epistemic.pre[0] = m0_formula("K[a] p");
  CHECK_THROWS_AS(build_domain_automaton(m0(), epistemic), ValidationError);
}

TEST_CASE("verify against the explicit products") {
  RegularRepresentation rep = build_representation(m0(), e0());
  CHECK(verify_against_oracle(rep, m0(), e0(), 0).ok);
  VerifyReport report = verify_against_oracle(rep, m0(), e0(), 3);
  CHECK(report.ok);
  CHECK(report.detail == "ok");

  // Drop the transition that makes "w1 e2" a history.
  RegularRepresentation broken = rep;
  State q = broken.domain.dfa.run(Word{w1});
  broken.domain.dfa.set_transition(q, e2, kNoState);
  VerifyReport bad = verify_against_oracle(broken, m0(), e0(), 3);
  CHECK_FALSE(bad.ok);
  CHECK(bad.level == 1);
  CHECK(bad.detail.find("w1 e2") != std::string::npos);
}

TEST_CASE("languages match the naive forest level by level") {
  Rng rng(31);
  for (int i = 0; i < 60; ++i) {
    RandomPair pair = random_pair(rng);
    RegularRepresentation rep = build_representation(pair.model, pair.events);
    const std::size_t nw = pair.model.worlds.size();
    auto levels = naive_forest(pair.model, pair.events, 3);
    for (std::size_t n = 0; n <= 3; ++n) {
      std::set<Word> expected;
      for (const auto& h : levels[n].histories) expected.insert(to_word(h, nw));
      std::set<Word> got;
      for (const auto& w : accepted_words(rep.domain.dfa, n + 1)) got.insert(w);
      CHECK(got == expected);
      for (std::size_t x = 0; x < levels[n].histories.size(); ++x) {
        Word wx = to_word(levels[n].histories[x], nw);
        for (std::size_t p = 0; p < pair.model.vocab.ap().size(); ++p) {
          CHECK(rep.valuation[p].accepts(wx) == (((levels[n].valuation[x] >> p) & 1U) != 0));
        }
      }
      for (std::size_t a = 0; a < rep.relations.size(); ++a) {
        std::set<std::pair<Word, Word>> pairs;
        for (std::size_t x = 0; x < levels[n].histories.size(); ++x) {
          for (std::size_t y = 0; y < levels[n].histories.size(); ++y) {
            if (levels[n].rel[a][x][y]) {
              pairs.insert({to_word(levels[n].histories[x], nw), to_word(levels[n].histories[y], nw)});
            }
          }
        }
        auto got_pairs = accepted_pairs(rep.relations[a], n + 1);
        CHECK(std::set<std::pair<Word, Word>>(got_pairs.begin(), got_pairs.end()) == pairs);
      }
    }
    CHECK(rep.domain.dfa.state_count() <= (std::size_t{1} << pair.model.vocab.ap().size()) + 1);
  }
}

TEST_CASE("exports") {
  RegularRepresentation rep = build_representation(m0(), e0());
  auto dots = dot_exports(rep);
  REQUIRE(dots.size() == 3);
  CHECK(dots[0].first == "domain");
  CHECK(dots[1].first == "val_p");
  CHECK(dots[2].first == "rel_a");
  CHECK(size_report(rep) == size_report(build_representation(m0(), e0())));
  CHECK(size_report(rep).find("total\t" + std::to_string(rep.size())) != std::string::npos);
  CHECK(word_history(Word{w1, e1, e2}, 2)->events == std::vector<int>{0, 1});
  CHECK_FALSE(word_history(Word{e1}, 2).has_value());
  CHECK_FALSE(word_history(Word{w1, w2}, 2).has_value());
}
