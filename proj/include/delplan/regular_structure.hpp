#pragma once

// Finite-automata presentation of the forest of histories generated by an
// epistemic model and a propositional event model: a domain automaton, one
// acceptor per proposition and one synchronous transducer per agent.
//
// Letters: world w is letter w, event e is letter |W| + e.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "delplan/automata.hpp"
#include "delplan/del.hpp"

namespace delplan {

/// Domain acceptor plus the valuation tracked by each state. State 0 is the
/// initial state; every other state is accepting and carries a valuation.
struct DomainAutomaton {
  Vocabulary vocab;
  Dfa dfa;
  std::vector<PropSet> state_valuation;  // entry 0 (initial state) is unused
};

/// Letters of the history alphabet for a model pair.
Alphabet history_alphabet(const EpistemicModel& m, const EventModel& ev);
Word history_word(const History& h, std::size_t world_count);
/// nullopt unless the word is a world letter followed by event letters.
std::optional<History> word_history(const Word& w, std::size_t world_count);

/// Throws ValidationError for non-propositional event models.
DomainAutomaton build_domain_automaton(const EpistemicModel& m, const EventModel& ev);

/// Same transitions as the domain; accepts the states whose valuation holds p.
Dfa build_valuation_automaton(const std::string& p, const DomainAutomaton& domain);

/// One-state transducer pairing i-related worlds and i-related events.
Transducer one_state_transducer(const std::string& agent, const EpistemicModel& m,
                                const EventModel& ev);

/// Identity over the domain composed around the one-state transducer, trimmed.
Transducer build_relation_transducer(const std::string& agent, const EpistemicModel& m,
                                     const EventModel& ev, const DomainAutomaton& domain);

struct RegularRepresentation {
  Vocabulary vocab;
  Alphabet sigma;
  std::size_t world_count = 0;
  std::size_t event_count = 0;
  DomainAutomaton domain;
  std::vector<Dfa> valuation;          // per proposition, vocabulary order
  std::vector<Transducer> relations;   // per agent, vocabulary order
  std::vector<std::size_t> one_state_sizes;  // |T_i| per agent
  std::size_t identity_size = 0;             // |T_D|

  Letter world_letter(int w) const { return w; }
  Letter event_letter(int e) const { return static_cast<Letter>(world_count) + e; }
  bool is_world_letter(Letter a) const { return a >= 0 && static_cast<std::size_t>(a) < world_count; }
  Word word(const History& h) const { return history_word(h, world_count); }

  /// Transition counts: domain + valuation acceptors + relation transducers.
  std::size_t size() const;
};

RegularRepresentation build_representation(const EpistemicModel& m, const EventModel& ev);

/// First disagreement with the explicit iterated products, if any.
struct VerifyReport {
  bool ok = true;
  std::size_t level = 0;
  std::string detail;  // "ok" or a description naming the counterexample
};

/// Compares domain, valuations and relations level by level up to `depth`
/// against iterate(m, ev, n).
VerifyReport verify_against_oracle(const RegularRepresentation& rep, const EpistemicModel& m,
                                   const EventModel& ev, std::size_t depth,
                                   const IterateLimits& limits = {});

/// Human-readable size table.
std::string size_report(const RegularRepresentation& rep);

/// One digraph per automaton, keyed by a file stem ("domain", "val_p", "rel_a").
std::vector<std::pair<std::string, std::string>> dot_exports(const RegularRepresentation& rep);

}  // namespace delplan
