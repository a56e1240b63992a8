#pragma once

// Protocol synthesis for goals NOW/AG/AF/EF/EG over an epistemic state
// formula. The state formula is compiled against the whole universe of
// histories; the temporal head is then solved by fixpoints on the product of
// the domain automaton with that compiled acceptor.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "delplan/automata.hpp"
#include "delplan/formula.hpp"
#include "delplan/regular_structure.hpp"
#include "delplan/sat_compiler.hpp"

namespace delplan {

/// Finite graph of history classes reachable from one initial world, by event
/// letters. Node 0 is the class of the one-letter history.
struct ArenaGraph {
  Dfa graph;                 // over the history alphabet; only event letters used
  std::vector<bool> marked;  // the state formula holds at the node's histories
};

ArenaGraph build_arena(const RegularRepresentation& rep, SatCompiler& compiler, int initial_world,
                       const Formula& body);

/// A prefix-closed set of histories rooted at one world. Every state but the
/// initial one is accepting.
struct ProtocolAutomaton {
  Dfa dfa;
};

struct ProtocolOptions {
  /// Require every protocol node to have a child. Defaults: on for AG and EG,
  /// off otherwise.
  std::optional<bool> serial;
};

bool default_seriality(TemporalHead head);

/// nullopt when no protocol rooted at `initial_world` satisfies the goal.
std::optional<ProtocolAutomaton> synthesize_protocol(const RegularRepresentation& rep,
                                                     SatCompiler& compiler, int initial_world,
                                                     const GoalFormula& goal,
                                                     const ProtocolOptions& options = {});

/// Throws ValidationError unless the automaton is prefix-closed, rooted at a
/// single world and contained in the domain.
void validate_protocol(const ProtocolAutomaton& protocol, const RegularRepresentation& rep);

/// Independent check on the protocol tree truncated at `depth` events.
/// No false positives for AG/EG within the horizon; exact for EF/AF when the
/// goal is reached within it.
bool check_protocol(const ProtocolAutomaton& protocol, const GoalFormula& goal,
                    SatCompiler& compiler, std::size_t depth = 5);

/// Protocol histories with at most `depth` events, shortest first.
std::vector<Word> protocol_words(const ProtocolAutomaton& protocol, std::size_t depth);

/// JSON word list up to `depth` events.
std::string protocol_json(const ProtocolAutomaton& protocol, const Alphabet& sigma,
                          std::size_t depth);

}  // namespace delplan
