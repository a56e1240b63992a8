#pragma once

// Compiles epistemic formulas into automata accepting exactly the histories
// where the formula holds. Each knowledge operator costs one subset
// construction over the preimage of the agent's relation transducer.

#include <cstddef>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "delplan/automata.hpp"
#include "delplan/formula.hpp"
#include "delplan/regular_structure.hpp"

namespace delplan {

class SatCompiler {
 public:
  /// One memoized compilation result.
  struct Entry {
    Formula formula;                // normalized
    std::size_t depth = 0;          // knowledge nesting depth
    std::size_t raw_states = 0;     // largest automaton built before minimization
    Dfa dfa;                        // minimized, L(dfa) within the domain
  };

  explicit SatCompiler(const RegularRepresentation& rep, std::size_t max_states = kDefaultMaxStates);

  const RegularRepresentation& representation() const { return rep_; }

  /// Throws ValidationError for names outside the vocabulary and
  /// BudgetExceeded naming the knowledge level that blew up.
  const Dfa& compile(const Formula& f);

  /// Throws ValidationError when `h` is not a domain word.
  bool holds_at(const Formula& f, const Word& h);
  bool holds_at(const Formula& f, const History& h) { return holds_at(f, rep_.word(h)); }

  /// Entries in the order they were first computed.
  const std::deque<Entry>& entries() const { return entries_; }

 private:
  const Entry& compile_normalized(const Formula& f);

  const RegularRepresentation& rep_;
  std::size_t max_states_;
  Dfa domain_;  // minimized domain acceptor
  std::deque<Entry> entries_;  // stable references across insertions
  std::unordered_map<Formula, std::size_t> index_;
};

/// State counts produced at one knowledge nesting level.
struct BlowupLevel {
  std::size_t level = 0;
  std::size_t formulas = 0;        // distinct subformulas of that depth
  std::size_t raw_states = 0;      // largest count before minimization
  std::size_t minimized_states = 0;
};

/// One entry per level 0..nesting_depth(f).
std::vector<BlowupLevel> blowup_report(const Formula& f, SatCompiler& compiler);

/// Tab-separated rendering with a header line.
std::string format_blowup(const std::vector<BlowupLevel>& report);

}  // namespace delplan
