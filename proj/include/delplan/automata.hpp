#pragma once

// Finite automata and letter-synchronous transducers over a dense alphabet
// {0, ..., alphabet_size-1}. Transition functions are partial; a missing
// transition rejects. Every operation is a pure function of its arguments.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace delplan {

using Letter = int;
using State = int;
using Word = std::vector<Letter>;

inline constexpr State kNoState = -1;

/// Letter names for printing. Letter order is declaration order and drives
/// every lexicographic tie-break.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {}

  std::size_t size() const { return names_.size(); }
  const std::string& name(Letter a) const { return names_.at(static_cast<std::size_t>(a)); }
  const std::vector<std::string>& names() const { return names_; }
  /// Space-separated letter names; "" for the empty word.
  std::string render(std::span<const Letter> word) const;

 private:
  std::vector<std::string> names_;
};

/// Partial deterministic automaton stored as a dense state x letter table.
class Dfa {
 public:
  Dfa() = default;
  /// One non-accepting initial state and no transitions.
  explicit Dfa(std::size_t alphabet_size);

  std::size_t alphabet_size() const { return alphabet_size_; }
  std::size_t state_count() const { return accepting_.size(); }
  std::size_t transition_count() const;
  State initial() const { return initial_; }
  bool is_accepting(State q) const { return accepting_[static_cast<std::size_t>(q)]; }
  State next(State q, Letter a) const {
    return table_[static_cast<std::size_t>(q) * alphabet_size_ + static_cast<std::size_t>(a)];
  }

  State add_state(bool accepting = false);
  void set_initial(State q) { initial_ = q; }
  void set_accepting(State q, bool accepting) { accepting_[static_cast<std::size_t>(q)] = accepting; }
  void set_transition(State from, Letter a, State to);

  /// State reached from `from` on `word`, or kNoState.
  State run(std::span<const Letter> word, State from) const;
  State run(std::span<const Letter> word) const { return run(word, initial_); }
  bool accepts(std::span<const Letter> word) const;

 private:
  std::size_t alphabet_size_ = 0;
  State initial_ = 0;
  std::vector<bool> accepting_;
  std::vector<State> table_;
};

class Nfa {
 public:
  Nfa() = default;
  explicit Nfa(std::size_t alphabet_size) : alphabet_size_(alphabet_size) {}

  std::size_t alphabet_size() const { return alphabet_size_; }
  std::size_t state_count() const { return accepting_.size(); }
  std::size_t transition_count() const;
  const std::vector<State>& initial() const { return initial_; }
  bool is_accepting(State q) const { return accepting_[static_cast<std::size_t>(q)]; }
  /// Sorted successors of q on a.
  const std::vector<State>& next(State q, Letter a) const {
    return table_[static_cast<std::size_t>(q) * alphabet_size_ + static_cast<std::size_t>(a)];
  }

  State add_state(bool accepting = false);
  void add_initial(State q);
  void set_accepting(State q, bool accepting) { accepting_[static_cast<std::size_t>(q)] = accepting; }
  void add_transition(State from, Letter a, State to);

  bool accepts(std::span<const Letter> word) const;

 private:
  std::size_t alphabet_size_ = 0;
  std::vector<State> initial_;
  std::vector<bool> accepting_;
  std::vector<std::vector<State>> table_;
};

/// Two-tape automaton reading one letter from each tape per step, so it only
/// relates words of equal length.
class Transducer {
 public:
  struct Transition {
    State from;
    Letter in;
    Letter out;
    State to;
    friend auto operator<=>(const Transition&, const Transition&) = default;
  };

  Transducer() = default;
  explicit Transducer(std::size_t alphabet_size) : alphabet_size_(alphabet_size) {}

  std::size_t alphabet_size() const { return alphabet_size_; }
  std::size_t state_count() const { return accepting_.size(); }
  std::size_t transition_count() const { return transition_count_; }
  State initial() const { return initial_; }
  bool is_accepting(State q) const { return accepting_[static_cast<std::size_t>(q)]; }
  /// All transitions, sorted.
  std::vector<Transition> transitions() const;
  /// Transitions leaving `q`, sorted.
  const std::vector<Transition>& outgoing(State q) const { return out_[static_cast<std::size_t>(q)]; }

  State add_state(bool accepting = false);
  void set_initial(State q) { initial_ = q; }
  void set_accepting(State q, bool accepting) { accepting_[static_cast<std::size_t>(q)] = accepting; }
  /// Duplicate transitions are ignored.
  void add_transition(State from, Letter in, Letter out, State to);

  bool accepts(std::span<const Letter> in, std::span<const Letter> out) const;

 private:
  std::size_t alphabet_size_ = 0;
  State initial_ = 0;
  std::vector<bool> accepting_;
  std::vector<std::vector<Transition>> out_;
  std::size_t transition_count_ = 0;
};

inline constexpr std::size_t kDefaultMaxStates = 1'000'000;

Nfa to_nfa(const Dfa& d);

/// Subset construction over reachable subsets only. Throws BudgetExceeded
/// once more than `max_states` subsets are materialized.
Dfa determinize(const Nfa& n, std::size_t max_states = kDefaultMaxStates);

/// Adds a rejecting sink so that every transition is defined.
Dfa complete(const Dfa& d);

/// L(dom) \ L(d). Throws ValidationError on alphabet mismatch.
Dfa complement_within(const Dfa& d, const Dfa& dom);
Dfa intersect(const Dfa& a, const Dfa& b);
Dfa unite(const Dfa& a, const Dfa& b);

/// Keeps states that are reachable and co-accessible. An automaton with an
/// empty language becomes a single rejecting state.
Dfa trim(const Dfa& d);

/// Hopcroft partition refinement; the result is trimmed and partial.
Dfa minimize(const Dfa& d);

bool is_empty(const Dfa& d);

/// Work done by the last emptiness test, for complexity checks.
struct EmptinessStats {
  std::size_t states_visited = 0;
  std::size_t transitions_scanned = 0;
};
bool is_empty(const Dfa& d, EmptinessStats& stats);

/// Shortest accepted word; ties broken lexicographically on letter order.
std::optional<Word> shortest_accepted(const Dfa& d);

/// Accepted words of length exactly `length`, in lexicographic order.
std::vector<Word> accepted_words(const Dfa& d, std::size_t length);

/// L(a) = L(b).
bool equivalent(const Dfa& a, const Dfa& b);

/// Identity relation over L(d).
Transducer identity_transducer(const Dfa& d);

/// Relational composition: (u,w) such that (u,v) in t1 and (v,w) in t2.
/// Only product states reachable from the initial pair are built.
Transducer compose(const Transducer& t1, const Transducer& t2);

/// Removes states that are unreachable or cannot reach acceptance.
Transducer trim(const Transducer& t);

/// {u | exists w: (u,w) in [t] and w in L(d)}.
Nfa preimage(const Transducer& t, const Dfa& d);

/// Pairs (u,v) in [t] with |u| = |v| = length, sorted.
std::vector<std::pair<Word, Word>> accepted_pairs(const Transducer& t, std::size_t length);

/// Graphviz exports with nodes and edges in index order.
std::string to_dot(const Dfa& d, const Alphabet& sigma, const std::string& name = "dfa");
std::string to_dot(const Nfa& n, const Alphabet& sigma, const std::string& name = "nfa");
std::string to_dot(const Transducer& t, const Alphabet& sigma,
                   const std::string& name = "transducer");

}  // namespace delplan
