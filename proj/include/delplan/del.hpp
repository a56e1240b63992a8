#pragma once

// Epistemic models, event models, model checking and the update product.
// These are the explicit-state definitions; the automata-based modules are
// tested against them.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "delplan/formula.hpp"

namespace delplan {

/// Bitmask over proposition indices of a Vocabulary.
using PropSet = std::uint64_t;

/// Upper bound on |AP| imposed by the PropSet encoding.
inline constexpr std::size_t kMaxPropositions = 63;

/// Declared agents and propositions, in declaration order.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> agents, std::vector<std::string> ap);

  const std::vector<std::string>& agents() const { return agents_; }
  const std::vector<std::string>& ap() const { return ap_; }
  std::set<std::string> agent_set() const { return {agents_.begin(), agents_.end()}; }
  std::set<std::string> ap_set() const { return {ap_.begin(), ap_.end()}; }

  /// Throws ValidationError for undeclared names.
  std::size_t agent_index(const std::string& agent) const;
  std::size_t ap_index(const std::string& p) const;
  bool has_agent(const std::string& agent) const { return agent_ids_.contains(agent); }
  bool has_ap(const std::string& p) const { return ap_ids_.contains(p); }

  /// Throws ValidationError if `f` mentions an undeclared name.
  void check_formula(const Formula& f) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.agents_ == b.agents_ && a.ap_ == b.ap_;
  }

 private:
  std::vector<std::string> agents_;
  std::vector<std::string> ap_;
  std::map<std::string, std::size_t> agent_ids_;
  std::map<std::string, std::size_t> ap_ids_;
};

/// Successor lists indexed by source; each list sorted and duplicate free.
using Relation = std::vector<std::vector<int>>;

Relation make_relation(std::size_t size, const std::vector<std::pair<int, int>>& pairs);
std::size_t edge_count(const Relation& r);

struct EpistemicModel {
  Vocabulary vocab;
  std::vector<std::string> worlds;
  std::vector<Relation> relations;  // one per agent, in vocabulary order
  std::vector<PropSet> valuation;   // one per world
  std::optional<int> point;

  std::size_t world_count() const { return worlds.size(); }
  /// Throws ValidationError for unknown names.
  int world_index(const std::string& name) const;
  bool holds(int world, const std::string& p) const;
};

struct EventModel {
  Vocabulary vocab;
  std::vector<std::string> events;
  std::vector<Relation> relations;          // one per agent
  std::vector<Formula> pre;                 // one per event
  std::vector<std::vector<Formula>> post;   // [event][proposition]

  std::size_t event_count() const { return events.size(); }
  int event_index(const std::string& name) const;
};

/// Structural checks: relation and valuation ranges, point, vocabulary use.
void validate(const EpistemicModel& m);
void validate(const EventModel& ev);

/// Throws ValidationError naming the first Know-bearing pre/postcondition.
void require_propositional(const EventModel& ev);

/// Propositional truth of `f` under the valuation `v`.
bool eval_valuation(const Formula& f, PropSet v, const Vocabulary& vocab);

/// Worlds of `m` satisfying `f`, indexed by world.
std::vector<bool> extension(const EpistemicModel& m, const Formula& f);
bool check(const EpistemicModel& m, int world, const Formula& f);
bool check(const EpistemicModel& m, const std::string& world, const Formula& f);

/// Update product. World (w,e) is named "w.e"; worlds are ordered by w, then e.
EpistemicModel product(const EpistemicModel& m, const EventModel& ev);

/// Pointed update product; nullopt when the precondition fails at the point.
std::optional<EpistemicModel> pointed_product(const EpistemicModel& m, int world,
                                              const EventModel& ev, int event);

/// A world followed by events; a node of the generated forest.
struct History {
  int world = 0;
  std::vector<int> events;

  std::size_t level() const { return events.size(); }
  friend auto operator<=>(const History&, const History&) = default;
};

/// Canonical "w.e1.e2" rendering.
std::string history_name(const History& h, const EpistemicModel& m, const EventModel& ev);

struct IterateLimits {
  std::size_t max_worlds = 1'000'000;
  std::size_t max_depth = 64;
};

/// n-fold product, with the history behind each world.
struct IteratedModel {
  EpistemicModel model;
  std::vector<History> histories;  // parallel to model.worlds
};

/// Throws BudgetExceeded naming the level whose world count passed the cap.
IteratedModel iterate(const EpistemicModel& m, const EventModel& ev, std::size_t n,
                      const IterateLimits& limits = {});

/// |M| = number of relation edges over all agents.
std::size_t model_size(const EpistemicModel& m);
/// |E| = edges + sizes of all pre and post formulas.
std::size_t event_model_size(const EventModel& ev);

}  // namespace delplan
