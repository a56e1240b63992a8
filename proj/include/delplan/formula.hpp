#pragma once

// Epistemic formulas (propositional logic plus one knowledge modality per
// agent) and the temporal goal wrapper used by protocol synthesis.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace delplan {

enum class FormulaKind : std::uint8_t { True, False, Atom, Not, Or, And, Implies, Know };

/// Immutable formula AST with shared sub-terms. Copies are cheap.
class Formula {
 public:
  static Formula top();
  static Formula bottom();
  static Formula atom(std::string proposition);
  static Formula negation(Formula sub);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula know(std::string agent, Formula sub);

  FormulaKind kind() const { return node_->kind; }
  /// Proposition for Atom, agent for Know, empty otherwise.
  const std::string& name() const { return node_->name; }
  std::size_t arity() const { return node_->children.size(); }
  const Formula& child(std::size_t i) const { return node_->children.at(i); }
  const Formula& lhs() const { return child(0); }
  const Formula& rhs() const { return child(1); }

  /// Number of AST nodes.
  std::size_t size() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node {
    FormulaKind kind;
    std::string name;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(FormulaKind kind, std::string name, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

/// Parse the concrete syntax `true false p ~ & | -> K[a] ( )`.
/// Precedence, tightest first: `~` and `K[a]`, `&`, `|`, `->`.
/// `&` and `|` associate to the left, `->` to the right.
/// Throws ParseError on syntax errors and on names outside `ap` / `agents`.
Formula parse_formula(std::string_view text, const std::set<std::string>& ap,
                      const std::set<std::string>& agents);

/// Concrete syntax accepted back by parse_formula. Binary operands that are
/// themselves binary are always parenthesized.
std::string to_string(const Formula& f);

/// Maximum number of Know nodes on a root-to-leaf path.
std::size_t nesting_depth(const Formula& f);
bool is_propositional(const Formula& f);

/// Rewrites And/Implies into Not/Or.
Formula eliminate_derived(const Formula& f);

/// eliminate_derived followed by removal of double negations; used as a
/// canonical key for memoization.
Formula normalize(const Formula& f);

/// Throws ValidationError if `f` contains a Know node.
bool eval_propositional(const Formula& f, const std::set<std::string>& valuation);

/// Same as eval_propositional, with the valuation given as a membership test.
bool eval_propositional(const Formula& f,
                        const std::function<bool(const std::string&)>& holds);

std::set<std::string> atoms_of(const Formula& f);
std::set<std::string> agents_of(const Formula& f);

enum class TemporalHead : std::uint8_t { Now, AG, AF, EF, EG };

std::string_view to_string(TemporalHead head);

/// One temporal head over an epistemic state formula.
struct GoalFormula {
  TemporalHead head = TemporalHead::Now;
  Formula body = Formula::top();
};

/// `("AG"|"AF"|"EF"|"EG"|"NOW") form`.
GoalFormula parse_goal(std::string_view text, const std::set<std::string>& ap,
                       const std::set<std::string>& agents);

std::string to_string(const GoalFormula& g);

}  // namespace delplan

template <>
struct std::hash<delplan::Formula> {
  std::size_t operator()(const delplan::Formula& f) const;
};
