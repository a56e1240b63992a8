#include "delplan/formula.hpp"

#include <algorithm>
#include <cctype>

#include "delplan/error.hpp"

namespace delplan {

Formula Formula::make(FormulaKind kind, std::string name, std::vector<Formula> children) {
  return Formula(std::make_shared<const Node>(Node{kind, std::move(name), std::move(children)}));
}

Formula Formula::top() { return make(FormulaKind::True, {}, {}); }
Formula Formula::bottom() { return make(FormulaKind::False, {}, {}); }
Formula Formula::atom(std::string proposition) {
  return make(FormulaKind::Atom, std::move(proposition), {});
}
Formula Formula::negation(Formula sub) { return make(FormulaKind::Not, {}, {std::move(sub)}); }
Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return make(FormulaKind::Or, {}, {std::move(lhs), std::move(rhs)});
}
Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return make(FormulaKind::And, {}, {std::move(lhs), std::move(rhs)});
}
Formula Formula::implication(Formula lhs, Formula rhs) {
  return make(FormulaKind::Implies, {}, {std::move(lhs), std::move(rhs)});
}
Formula Formula::know(std::string agent, Formula sub) {
  return make(FormulaKind::Know, std::move(agent), {std::move(sub)});
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto& c : node_->children) n += c.size();
  return n;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (a.child(i) != b.child(i)) return false;
  }
  return true;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::set<std::string>& ap,
         const std::set<std::string>& agents)
      : text_(text), ap_(ap), agents_(agents) {}

  Formula parse_all() {
    Formula f = parse_implication();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

  bool try_keyword(std::string_view word) {
    skip_space();
    if (text_.substr(pos_, word.size()) != word) return false;
    std::size_t end = pos_ + word.size();
    if (end < text_.size() && is_ident_char(text_[end])) return false;
    pos_ = end;
    return true;
  }

  std::size_t position() const { return pos_; }

 private:
  static bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
  }
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
      ++pos_;
    }
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  std::string identifier() {
    skip_space();
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Formula parse_implication() {
    Formula lhs = parse_or();
    if (accept("->")) return Formula::implication(lhs, parse_implication());
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept("|")) f = Formula::disjunction(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept("&")) f = Formula::conjunction(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept("~")) return Formula::negation(parse_unary());
    if (accept("(")) {
      Formula f = parse_implication();
      if (!accept(")")) fail("expected ')'");
      return f;
    }
    if (text_.substr(pos_, 2) == "K[") {
      pos_ += 2;
      std::size_t at = pos_;
      std::string agent = identifier();
      if (!agents_.contains(agent)) throw ParseError("unknown agent '" + agent + "'", at);
      if (!accept("]")) fail("expected ']'");
      return Formula::know(std::move(agent), parse_unary());
    }
    std::size_t at = pos_;
    std::string id = identifier();
    if (id == "true") return Formula::top();
    if (id == "false") return Formula::bottom();
    if (!ap_.contains(id)) throw ParseError("unknown proposition '" + id + "'", at);
    return Formula::atom(std::move(id));
  }

  std::string_view text_;
  const std::set<std::string>& ap_;
  const std::set<std::string>& agents_;
  std::size_t pos_ = 0;
};

bool is_binary(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Or:
    case FormulaKind::And:
    case FormulaKind::Implies:
      return true;
    default:
      return false;
  }
}

void print(const Formula& f, std::string& out) {
  auto operand = [&out](const Formula& g) {
    if (is_binary(g)) {
      out += '(';
      print(g, out);
      out += ')';
    } else {
      print(g, out);
    }
  };
  switch (f.kind()) {
    case FormulaKind::True:
      out += "true";
      break;
    case FormulaKind::False:
      out += "false";
      break;
    case FormulaKind::Atom:
      out += f.name();
      break;
    case FormulaKind::Not:
      out += '~';
      operand(f.child(0));
      break;
    case FormulaKind::Know:
      out += "K[" + f.name() + "] ";
      operand(f.child(0));
      break;
    case FormulaKind::Or:
    case FormulaKind::And:
    case FormulaKind::Implies: {
      operand(f.lhs());
      out += f.kind() == FormulaKind::Or ? " | " : f.kind() == FormulaKind::And ? " & " : " -> ";
      operand(f.rhs());
      break;
    }
  }
}

}  // namespace

Formula parse_formula(std::string_view text, const std::set<std::string>& ap,
                      const std::set<std::string>& agents) {
  return Parser(text, ap, agents).parse_all();
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

std::size_t nesting_depth(const Formula& f) {
  std::size_t below = 0;
  for (std::size_t i = 0; i < f.arity(); ++i) below = std::max(below, nesting_depth(f.child(i)));
  return below + (f.kind() == FormulaKind::Know ? 1 : 0);
}

bool is_propositional(const Formula& f) {
  if (f.kind() == FormulaKind::Know) return false;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    if (!is_propositional(f.child(i))) return false;
  }
  return true;
}

Formula eliminate_derived(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
    case FormulaKind::Atom:
      return f;
    case FormulaKind::Not:
      return Formula::negation(eliminate_derived(f.child(0)));
    case FormulaKind::Know:
      return Formula::know(f.name(), eliminate_derived(f.child(0)));
    case FormulaKind::Or:
      return Formula::disjunction(eliminate_derived(f.lhs()), eliminate_derived(f.rhs()));
    case FormulaKind::And:
      return Formula::negation(Formula::disjunction(Formula::negation(eliminate_derived(f.lhs())),
                                                    Formula::negation(eliminate_derived(f.rhs()))));
    case FormulaKind::Implies:
      return Formula::disjunction(Formula::negation(eliminate_derived(f.lhs())),
                                  eliminate_derived(f.rhs()));
  }
  return f;
}

namespace {

Formula strip_double_negation(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Not: {
      const Formula& sub = f.child(0);
      if (sub.kind() == FormulaKind::Not) return strip_double_negation(sub.child(0));
      return Formula::negation(strip_double_negation(sub));
    }
    case FormulaKind::Know:
      return Formula::know(f.name(), strip_double_negation(f.child(0)));
    case FormulaKind::Or:
      return Formula::disjunction(strip_double_negation(f.lhs()), strip_double_negation(f.rhs()));
    default:
      return f;
  }
}

}  // namespace

Formula normalize(const Formula& f) { return strip_double_negation(eliminate_derived(f)); }

bool eval_propositional(const Formula& f, const std::function<bool(const std::string&)>& holds) {
  switch (f.kind()) {
    case FormulaKind::True:
      return true;
    case FormulaKind::False:
      return false;
    case FormulaKind::Atom:
      return holds(f.name());
    case FormulaKind::Not:
      return !eval_propositional(f.child(0), holds);
    case FormulaKind::Or:
      return eval_propositional(f.lhs(), holds) || eval_propositional(f.rhs(), holds);
    case FormulaKind::And:
      return eval_propositional(f.lhs(), holds) && eval_propositional(f.rhs(), holds);
    case FormulaKind::Implies:
      return !eval_propositional(f.lhs(), holds) || eval_propositional(f.rhs(), holds);
    case FormulaKind::Know:
      throw ValidationError("knowledge operator in propositional evaluation: " + to_string(f));
  }
  return false;
}

bool eval_propositional(const Formula& f, const std::set<std::string>& valuation) {
  if (!is_propositional(f)) {
    throw ValidationError("not a propositional formula: " + to_string(f));
  }
  return eval_propositional(f, [&valuation](const std::string& p) { return valuation.contains(p); });
}

namespace {

void collect(const Formula& f, FormulaKind kind, std::set<std::string>& out) {
  if (f.kind() == kind) out.insert(f.name());
  for (std::size_t i = 0; i < f.arity(); ++i) collect(f.child(i), kind, out);
}

}  // namespace

std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  collect(f, FormulaKind::Atom, out);
  return out;
}

std::set<std::string> agents_of(const Formula& f) {
  std::set<std::string> out;
  collect(f, FormulaKind::Know, out);
  return out;
}

std::string_view to_string(TemporalHead head) {
  switch (head) {
    case TemporalHead::Now:
      return "NOW";
    case TemporalHead::AG:
      return "AG";
    case TemporalHead::AF:
      return "AF";
    case TemporalHead::EF:
      return "EF";
    case TemporalHead::EG:
      return "EG";
  }
  return "?";
}

GoalFormula parse_goal(std::string_view text, const std::set<std::string>& ap,
                       const std::set<std::string>& agents) {
  Parser parser(text, ap, agents);
  GoalFormula goal;
  bool found = false;
  for (TemporalHead head : {TemporalHead::Now, TemporalHead::AG, TemporalHead::AF,
                            TemporalHead::EF, TemporalHead::EG}) {
    if (parser.try_keyword(to_string(head))) {
      goal.head = head;
      found = true;
      break;
    }
  }
  if (!found) throw ParseError("expected one of NOW, AG, AF, EF, EG", parser.position());
  goal.body = parser.parse_all();
  return goal;
}

std::string to_string(const GoalFormula& g) {
  return std::string(to_string(g.head)) + " " + to_string(g.body);
}

}  // namespace delplan

std::size_t std::hash<delplan::Formula>::operator()(const delplan::Formula& f) const {
  std::size_t h = std::hash<int>{}(static_cast<int>(f.kind())) ^ std::hash<std::string>{}(f.name());
  for (std::size_t i = 0; i < f.arity(); ++i) {
    h = h * 1000003u ^ (*this)(f.child(i));
  }
  return h;
}
