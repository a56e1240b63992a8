#include "delplan/sat_compiler.hpp"

#include <algorithm>
#include <sstream>

#include "delplan/error.hpp"

namespace delplan {

SatCompiler::SatCompiler(const RegularRepresentation& rep, std::size_t max_states)
    : rep_(rep), max_states_(max_states), domain_(minimize(rep.domain.dfa)) {}

const Dfa& SatCompiler::compile(const Formula& f) {
  rep_.vocab.check_formula(f);
  return compile_normalized(normalize(f)).dfa;
}

const SatCompiler::Entry& SatCompiler::compile_normalized(const Formula& f) {
  if (auto it = index_.find(f); it != index_.end()) return entries_[it->second];

  Entry entry{f, nesting_depth(f), 0, Dfa(rep_.sigma.size())};
  Dfa raw(rep_.sigma.size());
  switch (f.kind()) {
    case FormulaKind::True:
      raw = rep_.domain.dfa;
      break;
    case FormulaKind::False:
      break;
    case FormulaKind::Atom:
      raw = rep_.valuation[rep_.vocab.ap_index(f.name())];
      break;
    case FormulaKind::Not: {
      Dfa sub = compile_normalized(f.child(0)).dfa;
      raw = complement_within(sub, domain_);
      break;
    }
    case FormulaKind::Or: {
      Dfa lhs = compile_normalized(f.lhs()).dfa;
      Dfa rhs = compile_normalized(f.rhs()).dfa;
      raw = unite(lhs, rhs);
      break;
    }
    case FormulaKind::Know: {
      // K_i g holds where no i-related history falsifies g.
      Dfa refuting = minimize(complement_within(compile_normalized(f.child(0)).dfa, domain_));
      const Transducer& rel = rep_.relations[rep_.vocab.agent_index(f.name())];
      try {
        Nfa pre = preimage(rel, refuting);
        Dfa reaches_refuting = determinize(pre, max_states_);
        raw = complement_within(reaches_refuting, domain_);
        entry.raw_states = std::max({pre.state_count(), reaches_refuting.state_count(), raw.state_count()});
      } catch (const BudgetExceeded& e) {
        throw BudgetExceeded(std::string(e.what()) + " at knowledge nesting level " +
                             std::to_string(entry.depth) + " (" + to_string(f) + ")");
      }
      break;
    }
    case FormulaKind::And:
    case FormulaKind::Implies:
      throw Error("sat compiler: formula is not normalized");
  }
  if (f.kind() != FormulaKind::Know) entry.raw_states = raw.state_count();
  entry.dfa = minimize(raw);

  index_.emplace(f, entries_.size());
  entries_.push_back(std::move(entry));
  return entries_.back();
}

bool SatCompiler::holds_at(const Formula& f, const Word& h) {
  if (!rep_.domain.dfa.accepts(h)) {
    throw ValidationError("history '" + rep_.sigma.render(h) + "' is not in the domain");
  }
  return compile(f).accepts(h);
}

std::vector<BlowupLevel> blowup_report(const Formula& f, SatCompiler& compiler) {
  compiler.compile(f);
  const Formula root = normalize(f);
  std::vector<BlowupLevel> report(nesting_depth(root) + 1);
  for (std::size_t l = 0; l < report.size(); ++l) report[l].level = l;

  std::vector<Formula> seen;
  auto visit = [&](auto&& self, const Formula& g) -> void {
    if (std::find(seen.begin(), seen.end(), g) != seen.end()) return;
    seen.push_back(g);
    for (std::size_t i = 0; i < g.arity(); ++i) self(self, g.child(i));
  };
  visit(visit, root);

  for (const auto& entry : compiler.entries()) {
    if (std::find(seen.begin(), seen.end(), entry.formula) == seen.end()) continue;
    auto& row = report[entry.depth];
    ++row.formulas;
    row.raw_states = std::max(row.raw_states, entry.raw_states);
    row.minimized_states = std::max(row.minimized_states, entry.dfa.state_count());
  }
  return report;
}

std::string format_blowup(const std::vector<BlowupLevel>& report) {
  std::ostringstream os;
  os << "level\tformulas\traw_states\tminimized_states\n";
  for (const auto& row : report) {
    os << row.level << '\t' << row.formulas << '\t' << row.raw_states << '\t'
       << row.minimized_states << '\n';
  }
  return os.str();
}

}  // namespace delplan
