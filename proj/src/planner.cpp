#include "delplan/planner.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

#include "delplan/error.hpp"
#include "delplan/regular_structure.hpp"
#include "delplan/sat_compiler.hpp"

namespace delplan {

std::size_t PlanningInstance::size() const {
  return model_size(model) + event_model_size(events) + allowed.size() + goal.size() +
         model.vocab.ap().size();
}

void validate(const PlanningInstance& inst) {
  validate(inst.model);
  validate(inst.events);
  if (!(inst.model.vocab == inst.events.vocab)) {
    throw ValidationError("planning instance: model and event model vocabularies differ");
  }
  if (!inst.model.point) throw ValidationError("planning instance: the model has no point");
  for (int e : inst.allowed) {
    if (e < 0 || static_cast<std::size_t>(e) >= inst.events.events.size()) {
      throw ValidationError("planning instance: allowed event index out of range");
    }
  }
  require_propositional(inst.events);
  inst.model.vocab.check_formula(inst.goal);
}

std::string canonical_text(const PlanningInstance& inst) {
  const auto& m = inst.model;
  const auto& ev = inst.events;
  std::ostringstream os;
  auto list = [&os](const std::vector<std::string>& xs) {
    for (const auto& x : xs) os << ' ' << x;
    os << '\n';
  };
  os << "agents";
  list(m.vocab.agents());
  os << "ap";
  list(m.vocab.ap());
  for (std::size_t w = 0; w < m.worlds.size(); ++w) {
    os << "world " << m.worlds[w] << " " << m.valuation[w] << '\n';
  }
  for (std::size_t i = 0; i < m.relations.size(); ++i) {
    for (std::size_t w = 0; w < m.worlds.size(); ++w) {
      for (int t : m.relations[i][w]) os << "wrel " << i << ' ' << w << ' ' << t << '\n';
    }
  }
  for (std::size_t e = 0; e < ev.events.size(); ++e) {
    os << "event " << ev.events[e] << " pre " << to_string(ev.pre[e]);
    for (const auto& f : ev.post[e]) os << " ; " << to_string(f);
    os << '\n';
  }
  for (std::size_t i = 0; i < ev.relations.size(); ++i) {
    for (std::size_t e = 0; e < ev.events.size(); ++e) {
      for (int t : ev.relations[i][e]) os << "erel " << i << ' ' << e << ' ' << t << '\n';
    }
  }
  os << "point " << (m.point ? *m.point : -1) << '\n';
  os << "allowed";
  for (int e : inst.allowed) os << ' ' << e;
  os << "\ngoal " << to_string(inst.goal) << '\n';
  return os.str();
}

namespace {

std::string fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

PlanAutomaton synthesize_plans(const PlanningInstance& inst, const PlannerOptions& options) {
  validate(inst);
  const RegularRepresentation rep = build_representation(inst.model, inst.events);
  SatCompiler compiler(rep, options.max_states);
  const Dfa& sat = compiler.compile(inst.goal);

  const std::size_t ne = inst.events.events.size();
  std::vector<int> allowed = inst.allowed;
  std::sort(allowed.begin(), allowed.end());
  allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());

  // Re-root after the initial world letter and keep only allowed events.
  Dfa plans(ne);
  State root = sat.run(Word{rep.world_letter(*inst.model.point)});
  if (root != kNoState) {
    std::map<State, State> ids{{root, 0}};
    std::vector<State> order{root};
    plans.set_accepting(0, sat.is_accepting(root));
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (int e : allowed) {
        State t = sat.next(order[i], rep.event_letter(e));
        if (t == kNoState) continue;
        auto [it, fresh] = ids.emplace(t, static_cast<State>(order.size()));
        if (fresh) {
          plans.add_state(sat.is_accepting(t));
          order.push_back(t);
        }
        plans.set_transition(static_cast<State>(i), e, it->second);
      }
    }
  }

  PlanAutomaton out;
  out.dfa = minimize(plans);
  out.events = Alphabet(inst.events.events);
  out.instance_hash = fnv1a(canonical_text(inst));
  out.max_states = options.max_states;
  return out;
}

bool decide(const PlanAutomaton& plans) { return !is_empty(plans.dfa); }

bool decide(const PlanningInstance& inst, const PlannerOptions& options) {
  return decide(synthesize_plans(inst, options));
}

std::optional<Word> shortest_plan(const PlanAutomaton& plans) { return shortest_accepted(plans.dfa); }

std::optional<Word> shortest_plan(const PlanningInstance& inst, const PlannerOptions& options) {
  return shortest_plan(synthesize_plans(inst, options));
}

PlanList enumerate_plans(const PlanAutomaton& plans, std::size_t max_len, std::size_t max_count) {
  PlanList out;
  const Dfa& d = plans.dfa;
  if (is_empty(d) || max_count == 0) {
    out.truncated = !is_empty(d);
    return out;
  }
  // Level-by-level frontier; letters in increasing order keep each level sorted.
  std::vector<std::pair<State, Word>> frontier{{d.initial(), {}}};
  for (std::size_t len = 0; len <= max_len && !frontier.empty(); ++len) {
    for (const auto& [q, w] : frontier) {
      if (!d.is_accepting(q)) continue;
      if (out.plans.size() == max_count) {
        out.truncated = true;
        return out;
      }
      out.plans.push_back(w);
    }
    if (len == max_len) break;
    std::vector<std::pair<State, Word>> next;
    for (const auto& [q, w] : frontier) {
      for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
        State t = d.next(q, a);
        if (t == kNoState) continue;
        Word longer = w;
        longer.push_back(a);
        next.emplace_back(t, std::move(longer));
      }
    }
    frontier = std::move(next);
  }
  // The automaton is trimmed, so any remaining edge leads to a longer plan.
  for (const auto& [q, w] : frontier) {
    for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
      if (d.next(q, a) != kNoState) out.truncated = true;
    }
  }
  return out;
}

std::string plan_automaton_json(const PlanAutomaton& plans) {
  const Dfa& d = plans.dfa;
  nlohmann::ordered_json j;
  j["instance"] = plans.instance_hash;
  j["alphabet"] = plans.events.names();
  j["states"] = d.state_count();
  j["initial"] = d.initial();
  auto accepting = nlohmann::ordered_json::array();
  auto transitions = nlohmann::ordered_json::array();
  for (State q = 0; static_cast<std::size_t>(q) < d.state_count(); ++q) {
    if (d.is_accepting(q)) accepting.push_back(q);
    for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
      State t = d.next(q, a);
      if (t != kNoState) transitions.push_back({q, plans.events.name(a), t});
    }
  }
  j["accepting"] = accepting;
  j["transitions"] = transitions;
  return j.dump(2) + "\n";
}

}  // namespace delplan
