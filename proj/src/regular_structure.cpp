#include "delplan/regular_structure.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "delplan/error.hpp"

namespace delplan {

Alphabet history_alphabet(const EpistemicModel& m, const EventModel& ev) {
  std::vector<std::string> names = m.worlds;
  names.insert(names.end(), ev.events.begin(), ev.events.end());
  return Alphabet(std::move(names));
}

Word history_word(const History& h, std::size_t world_count) {
  Word w{h.world};
  for (int e : h.events) w.push_back(static_cast<Letter>(world_count) + e);
  return w;
}

std::optional<History> word_history(const Word& w, std::size_t world_count) {
  if (w.empty() || w[0] < 0 || static_cast<std::size_t>(w[0]) >= world_count) return std::nullopt;
  History h{w[0], {}};
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] < static_cast<Letter>(world_count)) return std::nullopt;
    h.events.push_back(w[i] - static_cast<Letter>(world_count));
  }
  return h;
}

DomainAutomaton build_domain_automaton(const EpistemicModel& m, const EventModel& ev) {
  if (!(m.vocab == ev.vocab)) throw ValidationError("domain automaton: vocabularies differ");
  require_propositional(ev);
  const std::size_t nw = m.worlds.size();
  const std::size_t ne = ev.events.size();
  const std::size_t np = m.vocab.ap().size();

  DomainAutomaton out;
  out.vocab = m.vocab;
  out.dfa = Dfa(nw + ne);
  out.state_valuation.push_back(0);
  std::map<PropSet, State> ids;

  auto state_for = [&](PropSet v) {
    auto [it, fresh] = ids.emplace(v, static_cast<State>(out.state_valuation.size()));
    if (fresh) {
      out.dfa.add_state(true);
      out.state_valuation.push_back(v);
    }
    return it->second;
  };

  for (std::size_t w = 0; w < nw; ++w) {
    out.dfa.set_transition(0, static_cast<Letter>(w), state_for(m.valuation[w]));
  }
  // Valuation states are discovered lazily, in breadth-first order.
  for (std::size_t i = 1; i < out.state_valuation.size(); ++i) {
    const PropSet v = out.state_valuation[i];
    for (std::size_t e = 0; e < ne; ++e) {
      if (!eval_valuation(ev.pre[e], v, m.vocab)) continue;
      PropSet next = 0;
      for (std::size_t p = 0; p < np; ++p) {
        if (eval_valuation(ev.post[e][p], v, m.vocab)) next |= PropSet{1} << p;
      }
      out.dfa.set_transition(static_cast<State>(i), static_cast<Letter>(nw + e), state_for(next));
    }
  }
  if (np < 63 && out.dfa.state_count() > (std::size_t{1} << np) + 1) {
    throw Error("domain automaton exceeds 2^|AP| + 1 states");
  }
  return out;
}

Dfa build_valuation_automaton(const std::string& p, const DomainAutomaton& domain) {
  const std::size_t index = domain.vocab.ap_index(p);
  Dfa out = domain.dfa;
  for (State q = 1; static_cast<std::size_t>(q) < out.state_count(); ++q) {
    out.set_accepting(q, ((domain.state_valuation[q] >> index) & 1U) != 0);
  }
  return out;
}

Transducer one_state_transducer(const std::string& agent, const EpistemicModel& m,
                                const EventModel& ev) {
  const std::size_t i = m.vocab.agent_index(agent);
  const std::size_t nw = m.worlds.size();
  Transducer t(nw + ev.events.size());
  t.add_state(true);
  for (std::size_t w = 0; w < nw; ++w) {
    for (int w2 : m.relations[i][w]) t.add_transition(0, static_cast<Letter>(w), w2, 0);
  }
  for (std::size_t e = 0; e < ev.events.size(); ++e) {
    for (int e2 : ev.relations[i][e]) {
      t.add_transition(0, static_cast<Letter>(nw + e), static_cast<Letter>(nw) + e2, 0);
    }
  }
  return t;
}

Transducer build_relation_transducer(const std::string& agent, const EpistemicModel& m,
                                     const EventModel& ev, const DomainAutomaton& domain) {
  Transducer identity = identity_transducer(domain.dfa);
  Transducer raw = one_state_transducer(agent, m, ev);
  return trim(compose(compose(identity, raw), identity));
}

std::size_t RegularRepresentation::size() const {
  std::size_t n = domain.dfa.transition_count();
  for (const auto& d : valuation) n += d.transition_count();
  for (const auto& t : relations) n += t.transition_count();
  return n;
}

RegularRepresentation build_representation(const EpistemicModel& m, const EventModel& ev) {
  RegularRepresentation rep;
  rep.vocab = m.vocab;
  rep.sigma = history_alphabet(m, ev);
  rep.world_count = m.worlds.size();
  rep.event_count = ev.events.size();
  rep.domain = build_domain_automaton(m, ev);
  rep.identity_size = rep.domain.dfa.transition_count();
  for (const auto& p : m.vocab.ap()) rep.valuation.push_back(build_valuation_automaton(p, rep.domain));
  for (const auto& a : m.vocab.agents()) {
    rep.one_state_sizes.push_back(one_state_transducer(a, m, ev).transition_count());
    rep.relations.push_back(build_relation_transducer(a, m, ev, rep.domain));
  }
  return rep;
}

namespace {

template <typename T>
std::optional<T> first_difference(const std::set<T>& expected, const std::set<T>& actual,
                                  bool& missing) {
  for (const auto& x : expected) {
    if (!actual.contains(x)) {
      missing = true;
      return x;
    }
  }
  for (const auto& x : actual) {
    if (!expected.contains(x)) {
      missing = false;
      return x;
    }
  }
  return std::nullopt;
}

}  // namespace

VerifyReport verify_against_oracle(const RegularRepresentation& rep, const EpistemicModel& m,
                                   const EventModel& ev, std::size_t depth,
                                   const IterateLimits& limits) {
  const Alphabet& sigma = rep.sigma;
  for (std::size_t n = 0; n <= depth; ++n) {
    IteratedModel level = iterate(m, ev, n, limits);
    const std::size_t len = n + 1;
    std::vector<Word> words;
    for (const auto& h : level.histories) words.push_back(rep.word(h));

    VerifyReport bad;
    bad.ok = false;
    bad.level = n;
    bool missing = false;

    std::set<Word> expected(words.begin(), words.end());
    auto accepted = accepted_words(rep.domain.dfa, len);
    if (auto diff = first_difference(expected, std::set<Word>(accepted.begin(), accepted.end()), missing)) {
      bad.detail = "domain: history '" + sigma.render(*diff) +
                   (missing ? "' exists at level " + std::to_string(n) + " but is rejected"
                            : "' is accepted but is not a world at level " + std::to_string(n));
      return bad;
    }

    for (std::size_t p = 0; p < rep.vocab.ap().size(); ++p) {
      std::set<Word> truth;
      for (std::size_t k = 0; k < words.size(); ++k) {
        if ((level.model.valuation[k] >> p) & 1U) truth.insert(words[k]);
      }
      auto acc = accepted_words(rep.valuation[p], len);
      if (auto diff = first_difference(truth, std::set<Word>(acc.begin(), acc.end()), missing)) {
        bad.detail = "valuation of '" + rep.vocab.ap()[p] + "': history '" + sigma.render(*diff) +
                     (missing ? "' satisfies it but is rejected" : "' is accepted but does not satisfy it");
        return bad;
      }
    }

    for (std::size_t i = 0; i < rep.vocab.agents().size(); ++i) {
      std::set<std::pair<Word, Word>> truth;
      for (std::size_t k = 0; k < words.size(); ++k) {
        for (int k2 : level.model.relations[i][k]) truth.emplace(words[k], words[k2]);
      }
      auto acc = accepted_pairs(rep.relations[i], len);
      std::set<std::pair<Word, Word>> got(acc.begin(), acc.end());
      if (auto diff = first_difference(truth, got, missing)) {
        bad.detail = "relation of '" + rep.vocab.agents()[i] + "': pair ('" +
                     sigma.render(diff->first) + "', '" + sigma.render(diff->second) +
                     (missing ? "') is related but rejected" : "') is accepted but not related");
        return bad;
      }
    }
  }
  return VerifyReport{true, depth, "ok"};
}

std::string size_report(const RegularRepresentation& rep) {
  std::ostringstream os;
  os << "alphabet\t" << rep.sigma.size() << "\t(worlds " << rep.world_count << ", events "
     << rep.event_count << ")\n";
  os << "domain\tstates " << rep.domain.dfa.state_count() << "\ttransitions "
     << rep.domain.dfa.transition_count() << "\n";
  for (std::size_t p = 0; p < rep.valuation.size(); ++p) {
    os << "valuation " << rep.vocab.ap()[p] << "\tstates " << rep.valuation[p].state_count()
       << "\ttransitions " << rep.valuation[p].transition_count() << "\n";
  }
  for (std::size_t i = 0; i < rep.relations.size(); ++i) {
    os << "relation " << rep.vocab.agents()[i] << "\tstates " << rep.relations[i].state_count()
       << "\ttransitions " << rep.relations[i].transition_count() << "\tone-state "
       << rep.one_state_sizes[i] << "\n";
  }
  os << "total\t" << rep.size() << "\n";
  return os.str();
}

std::vector<std::pair<std::string, std::string>> dot_exports(const RegularRepresentation& rep) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("domain", to_dot(rep.domain.dfa, rep.sigma, "domain"));
  for (std::size_t p = 0; p < rep.valuation.size(); ++p) {
    std::string stem = "val_" + rep.vocab.ap()[p];
    out.emplace_back(stem, to_dot(rep.valuation[p], rep.sigma, stem));
  }
  for (std::size_t i = 0; i < rep.relations.size(); ++i) {
    std::string stem = "rel_" + rep.vocab.agents()[i];
    out.emplace_back(stem, to_dot(rep.relations[i], rep.sigma, stem));
  }
  return out;
}

}  // namespace delplan
