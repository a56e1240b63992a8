#include "delplan/del.hpp"

#include <algorithm>
#include <utility>

#include "delplan/error.hpp"

namespace delplan {

Vocabulary::Vocabulary(std::vector<std::string> agents, std::vector<std::string> ap)
    : agents_(std::move(agents)), ap_(std::move(ap)) {
  if (ap_.size() > kMaxPropositions) {
    throw ValidationError("at most " + std::to_string(kMaxPropositions) +
                          " propositions are supported");
  }
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (!agent_ids_.emplace(agents_[i], i).second) {
      throw ValidationError("duplicate agent '" + agents_[i] + "'");
    }
  }
  for (std::size_t i = 0; i < ap_.size(); ++i) {
    if (!ap_ids_.emplace(ap_[i], i).second) {
      throw ValidationError("duplicate proposition '" + ap_[i] + "'");
    }
  }
}

std::size_t Vocabulary::agent_index(const std::string& agent) const {
  auto it = agent_ids_.find(agent);
  if (it == agent_ids_.end()) throw ValidationError("unknown agent '" + agent + "'");
  return it->second;
}

std::size_t Vocabulary::ap_index(const std::string& p) const {
  auto it = ap_ids_.find(p);
  if (it == ap_ids_.end()) throw ValidationError("unknown proposition '" + p + "'");
  return it->second;
}

void Vocabulary::check_formula(const Formula& f) const {
  for (const auto& p : atoms_of(f)) ap_index(p);
  for (const auto& a : agents_of(f)) agent_index(a);
}

Relation make_relation(std::size_t size, const std::vector<std::pair<int, int>>& pairs) {
  Relation r(size);
  for (auto [from, to] : pairs) {
    if (from < 0 || to < 0 || static_cast<std::size_t>(from) >= size ||
        static_cast<std::size_t>(to) >= size) {
      throw ValidationError("relation pair out of range");
    }
    r[from].push_back(to);
  }
  for (auto& succ : r) {
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  }
  return r;
}

std::size_t edge_count(const Relation& r) {
  std::size_t n = 0;
  for (const auto& succ : r) n += succ.size();
  return n;
}

int EpistemicModel::world_index(const std::string& name) const {
  auto it = std::find(worlds.begin(), worlds.end(), name);
  if (it == worlds.end()) throw ValidationError("unknown world '" + name + "'");
  return static_cast<int>(it - worlds.begin());
}

bool EpistemicModel::holds(int world, const std::string& p) const {
  return (valuation.at(world) >> vocab.ap_index(p)) & 1U;
}

int EventModel::event_index(const std::string& name) const {
  auto it = std::find(events.begin(), events.end(), name);
  if (it == events.end()) throw ValidationError("unknown event '" + name + "'");
  return static_cast<int>(it - events.begin());
}

namespace {

void validate_relations(const std::vector<Relation>& relations, std::size_t agents,
                        std::size_t size, const char* what) {
  if (relations.size() != agents) {
    throw ValidationError(std::string(what) + ": expected one relation per agent");
  }
  for (const auto& r : relations) {
    if (r.size() != size) throw ValidationError(std::string(what) + ": relation has wrong domain");
    for (const auto& succ : r) {
      for (int t : succ) {
        if (t < 0 || static_cast<std::size_t>(t) >= size) {
          throw ValidationError(std::string(what) + ": relation target out of range");
        }
      }
    }
  }
}

}  // namespace

void validate(const EpistemicModel& m) {
  validate_relations(m.relations, m.vocab.agents().size(), m.worlds.size(), "epistemic model");
  if (m.valuation.size() != m.worlds.size()) {
    throw ValidationError("epistemic model: valuation does not cover every world");
  }
  const PropSet all = m.vocab.ap().size() == 64 ? ~PropSet{0}
                                                 : (PropSet{1} << m.vocab.ap().size()) - 1;
  for (PropSet v : m.valuation) {
    if ((v & ~all) != 0) throw ValidationError("epistemic model: valuation outside AP");
  }
  if (m.point && (*m.point < 0 || static_cast<std::size_t>(*m.point) >= m.worlds.size())) {
    throw ValidationError("epistemic model: point is not a world");
  }
}

void validate(const EventModel& ev) {
  validate_relations(ev.relations, ev.vocab.agents().size(), ev.events.size(), "event model");
  if (ev.pre.size() != ev.events.size() || ev.post.size() != ev.events.size()) {
    throw ValidationError("event model: pre/post must be given for every event");
  }
  for (std::size_t e = 0; e < ev.events.size(); ++e) {
    ev.vocab.check_formula(ev.pre[e]);
    if (ev.post[e].size() != ev.vocab.ap().size()) {
      throw ValidationError("event model: postcondition of '" + ev.events[e] +
                            "' is not total over AP");
    }
    for (const auto& f : ev.post[e]) ev.vocab.check_formula(f);
  }
}

void require_propositional(const EventModel& ev) {
  for (std::size_t e = 0; e < ev.events.size(); ++e) {
    if (!is_propositional(ev.pre[e])) {
      throw ValidationError("non-propositional precondition for event '" + ev.events[e] +
                            "': only propositional event models are supported");
    }
    for (std::size_t p = 0; p < ev.post[e].size(); ++p) {
      if (!is_propositional(ev.post[e][p])) {
        throw ValidationError("non-propositional postcondition for event '" + ev.events[e] +
                              "' on '" + ev.vocab.ap()[p] +
                              "': only propositional event models are supported");
      }
    }
  }
}

bool eval_valuation(const Formula& f, PropSet v, const Vocabulary& vocab) {
  return eval_propositional(
      f, [&](const std::string& p) { return ((v >> vocab.ap_index(p)) & 1U) != 0; });
}

std::vector<bool> extension(const EpistemicModel& m, const Formula& f) {
  const std::size_t n = m.worlds.size();
  switch (f.kind()) {
    case FormulaKind::True:
      return std::vector<bool>(n, true);
    case FormulaKind::False:
      return std::vector<bool>(n, false);
    case FormulaKind::Atom: {
      const std::size_t p = m.vocab.ap_index(f.name());
      std::vector<bool> out(n);
      for (std::size_t w = 0; w < n; ++w) out[w] = ((m.valuation[w] >> p) & 1U) != 0;
      return out;
    }
    case FormulaKind::Not: {
      auto out = extension(m, f.child(0));
      out.flip();
      return out;
    }
    case FormulaKind::Or:
    case FormulaKind::And:
    case FormulaKind::Implies: {
      auto a = extension(m, f.lhs());
      auto b = extension(m, f.rhs());
      for (std::size_t w = 0; w < n; ++w) {
        if (f.kind() == FormulaKind::Or) {
          a[w] = a[w] || b[w];
        } else if (f.kind() == FormulaKind::And) {
          a[w] = a[w] && b[w];
        } else {
          a[w] = !a[w] || b[w];
        }
      }
      return a;
    }
    case FormulaKind::Know: {
      const Relation& r = m.relations.at(m.vocab.agent_index(f.name()));
      auto sub = extension(m, f.child(0));
      std::vector<bool> out(n, true);
      for (std::size_t w = 0; w < n; ++w) {
        for (int t : r[w]) {
          if (!sub[t]) {
            out[w] = false;
            break;
          }
        }
      }
      return out;
    }
  }
  return std::vector<bool>(n, false);
}

bool check(const EpistemicModel& m, int world, const Formula& f) {
  if (world < 0 || static_cast<std::size_t>(world) >= m.worlds.size()) {
    throw ValidationError("unknown world index " + std::to_string(world));
  }
  m.vocab.check_formula(f);
  return extension(m, f)[world];
}

bool check(const EpistemicModel& m, const std::string& world, const Formula& f) {
  return check(m, m.world_index(world), f);
}

namespace {

struct TracedProduct {
  EpistemicModel model;
  std::vector<std::pair<int, int>> origin;  // (world, event) per product world
};

TracedProduct traced_product(const EpistemicModel& m, const EventModel& ev) {
  const std::size_t nw = m.worlds.size();
  const std::size_t ne = ev.events.size();
  const std::size_t np = m.vocab.ap().size();

  std::vector<std::vector<bool>> pre_ext;
  pre_ext.reserve(ne);
  for (const auto& f : ev.pre) pre_ext.push_back(extension(m, f));

  TracedProduct out;
  out.model.vocab = m.vocab;
  std::vector<int> id(nw * ne, -1);
  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t e = 0; e < ne; ++e) {
      if (!pre_ext[e][w]) continue;
      id[w * ne + e] = static_cast<int>(out.origin.size());
      out.origin.emplace_back(static_cast<int>(w), static_cast<int>(e));
      out.model.worlds.push_back(m.worlds[w] + "." + ev.events[e]);
    }
  }

  out.model.valuation.assign(out.origin.size(), 0);
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t p = 0; p < np; ++p) {
      auto post_ext = extension(m, ev.post[e][p]);
      for (std::size_t w = 0; w < nw; ++w) {
        int k = id[w * ne + e];
        if (k >= 0 && post_ext[w]) out.model.valuation[k] |= PropSet{1} << p;
      }
    }
  }

  for (std::size_t i = 0; i < m.relations.size(); ++i) {
    Relation r(out.origin.size());
    for (std::size_t k = 0; k < out.origin.size(); ++k) {
      auto [w, e] = out.origin[k];
      for (int w2 : m.relations[i][w]) {
        for (int e2 : ev.relations[i][e]) {
          int k2 = id[static_cast<std::size_t>(w2) * ne + e2];
          if (k2 >= 0) r[k].push_back(k2);
        }
      }
      std::sort(r[k].begin(), r[k].end());
    }
    out.model.relations.push_back(std::move(r));
  }
  return out;
}

}  // namespace

EpistemicModel product(const EpistemicModel& m, const EventModel& ev) {
  if (!(m.vocab == ev.vocab)) throw ValidationError("product: vocabularies differ");
  return traced_product(m, ev).model;
}

std::optional<EpistemicModel> pointed_product(const EpistemicModel& m, int world,
                                              const EventModel& ev, int event) {
  if (world < 0 || static_cast<std::size_t>(world) >= m.worlds.size()) {
    throw ValidationError("pointed product: unknown world");
  }
  if (event < 0 || static_cast<std::size_t>(event) >= ev.events.size()) {
    throw ValidationError("pointed product: unknown event");
  }
  if (!check(m, world, ev.pre[event])) return std::nullopt;
  auto traced = traced_product(m, ev);
  for (std::size_t k = 0; k < traced.origin.size(); ++k) {
    if (traced.origin[k] == std::pair{world, event}) {
      traced.model.point = static_cast<int>(k);
      break;
    }
  }
  return std::move(traced.model);
}

std::string history_name(const History& h, const EpistemicModel& m, const EventModel& ev) {
  std::string out = m.worlds.at(h.world);
  for (int e : h.events) out += "." + ev.events.at(e);
  return out;
}

IteratedModel iterate(const EpistemicModel& m, const EventModel& ev, std::size_t n,
                      const IterateLimits& limits) {
  if (n > limits.max_depth) {
    throw BudgetExceeded("iterate: depth " + std::to_string(n) + " exceeds the cap of " +
                         std::to_string(limits.max_depth));
  }
  if (m.worlds.size() > limits.max_worlds) {
    throw BudgetExceeded("iterate: level 0 has more than " + std::to_string(limits.max_worlds) +
                         " worlds");
  }
  IteratedModel cur;
  cur.model = m;
  cur.model.point.reset();
  for (std::size_t w = 0; w < m.worlds.size(); ++w) cur.histories.push_back({static_cast<int>(w), {}});
  for (std::size_t level = 1; level <= n; ++level) {
    auto traced = traced_product(cur.model, ev);
    if (traced.model.worlds.size() > limits.max_worlds) {
      throw BudgetExceeded("iterate: level " + std::to_string(level) + " has " +
                           std::to_string(traced.model.worlds.size()) +
                           " worlds, above the cap of " + std::to_string(limits.max_worlds));
    }
    IteratedModel next;
    next.model = std::move(traced.model);
    next.histories.reserve(traced.origin.size());
    for (auto [w, e] : traced.origin) {
      History h = cur.histories[w];
      h.events.push_back(e);
      next.histories.push_back(std::move(h));
    }
    cur = std::move(next);
  }
  return cur;
}

std::size_t model_size(const EpistemicModel& m) {
  std::size_t n = 0;
  for (const auto& r : m.relations) n += edge_count(r);
  return n;
}

std::size_t event_model_size(const EventModel& ev) {
  std::size_t n = 0;
  for (const auto& r : ev.relations) n += edge_count(r);
  for (std::size_t e = 0; e < ev.events.size(); ++e) {
    n += ev.pre[e].size();
    for (const auto& f : ev.post[e]) n += f.size();
  }
  return n;
}

}  // namespace delplan
