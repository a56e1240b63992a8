#include "delplan/protocol.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "json.hpp"

#include "delplan/error.hpp"

namespace delplan {

ArenaGraph build_arena(const RegularRepresentation& rep, SatCompiler& compiler, int initial_world,
                       const Formula& body) {
  if (initial_world < 0 || static_cast<std::size_t>(initial_world) >= rep.world_count) {
    throw ValidationError("arena: unknown initial world");
  }
  const Dfa sat = compiler.compile(body);
  const Dfa& domain = rep.domain.dfa;
  const Letter w = rep.world_letter(initial_world);

  ArenaGraph arena;
  arena.graph = Dfa(rep.sigma.size());
  std::map<std::pair<State, State>, State> ids;
  std::vector<std::pair<State, State>> nodes;
  auto intern = [&](State qd, State qs) {
    auto [it, fresh] = ids.emplace(std::pair{qd, qs}, static_cast<State>(nodes.size()));
    if (fresh) {
      bool marked = qs != kNoState && sat.is_accepting(qs);
      if (!nodes.empty()) arena.graph.add_state(marked);
      arena.graph.set_accepting(it->second, marked);
      arena.marked.push_back(marked);
      nodes.emplace_back(qd, qs);
    }
    return it->second;
  };
  intern(domain.next(domain.initial(), w), sat.next(sat.initial(), w));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [qd, qs] = nodes[i];
    for (std::size_t e = 0; e < rep.event_count; ++e) {
      Letter a = rep.event_letter(static_cast<int>(e));
      State nd = domain.next(qd, a);
      if (nd == kNoState) continue;
      State ns = qs == kNoState ? kNoState : sat.next(qs, a);
      arena.graph.set_transition(static_cast<State>(i), a, intern(nd, ns));
    }
  }
  return arena;
}

bool default_seriality(TemporalHead head) {
  return head == TemporalHead::AG || head == TemporalHead::EG;
}

namespace {

struct Edge {
  Letter letter;
  State to;
};

class Arena {
 public:
  explicit Arena(const ArenaGraph& g) : g_(g), succ_(g.marked.size()), pred_(g.marked.size()) {
    for (State s = 0; static_cast<std::size_t>(s) < size(); ++s) {
      for (Letter a = 0; static_cast<std::size_t>(a) < g.graph.alphabet_size(); ++a) {
        State t = g.graph.next(s, a);
        if (t == kNoState) continue;
        succ_[s].push_back({a, t});
        pred_[t].push_back(s);
      }
    }
    for (auto& preds : pred_) {
      std::sort(preds.begin(), preds.end());
      preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
    }
  }

  std::size_t size() const { return g_.marked.size(); }
  bool marked(State s) const { return g_.marked[s]; }
  const std::vector<Edge>& succ(State s) const { return succ_[s]; }

  /// Greatest X within `within` such that every node of X has a successor in X.
  std::vector<bool> serial_core(std::vector<bool> within) const {
    std::vector<std::size_t> live(size(), 0);
    std::vector<State> dead;
    for (State s = 0; static_cast<std::size_t>(s) < size(); ++s) {
      if (!within[s]) continue;
      for (const auto& e : succ_[s]) live[s] += within[e.to] ? 1 : 0;
      if (live[s] == 0) dead.push_back(s);
    }
    while (!dead.empty()) {
      State s = dead.back();
      dead.pop_back();
      if (!within[s]) continue;
      within[s] = false;
      for (State p : pred_[s]) {
        if (!within[p]) continue;
        // One decrement per edge p -> s.
        for (const auto& e : succ_[p]) {
          if (e.to == s && --live[p] == 0) dead.push_back(p);
        }
      }
    }
    return within;
  }

  /// Distance to a marked node inside `within`; -1 when unreachable.
  std::vector<int> attractor_rank(const std::vector<bool>& within) const {
    std::vector<int> rank(size(), -1);
    std::deque<State> queue;
    for (State s = 0; static_cast<std::size_t>(s) < size(); ++s) {
      if (within[s] && marked(s)) {
        rank[s] = 0;
        queue.push_back(s);
      }
    }
    while (!queue.empty()) {
      State s = queue.front();
      queue.pop_front();
      for (State p : pred_[s]) {
        if (within[p] && rank[p] < 0) {
          rank[p] = rank[s] + 1;
          queue.push_back(p);
        }
      }
    }
    return rank;
  }

 private:
  const ArenaGraph& g_;
  std::vector<std::vector<Edge>> succ_;
  std::vector<std::vector<State>> pred_;
};

// Builds the protocol DFA: initial state, then the root world letter.
class ProtocolBuilder {
 public:
  ProtocolBuilder(std::size_t alphabet, Letter root_letter) : dfa_(alphabet) {
    root_ = dfa_.add_state(true);
    dfa_.set_transition(dfa_.initial(), root_letter, root_);
  }

  State root() const { return root_; }
  State add() { return dfa_.add_state(true); }
  void link(State from, Letter a, State to) { dfa_.set_transition(from, a, to); }
  ProtocolAutomaton finish() { return ProtocolAutomaton{std::move(dfa_)}; }

  /// Follows the least-letter successor inside `within` until a node repeats.
  void lasso(const Arena& arena, State from_state, State node, const std::vector<bool>& within) {
    std::map<State, State> seen{{node, from_state}};
    State cur_state = from_state;
    State cur = node;
    for (;;) {
      const Edge* next = nullptr;
      for (const auto& e : arena.succ(cur)) {
        if (within[e.to]) {
          next = &e;
          break;
        }
      }
      if (next == nullptr) throw Error("protocol: lasso left the serial core");
      if (auto it = seen.find(next->to); it != seen.end()) {
        link(cur_state, next->letter, it->second);
        return;
      }
      State s = add();
      link(cur_state, next->letter, s);
      seen.emplace(next->to, s);
      cur_state = s;
      cur = next->to;
    }
  }

  /// Copies every node reachable from the root inside `within`.
  void subgraph(const Arena& arena, const std::vector<bool>& within) {
    std::map<State, State> ids{{0, root_}};
    std::vector<State> order{0};
    for (std::size_t i = 0; i < order.size(); ++i) {
      State from = ids[order[i]];
      for (const auto& e : arena.succ(order[i])) {
        if (!within[e.to]) continue;
        auto [it, fresh] = ids.emplace(e.to, 0);
        if (fresh) {
          it->second = add();
          order.push_back(e.to);
        }
        link(from, e.letter, it->second);
      }
    }
  }

 private:
  Dfa dfa_;
  State root_;
};

}  // namespace

std::optional<ProtocolAutomaton> synthesize_protocol(const RegularRepresentation& rep,
                                                     SatCompiler& compiler, int initial_world,
                                                     const GoalFormula& goal,
                                                     const ProtocolOptions& options) {
  const bool serial = options.serial.value_or(default_seriality(goal.head));
  const ArenaGraph graph = build_arena(rep, compiler, initial_world, goal.body);
  const Arena arena(graph);
  const std::size_t n = arena.size();
  const std::vector<bool> everything(n, true);
  const State root = 0;
  ProtocolBuilder out(rep.sigma.size(), rep.world_letter(initial_world));

  switch (goal.head) {
    case TemporalHead::Now: {
      if (!arena.marked(root)) return std::nullopt;
      if (serial) {
        auto core = arena.serial_core(everything);
        if (!core[root]) return std::nullopt;
        out.lasso(arena, out.root(), root, core);
      }
      return out.finish();
    }
    case TemporalHead::AG: {
      std::vector<bool> safe(n);
      for (State s = 0; static_cast<std::size_t>(s) < n; ++s) safe[s] = arena.marked(s);
      if (serial) safe = arena.serial_core(std::move(safe));
      if (!safe[root]) return std::nullopt;
      out.subgraph(arena, safe);
      return out.finish();
    }
    case TemporalHead::EG: {
      std::vector<bool> keep(n);
      for (State s = 0; static_cast<std::size_t>(s) < n; ++s) keep[s] = arena.marked(s);
      keep = arena.serial_core(std::move(keep));
      if (!keep[root]) return std::nullopt;
      out.lasso(arena, out.root(), root, keep);
      return out.finish();
    }
    case TemporalHead::EF: {
      const auto within = serial ? arena.serial_core(everything) : everything;
      const auto rank = arena.attractor_rank(within);
      if (rank[root] < 0) return std::nullopt;
      State cur = root;
      State cur_state = out.root();
      while (rank[cur] > 0) {
        for (const auto& e : arena.succ(cur)) {
          if (rank[e.to] == rank[cur] - 1) {
            State s = out.add();
            out.link(cur_state, e.letter, s);
            cur = e.to;
            cur_state = s;
            break;
          }
        }
      }
      if (serial) out.lasso(arena, cur_state, cur, within);
      return out.finish();
    }
    case TemporalHead::AF: {
      const auto within = serial ? arena.serial_core(everything) : everything;
      const auto rank = arena.attractor_rank(within);
      if (rank[root] < 0) return std::nullopt;
      // Before the goal: only rank-decreasing branches. After it: a leaf, or
      // the whole serial core when seriality is on.
      std::map<std::pair<State, bool>, State> ids{{{root, arena.marked(root)}, out.root()}};
      std::vector<std::pair<State, bool>> order{{root, arena.marked(root)}};
      for (std::size_t i = 0; i < order.size(); ++i) {
        auto [node, done] = order[i];
        State from = ids[order[i]];
        for (const auto& e : arena.succ(node)) {
          bool keep = done ? serial && within[e.to] : rank[e.to] == rank[node] - 1;
          if (!keep) continue;
          std::pair<State, bool> key{e.to, done || arena.marked(e.to)};
          auto [it, fresh] = ids.emplace(key, 0);
          if (fresh) {
            it->second = out.add();
            order.push_back(key);
          }
          out.link(from, e.letter, it->second);
        }
      }
      return out.finish();
    }
  }
  throw ValidationError("unsupported goal head");
}

void validate_protocol(const ProtocolAutomaton& protocol, const RegularRepresentation& rep) {
  const Dfa& d = protocol.dfa;
  if (d.alphabet_size() != rep.sigma.size()) throw ValidationError("protocol: alphabet mismatch");
  if (d.state_count() < 2 || d.is_accepting(d.initial())) {
    throw ValidationError("protocol: must contain a root and not the empty word");
  }
  int roots = 0;
  for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
    if (d.next(d.initial(), a) == kNoState) continue;
    if (!rep.is_world_letter(a)) throw ValidationError("protocol: root is not a world");
    ++roots;
  }
  if (roots != 1) throw ValidationError("protocol: must be rooted at exactly one world");

  std::vector<bool> seen(d.state_count(), false);
  std::vector<State> stack{d.initial()};
  seen[d.initial()] = true;
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
      State t = d.next(q, a);
      if (t == kNoState) continue;
      if (t == d.initial() || !d.is_accepting(t)) {
        throw ValidationError("protocol: not prefix-closed");
      }
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  if (!is_empty(complement_within(rep.domain.dfa, d))) {
    throw ValidationError("protocol: contains histories outside the domain");
  }
}

bool check_protocol(const ProtocolAutomaton& protocol, const GoalFormula& goal,
                    SatCompiler& compiler, std::size_t depth) {
  validate_protocol(protocol, compiler.representation());
  const Dfa& d = protocol.dfa;
  Word word;
  State root = kNoState;
  for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
    if (d.next(d.initial(), a) != kNoState) {
      word.push_back(a);
      root = d.next(d.initial(), a);
    }
  }

  auto alpha = [&](const Word& h) { return compiler.holds_at(goal.body, h); };
  auto children = [&](State q) {
    std::vector<std::pair<Letter, State>> out;
    for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
      if (d.next(q, a) != kNoState) out.emplace_back(a, d.next(q, a));
    }
    return out;
  };

  // Each evaluator walks the truncated tree from `q`, whose history is `h`.
  auto all_nodes = [&](auto&& self, State q, Word& h, std::size_t level) -> bool {
    if (!alpha(h)) return false;
    if (level == depth) return true;
    for (auto [a, t] : children(q)) {
      h.push_back(a);
      bool ok = self(self, t, h, level + 1);
      h.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  auto some_node = [&](auto&& self, State q, Word& h, std::size_t level) -> bool {
    if (alpha(h)) return true;
    if (level == depth) return false;
    for (auto [a, t] : children(q)) {
      h.push_back(a);
      bool ok = self(self, t, h, level + 1);
      h.pop_back();
      if (ok) return true;
    }
    return false;
  };
  auto some_path_always = [&](auto&& self, State q, Word& h, std::size_t level) -> bool {
    if (!alpha(h)) return false;
    auto kids = children(q);
    if (level == depth || kids.empty()) return true;
    for (auto [a, t] : kids) {
      h.push_back(a);
      bool ok = self(self, t, h, level + 1);
      h.pop_back();
      if (ok) return true;
    }
    return false;
  };
  auto every_path_eventually = [&](auto&& self, State q, Word& h, std::size_t level) -> bool {
    if (alpha(h)) return true;
    auto kids = children(q);
    if (level == depth || kids.empty()) return false;
    for (auto [a, t] : kids) {
      h.push_back(a);
      bool ok = self(self, t, h, level + 1);
      h.pop_back();
      if (!ok) return false;
    }
    return true;
  };

  switch (goal.head) {
    case TemporalHead::Now:
      return alpha(word);
    case TemporalHead::AG:
      return all_nodes(all_nodes, root, word, 0);
    case TemporalHead::EF:
      return some_node(some_node, root, word, 0);
    case TemporalHead::EG:
      return some_path_always(some_path_always, root, word, 0);
    case TemporalHead::AF:
      return every_path_eventually(every_path_eventually, root, word, 0);
  }
  return false;
}

std::vector<Word> protocol_words(const ProtocolAutomaton& protocol, std::size_t depth) {
  std::vector<Word> out;
  for (std::size_t len = 1; len <= depth + 1; ++len) {
    auto words = accepted_words(protocol.dfa, len);
    out.insert(out.end(), words.begin(), words.end());
  }
  return out;
}

std::string protocol_json(const ProtocolAutomaton& protocol, const Alphabet& sigma,
                          std::size_t depth) {
  nlohmann::ordered_json j;
  j["depth"] = depth;
  auto words = nlohmann::ordered_json::array();
  for (const auto& w : protocol_words(protocol, depth)) words.push_back(sigma.render(w));
  j["words"] = words;
  return j.dump(2) + "\n";
}

}  // namespace delplan
