#include "delplan/automata.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "delplan/error.hpp"

namespace delplan {

std::string Alphabet::render(std::span<const Letter> word) const {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i > 0) out += ' ';
    out += name(word[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dfa

Dfa::Dfa(std::size_t alphabet_size) : alphabet_size_(alphabet_size) { add_state(false); }

std::size_t Dfa::transition_count() const {
  return static_cast<std::size_t>(
      std::count_if(table_.begin(), table_.end(), [](State t) { return t != kNoState; }));
}

State Dfa::add_state(bool accepting) {
  accepting_.push_back(accepting);
  table_.resize(table_.size() + alphabet_size_, kNoState);
  return static_cast<State>(accepting_.size() - 1);
}

void Dfa::set_transition(State from, Letter a, State to) {
  table_[static_cast<std::size_t>(from) * alphabet_size_ + static_cast<std::size_t>(a)] = to;
}

State Dfa::run(std::span<const Letter> word, State from) const {
  State q = from;
  for (Letter a : word) {
    if (a < 0 || static_cast<std::size_t>(a) >= alphabet_size_) return kNoState;
    q = next(q, a);
    if (q == kNoState) return kNoState;
  }
  return q;
}

bool Dfa::accepts(std::span<const Letter> word) const {
  if (state_count() == 0) return false;
  State q = run(word);
  return q != kNoState && is_accepting(q);
}

// ---------------------------------------------------------------------------
// Nfa

std::size_t Nfa::transition_count() const {
  std::size_t n = 0;
  for (const auto& cell : table_) n += cell.size();
  return n;
}

State Nfa::add_state(bool accepting) {
  accepting_.push_back(accepting);
  table_.resize(table_.size() + alphabet_size_);
  return static_cast<State>(accepting_.size() - 1);
}

void Nfa::add_initial(State q) {
  auto it = std::lower_bound(initial_.begin(), initial_.end(), q);
  if (it == initial_.end() || *it != q) initial_.insert(it, q);
}

void Nfa::add_transition(State from, Letter a, State to) {
  auto& cell = table_[static_cast<std::size_t>(from) * alphabet_size_ + static_cast<std::size_t>(a)];
  auto it = std::lower_bound(cell.begin(), cell.end(), to);
  if (it == cell.end() || *it != to) cell.insert(it, to);
}

bool Nfa::accepts(std::span<const Letter> word) const {
  std::vector<State> cur = initial_;
  for (Letter a : word) {
    if (a < 0 || static_cast<std::size_t>(a) >= alphabet_size_) return false;
    std::vector<State> nxt;
    for (State q : cur) {
      const auto& succ = next(q, a);
      nxt.insert(nxt.end(), succ.begin(), succ.end());
    }
    std::sort(nxt.begin(), nxt.end());
    nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
    cur = std::move(nxt);
    if (cur.empty()) return false;
  }
  return std::any_of(cur.begin(), cur.end(), [this](State q) { return is_accepting(q); });
}

// ---------------------------------------------------------------------------
// Transducer

std::vector<Transducer::Transition> Transducer::transitions() const {
  std::vector<Transition> all;
  all.reserve(transition_count_);
  for (const auto& out : out_) all.insert(all.end(), out.begin(), out.end());
  return all;
}

State Transducer::add_state(bool accepting) {
  accepting_.push_back(accepting);
  out_.emplace_back();
  return static_cast<State>(accepting_.size() - 1);
}

void Transducer::add_transition(State from, Letter in, Letter out, State to) {
  Transition t{from, in, out, to};
  auto& list = out_[static_cast<std::size_t>(from)];
  auto it = std::lower_bound(list.begin(), list.end(), t);
  if (it != list.end() && *it == t) return;
  list.insert(it, t);
  ++transition_count_;
}

bool Transducer::accepts(std::span<const Letter> in, std::span<const Letter> out) const {
  if (in.size() != out.size() || state_count() == 0) return false;
  std::vector<State> cur{initial_};
  for (std::size_t i = 0; i < in.size(); ++i) {
    std::vector<State> nxt;
    for (State q : cur) {
      for (const auto& t : outgoing(q)) {
        if (t.in == in[i] && t.out == out[i]) nxt.push_back(t.to);
      }
    }
    std::sort(nxt.begin(), nxt.end());
    nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
    cur = std::move(nxt);
    if (cur.empty()) return false;
  }
  return std::any_of(cur.begin(), cur.end(), [this](State q) { return is_accepting(q); });
}

// ---------------------------------------------------------------------------
// Operations

namespace {

void require_same_alphabet(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw ValidationError(std::string(op) + ": alphabet mismatch (" + std::to_string(a) +
                          " vs " + std::to_string(b) + " letters)");
  }
}

struct SubsetHash {
  std::size_t operator()(const std::vector<State>& v) const {
    std::size_t h = v.size();
    for (State s : v) h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::size_t>(s) + 1;
    return h;
  }
};

std::uint64_t pair_key(State a, State b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

enum class BoolOp { Intersect, Unite, Difference };

// Product over partial automata; kNoState on one side stands for a rejecting sink.
Dfa product(const Dfa& a, const Dfa& b, BoolOp op) {
  const std::size_t k = a.alphabet_size();
  auto accept = [&](State qa, State qb) {
    bool in_a = qa != kNoState && a.is_accepting(qa);
    bool in_b = qb != kNoState && b.is_accepting(qb);
    switch (op) {
      case BoolOp::Intersect:
        return in_a && in_b;
      case BoolOp::Unite:
        return in_a || in_b;
      case BoolOp::Difference:
        return in_a && !in_b;
    }
    return false;
  };
  // Pairs that can no longer accept anything are not materialized.
  auto alive = [&](State qa, State qb) {
    switch (op) {
      case BoolOp::Intersect:
        return qa != kNoState && qb != kNoState;
      case BoolOp::Unite:
        return qa != kNoState || qb != kNoState;
      case BoolOp::Difference:
        return qa != kNoState;
    }
    return false;
  };

  Dfa out(k);
  std::unordered_map<std::uint64_t, State> ids;
  std::vector<std::pair<State, State>> pairs;
  const State ia = a.state_count() ? a.initial() : kNoState;
  const State ib = b.state_count() ? b.initial() : kNoState;
  ids.emplace(pair_key(ia, ib), 0);
  pairs.emplace_back(ia, ib);
  out.set_accepting(0, accept(ia, ib));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [qa, qb] = pairs[i];
    for (Letter c = 0; static_cast<std::size_t>(c) < k; ++c) {
      State na = qa == kNoState ? kNoState : a.next(qa, c);
      State nb = qb == kNoState ? kNoState : b.next(qb, c);
      if (!alive(na, nb)) continue;
      auto [it, fresh] = ids.emplace(pair_key(na, nb), static_cast<State>(pairs.size()));
      if (fresh) {
        out.add_state(accept(na, nb));
        pairs.emplace_back(na, nb);
      }
      out.set_transition(static_cast<State>(i), c, it->second);
    }
  }
  return out;
}

std::vector<bool> reachable(const Dfa& d) {
  std::vector<bool> seen(d.state_count(), false);
  if (d.state_count() == 0) return seen;
  std::vector<State> stack{d.initial()};
  seen[d.initial()] = true;
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
      State t = d.next(q, a);
      if (t != kNoState && !seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return seen;
}

std::vector<bool> coaccessible(const Dfa& d) {
  const std::size_t n = d.state_count();
  std::vector<std::vector<State>> preds(n);
  for (State q = 0; static_cast<std::size_t>(q) < n; ++q) {
    for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
      State t = d.next(q, a);
      if (t != kNoState) preds[t].push_back(q);
    }
  }
  std::vector<bool> seen(n, false);
  std::vector<State> stack;
  for (State q = 0; static_cast<std::size_t>(q) < n; ++q) {
    if (d.is_accepting(q)) {
      seen[q] = true;
      stack.push_back(q);
    }
  }
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (State p : preds[q]) {
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return seen;
}

}  // namespace

Nfa to_nfa(const Dfa& d) {
  Nfa n(d.alphabet_size());
  for (State q = 0; static_cast<std::size_t>(q) < d.state_count(); ++q) n.add_state(d.is_accepting(q));
  for (State q = 0; static_cast<std::size_t>(q) < d.state_count(); ++q) {
    for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
      State t = d.next(q, a);
      if (t != kNoState) n.add_transition(q, a, t);
    }
  }
  if (d.state_count() > 0) n.add_initial(d.initial());
  return n;
}

Dfa determinize(const Nfa& n, std::size_t max_states) {
  const std::size_t k = n.alphabet_size();
  Dfa out(k);
  std::unordered_map<std::vector<State>, State, SubsetHash> ids;
  std::vector<const std::vector<State>*> subsets;

  auto accepting = [&n](const std::vector<State>& s) {
    return std::any_of(s.begin(), s.end(), [&n](State q) { return n.is_accepting(q); });
  };

  auto [root, _] = ids.emplace(n.initial(), 0);
  subsets.push_back(&root->first);
  out.set_accepting(0, accepting(root->first));

  std::vector<State> target;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (Letter a = 0; static_cast<std::size_t>(a) < k; ++a) {
      target.clear();
      for (State q : *subsets[i]) {
        const auto& succ = n.next(q, a);
        target.insert(target.end(), succ.begin(), succ.end());
      }
      if (target.empty()) continue;
      std::sort(target.begin(), target.end());
      target.erase(std::unique(target.begin(), target.end()), target.end());
      auto it = ids.find(target);
      if (it == ids.end()) {
        if (subsets.size() >= max_states) {
          throw BudgetExceeded("determinize: more than " + std::to_string(max_states) +
                               " subset states");
        }
        it = ids.emplace(target, static_cast<State>(subsets.size())).first;
        subsets.push_back(&it->first);
        out.add_state(accepting(it->first));
      }
      out.set_transition(static_cast<State>(i), a, it->second);
    }
  }
  return out;
}

Dfa complete(const Dfa& d) {
  Dfa out = d;
  if (out.state_count() == 0) out = Dfa(d.alphabet_size());
  State sink = kNoState;
  const std::size_t n = out.state_count();
  for (State q = 0; static_cast<std::size_t>(q) < n; ++q) {
    for (Letter a = 0; static_cast<std::size_t>(a) < out.alphabet_size(); ++a) {
      if (out.next(q, a) != kNoState) continue;
      if (sink == kNoState) {
        sink = out.add_state(false);
        for (Letter b = 0; static_cast<std::size_t>(b) < out.alphabet_size(); ++b) {
          out.set_transition(sink, b, sink);
        }
      }
      out.set_transition(q, a, sink);
    }
  }
  return out;
}

Dfa complement_within(const Dfa& d, const Dfa& dom) {
  require_same_alphabet(d.alphabet_size(), dom.alphabet_size(), "complement_within");
  return trim(product(dom, d, BoolOp::Difference));
}

Dfa intersect(const Dfa& a, const Dfa& b) {
  require_same_alphabet(a.alphabet_size(), b.alphabet_size(), "intersect");
  return trim(product(a, b, BoolOp::Intersect));
}

Dfa unite(const Dfa& a, const Dfa& b) {
  require_same_alphabet(a.alphabet_size(), b.alphabet_size(), "unite");
  return trim(product(a, b, BoolOp::Unite));
}

Dfa trim(const Dfa& d) {
  const std::size_t k = d.alphabet_size();
  auto fwd = reachable(d);
  auto bwd = coaccessible(d);
  Dfa out(k);
  if (d.state_count() == 0 || !bwd[d.initial()]) return out;

  // Renumber in breadth-first order so equal automata get equal numbering.
  std::vector<State> id(d.state_count(), kNoState);
  std::vector<State> order{d.initial()};
  id[d.initial()] = 0;
  out.set_accepting(0, d.is_accepting(d.initial()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    State q = order[i];
    for (Letter a = 0; static_cast<std::size_t>(a) < k; ++a) {
      State t = d.next(q, a);
      if (t == kNoState || !fwd[t] || !bwd[t]) continue;
      if (id[t] == kNoState) {
        id[t] = out.add_state(d.is_accepting(t));
        order.push_back(t);
      }
      out.set_transition(static_cast<State>(i), a, id[t]);
    }
  }
  return out;
}

Dfa minimize(const Dfa& input) {
  Dfa d = complete(trim(input));
  const std::size_t n = d.state_count();
  const std::size_t k = d.alphabet_size();
  if (k == 0) return trim(d);

  // Inverse transitions in CSR form, keyed by (letter, target).
  std::vector<std::size_t> inv_start(k * n + 1, 0);
  for (State q = 0; static_cast<std::size_t>(q) < n; ++q) {
    for (Letter a = 0; static_cast<std::size_t>(a) < k; ++a) {
      ++inv_start[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(d.next(q, a)) + 1];
    }
  }
  for (std::size_t i = 1; i < inv_start.size(); ++i) inv_start[i] += inv_start[i - 1];
  std::vector<State> inv(n * k);
  {
    std::vector<std::size_t> fill(inv_start.begin(), inv_start.end() - 1);
    for (State q = 0; static_cast<std::size_t>(q) < n; ++q) {
      for (Letter a = 0; static_cast<std::size_t>(a) < k; ++a) {
        inv[fill[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(d.next(q, a))]++] = q;
      }
    }
  }

  // Refinable partition: elements grouped by block, each block a slice.
  std::vector<State> elems(n);
  std::vector<std::size_t> loc(n);
  std::vector<int> block_of(n);
  std::vector<std::size_t> first, end, marked;
  {
    std::size_t pos = 0;
    for (bool acc : {true, false}) {
      std::size_t start = pos;
      for (State q = 0; static_cast<std::size_t>(q) < n; ++q) {
        if (d.is_accepting(q) == acc) {
          elems[pos] = q;
          loc[q] = pos++;
        }
      }
      if (pos > start) {
        int b = static_cast<int>(first.size());
        first.push_back(start);
        end.push_back(pos);
        marked.push_back(0);
        for (std::size_t i = start; i < pos; ++i) block_of[elems[i]] = b;
      }
    }
  }

  std::vector<std::pair<int, Letter>> work;
  std::vector<char> in_work;
  auto push = [&](int b, Letter a) {
    std::size_t slot = static_cast<std::size_t>(b) * k + static_cast<std::size_t>(a);
    if (in_work.size() <= slot) in_work.resize((static_cast<std::size_t>(b) + 1) * k, 0);
    if (!in_work[slot]) {
      in_work[slot] = 1;
      work.emplace_back(b, a);
    }
  };
  auto block_size = [&](int b) { return end[b] - first[b]; };

  if (first.size() == 2) {
    int smaller = block_size(0) <= block_size(1) ? 0 : 1;
    for (Letter a = 0; static_cast<std::size_t>(a) < k; ++a) push(smaller, a);
  }

  std::vector<State> splitter;
  std::vector<int> touched;
  while (!work.empty()) {
    auto [b, a] = work.back();
    work.pop_back();
    in_work[static_cast<std::size_t>(b) * k + static_cast<std::size_t>(a)] = 0;

    splitter.assign(elems.begin() + static_cast<std::ptrdiff_t>(first[b]),
                    elems.begin() + static_cast<std::ptrdiff_t>(end[b]));
    touched.clear();
    for (State s : splitter) {
      std::size_t key = static_cast<std::size_t>(a) * n + static_cast<std::size_t>(s);
      for (std::size_t j = inv_start[key]; j < inv_start[key + 1]; ++j) {
        State p = inv[j];
        int pb = block_of[p];
        std::size_t boundary = first[pb] + marked[pb];
        if (loc[p] < boundary) continue;
        State other = elems[boundary];
        std::swap(elems[boundary], elems[loc[p]]);
        loc[other] = loc[p];
        loc[p] = boundary;
        if (marked[pb]++ == 0) touched.push_back(pb);
      }
    }
    for (int y : touched) {
      if (marked[y] == block_size(y)) {
        marked[y] = 0;
        continue;
      }
      int z = static_cast<int>(first.size());
      first.push_back(first[y]);
      end.push_back(first[y] + marked[y]);
      marked.push_back(0);
      first[y] = end[z];
      marked[y] = 0;
      for (std::size_t i = first[z]; i < end[z]; ++i) block_of[elems[i]] = z;
      for (Letter c = 0; static_cast<std::size_t>(c) < k; ++c) {
        std::size_t slot = static_cast<std::size_t>(y) * k + static_cast<std::size_t>(c);
        if (slot < in_work.size() && in_work[slot]) {
          push(z, c);
        } else {
          push(block_size(z) <= block_size(y) ? z : y, c);
        }
      }
    }
  }

  const std::size_t blocks = first.size();
  Dfa quotient(k);
  for (std::size_t b = 1; b < blocks; ++b) quotient.add_state(false);
  for (std::size_t b = 0; b < blocks; ++b) {
    State rep = elems[first[b]];
    quotient.set_accepting(static_cast<State>(b), d.is_accepting(rep));
    for (Letter a = 0; static_cast<std::size_t>(a) < k; ++a) {
      quotient.set_transition(static_cast<State>(b), a, block_of[d.next(rep, a)]);
    }
  }
  quotient.set_initial(block_of[d.initial()]);
  return trim(quotient);
}

bool is_empty(const Dfa& d, EmptinessStats& stats) {
  stats = {};
  if (d.state_count() == 0) return true;
  std::vector<bool> seen(d.state_count(), false);
  std::vector<State> stack{d.initial()};
  seen[d.initial()] = true;
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    ++stats.states_visited;
    if (d.is_accepting(q)) return false;
    for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
      State t = d.next(q, a);
      if (t == kNoState) continue;
      ++stats.transitions_scanned;
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return true;
}

bool is_empty(const Dfa& d) {
  EmptinessStats stats;
  return is_empty(d, stats);
}

std::optional<Word> shortest_accepted(const Dfa& d) {
  if (d.state_count() == 0) return std::nullopt;
  // Letters are explored in increasing order, so the first path found to a
  // state is the lexicographically least among the shortest ones.
  std::vector<State> parent(d.state_count(), kNoState);
  std::vector<Letter> via(d.state_count(), -1);
  std::vector<bool> seen(d.state_count(), false);
  std::deque<State> queue{d.initial()};
  seen[d.initial()] = true;
  while (!queue.empty()) {
    State q = queue.front();
    queue.pop_front();
    if (d.is_accepting(q)) {
      Word w;
      for (State s = q; s != d.initial(); s = parent[s]) w.push_back(via[s]);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
      State t = d.next(q, a);
      if (t != kNoState && !seen[t]) {
        seen[t] = true;
        parent[t] = q;
        via[t] = a;
        queue.push_back(t);
      }
    }
  }
  return std::nullopt;
}

std::vector<Word> accepted_words(const Dfa& d, std::size_t length) {
  std::vector<Word> out;
  if (d.state_count() == 0) return out;
  Word w;
  auto dfs = [&](auto&& self, State q) -> void {
    if (w.size() == length) {
      if (d.is_accepting(q)) out.push_back(w);
      return;
    }
    for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
      State t = d.next(q, a);
      if (t == kNoState) continue;
      w.push_back(a);
      self(self, t);
      w.pop_back();
    }
  };
  dfs(dfs, d.initial());
  return out;
}

bool equivalent(const Dfa& a, const Dfa& b) {
  require_same_alphabet(a.alphabet_size(), b.alphabet_size(), "equivalent");
  return is_empty(product(a, b, BoolOp::Difference)) && is_empty(product(b, a, BoolOp::Difference));
}

Transducer identity_transducer(const Dfa& d) {
  Transducer t(d.alphabet_size());
  for (State q = 0; static_cast<std::size_t>(q) < d.state_count(); ++q) t.add_state(d.is_accepting(q));
  for (State q = 0; static_cast<std::size_t>(q) < d.state_count(); ++q) {
    for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
      State r = d.next(q, a);
      if (r != kNoState) t.add_transition(q, a, a, r);
    }
  }
  if (d.state_count() > 0) t.set_initial(d.initial());
  return t;
}

Transducer compose(const Transducer& t1, const Transducer& t2) {
  require_same_alphabet(t1.alphabet_size(), t2.alphabet_size(), "compose");
  Transducer out(t1.alphabet_size());
  if (t1.state_count() == 0 || t2.state_count() == 0) return out;
  std::unordered_map<std::uint64_t, State> ids;
  std::vector<std::pair<State, State>> pairs;
  auto intern = [&](State p, State q) {
    auto [it, fresh] = ids.emplace(pair_key(p, q), static_cast<State>(pairs.size()));
    if (fresh) {
      out.add_state(t1.is_accepting(p) && t2.is_accepting(q));
      pairs.emplace_back(p, q);
    }
    return it->second;
  };
  out.set_initial(intern(t1.initial(), t2.initial()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [p, q] = pairs[i];
    const auto& second = t2.outgoing(q);
    for (const auto& x : t1.outgoing(p)) {
      // t2's transitions from q are sorted by input letter.
      auto lo = std::lower_bound(second.begin(), second.end(), x.out,
                                 [](const Transducer::Transition& t, Letter l) { return t.in < l; });
      for (auto it = lo; it != second.end() && it->in == x.out; ++it) {
        State target = intern(x.to, it->to);
        out.add_transition(static_cast<State>(i), x.in, it->out, target);
      }
    }
  }
  return out;
}

Transducer trim(const Transducer& t) {
  const std::size_t n = t.state_count();
  Transducer out(t.alphabet_size());
  if (n == 0) return out;
  std::vector<bool> fwd(n, false), bwd(n, false);
  std::vector<std::vector<State>> preds(n);
  for (const auto& x : t.transitions()) preds[x.to].push_back(x.from);
  std::vector<State> stack{t.initial()};
  fwd[t.initial()] = true;
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (const auto& x : t.outgoing(q)) {
      if (!fwd[x.to]) {
        fwd[x.to] = true;
        stack.push_back(x.to);
      }
    }
  }
  for (State q = 0; static_cast<std::size_t>(q) < n; ++q) {
    if (t.is_accepting(q)) {
      bwd[q] = true;
      stack.push_back(q);
    }
  }
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (State p : preds[q]) {
      if (!bwd[p]) {
        bwd[p] = true;
        stack.push_back(p);
      }
    }
  }
  if (!bwd[t.initial()]) {
    out.add_state(false);
    return out;
  }
  std::vector<State> id(n, kNoState);
  std::vector<State> order{t.initial()};
  id[t.initial()] = out.add_state(t.is_accepting(t.initial()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& x : t.outgoing(order[i])) {
      if (!fwd[x.to] || !bwd[x.to]) continue;
      if (id[x.to] == kNoState) {
        id[x.to] = out.add_state(t.is_accepting(x.to));
        order.push_back(x.to);
      }
      out.add_transition(static_cast<State>(i), x.in, x.out, id[x.to]);
    }
  }
  return out;
}

Nfa preimage(const Transducer& t, const Dfa& d) {
  require_same_alphabet(t.alphabet_size(), d.alphabet_size(), "preimage");
  Nfa out(t.alphabet_size());
  if (t.state_count() == 0 || d.state_count() == 0) return out;
  std::unordered_map<std::uint64_t, State> ids;
  std::vector<std::pair<State, State>> pairs;
  auto intern = [&](State p, State q) {
    auto [it, fresh] = ids.emplace(pair_key(p, q), static_cast<State>(pairs.size()));
    if (fresh) {
      out.add_state(t.is_accepting(p) && d.is_accepting(q));
      pairs.emplace_back(p, q);
    }
    return it->second;
  };
  out.add_initial(intern(t.initial(), d.initial()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [p, q] = pairs[i];
    for (const auto& x : t.outgoing(p)) {
      State r = d.next(q, x.out);
      if (r == kNoState) continue;
      out.add_transition(static_cast<State>(i), x.in, intern(x.to, r));
    }
  }
  return out;
}

std::vector<std::pair<Word, Word>> accepted_pairs(const Transducer& t, std::size_t length) {
  std::set<std::pair<Word, Word>> found;
  if (t.state_count() == 0) return {};
  Word u, v;
  auto dfs = [&](auto&& self, State q) -> void {
    if (u.size() == length) {
      if (t.is_accepting(q)) found.emplace(u, v);
      return;
    }
    for (const auto& x : t.outgoing(q)) {
      u.push_back(x.in);
      v.push_back(x.out);
      self(self, x.to);
      u.pop_back();
      v.pop_back();
    }
  };
  dfs(dfs, t.initial());
  return {found.begin(), found.end()};
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void dot_header(std::ostringstream& os, const std::string& name, std::size_t states,
                const std::vector<State>& initial, const std::function<bool(State)>& accepting) {
  os << "digraph " << quoted(name) << " {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=circle];\n";
  for (std::size_t i = 0; i < initial.size(); ++i) {
    os << "  __start" << i << " [shape=point];\n";
  }
  for (State q = 0; static_cast<std::size_t>(q) < states; ++q) {
    os << "  q" << q;
    if (accepting(q)) os << " [shape=doublecircle]";
    os << ";\n";
  }
  for (std::size_t i = 0; i < initial.size(); ++i) {
    os << "  __start" << i << " -> q" << initial[i] << ";\n";
  }
}

}  // namespace

std::string to_dot(const Dfa& d, const Alphabet& sigma, const std::string& name) {
  std::ostringstream os;
  std::vector<State> init;
  if (d.state_count() > 0) init.push_back(d.initial());
  dot_header(os, name, d.state_count(), init, [&d](State q) { return d.is_accepting(q); });
  for (State q = 0; static_cast<std::size_t>(q) < d.state_count(); ++q) {
    for (Letter a = 0; static_cast<std::size_t>(a) < d.alphabet_size(); ++a) {
      State t = d.next(q, a);
      if (t != kNoState) os << "  q" << q << " -> q" << t << " [label=" << quoted(sigma.name(a)) << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const Nfa& n, const Alphabet& sigma, const std::string& name) {
  std::ostringstream os;
  dot_header(os, name, n.state_count(), n.initial(), [&n](State q) { return n.is_accepting(q); });
  for (State q = 0; static_cast<std::size_t>(q) < n.state_count(); ++q) {
    for (Letter a = 0; static_cast<std::size_t>(a) < n.alphabet_size(); ++a) {
      for (State t : n.next(q, a)) {
        os << "  q" << q << " -> q" << t << " [label=" << quoted(sigma.name(a)) << "];\n";
      }
    }
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const Transducer& t, const Alphabet& sigma, const std::string& name) {
  std::ostringstream os;
  std::vector<State> init;
  if (t.state_count() > 0) init.push_back(t.initial());
  dot_header(os, name, t.state_count(), init, [&t](State q) { return t.is_accepting(q); });
  for (const auto& x : t.transitions()) {
    os << "  q" << x.from << " -> q" << x.to << " [label="
       << quoted(sigma.name(x.in) + ":" + sigma.name(x.out)) << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace delplan
