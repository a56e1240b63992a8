// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "delplan/cli.hpp"
#include "delplan/planner.hpp"
#include "delplan/protocol.hpp"
#include "delplan/regular_structure.hpp"
#include "delplan/sat_compiler.hpp"
#include "delplan/scenario.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace delplan;
using namespace delplan::testing;

namespace {

const std::string kData = DELPLAN_TEST_DATA;

constexpr int kStructureInstances = 200;
constexpr std::size_t kStructureDepth = 4;
constexpr double kSizeConstant = 4.0;
constexpr int kSatInstances = 100;
constexpr int kSatFormulas = 5;
constexpr std::size_t kSatLevel = 4;
constexpr int kPlannerInstances = 120;
constexpr std::size_t kPlanLength = 4;
constexpr int kProtocolInstances = 120;
constexpr std::size_t kProtocolDepth = 5;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::vector<RandomPair> structure_suite() {
  Rng rng(1001);
  std::vector<RandomPair> out;
  for (int i = 0; i < kStructureInstances; ++i) out.push_back(random_pair(rng));
  return out;
}

Outcome regular_structure_correct(const std::vector<RandomPair>& suite) {
  auto start = std::chrono::steady_clock::now();
  int ok = 0;
  std::string first;
  for (const auto& pair : suite) {
    RegularRepresentation rep = build_representation(pair.model, pair.events);
    VerifyReport report = verify_against_oracle(rep, pair.model, pair.events, kStructureDepth);
    if (report.ok) {
      ++ok;
    } else if (first.empty()) {
      first = "; first mismatch: " + report.detail;
    }
  }
  double t = seconds_since(start);
  bool pass = ok == static_cast<int>(suite.size()) && t < 60.0;
  return {pass, fmt("%d/%zu instances ok at depth %zu in %.2f s (limit 60 s)", ok, suite.size(),
                    kStructureDepth, t) + first};
}

Outcome size_bounds(const std::vector<RandomPair>& suite) {
  int domain_violations = 0, envelope_violations = 0;
  double worst = 0.0;
  for (const auto& pair : suite) {
    RegularRepresentation rep = build_representation(pair.model, pair.events);
    const std::size_t nap = pair.model.vocab.ap().size();
    const double power = static_cast<double>(std::size_t{1} << nap);
    if (rep.domain.dfa.state_count() > (std::size_t{1} << nap) + 1) ++domain_violations;
    double base = static_cast<double>(std::max<std::size_t>(
        1, model_size(pair.model) + event_model_size(pair.events)));
    double ratio = static_cast<double>(rep.size()) / (power * base * base * base);
    worst = std::max(worst, ratio);
    if (ratio > kSizeConstant) ++envelope_violations;
  }
  return {domain_violations == 0 && envelope_violations == 0,
          fmt("domain > 2^|AP|+1 in %d instances; size > c*2^|AP|*(|M|+|E|)^3 with c=%.1f in %d "
              "instances; largest ratio %.4f",
              domain_violations, kSizeConstant, envelope_violations, worst)};
}

Outcome sat_equivalence() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(1003);
  std::size_t checks = 0, mismatches = 0;
  for (int i = 0; i < kSatInstances; ++i) {
    RandomPair pair = random_pair(rng);
    RegularRepresentation rep = build_representation(pair.model, pair.events);
    SatCompiler sat(rep);
    auto levels = naive_forest(pair.model, pair.events, kSatLevel);
    for (int k = 0; k < kSatFormulas; ++k) {
      Formula f = random_formula(rng, pair.model.vocab, 2, rng.uniform(2, 9));
      for (const auto& lvl : levels) {
        for (std::size_t x = 0; x < lvl.histories.size(); ++x) {
          Word w = to_word(lvl.histories[x], pair.model.worlds.size());
          bool expected = naive_holds(lvl, pair.model.vocab, static_cast<int>(x), f);
          if (sat.holds_at(f, w) != expected) ++mismatches;
          ++checks;
        }
      }
    }
  }
  double t = seconds_since(start);
  return {mismatches == 0 && t < 120.0,
          fmt("%zu mismatches over %zu (history, formula) checks, levels <= %zu, Know depth <= 2, "
              "%.2f s (limit 120 s)",
              mismatches, checks, kSatLevel, t)};
}

Outcome planner_sound_complete() {
  Rng rng(1004);
  std::size_t unsound = 0, missing = 0, plans_seen = 0;
  for (int i = 0; i < kPlannerInstances; ++i) {
    PlanningInstance inst = random_instance(rng, {}, 2);
    PlanAutomaton plans = synthesize_plans(inst);
    std::vector<Word> oracle = brute_force_plans(inst, kPlanLength);
    std::set<Word> oracle_set(oracle.begin(), oracle.end());
    PlanList listed = enumerate_plans(plans, kPlanLength, 1'000'000);
    for (const auto& p : listed.plans) {
      if (!oracle_set.contains(p)) ++unsound;
    }
    for (const auto& p : oracle) {
      if (!plans.dfa.accepts(p)) ++missing;
    }
    plans_seen += oracle.size();
  }

  // Emptiness work per transition on chains of growing size.
  std::vector<double> work;
  for (std::size_t n : {1000U, 10000U, 100000U}) {
    Dfa d(2);
    for (std::size_t q = 1; q <= n; ++q) d.add_state(q == n);
    for (std::size_t q = 0; q < n; ++q) {
      d.set_transition(static_cast<State>(q), 0, static_cast<State>(q + 1));
      d.set_transition(static_cast<State>(q), 1, static_cast<State>(q / 2));
    }
    EmptinessStats stats;
    is_empty(d, stats);
    work.push_back(static_cast<double>(stats.transitions_scanned + stats.states_visited) /
                   static_cast<double>(d.transition_count()));
  }
  bool linear = work.back() <= 2.0 && work.back() <= work.front() * 1.5;
  return {unsound == 0 && missing == 0 && linear,
          fmt("%d instances, %zu oracle plans of length <= %zu: %zu unsound, %zu missed; emptiness "
              "work per transition %.3f / %.3f / %.3f",
              kPlannerInstances, plans_seen, kPlanLength, unsound, missing, work[0], work[1], work[2])};
}

Outcome plan_goldens() {
  struct Case {
    std::vector<std::string> args;
    std::string golden;
    int code;
  };
  const std::string m0 = kData + "/m0_e0.json";
  const std::vector<Case> cases = {
      {{"plan", m0}, "plan_kap.txt", 0},
      {{"plan", m0, "--goal", "p"}, "plan_now.txt", 0},
      {{"plan", m0, "--goal", "false"}, "plan_false.txt", 1},
  };
  int ok = 0;
  std::string bad;
  for (const auto& c : cases) {
    std::ostringstream out, err;
    int code = run_cli(c.args, out, err);
    std::ifstream in(kData + "/golden/" + c.golden, std::ios::binary);
    std::ostringstream expected;
    expected << in.rdbuf();
    if (code == c.code && out.str() == expected.str()) {
      ++ok;
    } else {
      bad += " " + c.golden;
    }
  }
  PlanningInstance inst = planning_instance(load_scenario(m0));
  auto shortest = shortest_plan(inst);
  bool e1 = shortest && Alphabet(inst.events.events).render(*shortest) == "e1";
  return {ok == static_cast<int>(cases.size()) && e1,
          fmt("%d/%zu goldens byte-identical; shortest plan for K[a] p is %s", ok, cases.size(),
              e1 ? "e1" : "not e1") + (bad.empty() ? "" : "; differing:" + bad)};
}

Outcome protocol_fragment() {
  Rng rng(1006);
  const TemporalHead heads[] = {TemporalHead::Now, TemporalHead::AG, TemporalHead::AF,
                                TemporalHead::EF, TemporalHead::EG};
  std::size_t emitted = 0, failed_checks = 0, disagreements = 0, ag_false = 0, mutations = 0,
              surviving_mutants = 0;
  for (int i = 0; i < kProtocolInstances; ++i) {
    PlanningInstance inst = random_instance(rng, {}, 1);
    RegularRepresentation rep = build_representation(inst.model, inst.events);
    SatCompiler sat(rep);
    const int w = *inst.model.point;

    if (synthesize_protocol(rep, sat, w, {TemporalHead::AG, Formula::bottom()})) ++ag_false;

    PlanningInstance all = inst;
    all.allowed.clear();
    for (std::size_t e = 0; e < inst.events.event_count(); ++e) all.allowed.push_back(static_cast<int>(e));
    bool planner = decide(all);

    for (TemporalHead head : heads) {
      GoalFormula goal{head, inst.goal};
      auto p = synthesize_protocol(rep, sat, w, goal);
      if (head == TemporalHead::EF && p.has_value() != planner) ++disagreements;
      if (!p) continue;
      ++emitted;
      if (!check_protocol(*p, goal, sat, kProtocolDepth)) ++failed_checks;
      if (head != TemporalHead::EF || sat.holds_at(inst.goal, Word{w})) continue;
      // Delete the witness branch below the root.
      ProtocolAutomaton cut = *p;
      State root = cut.dfa.next(cut.dfa.initial(), w);
      for (Letter a = 0; static_cast<std::size_t>(a) < cut.dfa.alphabet_size(); ++a) {
        cut.dfa.set_transition(root, a, kNoState);
      }
      ++mutations;
      if (check_protocol(cut, goal, sat, kProtocolDepth)) ++surviving_mutants;
    }
  }
  bool pass = failed_checks == 0 && disagreements == 0 && ag_false == 0 && surviving_mutants == 0 &&
              mutations > 0;
  return {pass, fmt("%zu protocols emitted, %zu fail check at depth %zu; EF/planner disagreements "
                    "%zu; AG false synthesized %zu times; %zu/%zu branch-deletion mutants still pass",
                    emitted, failed_checks, kProtocolDepth, disagreements, ag_false,
                    surviving_mutants, mutations)};
}

Outcome blowup_observable() {
  Scenario s = load_scenario(kData + "/two_agents.json");
  RegularRepresentation rep = build_representation(s.model, s.events);
  SatCompiler sat(rep);
  Formula f = parse_formula("K[a] K[b] p", s.model.vocab.ap_set(), s.model.vocab.agent_set());
  auto report = blowup_report(f, sat);
  bool monotone = report.size() == 3;
  std::string counts;
  for (std::size_t k = 0; k < report.size(); ++k) {
    if (k > 0 && report[k].raw_states < report[k - 1].raw_states) monotone = false;
    counts += (k ? " " : "") + std::to_string(report[k].raw_states);
  }
  return {monotone, "K[a] K[b] p on two_agents.json, raw states per level: " + counts};
}

}  // namespace

int main() {
  std::printf("seed %llu\n", static_cast<unsigned long long>(base_seed()));
  const auto suite = structure_suite();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"regular-structure correctness", [&] { return regular_structure_correct(suite); }},
      {"representation size bounds", [&] { return size_bounds(suite); }},
      {"sat-compiler oracle equivalence", sat_equivalence},
      {"planner soundness and bounded completeness", planner_sound_complete},
      {"plan automaton goldens", plan_goldens},
      {"protocol fragment", protocol_fragment},
      {"blowup observability", blowup_observable},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
