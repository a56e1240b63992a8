#include "delplan/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "delplan/automata.hpp"
#include "delplan/del.hpp"
#include "delplan/error.hpp"
#include "delplan/formula.hpp"
#include "delplan/planner.hpp"
#include "delplan/protocol.hpp"
#include "delplan/regular_structure.hpp"
#include "delplan/sat_compiler.hpp"
#include "delplan/scenario.hpp"

namespace delplan {

namespace {

struct Budgets {
  std::size_t max_states = kDefaultMaxStates;
  std::size_t max_depth = 64;
  std::size_t max_plans = 100;
  std::size_t max_len = 6;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(path.string() + ": cannot write file");
  out << text;
}

std::filesystem::path output_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (!std::filesystem::is_directory(p)) throw ValidationError(dir + ": cannot create directory");
  return p;
}

std::string valuation_text(PropSet v, const Vocabulary& vocab) {
  std::string s;
  for (std::size_t p = 0; p < vocab.ap().size(); ++p) {
    if (!((v >> p) & 1U)) continue;
    if (!s.empty()) s += ',';
    s += vocab.ap()[p];
  }
  return "{" + s + "}";
}

void print_model(const EpistemicModel& m, std::ostream& out) {
  out << "worlds " << m.world_count() << '\n';
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    out << m.worlds[w] << '\t' << valuation_text(m.valuation[w], m.vocab) << '\n';
  }
  for (std::size_t i = 0; i < m.relations.size(); ++i) {
    out << "relation " << m.vocab.agents()[i] << ' ' << edge_count(m.relations[i]) << '\n';
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      for (int t : m.relations[i][w]) out << m.worlds[w] << '\t' << m.worlds[t] << '\n';
    }
  }
}

std::string plan_text(const Word& plan, const Alphabet& events) {
  return plan.empty() ? "(empty)" : events.render(plan);
}

std::size_t edges_of(const EpistemicModel& m) { return model_size(m); }

int cmd_check(const Scenario& s, const std::string& formula, const std::optional<std::string>& world,
              std::ostream& out) {
  const auto& vocab = s.model.vocab;
  Formula f = parse_formula(formula, vocab.ap_set(), vocab.agent_set());
  std::vector<int> worlds;
  if (world) {
    worlds.push_back(s.model.world_index(*world));
  } else {
    for (std::size_t w = 0; w < s.model.world_count(); ++w) worlds.push_back(static_cast<int>(w));
  }
  std::vector<bool> ext = extension(s.model, f);
  bool all = true;
  for (int w : worlds) {
    out << s.model.worlds[w] << '\t' << (ext[w] ? "true" : "false") << '\n';
    all = all && ext[w];
  }
  return all ? kExitOk : kExitNegative;
}

int cmd_product(const Scenario& s, std::size_t n, const Budgets& b, std::ostream& out) {
  IterateLimits limits{.max_worlds = b.max_states, .max_depth = b.max_depth};
  IteratedModel it = iterate(s.model, s.events, n, limits);
  print_model(it.model, out);
  return kExitOk;
}

int cmd_compile(const Scenario& s, const std::optional<std::string>& dot_dir,
                const std::optional<std::string>& formula, const std::optional<std::string>& sat_dir,
                const Budgets& b, std::ostream& out) {
  RegularRepresentation rep = build_representation(s.model, s.events);
  out << size_report(rep);
  if (dot_dir) {
    auto dir = output_dir(*dot_dir);
    for (const auto& [stem, dot] : dot_exports(rep)) write_file(dir / (stem + ".dot"), dot);
  }
  if (!formula) return kExitOk;
  const auto& vocab = s.model.vocab;
  Formula f = parse_formula(*formula, vocab.ap_set(), vocab.agent_set());
  SatCompiler compiler(rep, b.max_states);
  const Dfa& sat = compiler.compile(f);
  out << "formula: " << to_string(f) << '\n';
  out << "sat automaton: " << sat.state_count() << " states, " << sat.transition_count()
      << " transitions\n";
  out << format_blowup(blowup_report(f, compiler));
  if (sat_dir) {
    auto dir = output_dir(*sat_dir);
    std::ostringstream index;
    index << "file\tdepth\tformula\n";
    const auto& entries = compiler.entries();
    for (std::size_t k = 0; k < entries.size(); ++k) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "sat_%02zu", k);
      write_file(dir / (std::string(stem) + ".dot"), to_dot(entries[k].dfa, rep.sigma, stem));
      index << stem << ".dot\t" << entries[k].depth << '\t' << to_string(entries[k].formula) << '\n';
    }
    write_file(dir / "index.tsv", index.str());
  }
  return kExitOk;
}

int cmd_plan(const Scenario& s, const std::optional<std::string>& goal, bool enumerate,
             const std::optional<std::string>& dot_file, const std::optional<std::string>& json_file,
             const Budgets& b, std::ostream& out) {
  PlanningInstance inst = planning_instance(s, goal);
  PlanAutomaton plans = synthesize_plans(inst, {.max_states = b.max_states});
  out << "goal: " << to_string(inst.goal) << '\n';
  out << "plan automaton: " << plans.dfa.state_count() << " states, "
      << plans.dfa.transition_count() << " transitions\n";
  auto shortest = shortest_plan(plans);
  out << "shortest plan: " << (shortest ? plan_text(*shortest, plans.events) : "none") << '\n';
  if (enumerate) {
    PlanList list = enumerate_plans(plans, b.max_len, b.max_plans);
    out << "plans up to length " << b.max_len << ": " << list.plans.size()
        << (list.truncated ? " (truncated)" : "") << '\n';
    for (const auto& p : list.plans) out << "  " << plan_text(p, plans.events) << '\n';
  }
  if (dot_file) write_file(*dot_file, to_dot(plans.dfa, plans.events, "plans"));
  if (json_file) write_file(*json_file, plan_automaton_json(plans));
  return shortest ? kExitOk : kExitNegative;
}

int cmd_synth(const Scenario& s, const std::string& goal_text, const std::optional<std::string>& serial,
              const std::optional<std::string>& world, std::size_t depth,
              const std::optional<std::string>& dot_file, const std::optional<std::string>& json_file,
              const Budgets& b, std::ostream& out) {
  const auto& vocab = s.model.vocab;
  GoalFormula goal = parse_goal(goal_text, vocab.ap_set(), vocab.agent_set());
  int root;
  if (world) {
    root = s.model.world_index(*world);
  } else if (s.model.point) {
    root = *s.model.point;
  } else {
    throw ValidationError("synth: the scenario has no point; pass --world");
  }
  ProtocolOptions options;
  if (serial) options.serial = *serial == "on";

  RegularRepresentation rep = build_representation(s.model, s.events);
  SatCompiler compiler(rep, b.max_states);
  out << "goal: " << to_string(goal) << '\n';
  out << "root: " << s.model.worlds[root] << '\n';
  out << "serial: " << (options.serial.value_or(default_seriality(goal.head)) ? "on" : "off") << '\n';
  auto protocol = synthesize_protocol(rep, compiler, root, goal, options);
  if (!protocol) {
    out << "no protocol\n";
    return kExitNegative;
  }
  validate_protocol(*protocol, rep);
  out << "protocol automaton: " << protocol->dfa.state_count() << " states, "
      << protocol->dfa.transition_count() << " transitions\n";
  out << "check at depth " << depth << ": "
      << (check_protocol(*protocol, goal, compiler, depth) ? "ok" : "FAILED") << '\n';
  out << "histories up to " << depth << " events:\n";
  for (const auto& w : protocol_words(*protocol, depth)) out << "  " << rep.sigma.render(w) << '\n';
  if (dot_file) write_file(*dot_file, to_dot(protocol->dfa, rep.sigma, "protocol"));
  if (json_file) write_file(*json_file, protocol_json(*protocol, rep.sigma, depth));
  return kExitOk;
}

int cmd_explore(const Scenario& s, std::size_t depth, bool verify, const Budgets& b,
                std::ostream& out) {
  IterateLimits limits{.max_worlds = b.max_states, .max_depth = b.max_depth};
  if (depth > limits.max_depth) {
    throw BudgetExceeded("explore: depth " + std::to_string(depth) + " exceeds --max-depth " +
                         std::to_string(limits.max_depth));
  }
  EpistemicModel level = s.model;
  level.point.reset();
  for (std::size_t n = 0; n <= depth; ++n) {
    if (n > 0) {
      level = product(level, s.events);
      if (level.world_count() > limits.max_worlds) {
        throw BudgetExceeded("explore: level " + std::to_string(n) + " has " +
                             std::to_string(level.world_count()) + " worlds, over the cap");
      }
    }
    out << "level " << n << "\tworlds " << level.world_count() << "\tedges " << edges_of(level)
        << '\n';
  }
  if (!verify) return kExitOk;
  RegularRepresentation rep = build_representation(s.model, s.events);
  VerifyReport report = verify_against_oracle(rep, s.model, s.events, depth, limits);
  if (report.ok) {
    out << "verify: ok\n";
    return kExitOk;
  }
  out << "verify: mismatch at level " << report.level << ": " << report.detail << '\n';
  return kExitNegative;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Epistemic planning and protocol synthesis over DEL models", "delplan"};
  app.require_subcommand(1);
  Budgets budgets;
  app.add_option("--max-states", budgets.max_states, "State cap for automata and iterated models")
      ->capture_default_str();
  app.add_option("--max-depth", budgets.max_depth, "Cap on product iteration depth")
      ->capture_default_str();
  app.add_option("--max-plans", budgets.max_plans, "Cap on enumerated plans")->capture_default_str();
  app.add_option("--max-len", budgets.max_len, "Longest enumerated plan")->capture_default_str();

  std::string file;
  auto scenario_arg = [&file](CLI::App* sub) {
    sub->add_option("file", file, "Scenario JSON")->required();
  };

  auto* check = app.add_subcommand("check", "Model-check a formula at the worlds of the model");
  scenario_arg(check);
  std::string formula;
  std::optional<std::string> world;
  check->add_option("--formula", formula, "Epistemic formula")->required();
  check->add_option("--world", world, "Only this world");

  auto* prod = app.add_subcommand("product", "Print the n-fold update product");
  scenario_arg(prod);
  std::size_t n = 1;
  prod->add_option("-n", n, "Number of products")->capture_default_str();

  auto* compile = app.add_subcommand("compile", "Build the automata representation");
  scenario_arg(compile);
  std::optional<std::string> dot_dir, sat_formula, sat_dir;
  compile->add_option("--dot", dot_dir, "Write one DOT file per automaton into DIR");
  compile->add_option("--formula", sat_formula, "Also compile this formula");
  compile->add_option("--emit-sat-dot", sat_dir, "Write the compiled subformula automata into DIR")
      ->needs(compile->get_option("--formula"));

  auto* plan = app.add_subcommand("plan", "Synthesize the plan automaton");
  scenario_arg(plan);
  std::optional<std::string> goal;
  bool enumerate = false;
  std::optional<std::string> dot_file, json_file;
  plan->add_option("--goal", goal, "Goal formula (default: the scenario's goal)");
  plan->add_flag("--enumerate", enumerate, "List plans by length, then declaration order");
  plan->add_option("--max-len", budgets.max_len, "Longest enumerated plan");
  plan->add_option("--max-plans", budgets.max_plans, "Cap on enumerated plans");
  plan->add_option("--dot", dot_file, "Write the plan automaton as DOT");
  plan->add_option("--json", json_file, "Write the plan automaton as JSON");

  auto* synth = app.add_subcommand("synth", "Synthesize a protocol for a temporal goal");
  scenario_arg(synth);
  std::string goal_text;
  std::optional<std::string> serial;
  std::size_t synth_depth = 5;
  synth->add_option("--goal", goal_text, "NOW/AG/AF/EF/EG followed by a formula")->required();
  synth->add_option("--serial", serial, "Require every node to have a child")
      ->check(CLI::IsMember({"on", "off"}));
  synth->add_option("--world", world, "Root world (default: the model's point)");
  synth->add_option("--depth", synth_depth, "Check and print depth")->capture_default_str();
  synth->add_option("--dot", dot_file, "Write the protocol automaton as DOT");
  synth->add_option("--json", json_file, "Write protocol histories as JSON");

  auto* explore = app.add_subcommand("explore", "Per-level world and edge counts");
  scenario_arg(explore);
  std::size_t depth = 0;
  bool verify = false;
  explore->add_option("--depth", depth, "Last level")->required();
  explore->add_flag("--verify", verify, "Compare the automata with the explicit products");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Scenario s = load_scenario(file);
    if (check->parsed()) return cmd_check(s, formula, world, out);
    if (prod->parsed()) return cmd_product(s, n, budgets, out);
    if (compile->parsed()) return cmd_compile(s, dot_dir, sat_formula, sat_dir, budgets, out);
    if (plan->parsed()) return cmd_plan(s, goal, enumerate, dot_file, json_file, budgets, out);
    if (synth->parsed()) {
      return cmd_synth(s, goal_text, serial, world, synth_depth, dot_file, json_file, budgets, out);
    }
    if (explore->parsed()) return cmd_explore(s, depth, verify, budgets, out);
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace delplan
