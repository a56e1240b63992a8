#include "delplan/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "delplan/error.hpp"

namespace delplan {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
  throw ValidationError(path + ": " + reason);
}

void expect_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) fail(path, "unexpected key '" + key + "'");
  }
}

const json& required(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) fail(path, "missing required key '" + key + "'");
  return j.at(key);
}

std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

bool is_formula_identifier(const std::string& s) {
  if (s.empty() || s == "true" || s == "false") return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool is_letter_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

std::vector<std::string> name_list(const json& j, const std::string& path, bool formula_names) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    std::string name = string_at(j[i], p);
    if (formula_names ? !is_formula_identifier(name) : !is_letter_name(name)) {
      fail(p, "invalid name '" + name + "'");
    }
    if (!seen.insert(name).second) fail(p, "duplicate name '" + name + "'");
    out.push_back(std::move(name));
  }
  return out;
}

Formula formula_at(const json& j, const std::string& path, const Vocabulary& vocab) {
  std::string text = string_at(j, path);
  try {
    return parse_formula(text, vocab.ap_set(), vocab.agent_set());
  } catch (const ParseError& e) {
    fail(path, std::string("in formula \"") + text + "\": " + e.what());
  }
}

std::vector<Relation> relations_at(const json* j, const std::string& path, const Vocabulary& vocab,
                                   const std::vector<std::string>& names, const char* kind) {
  std::map<std::string, int> ids;
  for (std::size_t k = 0; k < names.size(); ++k) ids.emplace(names[k], static_cast<int>(k));
  std::vector<std::vector<std::pair<int, int>>> pairs(vocab.agents().size());
  if (j != nullptr) {
    if (!j->is_object()) fail(path, "expected an object keyed by agent");
    for (const auto& [agent, list] : j->items()) {
      std::string ap = path + "." + agent;
      if (!vocab.has_agent(agent)) fail(ap, "unknown agent '" + agent + "'");
      if (!list.is_array()) fail(ap, "expected an array of pairs");
      for (std::size_t k = 0; k < list.size(); ++k) {
        std::string pp = ap + "[" + std::to_string(k) + "]";
        if (!list[k].is_array() || list[k].size() != 2) fail(pp, "expected a pair");
        int ends[2];
        for (int side = 0; side < 2; ++side) {
          std::string ep = pp + "[" + std::to_string(side) + "]";
          std::string id = string_at(list[k][side], ep);
          auto it = ids.find(id);
          if (it == ids.end()) fail(ep, std::string("unknown ") + kind + " '" + id + "'");
          ends[side] = it->second;
        }
        pairs[vocab.agent_index(agent)].emplace_back(ends[0], ends[1]);
      }
    }
  }
  std::vector<Relation> out;
  for (const auto& ps : pairs) out.push_back(make_relation(names.size(), ps));
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("$: invalid JSON: ") + e.what());
  }
  expect_keys(root, "$", {"agents", "ap", "model", "events", "allowed", "goal"});
  Vocabulary vocab(name_list(required(root, "$", "agents"), "$.agents", true),
                   name_list(required(root, "$", "ap"), "$.ap", true));

  Scenario s;
  // Model.
  const json& model = required(root, "$", "model");
  expect_keys(model, "$.model", {"worlds", "relations", "point"});
  const json& worlds = required(model, "$.model", "worlds");
  if (!worlds.is_array() || worlds.empty()) fail("$.model.worlds", "expected a non-empty array");
  s.model.vocab = vocab;
  std::set<std::string> letters;
  for (std::size_t w = 0; w < worlds.size(); ++w) {
    std::string wp = "$.model.worlds[" + std::to_string(w) + "]";
    expect_keys(worlds[w], wp, {"id", "val"});
    std::string id = string_at(required(worlds[w], wp, "id"), wp + ".id");
    if (!is_letter_name(id)) fail(wp + ".id", "invalid name '" + id + "'");
    if (!letters.insert(id).second) fail(wp + ".id", "duplicate id '" + id + "'");
    PropSet v = 0;
    if (worlds[w].contains("val")) {
      const json& val = worlds[w]["val"];
      if (!val.is_array()) fail(wp + ".val", "expected an array of propositions");
      for (std::size_t k = 0; k < val.size(); ++k) {
        std::string vp = wp + ".val[" + std::to_string(k) + "]";
        std::string p = string_at(val[k], vp);
        if (!vocab.has_ap(p)) fail(vp, "unknown proposition '" + p + "'");
        v |= PropSet{1} << vocab.ap_index(p);
      }
    }
    s.model.worlds.push_back(std::move(id));
    s.model.valuation.push_back(v);
  }
  s.model.relations = relations_at(model.contains("relations") ? &model["relations"] : nullptr,
                                   "$.model.relations", vocab, s.model.worlds, "world");
  if (model.contains("point")) {
    std::string point = string_at(model["point"], "$.model.point");
    auto it = std::find(s.model.worlds.begin(), s.model.worlds.end(), point);
    if (it == s.model.worlds.end()) fail("$.model.point", "unknown world '" + point + "'");
    s.model.point = static_cast<int>(it - s.model.worlds.begin());
  }

  // Events.
  s.events.vocab = vocab;
  const json* event_relations = nullptr;
  if (root.contains("events")) {
    const json& events = root["events"];
    expect_keys(events, "$.events", {"events", "relations"});
    const json& list = required(events, "$.events", "events");
    if (!list.is_array()) fail("$.events.events", "expected an array");
    for (std::size_t e = 0; e < list.size(); ++e) {
      std::string ep = "$.events.events[" + std::to_string(e) + "]";
      expect_keys(list[e], ep, {"id", "pre", "post"});
      std::string id = string_at(required(list[e], ep, "id"), ep + ".id");
      if (!is_letter_name(id)) fail(ep + ".id", "invalid name '" + id + "'");
      if (!letters.insert(id).second) fail(ep + ".id", "duplicate id '" + id + "'");
      Formula pre = list[e].contains("pre") ? formula_at(list[e]["pre"], ep + ".pre", vocab)
                                            : Formula::top();
      if (!is_propositional(pre)) {
        fail(ep + ".pre", "non-propositional precondition \"" + to_string(pre) +
                              "\": only propositional event models are supported");
      }
      std::vector<Formula> post;
      for (const auto& p : vocab.ap()) post.push_back(Formula::atom(p));
      if (list[e].contains("post")) {
        const json& pj = list[e]["post"];
        if (!pj.is_object()) fail(ep + ".post", "expected an object keyed by proposition");
        for (const auto& [p, f] : pj.items()) {
          std::string pp = ep + ".post." + p;
          if (!vocab.has_ap(p)) fail(pp, "unknown proposition '" + p + "'");
          Formula g = formula_at(f, pp, vocab);
          if (!is_propositional(g)) {
            fail(pp, "non-propositional postcondition \"" + to_string(g) +
                         "\": only propositional event models are supported");
          }
          post[vocab.ap_index(p)] = g;
        }
      }
      s.events.events.push_back(std::move(id));
      s.events.pre.push_back(std::move(pre));
      s.events.post.push_back(std::move(post));
    }
    if (events.contains("relations")) event_relations = &events["relations"];
  }
  s.events.relations =
      relations_at(event_relations, "$.events.relations", vocab, s.events.events, "event");

  if (root.contains("allowed")) {
    auto allowed = name_list(root["allowed"], "$.allowed", false);
    for (std::size_t k = 0; k < allowed.size(); ++k) {
      if (std::find(s.events.events.begin(), s.events.events.end(), allowed[k]) ==
          s.events.events.end()) {
        fail("$.allowed[" + std::to_string(k) + "]", "unknown event '" + allowed[k] + "'");
      }
    }
    s.allowed = std::move(allowed);
  }
  if (root.contains("goal")) {
    std::string goal = string_at(root["goal"], "$.goal");
    formula_at(root["goal"], "$.goal", vocab);
    s.goal = std::move(goal);
  }

  validate(s.model);
  validate(s.events);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string save_scenario(const Scenario& s) {
  const auto& vocab = s.model.vocab;
  json root;
  root["agents"] = vocab.agents();
  root["ap"] = vocab.ap();

  auto relations = [&vocab](const std::vector<Relation>& rels, const std::vector<std::string>& names) {
    json out = json::object();
    for (std::size_t i = 0; i < rels.size(); ++i) {
      json pairs = json::array();
      for (std::size_t k = 0; k < names.size(); ++k) {
        for (int t : rels[i][k]) pairs.push_back({names[k], names[t]});
      }
      out[vocab.agents()[i]] = pairs;
    }
    return out;
  };

  json worlds = json::array();
  for (std::size_t w = 0; w < s.model.worlds.size(); ++w) {
    json val = json::array();
    for (std::size_t p = 0; p < vocab.ap().size(); ++p) {
      if ((s.model.valuation[w] >> p) & 1U) val.push_back(vocab.ap()[p]);
    }
    worlds.push_back({{"id", s.model.worlds[w]}, {"val", val}});
  }
  root["model"] = {{"worlds", worlds}, {"relations", relations(s.model.relations, s.model.worlds)}};
  if (s.model.point) root["model"]["point"] = s.model.worlds[*s.model.point];

  json events = json::array();
  for (std::size_t e = 0; e < s.events.events.size(); ++e) {
    json post = json::object();
    for (std::size_t p = 0; p < vocab.ap().size(); ++p) {
      const Formula& f = s.events.post[e][p];
      if (f != Formula::atom(vocab.ap()[p])) post[vocab.ap()[p]] = to_string(f);
    }
    events.push_back({{"id", s.events.events[e]}, {"pre", to_string(s.events.pre[e])}, {"post", post}});
  }
  root["events"] = {{"events", events}, {"relations", relations(s.events.relations, s.events.events)}};
  if (s.allowed) root["allowed"] = *s.allowed;
  if (s.goal) root["goal"] = *s.goal;
  return root.dump(2) + "\n";
}

PlanningInstance planning_instance(const Scenario& s, const std::optional<std::string>& goal) {
  PlanningInstance inst;
  inst.model = s.model;
  inst.events = s.events;
  const auto text = goal ? goal : s.goal;
  if (!text) throw ValidationError("no goal: pass one or add \"goal\" to the scenario");
  inst.goal = parse_formula(*text, s.model.vocab.ap_set(), s.model.vocab.agent_set());
  if (s.allowed) {
    for (const auto& name : *s.allowed) inst.allowed.push_back(s.events.event_index(name));
  } else {
    for (std::size_t e = 0; e < s.events.events.size(); ++e) inst.allowed.push_back(static_cast<int>(e));
  }
  return inst;
}

}  // namespace delplan
