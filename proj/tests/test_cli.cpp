#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "delplan/cli.hpp"
#include "delplan/del.hpp"
#include "delplan/scenario.hpp"

using namespace delplan;

namespace {

const std::string kData = DELPLAN_TEST_DATA;
const std::string kM0 = kData + "/m0_e0.json";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string golden(const std::string& name) { return slurp(kData + "/golden/" + name); }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "delplan_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("plan goldens") {
  Run kap = run({"plan", kM0});
  CHECK(kap.code == 0);
  CHECK(kap.out == golden("plan_kap.txt"));
  CHECK(kap.out.find("shortest plan: e1\n") != std::string::npos);

  Run now = run({"plan", kM0, "--goal", "p"});
  CHECK(now.code == 0);
  CHECK(now.out == golden("plan_now.txt"));

  Run no = run({"plan", kM0, "--goal", "false"});
  CHECK(no.code == 1);
  CHECK(no.out == golden("plan_false.txt"));

  Run all = run({"plan", kData + "/m0_e0_public.json", "--enumerate", "--max-len", "2"});
  CHECK(all.code == 0);
  CHECK(all.out == golden("plan_true_e1.txt"));

  auto json = scratch("plan.json");
  auto dot = scratch("plan.dot");
  CHECK(run({"plan", kM0, "--json", json.string(), "--dot", dot.string()}).code == 0);
  CHECK(slurp(json.string()) == golden("plan_kap.json"));
  CHECK(slurp(dot.string()) == golden("plan_kap.dot"));
}

TEST_CASE("other subcommands") {
  Run check = run({"check", kM0, "--formula", "p | K[a] p"});
  CHECK(check.code == 1);
  CHECK(check.out == golden("check.txt"));
  Run one = run({"check", kM0, "--formula", "p", "--world", "w1"});
  CHECK(one.code == 0);
  CHECK(one.out == "w1\ttrue\n");

  Run prod = run({"product", kM0, "-n", "1"});
  CHECK(prod.code == 0);
  CHECK(prod.out == golden("product_1.txt"));

  Run compile = run({"compile", kM0, "--formula", "K[a] ~K[a] p"});
  CHECK(compile.code == 0);
  CHECK(compile.out == golden("compile.txt"));

  auto dots = scratch("dots");
  auto sats = scratch("sats");
  CHECK(run({"compile", kM0, "--dot", dots.string(), "--formula", "K[a] p", "--emit-sat-dot", sats.string()}).code == 0);
  CHECK(std::filesystem::exists(dots / "domain.dot"));
  CHECK(std::filesystem::exists(dots / "val_p.dot"));
  CHECK(std::filesystem::exists(dots / "rel_a.dot"));
  CHECK(std::filesystem::exists(sats / "sat_00.dot"));
  CHECK(slurp((sats / "index.tsv").string()).rfind("file\tdepth\tformula\n", 0) == 0);

  Run synth = run({"synth", kM0, "--goal", "EF K[a] p", "--json", scratch("synth.json").string()});
  CHECK(synth.code == 0);
  CHECK(synth.out == golden("synth_ef.txt"));
  CHECK(slurp(scratch("synth.json").string()) == golden("synth_ef.json"));
  Run none = run({"synth", kM0, "--goal", "AG false"});
  CHECK(none.code == 1);
  CHECK(none.out.find("no protocol") != std::string::npos);
  CHECK(run({"synth", kM0, "--goal", "AG p", "--serial", "off"}).code == 0);
  CHECK(run({"synth", kM0, "--goal", "AG p", "--serial", "maybe"}).code == 2);
}

TEST_CASE("explore counts match iterate") {
  Run ex = run({"explore", kM0, "--depth", "2", "--verify"});
  CHECK(ex.code == 0);
  CHECK(ex.out == golden("explore_2.txt"));
  Scenario s = load_scenario(kM0);
  s.model.point.reset();
  std::ostringstream expected;
  for (std::size_t n = 0; n <= 2; ++n) {
    IteratedModel it = iterate(s.model, s.events, n);
    expected << "level " << n << "\tworlds " << it.model.world_count() << "\tedges "
             << model_size(it.model) << '\n';
  }
  expected << "verify: ok\n";
  CHECK(ex.out == expected.str());
}

TEST_CASE("exit codes for errors and budgets") {
  CHECK(run({}).code == 2);
  CHECK(run({"plan"}).code == 2);
  CHECK(run({"frobnicate", kM0}).code == 2);
  CHECK(run({"plan", kData + "/missing.json"}).code == 2);
  Run parse = run({"plan", kM0, "--goal", "K[b] p"});
  CHECK(parse.code == 2);
  CHECK(parse.err.find("error:") == 0);
  CHECK(run({"--max-states", "4", "product", kM0, "-n", "3"}).code == 3);
  CHECK(run({"--max-depth", "1", "explore", kM0, "--depth", "3"}).code == 3);
  CHECK(run({"--max-states", "1", "compile", kM0, "--formula", "K[a] p"}).code == 3);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("outputs are byte-identical across runs") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"plan", kM0, "--enumerate"}, {"synth", kM0, "--goal", "AG p"}, {"compile", kM0, "--formula", "K[a] p"}}) {
    CHECK(run(args).out == run(args).out);
  }
}
