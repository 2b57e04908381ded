#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "engine.hpp"
#include "gallery.hpp"
#include "semantics.hpp"

using namespace pwa;
using nlohmann::json;

namespace {

struct RunResult {
  int code;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
RunResult run(const std::string& args) {
  std::string cmd = std::string(PWALAB_PATH) + " " + args + " 2>&1";
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  int status = pclose(f);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data_file(const std::string& name) {
  return std::string(DATA_DIR) + "/" + name;
}

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("pwalab_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("cli accepts: exit codes and witness records") {
  std::string all0 = write_temp("all0.txt", "torus 2 2\n0 0\n0 0\n");
  std::string one1 = write_temp("one1.txt", "torus 2 2\n0 0\n1 0\n");

  RunResult acc = run("accepts " + data_file("ssu.json") + " --torus " + all0);
  CHECK(acc.code == 0);
  CHECK(acc.out.find("accept") == 0);

  RunResult rej = run("accepts " + data_file("ssu.json") + " --torus " + one1);
  CHECK(rej.code == 1);
  CHECK(rej.out.find("reject") == 0);

  std::string broken = write_temp("broken.json", "{ not json");
  CHECK(run("accepts " + broken + " --torus " + all0).code == 3);
  CHECK(run("accepts " + data_file("ssu.json")).code == 2);  // no grid flag
  CHECK(run("frobnicate").code == 2);

  // Witness record: accepting side carries a strategy, rejecting side carries
  // attractor ranks; both are single-line JSON.
  RunResult wit =
      run("accepts " + data_file("ssu.json") + " --torus " + all0 + " --witness");
  REQUIRE(wit.code == 0);
  auto nl = wit.out.find('\n');
  json rec = json::parse(wit.out.substr(nl + 1));
  CHECK(rec.at("verdict") == true);
  CHECK(rec.at("millis") == 0);
  CHECK(rec.at("witness").contains("strategy"));
  CHECK(rec.contains("instance"));

  RunResult wit2 =
      run("accepts " + data_file("ssu.json") + " --torus " + one1 + " --witness");
  REQUIRE(wit2.code == 1);
  json rec2 = json::parse(wit2.out.substr(wit2.out.find('\n') + 1));
  CHECK(rec2.at("witness").contains("attractor"));
  CHECK(!rec2.at("witness").at("attractor").empty());
}

TEST_CASE("cli validate and classify") {
  RunResult ok = run("validate " + data_file("even_runs.json"));
  CHECK(ok.code == 0);
  CHECK(ok.out == "ok\n");

  std::string missing = write_temp(
      "missing.json",
      R"({"alphabet":["0","1"],"states":[{"id":"a","symbol":"0","quant":null}],)"
      R"("edges":[{"from":"a","to":"a","dx":0,"dy":0}],"initial":{"0":"a"}})");
  RunResult bad = run("validate " + missing);
  CHECK(bad.code == 1);
  CHECK(bad.out.find("1") != std::string::npos);

  CHECK(run("classify " + data_file("even_runs.json")).out == "Pi(1)\n");
  CHECK(run("classify " + data_file("ssu.json")).out == "Pi(1)\n");
}

TEST_CASE("cli compare against oracles and itself") {
  RunResult er = run("compare " + data_file("even_runs.json") +
                     " --oracle even_runs --max-torus 3 3");
  CHECK(er.code == 0);
  CHECK(er.out.find("\"equivalent\": true") != std::string::npos);

  RunResult self = run("compare " + data_file("ssu.json") + " " +
                       data_file("ssu.json") + " --max-torus 2 2");
  CHECK(self.code == 0);

  // Disagreement: the walker core alone is not the labyrinth subshift.
  RunResult dis = run("compare " + data_file("cone_labyrinth_core.json") +
                      " --oracle cone_labyrinth --max-torus 2 2");
  CHECK(dis.code == 1);
  CHECK(dis.out.find("\"first\"") != std::string::npos);

  CHECK(run("compare " + data_file("ssu.json") + " --max-torus 2 2").code == 2);
  // even_runs decides tori only.
  CHECK(run("compare " + data_file("even_runs.json") +
            " --oracle even_runs --patterns 2x2")
            .code == 3);
}

TEST_CASE("cli enum is deterministic and parallel-invariant") {
  std::string base = "enum " + data_file("even_runs.json") + " --max-torus 2 2";
  RunResult a = run(base + " --threads 1");
  RunResult b = run(base + " --threads 4");
  RunResult c = run(base + " --threads 4");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(b.out == c.out);

  // One self-contained record per line.
  int lines = 0;
  size_t pos = 0;
  while (true) {
    size_t nl = a.out.find('\n', pos);
    if (nl == std::string::npos) break;
    json rec = json::parse(a.out.substr(pos, nl - pos));
    CHECK(rec.contains("instance"));
    CHECK(rec.at("verdict").is_boolean());
    CHECK(rec.at("millis") == 0);
    lines++;
    pos = nl + 1;
  }
  CHECK(lines == 26);  // tori up to 2x2 over a binary alphabet
}

TEST_CASE("cli render and gallery grids round-trip") {
  RunResult xn = run("gallery grid xn -n 2");
  CHECK(xn.code == 0);
  std::string f = write_temp("xn.txt", xn.out);
  CHECK(run("render " + f).out == xn.out);

  RunResult km = run("gallery grid kari_moore_torus -n 2 -k 1");
  CHECK(km.code == 0);
  CHECK(km.out.find("torus 3 2") == 0);
  std::string kf = write_temp("km.txt", km.out);
  CHECK(run("render " + kf).out == km.out);

  CHECK(run("gallery grid nonsense").code == 3);
}

TEST_CASE("cli gallery list and show") {
  RunResult list = run("gallery list");
  CHECK(list.code == 0);
  CHECK(list.out.find("even_runs") != std::string::npos);
  CHECK(list.out.find("cone_labyrinth") != std::string::npos);

  RunResult show = run("gallery show even_runs");
  CHECK(show.code == 0);
  Automaton a = automaton_from_json(show.out);
  CHECK(a.states.size() == 7);
  CHECK(run("gallery show nope").code == 3);
}

TEST_CASE("cli cover report") {
  RunResult r = run("cover " + data_file("even_runs.json"));
  REQUIRE(r.code == 0);
  json rep = json::parse(r.out);
  // The diagonal edge forces direction normalization first: 7 states grow to
  // 13, so the product alphabet has 2 * 2^13 symbols.
  CHECK(rep.at("base_states") == 13);
  CHECK(rep.at("product_alphabet") == 2 * (1 << 13));

  RunResult e = run("cover " + data_file("even_runs.json") + " --enumerate 2000");
  REQUIRE(e.code == 0);
  json erep = json::parse(e.out);
  CHECK(erep.at("enumerated") == 2000);
  CHECK(erep.at("truncated") == true);
  long long allowed = erep.at("allowed").get<long long>();
  long long forb = 0;
  for (auto& [k, v] : erep.at("clause_counts").items()) forb += v.get<long long>();
  CHECK(allowed + forb == 2000);
  CHECK(erep.at("forbidden").size() == (size_t)forb);
}

TEST_CASE("cli pump") {
  std::string autoFile = write_temp(
      "walker.json",
      R"({"alphabet":["0"],"states":[{"id":"a","symbol":"0","quant":null}],)"
      R"("edges":[{"from":"a","to":"a","dx":1,"dy":0}],"initial":{"0":"a"}})");
  std::string torusFile = write_temp("row.txt", "torus 2 1\n0 0\n");
  std::string branchFile = write_temp(
      "branch.json", R"({"start":{"x":0,"y":0},"state":"a","edges":[0,0]})");

  RunResult r = run("pump " + autoFile + " --torus " + torusFile + " --branch " +
                    branchFile + " --pair 0 --times 3");
  REQUIRE(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep.at("replay").empty());
  CHECK(rep.at("footprint") == 3);
  REQUIRE(!rep.at("pairs").empty());
  CHECK(rep.at("pairs")[0].at("dx") == 1);
  CHECK(rep.at("pumped").at("replay").empty());
  CHECK(rep.at("pumped").at("footprint") == 5);

  CHECK(run("pump " + autoFile + " --torus " + torusFile + " --branch " +
            branchFile + " --pair 99")
            .code == 3);
}

TEST_CASE("cli audit") {
  RunResult r = run("gallery audit");
  REQUIRE(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep.at("relaxed_matches_formula") == true);
  CHECK(rep.at("strict_matches_formula") == false);
  CHECK(rep.at("rows").size() == 7);
}

TEST_CASE("engine: canonical enumeration") {
  CHECK(torus_count(2, 2, 2) == 26);
  std::vector<std::string> seen;
  for (long long i = 0; i < 26; ++i)
    seen.push_back(torus_render(torus_at_index({"0", "1"}, 2, 2, i)));
  std::sort(seen.begin(), seen.end());
  CHECK(std::unique(seen.begin(), seen.end()) == seen.end());

  CHECK(pattern_count(2, 2, 1) == 2 + 4);
  CHECK_THROWS_AS(torus_at_index({"0", "1"}, 2, 2, 26), Error);

  // Enumeration caps guard both engines.
  CompareOptions big;
  big.maxP = big.maxQ = 6;
  CHECK_THROWS_AS(enum_records(even_runs_automaton(), big, false), Error);
}

TEST_CASE("engine: comparisons are reproducible and parallel-invariant") {
  Decider a = automaton_decider(even_runs_automaton(), "even_runs");
  Decider o = oracle_decider("even_runs");
  CompareOptions opt;
  opt.maxP = opt.maxQ = 3;
  opt.emitRecords = true;
  opt.threads = 1;
  CompareResult seq = compare_deciders(a, o, opt);
  opt.threads = 4;
  CompareResult par = compare_deciders(a, o, opt);
  CHECK(seq.checked == par.checked);
  CHECK(!seq.first.has_value());
  CHECK(seq.records == par.records);

  // Seeded sampling is reproducible.
  opt.samples = 40;
  opt.seed = 99;
  CompareResult s1 = compare_deciders(a, o, opt);
  CompareResult s2 = compare_deciders(a, o, opt);
  CHECK(s1.records == s2.records);
  CHECK(s1.checked == 40);
}

TEST_CASE("engine: witness structure") {
  Automaton a = even_runs_automaton();
  Torus t;
  t.p = 3;
  t.q = 1;
  t.grid = {"1", "1", "0"};
  Arena ar = build_arena(a, t);
  WinningSet w = solve(ar);
  json acc = json::parse(witness_json(a, ar, w, true));
  REQUIRE(acc.contains("strategy"));
  for (auto& step : acc.at("strategy")) {
    CHECK(step.contains("cell"));
    CHECK(step.contains("state"));
    CHECK(step.contains("edge"));
  }

  t.grid = {"1", "0", "0"};
  Arena ar2 = build_arena(a, t);
  WinningSet w2 = solve(ar2);
  json rej = json::parse(witness_json(a, ar2, w2, false));
  REQUIRE(rej.contains("attractor"));
  int lastRank = -1;
  for (auto& node : rej.at("attractor")) {
    int rank = node.at("rank").get<int>();
    CHECK(rank >= lastRank);  // sorted by removal order
    lastRank = rank;
  }
}
