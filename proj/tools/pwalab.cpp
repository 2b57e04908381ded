// pwalab: command-line front end for the plane-walking automata library.
// Talks to the library exclusively through the C interface in pwa.h.
//
// Exit codes: 0 accept / equivalent / success, 1 reject / disagreement,
// 2 usage error, 3 invalid input.

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pwa.h"

namespace {

[[noreturn]] void die(const std::string& msg, int code = 3) {
  std::fprintf(stderr, "pwalab: %s\n", msg.c_str());
  std::exit(code);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Checks a C-API status; on failure prints the message and exits 3.
void check(int rc, char* err) {
  if (rc == PWA_OK) return;
  std::string msg = err ? err : "unknown error";
  pwa_free(err);
  die(msg);
}

struct AutomatonHandle {
  pwa_automaton* h = nullptr;
  ~AutomatonHandle() { pwa_automaton_free(h); }
};

struct GridHandle {
  pwa_grid* h = nullptr;
  ~GridHandle() { pwa_grid_free(h); }
};

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { pwa_free(s); }
  std::string str() const { return s ? s : ""; }
};

void load_automaton(const std::string& path, AutomatonHandle& out) {
  char* err = nullptr;
  check(pwa_automaton_parse(read_file(path).c_str(), &out.h, &err), err);
}

void load_grid(const std::string& path, bool wantTorus, bool wantPattern,
               GridHandle& out) {
  char* err = nullptr;
  check(pwa_grid_parse(read_file(path).c_str(), &out.h, &err), err);
  int isTorus = 0;
  pwa_grid_is_torus(out.h, &isTorus);
  if (wantTorus && !isTorus) die(path + ": expected a torus (no \"torus p q\" header)");
  if (wantPattern && isTorus) die(path + ": expected a finite pattern, found a torus");
}

// Shared enumeration options -> the C API's JSON options string.
struct EnumFlags {
  std::vector<int> maxTorus;  // P Q
  std::string patterns;       // "WxH"
  long long samples = -1;
  unsigned long long seed = 0;
  int threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-torus", maxTorus,
                    "enumerate all tori up to P x Q (default 3 3)")
        ->expected(2);
    cmd->add_option("--patterns", patterns,
                    "enumerate rectangular patterns up to WxH instead of tori");
    cmd->add_option("--samples", samples, "sample N instances instead of enumerating");
    cmd->add_option("--seed", seed, "RNG seed for sampling (default 0)");
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  }

  std::string options(bool records) const {
    int p = 3, q = 3;
    bool pat = false;
    if (!patterns.empty()) {
      pat = true;
      if (std::sscanf(patterns.c_str(), "%dx%d", &p, &q) != 2)
        die("--patterns expects WxH, e.g. 3x3", 2);
    }
    if (!maxTorus.empty()) {
      if (pat) die("give either --max-torus or --patterns, not both", 2);
      p = maxTorus[0];
      q = maxTorus[1];
    }
    std::ostringstream o;
    o << "{\"max_p\":" << p << ",\"max_q\":" << q
      << ",\"patterns\":" << (pat ? "true" : "false")
      << ",\"samples\":" << samples << ",\"seed\":" << seed
      << ",\"threads\":" << threads
      << ",\"records\":" << (records ? "true" : "false") << "}";
    return o.str();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plane-walking automata laboratory"};
  app.require_subcommand(1);

  // validate
  std::string vaFile;
  auto* vaCmd = app.add_subcommand("validate", "check an automaton file");
  vaCmd->add_option("automaton", vaFile, "automaton JSON file")->required();

  // classify
  std::string clFile;
  auto* clCmd = app.add_subcommand("classify", "alternation hierarchy level");
  clCmd->add_option("automaton", clFile, "automaton JSON file")->required();

  // accepts
  std::string acFile, acTorus, acPattern;
  bool acWitness = false, acRecord = false;
  auto* acCmd = app.add_subcommand("accepts", "decide acceptance of a grid");
  acCmd->add_option("automaton", acFile, "automaton JSON file")->required();
  auto* acT = acCmd->add_option("--torus", acTorus, "torus text file");
  auto* acP = acCmd->add_option("--pattern", acPattern, "pattern text file");
  acT->excludes(acP);
  acCmd->add_flag("--witness", acWitness,
                  "emit the winning strategy (accept) or attractor depths (reject)");
  acCmd->add_flag("--record", acRecord, "emit the machine-readable record line");

  // compare
  std::string cpA, cpB, cpOracle;
  bool cpRecords = false;
  EnumFlags cpFlags;
  auto* cpCmd = app.add_subcommand("compare", "compare two deciders over grids");
  cpCmd->add_option("a", cpA, "first automaton JSON file")->required();
  auto* cpBOpt = cpCmd->add_option("b", cpB, "second automaton JSON file");
  auto* cpOOpt = cpCmd->add_option("--oracle", cpOracle,
                                   "built-in oracle name instead of a second file");
  cpBOpt->excludes(cpOOpt);
  cpFlags.attach(cpCmd);
  cpCmd->add_flag("--records", cpRecords, "include one record per instance");

  // enum
  std::string enFile;
  bool enWitness = false;
  EnumFlags enFlags;
  auto* enCmd = app.add_subcommand("enum", "one verdict record per instance");
  enCmd->add_option("automaton", enFile, "automaton JSON file")->required();
  enFlags.attach(enCmd);
  enCmd->add_flag("--witness", enWitness, "include witnesses in the records");

  // cover
  std::string cvFile;
  long long cvCap = 0;
  auto* cvCmd = app.add_subcommand("cover", "powerset-cover report");
  cvCmd->add_option("automaton", cvFile, "automaton JSON file")->required();
  cvCmd->add_option("--enumerate", cvCap,
                    "list forbidden plus-patterns among the first N (canonical order)");

  // pump
  std::string puFile, puTorus, puPattern, puBranch;
  int puPair = -1, puTimes = 2;
  auto* puCmd = app.add_subcommand("pump", "replay a branch and list pumping pairs");
  puCmd->add_option("automaton", puFile, "automaton JSON file")->required();
  auto* puT = puCmd->add_option("--torus", puTorus, "torus text file");
  auto* puP = puCmd->add_option("--pattern", puPattern, "pattern text file");
  puT->excludes(puP);
  puCmd->add_option("--branch", puBranch, "branch JSON file")->required();
  puCmd->add_option("--pair", puPair, "pumping pair index to pump");
  puCmd->add_option("--times", puTimes, "number of repetitions (default 2)");

  // render
  std::string reFile;
  auto* reCmd = app.add_subcommand("render", "parse and reprint a grid file");
  reCmd->add_option("grid", reFile, "grid text file")->required();

  // gallery
  auto* gaCmd = app.add_subcommand("gallery", "built-in automata and grids");
  gaCmd->require_subcommand(1);
  auto* gaList = gaCmd->add_subcommand("list", "list built-in automata");
  std::string gaName;
  auto* gaShow = gaCmd->add_subcommand("show", "print a built-in automaton");
  gaShow->add_option("name", gaName, "automaton name")->required();
  std::string ggName;
  int ggN = 4, ggK = 4;
  auto* gaGrid = gaCmd->add_subcommand(
      "grid", "print an example grid (xn, kari_moore_rect, kari_moore_torus)");
  gaGrid->add_option("name", ggName, "grid family name")->required();
  gaGrid->add_option("-n", ggN, "size parameter n (default 4)");
  gaGrid->add_option("-k", ggK, "size parameter k (default 4)");
  int auMin = 2, auMax = 8;
  auto* gaAudit = gaCmd->add_subcommand(
      "audit", "complement maxima of the unverified arithmetic family");
  gaAudit->add_option("--min", auMin, "smallest n (default 2)");
  gaAudit->add_option("--max", auMax, "largest n (default 8)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  char* err = nullptr;

  if (*vaCmd) {
    AutomatonHandle a;
    load_automaton(vaFile, a);
    OwnedString report;
    check(pwa_automaton_validate(a.h, &report.s, &err), err);
    std::string text = report.str();
    if (text.empty()) {
      std::printf("ok\n");
      return 0;
    }
    std::printf("%s\n", text.c_str());
    return 1;
  }

  if (*clCmd) {
    AutomatonHandle a;
    load_automaton(clFile, a);
    OwnedString level;
    check(pwa_automaton_classify(a.h, &level.s, &err), err);
    std::printf("%s\n", level.s);
    return 0;
  }

  if (*acCmd) {
    if (acTorus.empty() && acPattern.empty())
      die("accepts needs --torus or --pattern", 2);
    AutomatonHandle a;
    load_automaton(acFile, a);
    GridHandle g;
    load_grid(acTorus.empty() ? acPattern : acTorus, !acTorus.empty(),
              !acPattern.empty(), g);
    int verdict = 0;
    OwnedString record;
    check(pwa_accepts(a.h, g.h, acWitness ? 1 : 0, &verdict,
                      (acRecord || acWitness) ? &record.s : nullptr, &err),
          err);
    std::printf("%s\n", verdict ? "accept" : "reject");
    if (record.s) std::printf("%s\n", record.s);
    return verdict ? 0 : 1;
  }

  if (*cpCmd) {
    if (cpB.empty() && cpOracle.empty())
      die("compare needs a second automaton or --oracle", 2);
    AutomatonHandle a, b;
    load_automaton(cpA, a);
    if (!cpB.empty()) load_automaton(cpB, b);
    OwnedString report;
    check(pwa_compare(a.h, b.h, cpOracle.empty() ? nullptr : cpOracle.c_str(),
                      cpFlags.options(cpRecords).c_str(), &report.s, &err),
          err);
    std::printf("%s\n", report.s);
    // Scriptable verdict: 0 when equivalent at this scale.
    return report.str().find("\"equivalent\": true") != std::string::npos ? 0 : 1;
  }

  if (*enCmd) {
    AutomatonHandle a;
    load_automaton(enFile, a);
    OwnedString lines;
    check(pwa_enumerate(a.h, enFlags.options(false).c_str(), enWitness ? 1 : 0,
                        &lines.s, &err),
          err);
    std::fputs(lines.s, stdout);
    return 0;
  }

  if (*cvCmd) {
    AutomatonHandle a;
    load_automaton(cvFile, a);
    OwnedString report;
    check(pwa_cover_report(a.h, cvCap, &report.s, &err), err);
    std::printf("%s\n", report.s);
    return 0;
  }

  if (*puCmd) {
    if (puTorus.empty() && puPattern.empty())
      die("pump needs --torus or --pattern", 2);
    AutomatonHandle a;
    load_automaton(puFile, a);
    GridHandle g;
    load_grid(puTorus.empty() ? puPattern : puTorus, !puTorus.empty(),
              !puPattern.empty(), g);
    OwnedString report;
    check(pwa_pump_report(a.h, g.h, read_file(puBranch).c_str(), puPair, puTimes,
                          &report.s, &err),
          err);
    std::printf("%s\n", report.s);
    return 0;
  }

  if (*reCmd) {
    GridHandle g;
    load_grid(reFile, false, false, g);
    OwnedString text;
    check(pwa_grid_render(g.h, &text.s, &err), err);
    std::fputs(text.s, stdout);
    return 0;
  }

  if (*gaList) {
    OwnedString list;
    check(pwa_gallery_list(&list.s, &err), err);
    std::printf("%s\n", list.s);
    return 0;
  }
  if (*gaShow) {
    AutomatonHandle a;
    check(pwa_gallery_automaton(gaName.c_str(), &a.h, &err), err);
    OwnedString text;
    check(pwa_automaton_to_json(a.h, &text.s, &err), err);
    std::printf("%s\n", text.s);
    return 0;
  }
  if (*gaGrid) {
    GridHandle g;
    check(pwa_gallery_grid(ggName.c_str(), ggN, ggK, &g.h, &err), err);
    OwnedString text;
    check(pwa_grid_render(g.h, &text.s, &err), err);
    std::fputs(text.s, stdout);
    return 0;
  }
  if (*gaAudit) {
    OwnedString report;
    check(pwa_complement_audit(auMin, auMax, &report.s, &err), err);
    std::printf("%s\n", report.s);
    return 0;
  }

  return 2;
}
