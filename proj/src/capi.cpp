#include "pwa.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "constructions.hpp"
#include "core.hpp"
#include "engine.hpp"
#include "gallery.hpp"
#include "semantics.hpp"

using nlohmann::json;

extern "C" {
struct pwa_automaton {
  pwa::Automaton rep;
};
struct pwa_grid {
  pwa::Grid rep;
};
}

namespace {

char* copy_out(const std::string& s) {
  char* r = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(r, s.c_str(), s.size() + 1);
  return r;
}

void set_out(char** out, const std::string& s) {
  if (out) *out = copy_out(s);
}

int status_of(pwa::ErrCode c) {
  using pwa::ErrCode;
  switch (c) {
    case ErrCode::Parse:
      return PWA_ERR_PARSE;
    case ErrCode::ArenaTooLarge:
    case ErrCode::PatternTooLarge:
    case ErrCode::TooManyStates:
    case ErrCode::BoundTooLarge:
      return PWA_ERR_TOO_LARGE;
    case ErrCode::BadArgument:
      return PWA_ERR_ARGUMENT;
    default:
      return PWA_ERR_INVALID;
  }
}

// Wraps the body in the library's uniform error handling.
template <typename F>
int guarded(char** err, F&& body) {
  try {
    return body();
  } catch (const pwa::Error& e) {
    set_out(err, e.what());
    return status_of(e.code);
  } catch (const std::exception& e) {
    set_out(err, e.what());
    return PWA_ERR_INVALID;
  }
}

int need(bool ok, char** err, const char* what) {
  if (ok) return PWA_OK;
  set_out(err, std::string("missing required argument: ") + what);
  return PWA_ERR_ARGUMENT;
}

json instance_of(const pwa::Grid& g) {
  return json(pwa::grid_render(g));
}

pwa::CompareOptions parse_options(const char* opts_json) {
  pwa::CompareOptions opt;
  if (!opts_json || !*opts_json) return opt;
  json j;
  try {
    j = json::parse(opts_json);
  } catch (const json::exception& e) {
    throw pwa::Error(pwa::ErrCode::BadArgument, std::string("options: ") + e.what());
  }
  if (!j.is_object())
    throw pwa::Error(pwa::ErrCode::BadArgument, "options must be a JSON object");
  for (auto& [key, val] : j.items()) {
    if (key == "max_p")
      opt.maxP = val.get<int>();
    else if (key == "max_q")
      opt.maxQ = val.get<int>();
    else if (key == "patterns")
      opt.patterns = val.get<bool>();
    else if (key == "samples")
      opt.samples = val.get<long long>();
    else if (key == "seed")
      opt.seed = val.get<uint64_t>();
    else if (key == "threads")
      opt.threads = val.get<int>();
    else if (key == "records")
      opt.emitRecords = val.get<bool>();
    else
      throw pwa::Error(pwa::ErrCode::BadArgument, "unknown option \"" + key + "\"");
  }
  return opt;
}

}  // namespace

extern "C" {

void pwa_free(char* s) { std::free(s); }
void pwa_automaton_free(pwa_automaton* a) { delete a; }
void pwa_grid_free(pwa_grid* g) { delete g; }

int pwa_automaton_parse(const char* json_text, pwa_automaton** out, char** err) {
  if (int rc = need(json_text && out, err, "json_text/out")) return rc;
  return guarded(err, [&] {
    *out = new pwa_automaton{pwa::automaton_from_json(json_text)};
    return PWA_OK;
  });
}

int pwa_automaton_to_json(const pwa_automaton* a, char** out, char** err) {
  if (int rc = need(a && out, err, "automaton/out")) return rc;
  return guarded(err, [&] {
    set_out(out, pwa::automaton_to_json(a->rep));
    return PWA_OK;
  });
}

int pwa_automaton_validate(const pwa_automaton* a, char** report, char** err) {
  if (int rc = need(a && report, err, "automaton/report")) return rc;
  return guarded(err, [&] {
    std::string text;
    for (auto& line : pwa::validate_automaton(a->rep)) {
      if (!text.empty()) text += '\n';
      text += line;
    }
    set_out(report, text);
    return PWA_OK;
  });
}

int pwa_automaton_classify(const pwa_automaton* a, char** level, char** err) {
  if (int rc = need(a && level, err, "automaton/level")) return rc;
  return guarded(err, [&] {
    set_out(level, pwa::classify(a->rep).str());
    return PWA_OK;
  });
}

int pwa_automaton_normalize(const pwa_automaton* a, pwa_automaton** out, char** err) {
  if (int rc = need(a && out, err, "automaton/out")) return rc;
  return guarded(err, [&] {
    *out = new pwa_automaton{pwa::normalize_directions(a->rep)};
    return PWA_OK;
  });
}

int pwa_grid_parse(const char* text, pwa_grid** out, char** err) {
  if (int rc = need(text && out, err, "text/out")) return rc;
  return guarded(err, [&] {
    *out = new pwa_grid{pwa::grid_parse(text)};
    return PWA_OK;
  });
}

int pwa_grid_render(const pwa_grid* g, char** out, char** err) {
  if (int rc = need(g && out, err, "grid/out")) return rc;
  return guarded(err, [&] {
    set_out(out, pwa::grid_render(g->rep));
    return PWA_OK;
  });
}

int pwa_grid_is_torus(const pwa_grid* g, int* out) {
  if (!g || !out) return PWA_ERR_ARGUMENT;
  *out = g->rep.isTorus ? 1 : 0;
  return PWA_OK;
}

int pwa_accepts(const pwa_automaton* a, const pwa_grid* g, int want_witness,
                int* verdict, char** record_json, char** err) {
  if (int rc = need(a && g, err, "automaton/grid")) return rc;
  return guarded(err, [&] {
    pwa::Arena ar = g->rep.isTorus ? pwa::build_arena(a->rep, g->rep.torus)
                                   : pwa::build_arena(a->rep, g->rep.pattern);
    pwa::WinningSet w = pwa::solve(ar);
    bool accepted = g->rep.isTorus ? pwa::accepts_torus(a->rep, g->rep.torus)
                                   : pwa::accepts_pattern(a->rep, g->rep.pattern);
    if (verdict) *verdict = accepted ? 1 : 0;
    if (record_json) {
      json rec;
      rec["instance"] = instance_of(g->rep);
      rec["verdict"] = accepted;
      if (want_witness)
        rec["witness"] = json::parse(pwa::witness_json(a->rep, ar, w, accepted));
      rec["millis"] = 0;
      set_out(record_json, rec.dump());
    }
    return PWA_OK;
  });
}

int pwa_gallery_list(char** out_json, char** err) {
  if (int rc = need(out_json != nullptr, err, "out_json")) return rc;
  return guarded(err, [&] {
    json arr = json::array();
    for (auto& e : pwa::gallery_list())
      arr.push_back({{"name", e.name}, {"description", e.description}});
    set_out(out_json, arr.dump(2));
    return PWA_OK;
  });
}

int pwa_gallery_automaton(const char* name, pwa_automaton** out, char** err) {
  if (int rc = need(name && out, err, "name/out")) return rc;
  return guarded(err, [&] {
    *out = new pwa_automaton{pwa::gallery_automaton(name)};
    return PWA_OK;
  });
}

int pwa_gallery_grid(const char* name, int n, int k, pwa_grid** out, char** err) {
  if (int rc = need(name && out, err, "name/out")) return rc;
  return guarded(err, [&] {
    std::string s = name;
    pwa::Grid g;
    if (s == "xn") {
      g.pattern = pwa::xn_pattern(n);
    } else if (s == "kari_moore_rect") {
      g.pattern = pwa::kari_moore_rectangle(n, k);
    } else if (s == "kari_moore_torus") {
      g.isTorus = true;
      g.torus = pwa::kari_moore_torus(n, k);
    } else {
      throw pwa::Error(pwa::ErrCode::BadArgument,
                       "unknown gallery grid \"" + s + "\"");
    }
    *out = new pwa_grid{std::move(g)};
    return PWA_OK;
  });
}

int pwa_oracle(const char* name, const pwa_grid* g, int* verdict, char** err) {
  if (int rc = need(name && g && verdict, err, "name/grid/verdict")) return rc;
  return guarded(err, [&] {
    pwa::Decider d = pwa::oracle_decider(name);
    if (g->rep.isTorus) {
      *verdict = d.torus(g->rep.torus) ? 1 : 0;
    } else {
      if (!d.pattern)
        throw pwa::Error(pwa::ErrCode::BadArgument,
                         "oracle \"" + d.name + "\" decides tori only");
      *verdict = d.pattern(g->rep.pattern) ? 1 : 0;
    }
    return PWA_OK;
  });
}

int pwa_compare(const pwa_automaton* a, const pwa_automaton* b,
                const char* oracle, const char* opts_json, char** report_json,
                char** err) {
  if (int rc = need(a && report_json, err, "a/report_json")) return rc;
  if ((b != nullptr) == (oracle != nullptr)) {
    set_out(err, "give exactly one of: second automaton, oracle name");
    return PWA_ERR_ARGUMENT;
  }
  return guarded(err, [&] {
    pwa::CompareOptions opt = parse_options(opts_json);
    pwa::Decider da = pwa::automaton_decider(a->rep, "a");
    pwa::Decider db =
        b ? pwa::automaton_decider(b->rep, "b") : pwa::oracle_decider(oracle);
    pwa::CompareResult res = pwa::compare_deciders(da, db, opt);
    json rep;
    rep["checked"] = res.checked;
    rep["equivalent"] = !res.first.has_value();
    if (res.first) {
      rep["first"] = {{"index", res.first->index},
                      {"instance", res.first->instance},
                      {"a", res.first->a},
                      {"b", res.first->b}};
    }
    if (opt.emitRecords) {
      json records = json::array();
      for (auto& line : res.records) records.push_back(json::parse(line));
      rep["records"] = std::move(records);
    }
    set_out(report_json, rep.dump(2));
    return PWA_OK;
  });
}

int pwa_enumerate(const pwa_automaton* a, const char* opts_json,
                  int want_witness, char** records_jsonl, char** err) {
  if (int rc = need(a && records_jsonl, err, "a/records_jsonl")) return rc;
  return guarded(err, [&] {
    pwa::CompareOptions opt = parse_options(opts_json);
    std::string text;
    for (auto& line : pwa::enum_records(a->rep, opt, want_witness != 0)) {
      text += line;
      text += '\n';
    }
    set_out(records_jsonl, text);
    return PWA_OK;
  });
}

int pwa_cover_report(const pwa_automaton* a, long long enum_cap,
                     char** report_json, char** err) {
  if (int rc = need(a && report_json, err, "a/report_json")) return rc;
  return guarded(err, [&] {
    pwa::Cover cover = pwa::alternating_to_cover(a->rep);
    int n = (int)cover.base.states.size();
    int sigma = (int)cover.base.alphabet.size();
    unsigned masks = 1u << n;
    json rep;
    rep["base_states"] = n;
    rep["base_alphabet"] = sigma;
    rep["product_alphabet"] = (long long)sigma * masks;
    if (enum_cap > 0) {
      // Plus-shaped patterns in canonical order: five product symbols
      // (center, left, right, up, down), each a (symbol, mask) pair counted
      // with the mask as the low digit, center cell least significant.
      long long perCell = (long long)sigma * masks;
      long long clause[4] = {0, 0, 0, 0};
      json forbidden = json::array();
      static const char* kSlot[5] = {"center", "left", "right", "up", "down"};
      long long total = 1;
      bool overflow = false;
      for (int i = 0; i < 5 && !overflow; ++i) {
        if (total > enum_cap / perCell + 1) overflow = true;
        total *= perCell;
      }
      long long limit = overflow ? enum_cap : std::min(total, enum_cap);
      for (long long idx = 0; idx < limit; ++idx) {
        std::array<std::pair<int, unsigned>, 5> cells;
        long long rest = idx;
        for (int i = 0; i < 5; ++i) {
          long long digit = rest % perCell;
          rest /= perCell;
          cells[i] = {(int)(digit / masks), (unsigned)(digit % masks)};
        }
        int c = cover.forbiddenPlusClause(cells);
        clause[c]++;
        if (c != 0) {
          json f;
          for (int i = 0; i < 5; ++i)
            f[kSlot[i]] = cover.productSymbol(
                cover.base.alphabet[cells[i].first], cells[i].second);
          f["clause"] = c;
          forbidden.push_back(std::move(f));
        }
      }
      rep["enumerated"] = limit;
      rep["truncated"] = overflow || limit < total;
      rep["allowed"] = clause[0];
      rep["clause_counts"] = {{"symbol_mismatch", clause[1]},
                              {"no_initial", clause[2]},
                              {"quantifier", clause[3]}};
      rep["forbidden"] = std::move(forbidden);
    }
    set_out(report_json, rep.dump(2));
    return PWA_OK;
  });
}

int pwa_pump_report(const pwa_automaton* a, const pwa_grid* g,
                    const char* branch_json, int pair_index, int times,
                    char** report_json, char** err) {
  if (int rc = need(a && g && branch_json && report_json, err,
                    "a/grid/branch_json/report_json"))
    return rc;
  return guarded(err, [&] {
    json bj;
    try {
      bj = json::parse(branch_json);
    } catch (const json::exception& e) {
      throw pwa::Error(pwa::ErrCode::Parse, std::string("branch: ") + e.what());
    }
    if (!bj.is_object() || !bj.contains("start") || !bj.contains("state") ||
        !bj.contains("edges"))
      throw pwa::Error(pwa::ErrCode::Parse,
                       "branch needs \"start\", \"state\" and \"edges\"");
    pwa::Cell cell{bj.at("start").at("x").get<int>(),
                   bj.at("start").at("y").get<int>()};
    int state = a->rep.stateIndex(bj.at("state").get<std::string>());
    if (state < 0)
      throw pwa::Error(pwa::ErrCode::BadArgument,
                       "unknown start state \"" +
                           bj.at("state").get<std::string>() + "\"");
    pwa::Branch branch;
    for (auto& ej : bj.at("edges")) {
      int e = ej.get<int>();
      if (e < 0 || e >= (int)a->rep.edges.size())
        throw pwa::Error(pwa::ErrCode::BadArgument,
                         "edge index " + std::to_string(e) + " out of range");
      if (a->rep.edges[e].fromIdx != state)
        throw pwa::Error(pwa::ErrCode::BadArgument,
                         "edge " + std::to_string(e) + " does not leave state \"" +
                             a->rep.states[state].id + "\"");
      branch.steps.push_back({cell, state, e});
      cell = {cell.x + a->rep.edges[e].dir.dx, cell.y + a->rep.edges[e].dir.dy};
      state = a->rep.edges[e].toIdx;
    }
    branch.steps.push_back({cell, state, -1});

    auto branch_to_json = [&](const pwa::Branch& b) {
      json steps = json::array();
      for (auto& s : b.steps)
        steps.push_back({{"x", s.cell.x},
                         {"y", s.cell.y},
                         {"state", a->rep.states[s.state].id},
                         {"edge", s.edge}});
      return json{{"steps", std::move(steps)}};
    };
    auto replay = [&](const pwa::Branch& b) {
      return g->rep.isTorus ? pwa::replay_branch(a->rep, b, g->rep.torus)
                            : pwa::replay_branch(a->rep, b, g->rep.pattern);
    };

    json rep;
    rep["branch"] = branch_to_json(branch);
    rep["replay"] = replay(branch);
    rep["footprint"] = (long long)pwa::footprint(branch).size();
    auto pairs = pwa::find_pumping_pairs(branch);
    json pj = json::array();
    for (auto& p : pairs)
      pj.push_back({{"i", p.i},
                    {"j", p.j},
                    {"state", a->rep.states[branch.steps[p.i].state].id},
                    {"dx", p.vector.dx},
                    {"dy", p.vector.dy}});
    rep["pairs"] = std::move(pj);
    if (pair_index >= 0) {
      if (pair_index >= (int)pairs.size())
        throw pwa::Error(pwa::ErrCode::BadArgument,
                         "pair index " + std::to_string(pair_index) +
                             " out of range (found " +
                             std::to_string(pairs.size()) + " pairs)");
      pwa::Branch pumped = pwa::pump_branch(branch, pairs[pair_index], times);
      json pp;
      pp["pair"] = pair_index;
      pp["times"] = times;
      pp["branch"] = branch_to_json(pumped);
      pp["replay"] = replay(pumped);
      pp["footprint"] = (long long)pwa::footprint(pumped).size();
      rep["pumped"] = std::move(pp);
    }
    set_out(report_json, rep.dump(2));
    return PWA_OK;
  });
}

int pwa_complement_audit(int n_min, int n_max, char** report_json, char** err) {
  if (int rc = need(report_json != nullptr, err, "report_json")) return rc;
  return guarded(err, [&] {
    if (n_min < 2 || n_max < n_min)
      throw pwa::Error(pwa::ErrCode::BadArgument, "need 2 <= n_min <= n_max");
    json rows = json::array();
    bool relaxedAll = true, strictAll = true;
    for (int n = n_min; n <= n_max; ++n) {
      int formula = n * n - n - 1;
      int strict = pwa::complement_max(n, true);
      int relaxed = pwa::complement_max(n, false);
      relaxedAll = relaxedAll && relaxed == formula;
      strictAll = strictAll && strict == formula;
      rows.push_back({{"n", n},
                      {"formula", formula},
                      {"strict", strict},
                      {"strict_matches", strict == formula},
                      {"relaxed", relaxed},
                      {"relaxed_matches", relaxed == formula}});
    }
    json rep;
    rep["rows"] = std::move(rows);
    rep["relaxed_matches_formula"] = relaxedAll;
    rep["strict_matches_formula"] = strictAll;
    set_out(report_json, rep.dump(2));
    return PWA_OK;
  });
}

}  // extern "C"
