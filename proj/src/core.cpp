#include "core.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pwa {

using nlohmann::json;

int Automaton::symbolIndex(const std::string& token) const {
  for (size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == token) return (int)i;
  return -1;
}

int Automaton::stateIndex(const std::string& id) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i].id == id) return (int)i;
  return -1;
}

void Automaton::resolve() {
  symbolOf.assign(states.size(), -1);
  for (size_t i = 0; i < states.size(); ++i)
    symbolOf[i] = symbolIndex(states[i].symbol);
  for (auto& e : edges) {
    e.fromIdx = stateIndex(e.from);
    e.toIdx = stateIndex(e.to);
  }
  initial.assign(alphabet.size(), -1);
  for (auto& [sym, id] : initialRaw) {
    int s = symbolIndex(sym);
    if (s >= 0) initial[s] = stateIndex(id);
  }
  out.assign(states.size(), {});
  for (size_t k = 0; k < edges.size(); ++k)
    if (edges[k].fromIdx >= 0) out[edges[k].fromIdx].push_back((int)k);
}

std::string HierarchyLevel::str() const {
  switch (kind) {
    case Delta: return "Delta(" + std::to_string(n) + ")";
    case Sigma: return "Sigma(" + std::to_string(n) + ")";
    case Pi: return "Pi(" + std::to_string(n) + ")";
    default: return "AltUnbounded";
  }
}

bool level_leq(const HierarchyLevel& a, const HierarchyLevel& b) {
  if (b.kind == HierarchyLevel::AltUnbounded) return true;
  if (a.kind == HierarchyLevel::AltUnbounded) return false;
  // Map to a "fits inside Delta(k) / Sigma(k) / Pi(k)" comparison.
  if (a.kind == b.kind) return a.n <= b.n;
  if (a.kind == HierarchyLevel::Delta) return a.n <= b.n;  // Delta(n) <= Sigma/Pi(n)
  if (b.kind == HierarchyLevel::Delta) return a.n < b.n;   // Sigma/Pi(n) <= Delta(n+1)
  return false;  // Sigma(n) vs Pi(m): incomparable at equal rank...
}

std::vector<std::string> validate_automaton(const Automaton& a) {
  std::vector<std::string> v;
  if (a.alphabet.empty()) v.push_back("alphabet is empty");
  {
    std::set<std::string> seen;
    for (auto& s : a.alphabet) {
      if (s.empty()) v.push_back("alphabet contains an empty token");
      if (!seen.insert(s).second) v.push_back("duplicate alphabet token \"" + s + "\"");
    }
  }
  {
    std::set<std::string> seen;
    for (auto& s : a.states)
      if (!seen.insert(s.id).second) v.push_back("duplicate state id \"" + s.id + "\"");
  }
  for (size_t i = 0; i < a.states.size(); ++i)
    if (a.symbolOf[i] < 0)
      v.push_back("state \"" + a.states[i].id + "\" has symbol \"" + a.states[i].symbol +
                  "\" not in the alphabet");
  for (size_t k = 0; k < a.edges.size(); ++k) {
    const Edge& e = a.edges[k];
    if (e.fromIdx < 0)
      v.push_back("edge " + std::to_string(k) + " references undeclared state \"" + e.from + "\"");
    if (e.toIdx < 0)
      v.push_back("edge " + std::to_string(k) + " references undeclared state \"" + e.to + "\"");
  }
  // Initial map: total on the alphabet, injective, D(initial(a)) = a.
  std::set<std::string> initSyms;
  for (auto& [sym, id] : a.initialRaw) {
    if (!initSyms.insert(sym).second)
      v.push_back("initial map lists symbol \"" + sym + "\" twice");
    if (a.symbolIndex(sym) < 0)
      v.push_back("initial map uses symbol \"" + sym + "\" not in the alphabet");
    int st = a.stateIndex(id);
    if (st < 0)
      v.push_back("initial map references undeclared state \"" + id + "\"");
    else if (a.states[st].symbol != sym)
      v.push_back("initial state \"" + id + "\" for symbol \"" + sym + "\" carries symbol \"" +
                  a.states[st].symbol + "\"");
  }
  for (auto& s : a.alphabet)
    if (!initSyms.count(s)) v.push_back("initial map is missing symbol \"" + s + "\"");
  {
    std::set<std::string> initStates;
    for (auto& [sym, id] : a.initialRaw)
      if (!initStates.insert(id).second)
        v.push_back("initial map is not injective: state \"" + id + "\" used twice");
  }
  // Unspecified quantifier on a nondeterministic state.
  for (size_t i = 0; i < a.states.size(); ++i) {
    if (a.states[i].quant != Quant::Unspecified) continue;
    bool resolved = true;
    for (int k : a.out[i])
      if (a.edges[k].toIdx < 0) resolved = false;
    if (!resolved) continue;  // dangling edges already reported
    try {
      effective_quantifier(a, (int)i);
    } catch (const Error&) {
      v.push_back("state \"" + a.states[i].id +
                  "\" is nondeterministic but has no quantifier");
    }
  }
  return v;
}

static bool syntactically_deterministic(const Automaton& a, int v) {
  const auto& outs = a.out[v];
  if (outs.size() <= 1) return true;
  Direction d = a.edges[outs[0]].dir;
  std::set<int> targetSyms;
  for (int k : outs) {
    const Edge& e = a.edges[k];
    if (e.dir != d) return false;
    int ts = e.toIdx >= 0 ? a.symbolOf[e.toIdx] : -1;
    if (ts < 0 || !targetSyms.insert(ts).second) return false;
  }
  return true;
}

EffQuant effective_quantifier(const Automaton& a, int v) {
  if (v < 0 || v >= (int)a.states.size())
    throw Error(ErrCode::BadArgument, "state index out of range");
  if (syntactically_deterministic(a, v)) return EffQuant::Wildcard;
  switch (a.states[v].quant) {
    case Quant::Exists: return EffQuant::Exists;
    case Quant::Forall: return EffQuant::Forall;
    default:
      throw Error(ErrCode::NondeterministicUnquantified,
                  "state \"" + a.states[v].id +
                      "\" is nondeterministic and has no quantifier");
  }
}

namespace {

// Tarjan over the subgraph reachable from the initial states.
struct SccResult {
  std::vector<int> comp;          // state -> scc id, -1 if unreachable
  int count = 0;
  std::vector<bool> cyclic;       // scc id -> has a cycle
};

SccResult sccs(const Automaton& a) {
  int n = (int)a.states.size();
  SccResult r;
  r.comp.assign(n, -1);
  std::vector<bool> reach(n, false);
  std::vector<int> stack;
  for (int s : a.initial)
    if (s >= 0 && !reach[s]) { reach[s] = true; stack.push_back(s); }
  while (!stack.empty()) {
    int v = stack.back(); stack.pop_back();
    for (int k : a.out[v]) {
      int w = a.edges[k].toIdx;
      if (w >= 0 && !reach[w]) { reach[w] = true; stack.push_back(w); }
    }
  }
  std::vector<int> idx(n, -1), low(n, 0), st;
  std::vector<bool> onSt(n, false);
  int counter = 0;
  std::function<void(int)> dfs = [&](int v) {
    idx[v] = low[v] = counter++;
    st.push_back(v); onSt[v] = true;
    for (int k : a.out[v]) {
      int w = a.edges[k].toIdx;
      if (w < 0 || !reach[w]) continue;
      if (idx[w] < 0) { dfs(w); low[v] = std::min(low[v], low[w]); }
      else if (onSt[w]) low[v] = std::min(low[v], idx[w]);
    }
    if (low[v] == idx[v]) {
      int id = r.count++;
      int w;
      do {
        w = st.back(); st.pop_back(); onSt[w] = false;
        r.comp[w] = id;
      } while (w != v);
    }
  };
  for (int v = 0; v < n; ++v)
    if (reach[v] && idx[v] < 0) dfs(v);
  r.cyclic.assign(r.count, false);
  std::vector<int> size(r.count, 0);
  for (int v = 0; v < n; ++v)
    if (r.comp[v] >= 0) size[r.comp[v]]++;
  for (int v = 0; v < n; ++v) {
    if (r.comp[v] < 0) continue;
    for (int k : a.out[v]) {
      int w = a.edges[k].toIdx;
      if (w < 0 || r.comp[w] < 0) continue;
      if (r.comp[w] == r.comp[v] && (size[r.comp[v]] > 1 || w == v))
        r.cyclic[r.comp[v]] = true;
    }
  }
  return r;
}

}  // namespace

HierarchyLevel classify(const Automaton& a) {
  auto scc = sccs(a);
  int n = (int)a.states.size();
  // Genuine quantifier letters per SCC (0 none, 1 exists, 2 forall).
  std::vector<int> letter(scc.count, 0);
  for (int v = 0; v < n; ++v) {
    int c = scc.comp[v];
    if (c < 0) continue;
    EffQuant q = effective_quantifier(a, v);
    if (q == EffQuant::Wildcard) continue;
    int l = q == EffQuant::Exists ? 1 : 2;
    if (letter[c] == 0) letter[c] = l;
    // Two genuine letters in one SCC: possible only if the SCC has a cycle
    // (a singleton SCC holds one state), and then alternation is unbounded.
    else if (letter[c] != l) return {HierarchyLevel::AltUnbounded, 1};
  }
  // Block-word DP over the condensation. dp[c][first][last] = max block
  // count of a quantifier word along some path from an initial state ending
  // in c (having read c's letter). first/last in {0 empty, 1 E, 2 A}.
  const int NEG = -1;
  std::vector<std::array<std::array<int, 3>, 3>> dp(
      scc.count, {{{NEG, NEG, NEG}, {NEG, NEG, NEG}, {NEG, NEG, NEG}}});
  auto absorb = [&](int first, int last, int b, int l, int& f2, int& l2, int& b2) {
    f2 = first; l2 = last; b2 = b;
    if (l == 0 || l == last) return;
    b2 = b + 1; l2 = l;
    if (first == 0) f2 = l;
  };
  auto relax = [&](int c, int first, int last, int b) {
    int f2, l2, b2;
    absorb(first, last, b, letter[c], f2, l2, b2);
    if (b2 > dp[c][f2][l2]) { dp[c][f2][l2] = b2; return true; }
    return false;
  };
  for (int s : a.initial)
    if (s >= 0 && scc.comp[s] >= 0) relax(scc.comp[s], 0, 0, 0);
  // Condensation is a DAG; iterate to a fixpoint (sizes are tiny).
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      int c = scc.comp[v];
      if (c < 0) continue;
      for (int k : a.out[v]) {
        int w = a.edges[k].toIdx;
        if (w < 0) continue;
        int d = scc.comp[w];
        if (d < 0 || d == c) continue;
        for (int f = 0; f < 3; ++f)
          for (int l = 0; l < 3; ++l)
            if (dp[c][f][l] >= 0)
              if (relax(d, f, l, dp[c][f][l])) changed = true;
      }
    }
  }
  int maxb = 0;
  bool maxStartsE = false, maxStartsA = false;
  for (int c = 0; c < scc.count; ++c)
    for (int f = 0; f < 3; ++f)
      for (int l = 0; l < 3; ++l)
        if (dp[c][f][l] > maxb) maxb = dp[c][f][l];
  for (int c = 0; c < scc.count; ++c)
    for (int f = 0; f < 3; ++f)
      for (int l = 0; l < 3; ++l)
        if (dp[c][f][l] == maxb && maxb > 0) {
          if (f == 1) maxStartsE = true;
          if (f == 2) maxStartsA = true;
        }
  if (maxb == 0) return {HierarchyLevel::Delta, 1};
  if (!maxStartsA) return {HierarchyLevel::Sigma, maxb};
  if (!maxStartsE) return {HierarchyLevel::Pi, maxb};
  return {HierarchyLevel::Delta, maxb + 1};
}

namespace {

std::vector<Direction> unit_steps(Direction d) {
  std::vector<Direction> steps;
  int sx = d.dx > 0 ? 1 : -1;
  for (int i = 0; i < std::abs(d.dx); ++i) steps.push_back({sx, 0});
  int sy = d.dy > 0 ? 1 : -1;
  for (int i = 0; i < std::abs(d.dy); ++i) steps.push_back({0, sy});
  return steps;
}

}  // namespace

Automaton normalize_directions(const Automaton& a) {
  Automaton r;
  r.alphabet = a.alphabet;
  r.states = a.states;
  r.initialRaw = a.initialRaw;
  const int S = (int)a.alphabet.size();

  // Long edges per source state, in edge order.
  std::vector<std::vector<int>> longOf(a.states.size());
  bool anyLong = false;
  for (size_t k = 0; k < a.edges.size(); ++k) {
    if (a.edges[k].dir.unit()) continue;
    longOf[a.edges[k].fromIdx].push_back((int)k);
    anyLong = true;
  }
  if (!anyLong) {
    r.edges = a.edges;
    r.resolve();
    return r;
  }

  auto addState = [&](const std::string& id, const std::string& sym, Quant q) {
    r.states.push_back({id, sym, q});
  };
  auto addEdge = [&](const std::string& from, const std::string& to, Direction d) {
    r.edges.push_back({from, to, -1, -1, d});
  };

  // Exists-style chain: walk to the far cell through per-symbol intermediate
  // states; a final-symbol mismatch dead-ends, same as an inapplicable edge.
  auto buildExistsChain = [&](const std::string& srcId, int edgeIdx) {
    const Edge& e = a.edges[edgeIdx];
    auto steps = unit_steps(e.dir);
    int n = (int)steps.size();
    std::string tag = "n$e" + std::to_string(edgeIdx);
    std::vector<std::string> prev = {srcId};
    for (int k = 1; k < n; ++k) {
      std::vector<std::string> cur;
      for (int s = 0; s < S; ++s) {
        std::string id = tag + "_k" + std::to_string(k) + "_" + r.alphabet[s];
        addState(id, r.alphabet[s], Quant::Unspecified);
        cur.push_back(id);
      }
      for (auto& p : prev)
        for (auto& c : cur) addEdge(p, c, steps[k - 1]);
      prev = cur;
    }
    for (auto& p : prev) addEdge(p, e.to, steps[n - 1]);
  };

  for (size_t k = 0; k < a.edges.size(); ++k)
    if (a.edges[k].dir.unit()) r.edges.push_back(a.edges[k]);

  // Forall sources get copies indexed by the set of long edges already found
  // inapplicable. Each remaining long edge becomes a chain that walks out;
  // on a far-cell symbol mismatch it walks back into the copy with that edge
  // erased, which reproduces "an inapplicable edge simply drops out" while
  // keeping the nonemptiness check exact (the copy with everything erased
  // has only the unit edges left).

  struct Pending { int v; unsigned erased; std::string id; };
  std::vector<Pending> todo;
  std::set<std::string> builtCopies;

  auto copyId = [&](int v, unsigned erased) {
    return erased == 0 ? a.states[v].id
                       : a.states[v].id + "$T" + std::to_string(erased);
  };
  auto requestCopy = [&](int v, unsigned erased) {
    std::string id = copyId(v, erased);
    if (builtCopies.insert(id).second) {
      if (erased != 0) addState(id, a.states[v].symbol, Quant::Forall);
      todo.push_back({v, erased, id});
    }
    return id;
  };

  for (int v = 0; v < (int)a.states.size(); ++v) {
    if (longOf[v].empty()) continue;
    bool isForall = a.states[v].quant == Quant::Forall &&
                    !syntactically_deterministic(a, v);
    if (isForall) {
      requestCopy(v, 0);
    } else {
      for (int edgeIdx : longOf[v]) buildExistsChain(a.states[v].id, edgeIdx);
      // A previously deterministic source may now branch over the per-symbol
      // first steps; pin it to Exists. Equivalent: such a state had at most
      // one applicable move, and the dead-end chains preserve exactly that
      // move under an existential reading.
      int ri = r.stateIndex(a.states[v].id);
      r.states[ri].quant = Quant::Exists;
    }
  }

  while (!todo.empty()) {
    Pending pc = todo.back();
    todo.pop_back();
    int v = pc.v;
    if (pc.erased != 0)
      for (int k : a.out[v])
        if (a.edges[k].dir.unit()) addEdge(pc.id, a.edges[k].to, a.edges[k].dir);
    // A copy with every long edge erased and no unit edges would be edge-less
    // and reject, but the source it simulates accepts vacuously (it still has
    // outgoing edges, just none applicable). A stationary self-loop keeps it
    // winning.
    if (pc.erased + 1 == (1u << longOf[v].size()) &&
        (size_t)longOf[v].size() == a.out[v].size())
      addEdge(pc.id, pc.id, {0, 0});
    for (size_t bit = 0; bit < longOf[v].size(); ++bit) {
      if (pc.erased & (1u << bit)) continue;
      int edgeIdx = longOf[v][bit];
      const Edge& e = a.edges[edgeIdx];
      auto steps = unit_steps(e.dir);
      int n = (int)steps.size();
      std::string tag = "n$f" + std::to_string(edgeIdx) + "_T" + std::to_string(pc.erased);
      std::vector<std::string> prev = {pc.id};
      for (int k = 1; k < n; ++k) {
        std::vector<std::string> cur;
        for (int s = 0; s < S; ++s) {
          std::string sid = tag + "_k" + std::to_string(k) + "_" + r.alphabet[s];
          addState(sid, r.alphabet[s], Quant::Unspecified);
          cur.push_back(sid);
        }
        for (auto& p : prev)
          for (auto& c : cur) addEdge(p, c, steps[k - 1]);
        prev = cur;
      }
      std::string farSym = a.states[e.toIdx].symbol;
      std::string backTarget = requestCopy(v, pc.erased | (1u << bit));
      std::vector<std::string> mis;
      for (int s = 0; s < S; ++s) {
        if (r.alphabet[s] == farSym) continue;
        std::string sid = tag + "_mis_" + r.alphabet[s];
        addState(sid, r.alphabet[s], Quant::Unspecified);
        mis.push_back(sid);
      }
      for (auto& p : prev) {
        addEdge(p, e.to, steps[n - 1]);
        for (auto& m : mis) addEdge(p, m, steps[n - 1]);
      }
      std::vector<std::string> back = mis;
      for (int k = n - 1; k >= 1; --k) {
        Direction rev{-steps[k].dx, -steps[k].dy};
        std::vector<std::string> cur;
        for (int s = 0; s < S; ++s) {
          std::string sid = tag + "_b" + std::to_string(k) + "_" + r.alphabet[s];
          addState(sid, r.alphabet[s], Quant::Unspecified);
          cur.push_back(sid);
        }
        for (auto& b : back)
          for (auto& c : cur) addEdge(b, c, rev);
        back = cur;
      }
      Direction rev0{-steps[0].dx, -steps[0].dy};
      for (auto& b : back) addEdge(b, backTarget, rev0);
    }
  }

  r.resolve();
  return r;
}

// ---------- JSON ----------

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> keys,
                    const std::string& where) {
  for (auto& [k, v] : j.items()) {
    bool ok = false;
    for (auto* a : keys)
      if (k == a) ok = true;
    if (!ok) throw Error(ErrCode::Parse, "unknown key \"" + k + "\" in " + where);
  }
}

}  // namespace

Automaton automaton_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrCode::Parse, std::string("JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrCode::Parse, "automaton file must be a JSON object");
  reject_unknown(j, {"alphabet", "states", "edges", "initial"}, "automaton");
  for (auto* k : {"alphabet", "states", "edges", "initial"})
    if (!j.contains(k)) throw Error(ErrCode::Parse, std::string("missing key \"") + k + "\"");
  Automaton a;
  if (!j["alphabet"].is_array()) throw Error(ErrCode::Parse, "\"alphabet\" must be an array");
  for (auto& s : j["alphabet"]) {
    if (!s.is_string()) throw Error(ErrCode::Parse, "alphabet entries must be strings");
    a.alphabet.push_back(s.get<std::string>());
  }
  if (!j["states"].is_array()) throw Error(ErrCode::Parse, "\"states\" must be an array");
  for (auto& s : j["states"]) {
    if (!s.is_object()) throw Error(ErrCode::Parse, "state entries must be objects");
    reject_unknown(s, {"id", "symbol", "quant"}, "state");
    for (auto* k : {"id", "symbol", "quant"})
      if (!s.contains(k))
        throw Error(ErrCode::Parse, std::string("state missing key \"") + k + "\"");
    State st;
    st.id = s["id"].get<std::string>();
    st.symbol = s["symbol"].get<std::string>();
    if (s["quant"].is_null()) st.quant = Quant::Unspecified;
    else {
      std::string q = s["quant"].get<std::string>();
      if (q == "exists") st.quant = Quant::Exists;
      else if (q == "forall") st.quant = Quant::Forall;
      else throw Error(ErrCode::Parse, "quant must be \"exists\", \"forall\" or null");
    }
    a.states.push_back(st);
  }
  if (!j["edges"].is_array()) throw Error(ErrCode::Parse, "\"edges\" must be an array");
  for (auto& e : j["edges"]) {
    if (!e.is_object()) throw Error(ErrCode::Parse, "edge entries must be objects");
    reject_unknown(e, {"from", "to", "dx", "dy"}, "edge");
    for (auto* k : {"from", "to", "dx", "dy"})
      if (!e.contains(k))
        throw Error(ErrCode::Parse, std::string("edge missing key \"") + k + "\"");
    if (!e["dx"].is_number_integer() || !e["dy"].is_number_integer())
      throw Error(ErrCode::Parse, "edge dx/dy must be integers");
    a.edges.push_back({e["from"].get<std::string>(), e["to"].get<std::string>(), -1, -1,
                       {e["dx"].get<int>(), e["dy"].get<int>()}});
  }
  if (!j["initial"].is_object()) throw Error(ErrCode::Parse, "\"initial\" must be an object");
  for (auto& [sym, id] : j["initial"].items()) {
    if (!id.is_string()) throw Error(ErrCode::Parse, "initial entries must be state ids");
    a.initialRaw.push_back({sym, id.get<std::string>()});
  }
  std::sort(a.initialRaw.begin(), a.initialRaw.end());
  a.resolve();
  return a;
}

std::string automaton_to_json(const Automaton& a) {
  json j;
  j["alphabet"] = a.alphabet;
  j["states"] = json::array();
  for (auto& s : a.states) {
    json st;
    st["id"] = s.id;
    st["symbol"] = s.symbol;
    if (s.quant == Quant::Exists) st["quant"] = "exists";
    else if (s.quant == Quant::Forall) st["quant"] = "forall";
    else st["quant"] = nullptr;
    j["states"].push_back(st);
  }
  j["edges"] = json::array();
  for (auto& e : a.edges)
    j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"dx", e.dir.dx}, {"dy", e.dir.dy}});
  j["initial"] = json::object();
  for (auto& [sym, id] : a.initialRaw) j["initial"][sym] = id;
  return j.dump(2) + "\n";
}

// ---------- grids ----------

Grid grid_parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool isTorus = false;
  int p = 0, q = 0;
  bool first = true;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (toks.empty()) continue;
    if (first && toks.size() == 3 && toks[0] == "torus") {
      isTorus = true;
      try {
        p = std::stoi(toks[1]);
        q = std::stoi(toks[2]);
      } catch (...) {
        throw Error(ErrCode::Parse, "bad torus header");
      }
      if (p < 1 || q < 1) throw Error(ErrCode::Parse, "torus dimensions must be >= 1");
      first = false;
      continue;
    }
    first = false;
    rows.push_back(toks);
  }
  Grid g;
  g.isTorus = isTorus;
  if (isTorus) {
    if ((int)rows.size() != q)
      throw Error(ErrCode::Parse, "torus expects " + std::to_string(q) + " rows, got " +
                                      std::to_string(rows.size()));
    g.torus.p = p;
    g.torus.q = q;
    g.torus.grid.assign(p * q, "");
    for (int r = 0; r < q; ++r) {
      if ((int)rows[r].size() != p)
        throw Error(ErrCode::Parse, "torus row " + std::to_string(r) + " has " +
                                        std::to_string(rows[r].size()) + " cells, expected " +
                                        std::to_string(p));
      for (int x = 0; x < p; ++x) {
        if (rows[r][x] == ".")
          throw Error(ErrCode::Parse, "torus grids cannot contain \".\"");
        g.torus.at(x, q - 1 - r) = rows[r][x];
      }
    }
  } else {
    if (rows.empty()) throw Error(ErrCode::Parse, "empty pattern");
    int h = (int)rows.size();
    for (int r = 0; r < h; ++r)
      for (int x = 0; x < (int)rows[r].size(); ++x)
        if (rows[r][x] != ".")
          g.pattern.cells[{x, h - 1 - r}] = rows[r][x];
    if (g.pattern.cells.empty()) throw Error(ErrCode::Parse, "pattern support is empty");
  }
  return g;
}

std::string torus_render(const Torus& t) {
  std::ostringstream out;
  out << "torus " << t.p << " " << t.q << "\n";
  for (int r = 0; r < t.q; ++r) {
    for (int x = 0; x < t.p; ++x) {
      if (x) out << " ";
      out << t.at(x, t.q - 1 - r);
    }
    out << "\n";
  }
  return out.str();
}

std::string pattern_render(const FinitePattern& p) {
  int minx = 1 << 30, maxx = -(1 << 30), miny = 1 << 30, maxy = -(1 << 30);
  for (auto& [c, s] : p.cells) {
    minx = std::min(minx, c.x); maxx = std::max(maxx, c.x);
    miny = std::min(miny, c.y); maxy = std::max(maxy, c.y);
  }
  std::ostringstream out;
  for (int y = maxy; y >= miny; --y) {
    for (int x = minx; x <= maxx; ++x) {
      if (x > minx) out << " ";
      auto it = p.cells.find({x, y});
      out << (it == p.cells.end() ? "." : it->second);
    }
    out << "\n";
  }
  return out.str();
}

std::string grid_render(const Grid& g) {
  return g.isTorus ? torus_render(g.torus) : pattern_render(g.pattern);
}

Torus unfold(const Torus& t, int m, int n) {
  Torus r;
  r.p = t.p * m;
  r.q = t.q * n;
  r.grid.assign(r.p * r.q, "");
  for (int y = 0; y < r.q; ++y)
    for (int x = 0; x < r.p; ++x) r.at(x, y) = t.at(x, y);
  return r;
}

Torus shift_torus(const Torus& t, int sx, int sy) {
  Torus r = t;
  for (int y = 0; y < t.q; ++y)
    for (int x = 0; x < t.p; ++x) r.at(x, y) = t.at(x + sx, y + sy);
  return r;
}

}  // namespace pwa
