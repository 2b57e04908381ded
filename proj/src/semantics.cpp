#include "semantics.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <bit>
#include <functional>

namespace pwa {

namespace {

long long cell_state_key(Cell c, int state) {
  return (((long long)(c.x + 32768) << 28) | ((long long)(c.y + 32768) << 12)) + state;
}

std::vector<int> grid_symbols(const Automaton& a, const Torus& t) {
  std::vector<int> sym(t.grid.size());
  for (size_t i = 0; i < t.grid.size(); ++i) {
    int s = a.symbolIndex(t.grid[i]);
    if (s < 0)
      throw Error(ErrCode::AlphabetMismatch,
                  "grid symbol \"" + t.grid[i] + "\" is not in the automaton alphabet");
    sym[i] = s;
  }
  return sym;
}

std::vector<uint8_t> owners_of(const Automaton& a) {
  std::vector<uint8_t> own(a.states.size());
  for (size_t v = 0; v < a.states.size(); ++v)
    own[v] = effective_quantifier(a, (int)v) == EffQuant::Forall ? 1 : 0;
  return own;
}

}  // namespace

int Arena::node(Cell c, int state) const {
  auto it = byCellState.find(cell_state_key(c, state));
  return it == byCellState.end() ? -1 : it->second;
}

Arena build_arena(const Automaton& a, const Torus& t) {
  Arena ar;
  ar.patternMode = false;
  auto sym = grid_symbols(a, t);
  auto own = owners_of(a);
  int V = (int)a.states.size();
  for (int y = 0; y < t.q; ++y)
    for (int x = 0; x < t.p; ++x)
      for (int v = 0; v < V; ++v) {
        if (a.symbolOf[v] != sym[y * t.p + x]) continue;
        int id = ar.nodeCount++;
        ar.byCellState[cell_state_key({x, y}, v)] = id;
        ar.cellOf.push_back({x, y});
        ar.stateOf.push_back(v);
        ar.owner.push_back(own[v]);
        ar.hasEdge.push_back(!a.out[v].empty());
      }
  ar.moves.resize(ar.nodeCount);
  for (int n = 0; n < ar.nodeCount; ++n) {
    Cell c = ar.cellOf[n];
    int v = ar.stateOf[n];
    for (int k : a.out[v]) {
      const Edge& e = a.edges[k];
      int tx = (((c.x + e.dir.dx) % t.p) + t.p) % t.p;
      int ty = (((c.y + e.dir.dy) % t.q) + t.q) % t.q;
      int target = ar.node({tx, ty}, e.toIdx);
      if (target >= 0) ar.moves[n].push_back({k, target});
    }
  }
  return ar;
}

Arena build_arena(const Automaton& a, const FinitePattern& p) {
  Arena ar;
  ar.patternMode = true;
  std::map<Cell, int> sym;
  for (auto& [c, s] : p.cells) {
    int i = a.symbolIndex(s);
    if (i < 0)
      throw Error(ErrCode::AlphabetMismatch,
                  "pattern symbol \"" + s + "\" is not in the automaton alphabet");
    sym[c] = i;
  }
  auto own = owners_of(a);
  int V = (int)a.states.size();
  for (auto& [c, si] : sym)
    for (int v = 0; v < V; ++v) {
      if (a.symbolOf[v] != si) continue;
      int id = ar.nodeCount++;
      ar.byCellState[cell_state_key(c, v)] = id;
      ar.cellOf.push_back(c);
      ar.stateOf.push_back(v);
      ar.owner.push_back(own[v]);
      ar.hasEdge.push_back(!a.out[v].empty());
    }
  ar.exterior = ar.nodeCount++;
  ar.cellOf.push_back({0, 0});
  ar.stateOf.push_back(-1);
  ar.owner.push_back(2);
  ar.hasEdge.push_back(0);
  ar.moves.resize(ar.nodeCount);
  for (int n = 0; n < ar.exterior; ++n) {
    Cell c = ar.cellOf[n];
    int v = ar.stateOf[n];
    for (int k : a.out[v]) {
      const Edge& e = a.edges[k];
      Cell d{c.x + e.dir.dx, c.y + e.dir.dy};
      auto it = sym.find(d);
      if (it == sym.end()) {
        // Off the support: accepting move, target symbol ignored.
        ar.moves[n].push_back({k, ar.exterior});
      } else {
        int target = ar.node(d, e.toIdx);
        if (target >= 0) ar.moves[n].push_back({k, target});
      }
    }
  }
  return ar;
}

WinningSet solve(const Arena& ar) {
  WinningSet w;
  w.in.assign(ar.nodeCount, true);
  w.chosenMove.assign(ar.nodeCount, -1);
  w.removalRank.assign(ar.nodeCount, -1);
  std::vector<int> count(ar.nodeCount);
  std::vector<std::vector<int>> preds(ar.nodeCount);
  std::deque<int> queue;
  for (int n = 0; n < ar.nodeCount; ++n) {
    count[n] = (int)ar.moves[n].size();
    for (auto& m : ar.moves[n]) preds[m.to].push_back(n);
    if (ar.owner[n] == 0 && count[n] == 0) queue.push_back(n);
    if (ar.owner[n] == 1 && !ar.hasEdge[n]) queue.push_back(n);
  }
  int rank = 0;
  auto remove = [&](int n) {
    if (!w.in[n]) return;
    w.in[n] = false;
    w.removalRank[n] = rank++;
    queue.push_back(n);
  };
  // Seed: an exists node with no applicable move loses; a forall node loses
  // only when its state has no outgoing edge at all. A forall node whose
  // edges are all inapplicable has nothing to check and stays in W.
  std::deque<int> seed = queue;
  queue.clear();
  for (int n : seed) remove(n);
  while (!queue.empty()) {
    int n = queue.front();
    queue.pop_front();
    for (int pIdx : preds[n]) {
      if (!w.in[pIdx]) continue;
      if (ar.owner[pIdx] == 1) {
        remove(pIdx);
      } else if (ar.owner[pIdx] == 0) {
        // One of p's options died; count distinct surviving options.
        if (--count[pIdx] == 0) remove(pIdx);
      }
    }
  }
  for (int n = 0; n < ar.nodeCount; ++n) {
    if (!w.in[n] || ar.owner[n] != 0) continue;
    for (size_t i = 0; i < ar.moves[n].size(); ++i)
      if (w.in[ar.moves[n][i].to]) {
        w.chosenMove[n] = (int)i;
        break;
      }
  }
  return w;
}

namespace {

bool accepts_solved(const Automaton& a, const Arena& ar, const WinningSet& w,
                    const std::vector<Cell>& cells,
                    const std::function<int(Cell)>& symAt) {
  for (Cell c : cells) {
    int init = a.initial[symAt(c)];
    if (init < 0)
      throw Error(ErrCode::AlphabetMismatch,
                  "no initial state for symbol \"" + a.alphabet[symAt(c)] + "\"");
    int n = ar.node(c, init);
    if (n < 0 || !w.in[n]) return false;
  }
  return true;
}

}  // namespace

bool accepts_torus(const Automaton& a, const Torus& t) {
  Arena ar = build_arena(a, t);
  WinningSet w = solve(ar);
  auto sym = grid_symbols(a, t);
  std::vector<Cell> cells;
  for (int y = 0; y < t.q; ++y)
    for (int x = 0; x < t.p; ++x) cells.push_back({x, y});
  return accepts_solved(a, ar, w, cells, [&](Cell c) { return sym[c.y * t.p + c.x]; });
}

bool accepts_pattern(const Automaton& a, const FinitePattern& p) {
  Arena ar = build_arena(a, p);
  WinningSet w = solve(ar);
  std::vector<Cell> cells;
  for (auto& [c, s] : p.cells) cells.push_back(c);
  return accepts_solved(a, ar, w, cells,
                        [&](Cell c) { return a.symbolIndex(p.cells.at(c)); });
}

namespace {

// Coinductive search: a node revisited on the current call path counts as
// accepting; results with an empty assumption set are absolute and memoized.
struct BruteForce {
  const Arena& ar;
  std::vector<int8_t> memo;   // 0 unknown, 1 winning, 2 losing
  std::vector<uint8_t> onPath;

  explicit BruteForce(const Arena& a) : ar(a), memo(a.nodeCount, 0), onPath(a.nodeCount, 0) {}

  bool search(int n) {
    if (memo[n]) return memo[n] == 1;
    if (onPath[n]) return true;
    if (ar.owner[n] == 2) return true;
    onPath[n] = 1;
    bool r;
    if (ar.owner[n] == 0) {
      r = false;
      for (auto& m : ar.moves[n])
        if (search(m.to)) { r = true; break; }
    } else {
      r = ar.hasEdge[n];  // edge-less forall state rejects, vacuous forall accepts
      for (auto& m : ar.moves[n])
        if (!search(m.to)) { r = false; break; }
    }
    onPath[n] = 0;
    return r;
  }

  bool top(int n) {
    if (!memo[n]) memo[n] = search(n) ? 1 : 2;
    return memo[n] == 1;
  }
};

bool brute_force_on(const Automaton& a, const Arena& ar,
                    const std::vector<std::pair<Cell, int>>& starts) {
  if (ar.nodeCount > 4000)
    throw Error(ErrCode::ArenaTooLarge, "arena has " + std::to_string(ar.nodeCount) +
                                            " nodes, oracle cap is 4000");
  BruteForce bf(ar);
  for (auto& [c, sym] : starts) {
    int init = a.initial[sym];
    if (init < 0)
      throw Error(ErrCode::AlphabetMismatch,
                  "no initial state for symbol \"" + a.alphabet[sym] + "\"");
    int n = ar.node(c, init);
    if (n < 0 || !bf.top(n)) return false;
  }
  return true;
}

}  // namespace

bool brute_force_accepts(const Automaton& a, const Torus& t) {
  Arena ar = build_arena(a, t);
  auto sym = grid_symbols(a, t);
  std::vector<std::pair<Cell, int>> starts;
  for (int y = 0; y < t.q; ++y)
    for (int x = 0; x < t.p; ++x) starts.push_back({{x, y}, sym[y * t.p + x]});
  return brute_force_on(a, ar, starts);
}

bool brute_force_accepts(const Automaton& a, const FinitePattern& p) {
  Arena ar = build_arena(a, p);
  std::vector<std::pair<Cell, int>> starts;
  for (auto& [c, s] : p.cells) starts.push_back({c, a.symbolIndex(s)});
  return brute_force_on(a, ar, starts);
}

bool exists_only_oracle(const Automaton& a, const Torus& t) {
  for (size_t v = 0; v < a.states.size(); ++v)
    if (effective_quantifier(a, (int)v) == EffQuant::Forall)
      throw Error(ErrCode::NotExistential,
                  "state \"" + a.states[v].id + "\" is effectively universal");
  Arena ar = build_arena(a, t);
  // Plain reachability: a start wins iff it can reach a cycle of the
  // applicable-move graph. Tarjan over move targets.
  int n = ar.nodeCount;
  std::vector<int> idx(n, -1), low(n, 0), comp(n, -1), st;
  std::vector<bool> onSt(n, false);
  int counter = 0, comps = 0;
  std::function<void(int)> dfs = [&](int u) {
    idx[u] = low[u] = counter++;
    st.push_back(u); onSt[u] = true;
    for (auto& m : ar.moves[u]) {
      if (idx[m.to] < 0) { dfs(m.to); low[u] = std::min(low[u], low[m.to]); }
      else if (onSt[m.to]) low[u] = std::min(low[u], idx[m.to]);
    }
    if (low[u] == idx[u]) {
      int id = comps++;
      int w;
      do { w = st.back(); st.pop_back(); onSt[w] = false; comp[w] = id; } while (w != u);
    }
  };
  for (int u = 0; u < n; ++u)
    if (idx[u] < 0) dfs(u);
  std::vector<int> size(comps, 0);
  std::vector<bool> cyclic(comps, false);
  for (int u = 0; u < n; ++u) size[comp[u]]++;
  for (int u = 0; u < n; ++u)
    for (auto& m : ar.moves[u])
      if (comp[m.to] == comp[u] && (size[comp[u]] > 1 || m.to == u)) cyclic[comp[u]] = true;
  // Nodes that can reach a cyclic component.
  std::vector<bool> good(n, false);
  std::function<bool(int)> reach = [&](int u) -> bool {
    if (good[u]) return true;
    if (cyclic[comp[u]]) return good[u] = true;
    for (auto& m : ar.moves[u])
      if (comp[m.to] != comp[u] && reach(m.to)) return good[u] = true;
    return false;
  };
  auto sym = grid_symbols(a, t);
  for (int y = 0; y < t.q; ++y)
    for (int x = 0; x < t.p; ++x) {
      int init = a.initial[sym[y * t.p + x]];
      int u = ar.node({x, y}, init);
      if (u < 0 || !reach(u)) return false;
    }
  return true;
}

bool forall_only_oracle(const Automaton& a, const Torus& t) {
  for (size_t v = 0; v < a.states.size(); ++v)
    if (effective_quantifier(a, (int)v) == EffQuant::Exists)
      throw Error(ErrCode::NotUniversal,
                  "state \"" + a.states[v].id + "\" is effectively existential");
  Arena ar = build_arena(a, t);
  auto sym = grid_symbols(a, t);
  std::vector<bool> seen(ar.nodeCount, false);
  std::vector<int> stack;
  for (int y = 0; y < t.q; ++y)
    for (int x = 0; x < t.p; ++x) {
      int init = a.initial[sym[y * t.p + x]];
      int u = ar.node({x, y}, init);
      if (u < 0) return false;
      if (!seen[u]) { seen[u] = true; stack.push_back(u); }
    }
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    // Genuine forall states lose only when edge-less; wildcard (deterministic)
    // states lose when no move applies here. Either way a losing successor
    // infects the node: wildcard nodes have at most one applicable move, so
    // "some successor loses" and "all successors lose" coincide and plain
    // reachability decides the game.
    if (ar.owner[u] == 1 ? !ar.hasEdge[u] : ar.moves[u].empty()) return false;
    for (auto& m : ar.moves[u])
      if (!seen[m.to]) { seen[m.to] = true; stack.push_back(m.to); }
  }
  return true;
}

// ---------- recognising runs ----------

bool recognising_mode(const Automaton& a) {
  for (auto& e : a.edges)
    if (!(e.dir == Direction{1, 0} || e.dir == Direction{0, 1})) return false;
  for (auto& s : a.states)
    if (s.quant != Quant::Unspecified) return false;
  return true;
}

namespace {

void require_recognising(const Automaton& a) {
  if (!recognising_mode(a))
    throw Error(ErrCode::NotRecognisingMode,
                "automaton is not in recognising mode (directions must be -> and up, "
                "quantifiers unspecified)");
  if (a.states.size() > 64)
    throw Error(ErrCode::PatternTooLarge, "recognising search supports at most 64 states");
}

struct AdjMatrices {
  std::vector<uint64_t> h, v;  // h[s] = bitset of t with edge (s,t,->)
};

AdjMatrices adjacency(const Automaton& a) {
  AdjMatrices m;
  m.h.assign(a.states.size(), 0);
  m.v.assign(a.states.size(), 0);
  for (auto& e : a.edges) {
    if (e.fromIdx < 0 || e.toIdx < 0) continue;
    if (e.dir == Direction{1, 0}) m.h[e.fromIdx] |= 1ull << e.toIdx;
    else m.v[e.fromIdx] |= 1ull << e.toIdx;
  }
  return m;
}

// Generic CSP over a set of cells with horizontal/vertical successor wiring.
// neighbours are indices into the cell list, -1 when unconstrained.
std::optional<std::vector<int>> csp_solve(const Automaton& a,
                                          const std::vector<int>& cellSym,
                                          const std::vector<int>& right,
                                          const std::vector<int>& up) {
  size_t N = cellSym.size();
  AdjMatrices adj = adjacency(a);
  std::vector<uint64_t> hPred(a.states.size(), 0), vPred(a.states.size(), 0);
  for (size_t s = 0; s < a.states.size(); ++s)
    for (size_t tgt = 0; tgt < a.states.size(); ++tgt) {
      if (adj.h[s] >> tgt & 1) hPred[tgt] |= 1ull << s;
      if (adj.v[s] >> tgt & 1) vPred[tgt] |= 1ull << s;
    }
  std::vector<int> left(N, -1), down(N, -1);
  for (size_t i = 0; i < N; ++i) {
    if (right[i] >= 0) left[right[i]] = (int)i;
    if (up[i] >= 0) down[up[i]] = (int)i;
  }
  std::vector<uint64_t> dom(N);
  for (size_t i = 0; i < N; ++i) {
    uint64_t d = 0;
    for (size_t v = 0; v < a.states.size(); ++v)
      if (a.symbolOf[v] == cellSym[i]) d |= 1ull << v;
    dom[i] = d;
    if (!d) return std::nullopt;
  }
  // Arc consistency, then search with min-domain ordering.
  auto revise = [&](std::vector<uint64_t>& d) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < N; ++i) {
        uint64_t before = d[i];
        uint64_t nd = 0;
        for (uint64_t bits = d[i]; bits;) {
          int v = std::countr_zero(bits);
          bits &= bits - 1;
          if (right[i] >= 0 && !(adj.h[v] & d[right[i]])) continue;
          if (up[i] >= 0 && !(adj.v[v] & d[up[i]])) continue;
          if (left[i] >= 0 && !(hPred[v] & d[left[i]])) continue;
          if (down[i] >= 0 && !(vPred[v] & d[down[i]])) continue;
          nd |= 1ull << v;
        }
        d[i] = nd;
        if (nd != before) changed = true;
        if (!nd) return false;
      }
    }
    return true;
  };
  std::vector<int> assign(N, -1);
  std::function<bool(std::vector<uint64_t>)> go = [&](std::vector<uint64_t> d) -> bool {
    if (!revise(d)) return false;
    int pick = -1, best = 1 << 30;
    for (size_t i = 0; i < N; ++i) {
      int c = std::popcount(d[i]);
      if (c > 1 && c < best) { best = c; pick = (int)i; }
    }
    if (pick < 0) {
      for (size_t i = 0; i < N; ++i) assign[i] = std::countr_zero(d[i]);
      return true;
    }
    for (uint64_t bits = d[pick]; bits;) {
      int v = std::countr_zero(bits);
      bits &= bits - 1;
      auto d2 = d;
      d2[pick] = 1ull << v;
      if (go(std::move(d2))) return true;
    }
    return false;
  };
  if (!go(dom)) return std::nullopt;
  return assign;
}

}  // namespace

std::optional<std::map<Cell, int>> recognising_run_exists(const Automaton& a,
                                                          const FinitePattern& p) {
  require_recognising(a);
  std::vector<Cell> cells;
  std::map<Cell, int> index;
  std::vector<int> sym;
  for (auto& [c, s] : p.cells) {
    int i = a.symbolIndex(s);
    if (i < 0)
      throw Error(ErrCode::AlphabetMismatch,
                  "pattern symbol \"" + s + "\" is not in the automaton alphabet");
    index[c] = (int)cells.size();
    cells.push_back(c);
    sym.push_back(i);
  }
  std::vector<int> right(cells.size(), -1), up(cells.size(), -1);
  for (size_t i = 0; i < cells.size(); ++i) {
    auto r = index.find({cells[i].x + 1, cells[i].y});
    if (r != index.end()) right[i] = r->second;
    auto u = index.find({cells[i].x, cells[i].y + 1});
    if (u != index.end()) up[i] = u->second;
  }
  auto sol = csp_solve(a, sym, right, up);
  if (!sol) return std::nullopt;
  std::map<Cell, int> run;
  for (size_t i = 0; i < cells.size(); ++i) run[cells[i]] = (*sol)[i];
  return run;
}

std::optional<std::vector<int>> recognising_run_on_torus(const Automaton& a,
                                                         const Torus& t) {
  require_recognising(a);
  auto sym = grid_symbols(a, t);
  size_t N = sym.size();
  std::vector<int> right(N), up(N);
  for (int y = 0; y < t.q; ++y)
    for (int x = 0; x < t.p; ++x) {
      right[y * t.p + x] = y * t.p + (x + 1) % t.p;
      up[y * t.p + x] = ((y + 1) % t.q) * t.p + x;
    }
  return csp_solve(a, sym, right, up);
}

bool recognising_run_exists_transfer(const Automaton& a, const FinitePattern& p) {
  require_recognising(a);
  int minx = 1 << 30, maxx = -(1 << 30), miny = 1 << 30, maxy = -(1 << 30);
  for (auto& [c, s] : p.cells) {
    minx = std::min(minx, c.x); maxx = std::max(maxx, c.x);
    miny = std::min(miny, c.y); maxy = std::max(maxy, c.y);
  }
  int w = maxx - minx + 1, h = maxy - miny + 1;
  if ((long long)p.cells.size() != (long long)w * h)
    throw Error(ErrCode::BadArgument, "transfer method needs a rectangular support");
  AdjMatrices adj = adjacency(a);
  // Row vectors consistent with symbols and horizontal edges, bottom row up.
  auto rowVectors = [&](int y) {
    std::vector<std::vector<int>> rows;
    std::vector<int> cur;
    std::function<void()> go = [&]() {
      if ((int)cur.size() == w) { rows.push_back(cur); return; }
      int x = minx + (int)cur.size();
      int cs = a.symbolIndex(p.cells.at({x, y}));
      for (size_t v = 0; v < a.states.size(); ++v) {
        if (a.symbolOf[v] != cs) continue;
        if (!cur.empty() && !(adj.h[cur.back()] >> v & 1)) continue;
        cur.push_back((int)v);
        go();
        cur.pop_back();
      }
    };
    go();
    return rows;
  };
  auto prev = rowVectors(miny);
  for (int y = miny + 1; y <= maxy; ++y) {
    auto cand = rowVectors(y);
    std::vector<std::vector<int>> next;
    for (auto& r : cand) {
      bool ok = false;
      for (auto& pr : prev) {
        bool comp = true;
        for (int x = 0; x < w && comp; ++x)
          if (!(adj.v[pr[x]] >> r[x] & 1)) comp = false;
        if (comp) { ok = true; break; }
      }
      if (ok) next.push_back(r);
    }
    prev = std::move(next);
    if (prev.empty()) return false;
  }
  return !prev.empty();
}

// ---------- branches ----------

std::set<Cell> footprint(const Branch& b) {
  std::set<Cell> cells;
  for (auto& s : b.steps) cells.insert(s.cell);
  return cells;
}

std::vector<PumpingPair> find_pumping_pairs(const Branch& b) {
  std::vector<PumpingPair> out;
  for (size_t i = 0; i < b.steps.size(); ++i)
    for (size_t j = i + 1; j < b.steps.size(); ++j)
      if (b.steps[i].state == b.steps[j].state)
        out.push_back({(int)i, (int)j,
                       {b.steps[j].cell.x - b.steps[i].cell.x,
                        b.steps[j].cell.y - b.steps[i].cell.y}});
  return out;
}

Branch pump_branch(const Branch& b, const PumpingPair& pair, int k) {
  Branch r;
  auto shift = [&](BranchStep s, int times) {
    s.cell.x += pair.vector.dx * times;
    s.cell.y += pair.vector.dy * times;
    return s;
  };
  for (int m = 0; m < pair.i; ++m) r.steps.push_back(b.steps[m]);
  for (int rep = 0; rep < k; ++rep)
    for (int m = pair.i; m < pair.j; ++m) r.steps.push_back(shift(b.steps[m], rep));
  for (int m = pair.j; m < (int)b.steps.size(); ++m)
    r.steps.push_back(shift(b.steps[m], k - 1));
  return r;
}

namespace {

std::vector<std::string> replay(const Automaton& a, const Branch& b,
                                const std::function<const std::string*(Cell)>& symAt) {
  std::vector<std::string> issues;
  for (size_t m = 0; m < b.steps.size(); ++m) {
    const BranchStep& s = b.steps[m];
    if (s.state < 0 || s.state >= (int)a.states.size()) {
      issues.push_back("step " + std::to_string(m) + ": state index out of range");
      continue;
    }
    const std::string* sym = symAt(s.cell);
    if (sym && *sym != a.states[s.state].symbol)
      issues.push_back("step " + std::to_string(m) + ": state \"" + a.states[s.state].id +
                       "\" reads \"" + a.states[s.state].symbol + "\" but the cell holds \"" +
                       *sym + "\"");
    bool last = m + 1 == b.steps.size();
    if (last) continue;
    if (s.edge < 0 || s.edge >= (int)a.edges.size()) {
      issues.push_back("step " + std::to_string(m) + ": edge id out of range");
      continue;
    }
    const Edge& e = a.edges[s.edge];
    const BranchStep& nxt = b.steps[m + 1];
    if (e.fromIdx != s.state)
      issues.push_back("step " + std::to_string(m) + ": edge " + std::to_string(s.edge) +
                       " does not leave state \"" + a.states[s.state].id + "\"");
    else {
      if (e.toIdx != nxt.state)
        issues.push_back("step " + std::to_string(m) + ": edge " + std::to_string(s.edge) +
                         " does not enter state \"" + a.states[nxt.state].id + "\"");
      if (nxt.cell.x - s.cell.x != e.dir.dx || nxt.cell.y - s.cell.y != e.dir.dy)
        issues.push_back("step " + std::to_string(m) + ": displacement does not match edge " +
                         std::to_string(s.edge));
    }
  }
  return issues;
}

}  // namespace

std::vector<std::string> replay_branch(const Automaton& a, const Branch& b, const Torus& t) {
  return replay(a, b, [&](Cell c) -> const std::string* { return &t.at(c.x, c.y); });
}

std::vector<std::string> replay_branch(const Automaton& a, const Branch& b,
                                       const FinitePattern& p) {
  return replay(a, b, [&](Cell c) -> const std::string* {
    auto it = p.cells.find(c);
    return it == p.cells.end() ? nullptr : &it->second;
  });
}

}  // namespace pwa
