#include "constructions.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <memory>
#include <sstream>

#include <json.hpp>

namespace pwa {

using nlohmann::json;

SftSpec sft_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrCode::Parse, std::string("JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrCode::Parse, "SFT file must be a JSON object");
  for (auto& [k, v] : j.items())
    if (k != "alphabet" && k != "forbidden")
      throw Error(ErrCode::Parse, "unknown key \"" + k + "\" in SFT");
  for (auto* k : {"alphabet", "forbidden"})
    if (!j.contains(k)) throw Error(ErrCode::Parse, std::string("missing key \"") + k + "\"");
  SftSpec f;
  if (!j["alphabet"].is_array()) throw Error(ErrCode::Parse, "\"alphabet\" must be an array");
  for (auto& s : j["alphabet"]) {
    if (!s.is_string()) throw Error(ErrCode::Parse, "alphabet entries must be strings");
    f.alphabet.push_back(s.get<std::string>());
  }
  if (!j["forbidden"].is_array()) throw Error(ErrCode::Parse, "\"forbidden\" must be an array");
  for (auto& p : j["forbidden"]) {
    if (!p.is_array()) throw Error(ErrCode::Parse, "forbidden patterns must be arrays of cells");
    FinitePattern pat;
    for (auto& c : p) {
      if (!c.is_object()) throw Error(ErrCode::Parse, "pattern cells must be objects");
      for (auto& [k, v] : c.items())
        if (k != "x" && k != "y" && k != "symbol")
          throw Error(ErrCode::Parse, "unknown key \"" + k + "\" in pattern cell");
      for (auto* k : {"x", "y", "symbol"})
        if (!c.contains(k))
          throw Error(ErrCode::Parse, std::string("pattern cell missing key \"") + k + "\"");
      if (!c["x"].is_number_integer() || !c["y"].is_number_integer())
        throw Error(ErrCode::Parse, "pattern cell coordinates must be integers");
      std::string sym = c["symbol"].get<std::string>();
      if (std::find(f.alphabet.begin(), f.alphabet.end(), sym) == f.alphabet.end())
        throw Error(ErrCode::Parse, "pattern symbol \"" + sym + "\" is not in the alphabet");
      Cell cell{c["x"].get<int>(), c["y"].get<int>()};
      if (pat.cells.count(cell))
        throw Error(ErrCode::Parse, "pattern assigns a cell twice");
      pat.cells[cell] = sym;
    }
    if (pat.cells.empty()) throw Error(ErrCode::Parse, "forbidden patterns must be nonempty");
    f.forbidden.push_back(std::move(pat));
  }
  return f;
}

std::string sft_to_json(const SftSpec& f) {
  if (f.predicateForm)
    throw Error(ErrCode::BadArgument, "predicate-form SFTs are not serializable");
  json j;
  j["alphabet"] = f.alphabet;
  j["forbidden"] = json::array();
  for (auto& p : f.forbidden) {
    json cells = json::array();
    for (auto& [c, s] : p.cells)
      cells.push_back({{"x", c.x}, {"y", c.y}, {"symbol", s}});
    j["forbidden"].push_back(cells);
  }
  return j.dump(2) + "\n";
}

bool occurs_at(const FinitePattern& forb, const Torus& t, int x, int y) {
  for (auto& [c, s] : forb.cells)
    if (t.at(x + c.x, y + c.y) != s) return false;
  return true;
}

bool torus_avoids(const SftSpec& f, const Torus& t) {
  if (f.predicateForm)
    throw Error(ErrCode::BadArgument, "torus_avoids needs an explicit forbidden list");
  for (auto& forb : f.forbidden)
    for (int y = 0; y < t.q; ++y)
      for (int x = 0; x < t.p; ++x)
        if (occurs_at(forb, t, x, y)) return false;
  return true;
}

namespace {

enum class DominoKind { Horizontal, Vertical, Neither };

DominoKind domino_kind(const FinitePattern& p) {
  if (p.cells.size() != 2) return DominoKind::Neither;
  if (!p.cells.count({0, 0})) return DominoKind::Neither;
  if (p.cells.count({1, 0})) return DominoKind::Horizontal;
  if (p.cells.count({0, 1})) return DominoKind::Vertical;
  return DominoKind::Neither;
}

}  // namespace

Automaton sft_to_recogniser(const SftSpec& f,
                            const std::map<std::string, std::string>& proj) {
  if (f.predicateForm)
    throw Error(ErrCode::NotDominoSft, "predicate-form SFT is not domino-shaped");
  std::set<std::pair<std::string, std::string>> forbH, forbV;
  for (auto& p : f.forbidden) {
    switch (domino_kind(p)) {
      case DominoKind::Horizontal:
        forbH.insert({p.cells.at({0, 0}), p.cells.at({1, 0})});
        break;
      case DominoKind::Vertical:
        forbV.insert({p.cells.at({0, 0}), p.cells.at({0, 1})});
        break;
      default:
        throw Error(ErrCode::NotDominoSft,
                    "forbidden pattern is not a {(0,0),(1,0)} or {(0,0),(0,1)} domino");
    }
  }
  Automaton a;
  for (auto& s : f.alphabet) {
    auto it = proj.find(s);
    if (it == proj.end())
      throw Error(ErrCode::BadArgument, "projection is missing symbol \"" + s + "\"");
    if (std::find(a.alphabet.begin(), a.alphabet.end(), it->second) == a.alphabet.end())
      a.alphabet.push_back(it->second);
    a.states.push_back({s, it->second, Quant::Unspecified});
  }
  for (auto& s : f.alphabet)
    for (auto& s2 : f.alphabet)
      if (!forbH.count({s, s2})) a.edges.push_back({s, s2, -1, -1, {1, 0}});
  for (auto& s : f.alphabet)
    for (auto& s2 : f.alphabet)
      if (!forbV.count({s, s2})) a.edges.push_back({s, s2, -1, -1, {0, 1}});
  a.resolve();
  return a;
}

std::pair<SftSpec, std::map<std::string, std::string>> recogniser_to_sft(
    const Automaton& a) {
  if (!recognising_mode(a))
    throw Error(ErrCode::NotRecognisingMode, "automaton is not in recognising mode");
  std::set<std::pair<std::string, std::string>> edgeH, edgeV;
  for (auto& e : a.edges) {
    if (e.dir == Direction{1, 0}) edgeH.insert({e.from, e.to});
    else edgeV.insert({e.from, e.to});
  }
  SftSpec f;
  for (auto& s : a.states) f.alphabet.push_back(s.id);
  for (auto& s : a.states)
    for (auto& s2 : a.states)
      if (!edgeH.count({s.id, s2.id})) {
        FinitePattern p;
        p.cells[{0, 0}] = s.id;
        p.cells[{1, 0}] = s2.id;
        f.forbidden.push_back(p);
      }
  for (auto& s : a.states)
    for (auto& s2 : a.states)
      if (!edgeV.count({s.id, s2.id})) {
        FinitePattern p;
        p.cells[{0, 0}] = s.id;
        p.cells[{0, 1}] = s2.id;
        f.forbidden.push_back(p);
      }
  std::map<std::string, std::string> proj;
  for (auto& s : a.states) proj[s.id] = s.symbol;
  return {f, proj};
}

BlockCoding higher_block_code(const SftSpec& f, int n) {
  if (f.predicateForm)
    throw Error(ErrCode::BadArgument, "block coding needs an explicit forbidden list");
  if (n < 1) throw Error(ErrCode::BadArgument, "block size must be >= 1");
  // Translate each forbidden pattern so its bounding box starts at (0,0).
  std::vector<FinitePattern> forb;
  for (auto& p : f.forbidden) {
    int minx = 1 << 30, miny = 1 << 30, maxx = -(1 << 30), maxy = -(1 << 30);
    for (auto& [c, s] : p.cells) {
      minx = std::min(minx, c.x); maxx = std::max(maxx, c.x);
      miny = std::min(miny, c.y); maxy = std::max(maxy, c.y);
    }
    if (maxx - minx + 1 > n || maxy - miny + 1 > n)
      throw Error(ErrCode::PatternTooLarge,
                  "forbidden pattern does not fit in an n x n window");
    FinitePattern q;
    for (auto& [c, s] : p.cells) q.cells[{c.x - minx, c.y - miny}] = s;
    forb.push_back(q);
  }
  int S = (int)f.alphabet.size();
  long long total = 1;
  for (int i = 0; i < n * n; ++i) {
    total *= S;
    if (total > 4096)
      throw Error(ErrCode::PatternTooLarge, "window alphabet would exceed 4096 symbols");
  }
  // Enumerate legal windows: cell (x,y), index y*n+x.
  auto windowName = [&](const std::vector<int>& w) {
    std::ostringstream o;
    o << "w[";
    for (int y = 0; y < n; ++y) {
      if (y) o << "/";
      for (int x = 0; x < n; ++x) {
        if (x) o << ",";
        o << f.alphabet[w[y * n + x]];
      }
    }
    o << "]";
    return o.str();
  };
  auto legal = [&](const std::vector<int>& w) {
    for (auto& p : forb)
      for (int oy = 0; oy < n; ++oy)
        for (int ox = 0; ox < n; ++ox) {
          bool fits = true, match = true;
          for (auto& [c, s] : p.cells) {
            int x = ox + c.x, y = oy + c.y;
            if (x >= n || y >= n) { fits = false; break; }
            if (f.alphabet[w[y * n + x]] != s) { match = false; break; }
          }
          if (fits && match) return false;
        }
    return true;
  };
  std::vector<std::vector<int>> windows;
  std::vector<int> cur(n * n, 0);
  for (long long i = 0; i < total; ++i) {
    long long v = i;
    for (int k = 0; k < n * n; ++k) { cur[k] = (int)(v % S); v /= S; }
    if (legal(cur)) windows.push_back(cur);
  }
  BlockCoding out;
  for (auto& w : windows) {
    std::string name = windowName(w);
    out.sft.alphabet.push_back(name);
    out.decode[name] = f.alphabet[w[0]];
  }
  // Overlap-consistency dominoes: a pair is forbidden when the shifted
  // window contents disagree.
  auto consistentH = [&](const std::vector<int>& w, const std::vector<int>& w2) {
    for (int y = 0; y < n; ++y)
      for (int x = 0; x + 1 < n; ++x)
        if (w[y * n + x + 1] != w2[y * n + x]) return false;
    return true;
  };
  auto consistentV = [&](const std::vector<int>& w, const std::vector<int>& w2) {
    for (int y = 0; y + 1 < n; ++y)
      for (int x = 0; x < n; ++x)
        if (w[(y + 1) * n + x] != w2[y * n + x]) return false;
    return true;
  };
  for (size_t i = 0; i < windows.size(); ++i)
    for (size_t j = 0; j < windows.size(); ++j) {
      if (!consistentH(windows[i], windows[j])) {
        FinitePattern p;
        p.cells[{0, 0}] = out.sft.alphabet[i];
        p.cells[{1, 0}] = out.sft.alphabet[j];
        out.sft.forbidden.push_back(p);
      }
      if (!consistentV(windows[i], windows[j])) {
        FinitePattern p;
        p.cells[{0, 0}] = out.sft.alphabet[i];
        p.cells[{0, 1}] = out.sft.alphabet[j];
        out.sft.forbidden.push_back(p);
      }
    }
  return out;
}

// ---------- guard ----------

GuardAutomaton guard_automaton(const SftSpec& f,
                               const std::vector<std::string>& alphabet) {
  if (f.predicateForm)
    throw Error(ErrCode::PatternTooLarge, "guard needs an explicit forbidden list");
  // Support cells in reading order (top row first), bounding box at most 3x3.
  std::vector<std::vector<Cell>> walks;
  for (auto& p : f.forbidden) {
    int minx = 1 << 30, miny = 1 << 30, maxx = -(1 << 30), maxy = -(1 << 30);
    for (auto& [c, s] : p.cells) {
      minx = std::min(minx, c.x); maxx = std::max(maxx, c.x);
      miny = std::min(miny, c.y); maxy = std::max(maxy, c.y);
    }
    if (maxx - minx + 1 > 3 || maxy - miny + 1 > 3)
      throw Error(ErrCode::PatternTooLarge,
                  "forbidden pattern exceeds a 3x3 bounding box");
    std::vector<Cell> cells;
    for (auto& [c, s] : p.cells) cells.push_back(c);
    std::sort(cells.begin(), cells.end(), [](Cell a, Cell b) {
      return a.y != b.y ? a.y > b.y : a.x < b.x;
    });
    walks.push_back(cells);
  }
  GuardAutomaton g;
  Automaton& a = g.automaton;
  a.alphabet = alphabet;
  auto addState = [&](const std::string& id, const std::string& sym) {
    a.states.push_back({id, sym, Quant::Unspecified});
  };
  auto addEdge = [&](const std::string& from, const std::string& to, Direction d) {
    a.edges.push_back({from, to, -1, -1, d});
  };
  for (auto& s : alphabet) {
    addState("g!start!" + s, s);
    a.initialRaw.push_back({s, "g!start!" + s});
  }
  for (auto& s : alphabet) {
    addState("g!hand!" + s, s);
    addEdge("g!hand!" + s, "g!hand!" + s, {0, 0});
    g.handoff[s] = "g!hand!" + s;
  }
  auto walkState = [&](size_t t, size_t k, const std::string& s, bool m) {
    return "g!t" + std::to_string(t) + "!k" + std::to_string(k) + "!" + s +
           (m ? "!y" : "!n");
  };
  // Per (pattern, position, symbol read, matched-so-far) walk states. The
  // matched=true variant exists only when the read symbol equals the
  // pattern's; the final fully-matched state has no outgoing edge.
  for (size_t t = 0; t < walks.size(); ++t) {
    auto& cells = walks[t];
    const FinitePattern& pat = f.forbidden[t];
    for (size_t k = 0; k < cells.size(); ++k) {
      const std::string want = pat.cells.at(cells[k]);
      for (auto& s : alphabet) {
        if (s == want) addState(walkState(t, k, s, true), s);
        addState(walkState(t, k, s, false), s);
      }
    }
  }
  // Entry edges into pattern t from a list of sources standing at the
  // previous cell.
  auto enter = [&](const std::vector<std::string>& sources, Cell from, size_t t) {
    auto& cells = walks[t];
    const std::string want = f.forbidden[t].cells.at(cells[0]);
    Direction d{cells[0].x - from.x, cells[0].y - from.y};
    for (auto& src : sources)
      for (auto& s : a.alphabet)
        addEdge(src, walkState(t, 0, s, s == want), d);
  };
  auto returnHome = [&](const std::vector<std::string>& sources, Cell from) {
    Direction d{-from.x, -from.y};
    for (auto& src : sources)
      for (auto& s : a.alphabet) addEdge(src, "g!hand!" + s, d);
  };
  std::vector<std::string> starts;
  for (auto& s : alphabet) starts.push_back("g!start!" + s);
  if (walks.empty()) {
    returnHome(starts, {0, 0});
  } else {
    enter(starts, {0, 0}, 0);
    for (size_t t = 0; t < walks.size(); ++t) {
      auto& cells = walks[t];
      const FinitePattern& pat = f.forbidden[t];
      for (size_t k = 0; k + 1 < cells.size(); ++k) {
        const std::string want = pat.cells.at(cells[k]);
        const std::string wantNext = pat.cells.at(cells[k + 1]);
        Direction d{cells[k + 1].x - cells[k].x, cells[k + 1].y - cells[k].y};
        for (auto& s : a.alphabet) {
          std::vector<std::string> srcs = {walkState(t, k, s, false)};
          if (s == want) srcs.push_back(walkState(t, k, s, true));
          for (auto& src : srcs) {
            bool m = src.back() == 'y';
            for (auto& s2 : a.alphabet)
              addEdge(src, walkState(t, k + 1, s2, m && s2 == wantNext), d);
          }
        }
      }
      // Final position: matched variants dead-end; unmatched ones move on.
      size_t last = cells.size() - 1;
      std::vector<std::string> unmatched;
      for (auto& s : a.alphabet) unmatched.push_back(walkState(t, last, s, false));
      if (t + 1 < walks.size()) enter(unmatched, cells[last], t + 1);
      else returnHome(unmatched, cells[last]);
    }
  }
  a.resolve();
  return g;
}

Automaton intersect_with_sft(const Automaton& base, const SftSpec& f) {
  GuardAutomaton g = guard_automaton(f, base.alphabet);
  std::map<std::string, std::string> initOf;  // symbol -> base initial id
  for (auto& [sym, id] : base.initialRaw) initOf[sym] = id;
  Automaton r;
  r.alphabet = base.alphabet;
  std::set<std::string> baseIds;
  for (auto& s : base.states) baseIds.insert(s.id);
  r.states = base.states;
  std::set<std::string> handoffIds;
  for (auto& [sym, id] : g.handoff) handoffIds.insert(id);
  for (auto& s : g.automaton.states) {
    if (handoffIds.count(s.id)) continue;
    if (baseIds.count(s.id))
      throw Error(ErrCode::BadArgument,
                  "state id collision with guard state \"" + s.id + "\"");
    r.states.push_back(s);
  }
  r.edges = base.edges;
  auto handSym = [&](const std::string& id) -> const std::string* {
    for (auto& [sym, hid] : g.handoff)
      if (hid == id) return &sym;
    return nullptr;
  };
  for (auto& e : g.automaton.edges) {
    if (handoffIds.count(e.from)) continue;  // drop the handoff self-loops
    Edge e2 = e;
    if (auto* sym = handSym(e.to)) {
      auto it = initOf.find(*sym);
      if (it == initOf.end())
        throw Error(ErrCode::AlphabetMismatch,
                    "base automaton has no initial state for symbol \"" + *sym + "\"");
      e2.to = it->second;
    }
    r.edges.push_back(e2);
  }
  for (auto& s : base.alphabet) r.initialRaw.push_back({s, "g!start!" + s});
  std::sort(r.initialRaw.begin(), r.initialRaw.end());
  r.resolve();
  return r;
}

// ---------- powerset cover ----------

static const std::array<Cell, 5> kPlus = {
    Cell{0, 0}, Cell{-1, 0}, Cell{1, 0}, Cell{0, 1}, Cell{0, -1}};

std::string Cover::productSymbol(const std::string& baseSym, unsigned mask) const {
  return baseSym + "|" + std::to_string(mask);
}

bool Cover::forbiddenPlus(const std::array<std::pair<int, unsigned>, 5>& cells) const {
  return forbiddenPlusClause(cells) != 0;
}

int Cover::forbiddenPlusClause(const std::array<std::pair<int, unsigned>, 5>& cells) const {
  const auto [centerSym, centerSet] = cells[0];
  // (1) a state in the set reads a different symbol.
  for (unsigned bits = centerSet; bits;) {
    int v = std::countr_zero(bits);
    bits &= bits - 1;
    if (base.symbolOf[v] != centerSym) return 1;
  }
  // (2) no initial state in the set.
  bool hasInitial = false;
  for (int s : base.initial)
    if (s >= 0 && (centerSet >> s & 1)) hasInitial = true;
  if (!hasInitial) return 2;
  // (3) a state in the set fails its quantifier condition against the
  // neighbour sets: an applicable edge is one whose target state reads the
  // symbol actually present in that direction.
  auto dirIndex = [&](Direction d) {
    for (size_t i = 0; i < kPlus.size(); ++i)
      if (kPlus[i].x == d.dx && kPlus[i].y == d.dy) return (int)i;
    return -1;
  };
  for (unsigned bits = centerSet; bits;) {
    int v = std::countr_zero(bits);
    bits &= bits - 1;
    EffQuant q = effective_quantifier(base, v);
    bool applicableInSet = false, applicableOutOfSet = false;
    for (int k : base.out[v]) {
      const Edge& e = base.edges[k];
      int di = dirIndex(e.dir);
      if (di < 0)
        throw Error(ErrCode::BadArgument, "cover predicate needs unit directions");
      auto [sym, set] = cells[di];
      if (base.symbolOf[e.toIdx] != sym) continue;  // inapplicable here
      if (set >> e.toIdx & 1) applicableInSet = true;
      else applicableOutOfSet = true;
    }
    if (q == EffQuant::Forall) {
      // Mirrors the solver: an applicable edge escaping the set is fatal, as
      // is having no outgoing edge at all; all edges inapplicable is fine.
      if (applicableOutOfSet || base.out[v].empty()) return 3;
    } else {
      if (!applicableInSet) return 3;
    }
  }
  return 0;
}

namespace {

Automaton cover_base(const Automaton& a) {
  bool unit = true;
  for (auto& e : a.edges)
    if (!e.dir.unit()) unit = false;
  Automaton na = unit ? a : normalize_directions(a);
  if (na.states.size() > 16)
    throw Error(ErrCode::TooManyStates,
                "cover construction supports at most 16 states (after direction "
                "normalization), got " + std::to_string(na.states.size()));
  return na;
}

}  // namespace

Cover alternating_to_cover(const Automaton& a) {
  auto cover = std::make_shared<Cover>();
  cover->base = cover_base(a);
  cover->plus.assign(kPlus.begin(), kPlus.end());
  SftSpec& f = cover->sft;
  f.predicateForm = true;
  f.shape.assign(kPlus.begin(), kPlus.end());
  unsigned maskCount = 1u << cover->base.states.size();
  for (auto& s : cover->base.alphabet)
    for (unsigned m = 0; m < maskCount; ++m) f.alphabet.push_back(s + "|" + std::to_string(m));
  Cover* cp = cover.get();
  f.forbiddenPred = [cover, cp](const std::map<Cell, std::string>& cells) {
    std::array<std::pair<int, unsigned>, 5> arr;
    for (size_t i = 0; i < kPlus.size(); ++i) {
      auto it = cells.find(kPlus[i]);
      if (it == cells.end())
        throw Error(ErrCode::BadArgument, "plus-shaped pattern is missing a cell");
      auto bar = it->second.rfind('|');
      if (bar == std::string::npos)
        throw Error(ErrCode::BadArgument, "not a product symbol: " + it->second);
      int sym = cp->base.symbolIndex(it->second.substr(0, bar));
      if (sym < 0)
        throw Error(ErrCode::BadArgument, "unknown base symbol in " + it->second);
      arr[i] = {sym, (unsigned)std::stoul(it->second.substr(bar + 1))};
    }
    return cp->forbiddenPlus(arr);
  };
  return *cover;
}

Torus annotate(const Automaton& a, const Torus& t) {
  Automaton na = cover_base(a);
  Arena ar = build_arena(na, t);
  WinningSet w = solve(ar);
  Torus out;
  out.p = t.p;
  out.q = t.q;
  out.grid.assign(t.grid.size(), "");
  for (int y = 0; y < t.q; ++y)
    for (int x = 0; x < t.p; ++x) {
      unsigned mask = 0;
      for (size_t v = 0; v < na.states.size(); ++v) {
        int n = ar.node({x, y}, (int)v);
        if (n >= 0 && w.in[n]) mask |= 1u << v;
      }
      out.at(x, y) = t.at(x, y) + "|" + std::to_string(mask);
    }
  return out;
}

bool cover_consistent(const Automaton& a, const Torus& t) {
  Automaton na = cover_base(a);
  Cover cover = alternating_to_cover(na);
  Torus ann = annotate(na, t);
  auto parse = [&](const std::string& s) -> std::pair<int, unsigned> {
    auto bar = s.rfind('|');
    return {na.symbolIndex(s.substr(0, bar)), (unsigned)std::stoul(s.substr(bar + 1))};
  };
  for (int y = 0; y < t.q; ++y)
    for (int x = 0; x < t.p; ++x) {
      std::array<std::pair<int, unsigned>, 5> arr;
      for (size_t i = 0; i < cover.plus.size(); ++i)
        arr[i] = parse(ann.at(x + cover.plus[i].x, y + cover.plus[i].y));
      if (cover.forbiddenPlus(arr)) return false;
    }
  return true;
}

Torus lift_word(const std::vector<std::string>& w, int q) {
  if (w.empty() || q < 1)
    throw Error(ErrCode::BadArgument, "lift needs a nonempty word and height >= 1");
  Torus t;
  t.p = (int)w.size();
  t.q = q;
  t.grid.assign(t.p * t.q, "");
  for (int y = 0; y < q; ++y)
    for (int x = 0; x < t.p; ++x) t.at(x, y) = w[x];
  return t;
}

Automaton flatten_automaton(const Automaton& a) {
  Automaton r = a;
  for (auto& e : r.edges) e.dir.dy = 0;
  r.resolve();
  return r;
}

}  // namespace pwa
