#include "gallery.hpp"

#include <algorithm>
#include <deque>

#include "gallery_data.hpp"

namespace pwa {

namespace {

const Automaton& load(const char* text) {
  static std::map<const char*, Automaton> cache;
  auto it = cache.find(text);
  if (it == cache.end()) it = cache.emplace(text, automaton_from_json(text)).first;
  return it->second;
}

void require_binary(const std::vector<std::string>& grid) {
  for (auto& s : grid)
    if (s != "0" && s != "1")
      throw Error(ErrCode::AlphabetMismatch, "expected a binary grid, found \"" + s + "\"");
}

}  // namespace

Automaton even_runs_automaton() { return load(embedded::kEvenRunsJson); }

bool in_even_runs(const Torus& t) {
  require_binary(t.grid);
  // Rows, then columns: a fully-1 line wraps around (infinite run); otherwise
  // every maximal cyclic run of 1s must have even length.
  auto lineOk = [&](int len, const std::function<const std::string&(int)>& at) {
    bool all1 = true;
    for (int i = 0; i < len; ++i)
      if (at(i) == "0") all1 = false;
    if (all1) return true;
    auto wrap = [&](int i) -> const std::string& { return at(((i % len) + len) % len); };
    for (int i = 0; i < len; ++i) {
      if (wrap(i) == "1" && wrap(i - 1) == "0") {
        int run = 0;
        while (wrap(i + run) == "1") run++;
        if (run % 2) return false;
      }
    }
    return true;
  };
  for (int y = 0; y < t.q; ++y)
    if (!lineOk(t.p, [&](int i) -> const std::string& { return t.at(i, y); })) return false;
  for (int x = 0; x < t.p; ++x)
    if (!lineOk(t.q, [&](int i) -> const std::string& { return t.at(x, i); })) return false;
  return true;
}

Automaton ssu_automaton() { return load(embedded::kSsuJson); }

bool in_ssu(const Torus& t) {
  require_binary(t.grid);
  for (auto& s : t.grid)
    if (s == "1") return false;
  return true;
}

bool in_ssu(const FinitePattern& p) {
  int ones = 0;
  for (auto& [c, s] : p.cells) {
    if (s != "0" && s != "1")
      throw Error(ErrCode::AlphabetMismatch, "expected a binary pattern, found \"" + s + "\"");
    if (s == "1") ones++;
  }
  return ones <= 1;
}

Automaton cone_labyrinth_core() { return load(embedded::kConeLabyrinthCoreJson); }

SftSpec cone_labyrinth_forbidden() {
  return sft_from_json(embedded::kConeLabyrinthForbiddenJson);
}

Automaton cone_labyrinth_automaton() {
  return intersect_with_sft(cone_labyrinth_core(), cone_labyrinth_forbidden());
}

namespace {

// Shared labyrinth scan; symAt returns nullptr off the support (never on a
// torus). Entrance searches use steps (1,1),(1,0),(1,-1) through 0-cells and
// succeed on a 1-cell whose right neighbour is #.
LabyrinthVerdict labyrinth_scan(const std::vector<Cell>& cells,
                                const std::function<const std::string*(Cell)>& symAt,
                                const std::function<Cell(Cell)>& canon,
                                bool patternMode) {
  LabyrinthVerdict verdict;
  for (Cell c : cells) {
    const std::string* s = symAt(c);
    if (*s != "0" && *s != "1" && *s != "#")
      throw Error(ErrCode::AlphabetMismatch,
                  "labyrinth alphabet is {0,1,#}, found \"" + *s + "\"");
  }
  SftSpec forb = cone_labyrinth_forbidden();
  for (Cell c : cells) {
    for (auto& p : forb.forbidden) {
      bool match = true;
      for (auto& [d, want] : p.cells) {
        const std::string* s = symAt({c.x + d.x, c.y + d.y});
        if (!s || *s != want) { match = false; break; }
      }
      if (match) {
        verdict.violations.push_back({LabyrinthViolation::Kind::ForbiddenPattern, c});
        break;  // one violation per anchor cell is enough
      }
    }
  }
  for (Cell c : cells) {
    const std::string* here = symAt(c);
    const std::string* right = symAt({c.x + 1, c.y});
    if (*here != "#" || !right || *right != "1") continue;
    // Entrance #1 anchored at c. Search from the entrance 1 itself: the
    // first step may already land diagonally on an exit. Steps expand from
    // the start and from 0-cells; a visited 1 whose right neighbour is #
    // is a matching exit.
    Cell start = canon({c.x + 1, c.y});
    std::set<Cell> seen;
    std::deque<Cell> queue{start};
    bool matched = false, escaped = false;
    while (!queue.empty() && !matched) {
      // Canonical coordinates keep the search finite on a torus.
      Cell u = canon(queue.front());
      queue.pop_front();
      if (!seen.insert(u).second) continue;
      const std::string* s = symAt(u);
      if (!s) { escaped = true; break; }
      if (*s == "1" && !(u == start)) {
        const std::string* r = symAt({u.x + 1, u.y});
        if (!r) { escaped = true; break; }
        if (*r == "#") matched = true;
        continue;
      }
      if (*s != "0" && !(u == start)) continue;
      for (int dy : {1, 0, -1}) queue.push_back({u.x + 1, u.y + dy});
    }
    if (escaped && patternMode) {
      verdict.escapedEntrances.push_back(c);
    } else if (!matched) {
      verdict.violations.push_back({LabyrinthViolation::Kind::UnmatchedEntrance, c});
    }
  }
  verdict.inSubshift = verdict.violations.empty();
  return verdict;
}

}  // namespace

LabyrinthVerdict in_cone_labyrinth(const Torus& t) {
  std::vector<Cell> cells;
  for (int y = 0; y < t.q; ++y)
    for (int x = 0; x < t.p; ++x) cells.push_back({x, y});
  return labyrinth_scan(
      cells, [&](Cell c) -> const std::string* { return &t.at(c.x, c.y); },
      [&](Cell c) -> Cell {
        return {((c.x % t.p) + t.p) % t.p, ((c.y % t.q) + t.q) % t.q};
      },
      false);
}

LabyrinthVerdict in_cone_labyrinth(const FinitePattern& p) {
  std::vector<Cell> cells;
  for (auto& [c, s] : p.cells) cells.push_back(c);
  return labyrinth_scan(
      cells,
      [&](Cell c) -> const std::string* {
        auto it = p.cells.find(c);
        return it == p.cells.end() ? nullptr : &it->second;
      },
      [](Cell c) { return c; }, true);
}

FinitePattern xn_pattern(int n) {
  if (n < 1) throw Error(ErrCode::BadArgument, "corridor width must be >= 1");
  // Columns -1 and n are walls; the interior is 0 except the entrance 1 at
  // (0,0). Height 2n+1 keeps the cone search inside the support, so the
  // missing exit is a genuine violation rather than a boundary escape.
  FinitePattern p;
  for (int y = -n; y <= n; ++y) {
    p.cells[{-1, y}] = "#";
    p.cells[{n, y}] = "#";
    for (int x = 0; x < n; ++x) p.cells[{x, y}] = "0";
  }
  p.cells[{0, 0}] = "1";
  return p;
}

FinitePattern kari_moore_rectangle(int n, int k) {
  if (n < 1 || k < 1) throw Error(ErrCode::BadArgument, "rectangle needs n, k >= 1");
  FinitePattern p;
  for (int y = 0; y <= k; ++y)
    for (int x = 0; x <= n; ++x) p.cells[{x, y}] = (x == 0 || y == 0) ? "1" : "0";
  return p;
}

Torus kari_moore_torus(int n, int k) {
  FinitePattern p = kari_moore_rectangle(n, k);
  Torus t;
  t.p = n + 1;
  t.q = k + 1;
  t.grid.resize(t.p * t.q);
  for (auto& [c, s] : p.cells) t.at(c.x, c.y) = s;
  return t;
}

bool is_in_f_default(int n, int m, bool strict) {
  if (n < 1 || m < 0) throw Error(ErrCode::BadArgument, "need n >= 1 and m >= 0");
  for (int i = 0; i <= m; ++i)
    for (int j = 0; strict ? j < i : j <= i; ++j)
      if (i * n + j == m) return true;
  return false;
}

int complement_max(int n, bool strict) {
  if (n < 2) throw Error(ErrCode::BadArgument, "complement scan needs n >= 2");
  int best = -1;
  for (int m = 0; m <= 2 * n * n; ++m)
    if (!is_in_f_default(n, m, strict)) best = m;
  if (best < 0)
    throw Error(ErrCode::NoComplementFound, "no complement element below the scan bound");
  return best;
}

std::vector<GalleryEntry> gallery_list() {
  return {
      {"even_runs",
       "binary: cyclic runs of 1s have even length or wrap the whole line"},
      {"ssu", "binary: at most one 1 anywhere (no 1 at all on a torus)"},
      {"cone_labyrinth",
       "walls/corridors over {0,1,#}: every entrance #1 reaches an exit 1#"},
      {"cone_labyrinth_core",
       "the cone-labyrinth walker alone, wall layout not enforced"},
  };
}

Automaton gallery_automaton(const std::string& name) {
  if (name == "even_runs") return even_runs_automaton();
  if (name == "ssu") return ssu_automaton();
  if (name == "cone_labyrinth") return cone_labyrinth_automaton();
  if (name == "cone_labyrinth_core") return cone_labyrinth_core();
  throw Error(ErrCode::BadArgument, "unknown gallery automaton \"" + name + "\"");
}

}  // namespace pwa
