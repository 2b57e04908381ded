#pragma once

#include <cstdlib>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Plane-walking automata over Z^2: domain types, validation, hierarchy
// classification, direction normalization, and the file formats.

namespace pwa {

enum class ErrCode {
  Parse,
  NondeterministicUnquantified,
  AlphabetMismatch,
  ArenaTooLarge,
  NotExistential,
  NotUniversal,
  NotRecognisingMode,
  NotDominoSft,
  PatternTooLarge,
  TooManyStates,
  BoundTooLarge,
  NoComplementFound,
  BadArgument,
};

struct Error : std::runtime_error {
  ErrCode code;
  Error(ErrCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

struct Direction {
  int dx = 0;
  int dy = 0;
  bool operator==(const Direction&) const = default;
  auto operator<=>(const Direction&) const = default;
  bool unit() const {
    return (dx == 0 && dy == 0) || (std::abs(dx) + std::abs(dy) == 1);
  }
};

enum class Quant { Exists, Forall, Unspecified };
enum class EffQuant { Exists, Forall, Wildcard };

struct State {
  std::string id;
  std::string symbol;    // token; resolved index in Automaton::symbolOf
  Quant quant = Quant::Unspecified;
};

struct Edge {
  std::string from, to;  // state ids as written
  int fromIdx = -1, toIdx = -1;
  Direction dir;
};

// Labelled graph (V, E, Sigma, D, I, Q). Dangling references are kept (as
// index -1) so validate_automaton can name them instead of refusing to load.
struct Automaton {
  std::vector<std::string> alphabet;
  std::vector<State> states;
  std::vector<Edge> edges;
  std::vector<std::pair<std::string, std::string>> initialRaw;  // symbol -> state id
  std::vector<int> initial;    // per alphabet index: state index or -1
  std::vector<int> symbolOf;   // per state index: alphabet index or -1
  std::vector<std::vector<int>> out;  // per state: edge ids, ascending

  int symbolIndex(const std::string& token) const;
  int stateIndex(const std::string& id) const;
  // Recomputes indices and adjacency from the string fields.
  void resolve();
};

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
  auto operator<=>(const Cell&) const = default;
};

struct FinitePattern {
  std::map<Cell, std::string> cells;  // nonempty finite support
};

struct Torus {
  int p = 1, q = 1;
  std::vector<std::string> grid;  // index y*p + x; cell (i,j) = grid(i mod p, j mod q)

  const std::string& at(int x, int y) const {
    int i = ((x % p) + p) % p, j = ((y % q) + q) % q;
    return grid[j * p + i];
  }
  std::string& at(int x, int y) {
    int i = ((x % p) + p) % p, j = ((y % q) + q) % q;
    return grid[j * p + i];
  }
};

struct HierarchyLevel {
  enum Kind { Delta, Sigma, Pi, AltUnbounded } kind = Delta;
  int n = 1;  // >= 1; ignored for AltUnbounded

  bool operator==(const HierarchyLevel&) const = default;
  std::string str() const;
};

// Partial order: Delta(n) <= Sigma(n) <= Delta(n+1), same for Pi;
// everything <= AltUnbounded. Sigma(n) and Pi(n) are incomparable.
bool level_leq(const HierarchyLevel& a, const HierarchyLevel& b);

std::vector<std::string> validate_automaton(const Automaton& a);

EffQuant effective_quantifier(const Automaton& a, int stateIdx);

HierarchyLevel classify(const Automaton& a);

Automaton normalize_directions(const Automaton& a);

// JSON automaton format; unknown keys rejected.
Automaton automaton_from_json(const std::string& text);
std::string automaton_to_json(const Automaton& a);

// Pattern/torus text format. Rows top-to-bottom (row 0 = highest y), "."
// marks cells outside the support, tori start with a "torus p q" header.
struct Grid {
  bool isTorus = false;
  Torus torus;
  FinitePattern pattern;
};
Grid grid_parse(const std::string& text);
std::string grid_render(const Grid& g);
std::string torus_render(const Torus& t);
std::string pattern_render(const FinitePattern& p);

Torus unfold(const Torus& t, int m, int n);           // tile the grid m x n times
Torus shift_torus(const Torus& t, int sx, int sy);    // cyclic shift

}  // namespace pwa
