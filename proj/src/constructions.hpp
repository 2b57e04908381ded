#pragma once

#include <array>
#include <functional>

#include "core.hpp"
#include "semantics.hpp"

// Automaton/subshift transformations: recogniser <-> SFT,
// higher block coding, SFT-guard intersection, the powerset cover of an
// alternating automaton, and lift/flatten.

namespace pwa {

// Forbidden patterns as finite symbol maps over a bounded support. The
// explicit list form enumerates them; the predicate form (used by covers)
// fixes a shape and decides lazily.
struct SftSpec {
  std::vector<std::string> alphabet;
  std::vector<FinitePattern> forbidden;                 // explicit form
  bool predicateForm = false;
  std::vector<Cell> shape;                              // predicate form support
  std::function<bool(const std::map<Cell, std::string>&)> forbiddenPred;
};

// Explicit-form SFTs serialize as
//   {"alphabet": [...], "forbidden": [[{"x":..,"y":..,"symbol":..}, ...], ...]}
SftSpec sft_from_json(const std::string& text);
std::string sft_to_json(const SftSpec& f);

// Does the torus, read cyclically, avoid every forbidden pattern? Explicit
// form only.
bool torus_avoids(const SftSpec& f, const Torus& t);
// Occurrence check at a single anchor (explicit form).
bool occurs_at(const FinitePattern& forb, const Torus& t, int x, int y);

struct Recogniser {
  Automaton automaton;
  std::vector<std::string> projection;  // per state: base symbol (D)
};

// Domino SFT (supports {.,->} / {.,up}) over symbols sftAlphabet, projected
// through proj, into a recognising automaton with V = sftAlphabet.
Automaton sft_to_recogniser(const SftSpec& f,
                            const std::map<std::string, std::string>& proj);

// Inverse direction: forbidden dominoes are exactly the missing edges.
// Returns the SFT over the state set together with the projection D.
std::pair<SftSpec, std::map<std::string, std::string>> recogniser_to_sft(
    const Automaton& a);

struct BlockCoding {
  SftSpec sft;  // domino-shaped, over window symbols
  std::map<std::string, std::string> decode;  // window symbol -> base symbol at (0,0)
};

BlockCoding higher_block_code(const SftSpec& f, int n);

// Deterministic walk-and-check automaton: from any start cell it scans every
// forbidden pattern anchored there, dead-ends when one matches, and
// otherwise returns to the start into a per-symbol handoff state.
struct GuardAutomaton {
  Automaton automaton;
  std::map<std::string, std::string> handoff;  // symbol -> handoff state id
};
GuardAutomaton guard_automaton(const SftSpec& f,
                               const std::vector<std::string>& alphabet);

Automaton intersect_with_sft(const Automaton& a, const SftSpec& f);

struct Cover {
  SftSpec sft;            // predicate form over the plus shape
  Automaton base;         // the (normalized) automaton the cover describes
  std::vector<Cell> plus; // {(0,0),(-1,0),(1,0),(0,1),(0,-1)}
  // Product symbols are written "<base>|<m>" with m the state-set bitmask.
  std::string productSymbol(const std::string& base, unsigned mask) const;
  bool forbiddenPlus(const std::array<std::pair<int, unsigned>, 5>& cells) const;
  // 0 = allowed; otherwise the first clause that fires (1 symbol mismatch,
  // 2 no initial state, 3 quantifier condition).
  int forbiddenPlusClause(const std::array<std::pair<int, unsigned>, 5>& cells) const;
  // cells order: center, left, right, up, down; first = base symbol index,
  // second = state-set mask over base.states.
};

Cover alternating_to_cover(const Automaton& a);

// Per-cell winning-state sets paired with the base symbol, as a torus over
// product symbols "<base>|<mask>".
Torus annotate(const Automaton& a, const Torus& t);

bool cover_consistent(const Automaton& a, const Torus& t);

Torus lift_word(const std::vector<std::string>& w, int q);

Automaton flatten_automaton(const Automaton& a);

}  // namespace pwa
