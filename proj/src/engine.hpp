#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "core.hpp"
#include "semantics.hpp"

// Experiment harness: seeded sampling, canonical instance enumeration, and
// the comparison engine behind `compare` and `enum`.

namespace pwa {

// SplitMix64; identical sequences on every platform for a given seed.
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  uint64_t below(uint64_t bound) { return next() % bound; }
};

// Canonical torus order: p = 1..P, q = 1..Q, then the base-|Σ| cell counter
// with cell (x, y) at digit y*p + x, least significant first.
long long torus_count(int alphabetSize, int maxP, int maxQ);
Torus torus_at_index(const std::vector<std::string>& alphabet, int maxP, int maxQ,
                     long long index);

// Rectangular patterns in the same order with shapes w = 1..W, h = 1..H.
long long pattern_count(int alphabetSize, int maxW, int maxH);
FinitePattern pattern_at_index(const std::vector<std::string>& alphabet, int maxW,
                               int maxH, long long index);

struct CompareOptions {
  int maxP = 3, maxQ = 3;
  bool patterns = false;       // enumerate patterns instead of tori
  long long samples = -1;      // -1: exhaustive enumeration
  uint64_t seed = 0;
  int threads = 0;             // 0: hardware concurrency
  bool emitRecords = false;
};

struct Disagreement {
  long long index;
  std::string instance;        // rendered grid text
  bool a, b;
};

struct CompareResult {
  long long checked = 0;
  std::optional<Disagreement> first;
  std::vector<std::string> records;  // JSONL, canonical order
};

using TorusPredicate = std::function<bool(const Torus&)>;
using PatternPredicate = std::function<bool(const FinitePattern&)>;

struct Decider {
  std::vector<std::string> alphabet;
  TorusPredicate torus;
  PatternPredicate pattern;    // may be empty for torus-only oracles
  std::string name;
};

Decider automaton_decider(const Automaton& a, const std::string& name);
// Built-in oracles: even_runs (torus only), ssu, cone_labyrinth.
Decider oracle_decider(const std::string& name);

CompareResult compare_deciders(const Decider& a, const Decider& b,
                               const CompareOptions& opt);

// One record per instance: {"instance": .., "verdict": .., "witness"?, "millis": 0}.
std::vector<std::string> enum_records(const Automaton& a, const CompareOptions& opt,
                                      bool witness);

// Witness JSON for a solved arena: exists-strategy edges on accept, attractor
// depths of the losing initial nodes on reject.
std::string witness_json(const Automaton& a, const Arena& ar, const WinningSet& w,
                         bool accepted);

Automaton random_automaton(SplitMix64& rng, int maxStates,
                           const std::vector<std::string>& alphabet);
Torus random_torus(SplitMix64& rng, const std::vector<std::string>& alphabet,
                   int maxP, int maxQ);

// Wall/corridor torus with planted matched entrance/exit pairs; always a
// member of the cone labyrinth subshift (verified, regenerated on the rare
// planting collision).
Torus random_valid_labyrinth(SplitMix64& rng);

}  // namespace pwa
