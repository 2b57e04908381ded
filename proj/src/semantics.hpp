#pragma once

#include <optional>
#include <set>
#include <unordered_map>

#include "core.hpp"

// Acceptance of plane-walking automata on tori and finite patterns, decided
// as a safety game: the greatest fixpoint of "exists nodes keep an applicable
// option in W; forall nodes have some outgoing edge and every applicable move
// stays in W".

namespace pwa {

struct Arena {
  bool patternMode = false;
  // Compact node ids; node EXTERIOR (last id) exists in pattern mode only.
  struct Move {
    int edge;  // automaton edge id
    int to;    // node id
  };
  int nodeCount = 0;              // includes the exterior node if present
  int exterior = -1;
  std::vector<std::vector<Move>> moves;   // per node, ascending edge id
  std::vector<uint8_t> owner;             // 0 exists, 1 forall, 2 exterior
  // Whether the node's state has any outgoing edge at all. A forall node
  // whose edges are all inapplicable accepts vacuously; only a state with an
  // empty edge set rejects. (The exists reading is unchanged: no applicable
  // move loses.) This is what makes the shipped automata match their
  // subshifts; see README.
  std::vector<uint8_t> hasEdge;
  std::vector<Cell> cellOf;
  std::vector<int> stateOf;               // -1 for the exterior node
  std::unordered_map<long long, int> byCellState;  // key(cell,state) -> node

  int node(Cell c, int state) const;
};

struct WinningSet {
  std::vector<bool> in;          // per arena node
  std::vector<int> chosenMove;   // per node: index into moves[n] for exists
                                 // nodes in W (lowest edge id), else -1
  std::vector<int> removalRank;  // per node: order of deletion, -1 if kept
};

struct BranchStep {
  Cell cell;
  int state;
  int edge;  // edge taken from this step; -1 on the last step
};

struct Branch {
  std::vector<BranchStep> steps;
};

struct PumpingPair {
  int i, j;  // i < j, equal states
  Direction vector;
};

Arena build_arena(const Automaton& a, const Torus& t);
Arena build_arena(const Automaton& a, const FinitePattern& p);

WinningSet solve(const Arena& ar);

bool accepts_torus(const Automaton& a, const Torus& t);
bool accepts_pattern(const Automaton& a, const FinitePattern& p);

// Independent oracle: coinductive search that treats a revisit on the
// current call path as accepting. Arena capped at 4000 nodes.
bool brute_force_accepts(const Automaton& a, const Torus& t);
bool brute_force_accepts(const Automaton& a, const FinitePattern& p);

bool exists_only_oracle(const Automaton& a, const Torus& t);
bool forall_only_oracle(const Automaton& a, const Torus& t);

// Recognising mode: directions within {(1,0),(0,1)}, no quantifiers.
bool recognising_mode(const Automaton& a);
std::optional<std::map<Cell, int>> recognising_run_exists(const Automaton& a,
                                                          const FinitePattern& p);
// Same-period run on the torus; a certificate of membership, absence is not
// a disproof.
std::optional<std::vector<int>> recognising_run_on_torus(const Automaton& a,
                                                         const Torus& t);
// Transfer method for rectangular supports; must agree with the CSP search.
bool recognising_run_exists_transfer(const Automaton& a, const FinitePattern& p);

std::set<Cell> footprint(const Branch& b);
std::vector<PumpingPair> find_pumping_pairs(const Branch& b);
Branch pump_branch(const Branch& b, const PumpingPair& pair, int k);

// Replays a branch against a configuration: checks that each step's state
// matches the cell symbol and each edge leaves the step's state. Returns
// human-readable mismatch descriptions (empty = clean replay).
std::vector<std::string> replay_branch(const Automaton& a, const Branch& b,
                                       const Torus& t);
std::vector<std::string> replay_branch(const Automaton& a, const Branch& b,
                                       const FinitePattern& p);

}  // namespace pwa
