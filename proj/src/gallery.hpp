#pragma once

#include "constructions.hpp"
#include "core.hpp"

// Built-in automata and their independently implemented subshift deciders,
// plus the boundary-marked rectangle family used by the arithmetic-set
// experiments.

namespace pwa {

// Binary subshift: every horizontal and vertical run of 1s, read cyclically,
// has even length or wraps the whole line.
Automaton even_runs_automaton();
bool in_even_runs(const Torus& t);

// "At most one 1 in the plane"; on a torus any 1 repeats, so the decider
// demands none.
Automaton ssu_automaton();
bool in_ssu(const Torus& t);
bool in_ssu(const FinitePattern& p);

// Cone labyrinth: columns are walls (#) or interior (0) with entrances and
// exits (1); every entrance #1 must reach some exit 1# through 0s using
// steps (1,1),(1,0),(1,-1).
Automaton cone_labyrinth_core();        // the walker, wall layout assumed
SftSpec cone_labyrinth_forbidden();     // the seven wall-layout patterns
Automaton cone_labyrinth_automaton();   // intersect_with_sft of the two

struct LabyrinthViolation {
  enum class Kind { ForbiddenPattern, UnmatchedEntrance };
  Kind kind;
  Cell cell;
};

struct LabyrinthVerdict {
  bool inSubshift = true;
  std::vector<LabyrinthViolation> violations;
  // Pattern mode: entrances whose search left the support, counted satisfied.
  std::vector<Cell> escapedEntrances;
};

LabyrinthVerdict in_cone_labyrinth(const Torus& t);
LabyrinthVerdict in_cone_labyrinth(const FinitePattern& p);

// Corridor of width n with one entrance and no exit; always a labyrinth
// violation, sized so the entrance search cannot leave the support.
FinitePattern xn_pattern(int n);

// Rectangle on [0,n] x [0,k]: first row and first column 1, the rest 0.
FinitePattern kari_moore_rectangle(int n, int k);
Torus kari_moore_torus(int n, int k);  // its (n+1, k+1)-periodic completion

// Membership in { i*n + j : i,j >= 0, j < i } by direct search; the relaxed
// reading uses j <= i instead.
bool is_in_f_default(int n, int m, bool strict = true);
// Largest m <= 2n^2 outside the set (everything above it up to the scan
// bound is inside).
int complement_max(int n, bool strict = true);

struct GalleryEntry {
  std::string name;
  std::string description;
};
std::vector<GalleryEntry> gallery_list();
Automaton gallery_automaton(const std::string& name);

}  // namespace pwa
