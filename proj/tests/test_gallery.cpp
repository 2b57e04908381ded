#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "core.hpp"
#include "engine.hpp"
#include "gallery.hpp"
#include "semantics.hpp"

using namespace pwa;

namespace {

Torus row_torus(const std::vector<std::string>& cells) {
  Torus t;
  t.p = (int)cells.size();
  t.q = 1;
  t.grid = cells;
  return t;
}

}  // namespace

TEST_CASE("gallery automata validate cleanly and classify as documented") {
  CHECK(validate_automaton(even_runs_automaton()).empty());
  CHECK(validate_automaton(ssu_automaton()).empty());
  CHECK(validate_automaton(cone_labyrinth_automaton()).empty());
  CHECK(classify(even_runs_automaton()) == HierarchyLevel{HierarchyLevel::Pi, 1});
  CHECK(classify(ssu_automaton()) == HierarchyLevel{HierarchyLevel::Pi, 1});
  CHECK(classify(cone_labyrinth_automaton()) ==
        HierarchyLevel{HierarchyLevel::Sigma, 1});
}

TEST_CASE("even-runs oracle") {
  CHECK(in_even_runs(row_torus({"0"})));
  CHECK(in_even_runs(row_torus({"1", "1", "0"})));
  CHECK(!in_even_runs(row_torus({"1", "0", "0"})));
  Torus all1;
  all1.p = all1.q = 2;
  all1.grid = {"1", "1", "1", "1"};
  CHECK(in_even_runs(all1));  // full wrap counts as infinite lines
  // A column constraint matters too: 1x2 column [1,0] has an odd vertical run.
  Torus col;
  col.p = 1;
  col.q = 2;
  col.grid = {"1", "0"};
  CHECK(!in_even_runs(col));
  CHECK_THROWS_AS(in_even_runs(row_torus({"x"})), Error);
}

TEST_CASE("even-runs automaton matches its oracle on sampled tori") {
  Automaton a = even_runs_automaton();
  SplitMix64 rng(31);
  for (int i = 0; i < 400; ++i) {
    Torus t = random_torus(rng, {"0", "1"}, 4, 4);
    CAPTURE(torus_render(t));
    CHECK(accepts_torus(a, t) == in_even_runs(t));
  }
}

TEST_CASE("sunny-side-up oracle and automaton") {
  Torus all0;
  all0.p = all0.q = 2;
  all0.grid = {"0", "0", "0", "0"};
  CHECK(in_ssu(all0));
  Torus one1 = all0;
  one1.grid[2] = "1";
  CHECK(!in_ssu(one1));

  FinitePattern p;
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) p.cells[{x, y}] = "0";
  CHECK(in_ssu(p));
  p.cells[{1, 1}] = "1";
  CHECK(in_ssu(p));
  p.cells[{2, 0}] = "1";
  CHECK(!in_ssu(p));

  // Exhaustive agreement on all binary rectangles up to 3x3.
  Automaton a = ssu_automaton();
  for (int w = 1; w <= 3; ++w)
    for (int h = 1; h <= 3; ++h)
      for (int bits = 0; bits < (1 << (w * h)); ++bits) {
        FinitePattern q;
        for (int c = 0; c < w * h; ++c)
          q.cells[{c % w, c / w}] = (bits >> c & 1) ? "1" : "0";
        CAPTURE(pattern_render(q));
        CHECK(accepts_pattern(a, q) == in_ssu(q));
      }
}

TEST_CASE("cone labyrinth: membership goldens") {
  Torus walls;
  walls.p = walls.q = 3;
  walls.grid.assign(9, "#");
  LabyrinthVerdict v = in_cone_labyrinth(walls);
  CHECK(v.inSubshift);
  CHECK(v.violations.empty());
  CHECK(accepts_torus(cone_labyrinth_automaton(), walls));

  // Single row: entrance matched straight across.
  FinitePattern row;
  const char* syms[6] = {"#", "1", "0", "0", "1", "#"};
  for (int x = 0; x < 6; ++x) row.cells[{x, 0}] = syms[x];
  CHECK(in_cone_labyrinth(row).inSubshift);

  // The corridor family has an entrance and no exit.
  for (int n = 2; n <= 5; ++n) {
    LabyrinthVerdict xv = in_cone_labyrinth(xn_pattern(n));
    CHECK(!xv.inSubshift);
    REQUIRE(xv.violations.size() == 1);
    CHECK(xv.violations[0].kind == LabyrinthViolation::Kind::UnmatchedEntrance);
  }

  // Forbidden patterns are reported with their anchors.
  FinitePattern bad;
  bad.cells[{0, 0}] = "1";
  bad.cells[{1, 0}] = "1";
  LabyrinthVerdict bv = in_cone_labyrinth(bad);
  CHECK(!bv.inSubshift);
  REQUIRE(!bv.violations.empty());
  CHECK(bv.violations[0].kind == LabyrinthViolation::Kind::ForbiddenPattern);
}

TEST_CASE("cone labyrinth: automaton agrees with the oracle on sampled tori") {
  Automaton a = cone_labyrinth_automaton();
  SplitMix64 rng(32);
  for (int i = 0; i < 150; ++i) {
    Torus t = random_torus(rng, {"0", "1", "#"}, 3, 3);
    CAPTURE(torus_render(t));
    CHECK(accepts_torus(a, t) == in_cone_labyrinth(t).inSubshift);
  }
}

TEST_CASE("cone labyrinth: planted valid labyrinths are accepted") {
  Automaton a = cone_labyrinth_automaton();
  SplitMix64 rng(33);
  for (int i = 0; i < 10; ++i) {
    Torus t = random_valid_labyrinth(rng);
    CAPTURE(torus_render(t));
    CHECK(in_cone_labyrinth(t).inSubshift);
    CHECK(accepts_torus(a, t));
  }
}

TEST_CASE("border rectangles") {
  FinitePattern p11 = kari_moore_rectangle(1, 1);
  CHECK(p11.cells.size() == 4);
  int ones = 0;
  for (auto& [c, s] : p11.cells) ones += s == "1";
  CHECK(ones == 3);

  FinitePattern p32 = kari_moore_rectangle(3, 2);
  CHECK(p32.cells.size() == 12);
  ones = 0;
  for (auto& [c, s] : p32.cells) ones += s == "1";
  CHECK(ones == 6);

  for (int n = 1; n <= 4; ++n)
    for (int k = 1; k <= 4; ++k) {
      int cnt = 0;
      for (auto& [c, s] : kari_moore_rectangle(n, k).cells) cnt += s == "1";
      CHECK(cnt == n + k + 1);
      Torus t = kari_moore_torus(n, k);
      CHECK(t.p == n + 1);
      CHECK(t.q == k + 1);
      cnt = 0;
      for (auto& s : t.grid) cnt += s == "1";
      CHECK(cnt == n + k + 1);
    }
}

TEST_CASE("arithmetic family membership and complement maxima") {
  CHECK(is_in_f_default(2, 2));       // i=1, j=0
  CHECK(!is_in_f_default(2, 1));
  CHECK(!is_in_f_default(2, 3));      // strict j<i
  CHECK(is_in_f_default(2, 3, false));  // relaxed j<=i: i=j=1

  CHECK(complement_max(2, true) == 3);
  CHECK(complement_max(3, true) == 8);
  CHECK(complement_max(3, false) == 5);  // the documented closed form
  for (int n = 2; n <= 8; ++n) CHECK(complement_max(n, false) == n * n - n - 1);
}

TEST_CASE("gallery listing") {
  auto list = gallery_list();
  CHECK(list.size() == 4);
  for (auto& e : list) {
    Automaton a = gallery_automaton(e.name);
    CHECK(!a.states.empty());
  }
  CHECK_THROWS_AS(gallery_automaton("no_such_thing"), Error);
  CHECK_THROWS_AS(xn_pattern(0), Error);
  CHECK_THROWS_AS(kari_moore_rectangle(0, 1), Error);
}

TEST_CASE("corridor pattern geometry") {
  FinitePattern p = xn_pattern(4);
  // Width n+2, height 2n+1; entrance 1 at the origin next to the left wall.
  CHECK(p.cells.size() == 6u * 9u);
  CHECK(p.cells.at({-1, 0}) == "#");
  CHECK(p.cells.at({4, 0}) == "#");
  CHECK(p.cells.at({0, 0}) == "1");
  int ones = 0;
  for (auto& [c, s] : p.cells) ones += s == "1";
  CHECK(ones == 1);
}
