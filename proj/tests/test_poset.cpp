#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "limkit/poset.hpp"
#include "testutil.hpp"

using namespace limkit;
using namespace limkit::testing;

TEST_CASE("validate accepts the pushout and a single point") {
  CHECK(pushout_poset()->validate().empty());
  GradedPoset point({{"x", 0}}, {}, Orientation::Increasing);
  CHECK(point.validate().empty());
}

TEST_CASE("validate rejects chains of unequal length") {
  // p -> p1 -> p2 -> p' alongside p -> q1 -> p': q1 cannot be graded
  GradedPoset p({{"p", 0}, {"p1", 1}, {"p2", 2}, {"pp", 3}, {"q1", 1}},
                {{"p", "p1"}, {"p1", "p2"}, {"p2", "pp"}, {"p", "q1"}, {"q1", "pp"}},
                Orientation::Increasing);
  CHECK(!p.validate().empty());
}

TEST_CASE("slices") {
  GradedPoset d2 = GradedPoset::delta(2);
  int top = d2.require("[0,1,2]");
  auto s = d2.slice(top, true, false, std::vector<int>{0});
  std::vector<std::string> names;
  for (int m : s.members) names.push_back(d2.name(m));
  CHECK(names == std::vector<std::string>{"[0]", "[1]", "[2]"});

  GradedPoset point({{"x", 0}}, {}, Orientation::Increasing);
  CHECK(point.slice(0, true, true).members.empty());
}

TEST_CASE("core of the worked example") {
  GradedPoset core = core_example_poset()->core();
  CHECK(core.size() == 3);
  CHECK(core.index_of("a"));
  CHECK(core.index_of("c"));
  CHECK(core.index_of("d"));
  CHECK(core.covers().size() == 2);
}

TEST_CASE("core removes a single arrow completely, keeps the pushout") {
  GradedPoset arrow({{"a", 0}, {"b", 1}}, {{"a", "b"}}, Orientation::Increasing);
  CHECK(arrow.core().size() == 0);
  GradedPoset p = *pushout_poset();
  CHECK(p.core().size() == 3);
}

TEST_CASE("core is idempotent") {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    auto p = random_poset(rng);
    GradedPoset c = p->core();
    GradedPoset cc = c.core();
    CHECK(c.size() == cc.size());
    CHECK(c.covers().size() == cc.covers().size());
  }
}

TEST_CASE("core of a tree is a (possibly empty) tree") {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    AbDiagram d = random_monic_tree_diagram(rng);
    GradedPoset c = d.base().core();
    CHECK((c.size() == 0 || c.is_tree()));
  }
}

TEST_CASE("connected components") {
  GradedPoset two({{"x", 0}, {"y", 0}}, {}, Orientation::Increasing);
  CHECK(two.component_count() == 2);
  CHECK(pushout_poset()->component_count() == 1);
  GradedPoset empty;
  CHECK(empty.component_count() == 0);
}

TEST_CASE("trees and rooted trees") {
  // a -> c -> e; b -> d; d -> e; d -> f -> g : a tree without a root
  GradedPoset t1({{"a", 0}, {"b", 0}, {"c", 1}, {"d", 1}, {"e", 2}, {"f", 2}, {"g", 3}},
                 {{"a", "c"}, {"c", "e"}, {"b", "d"}, {"d", "e"}, {"d", "f"}, {"f", "g"}},
                 Orientation::Increasing);
  CHECK(t1.is_tree());
  CHECK(!t1.is_rooted_tree());
  // a -> b -> d, a -> c, b -> e : rooted at a
  GradedPoset t2({{"a", 0}, {"b", 1}, {"c", 1}, {"d", 2}, {"e", 2}},
                 {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"b", "e"}}, Orientation::Increasing);
  CHECK(t2.is_rooted_tree());
  CHECK(!cycle_poset()->is_tree());
}

TEST_CASE("simplex-like detection") {
  CHECK(GradedPoset::delta(2).opposite().is_simplex_like());
  CHECK(GradedPoset::delta(3).opposite().is_simplex_like());
  // the pushout becomes simplex-like after reversing: its slices turn into
  // a point, a point, and the subsets of a two-element set
  CHECK(!pushout_poset()->is_simplex_like());
  CHECK(pushout_poset()->opposite().is_simplex_like());
  CHECK(cycle_poset()->is_simplex_like());
  // an object covered from three chains over one shared bottom is not
  GradedPoset bad({{"r", 0}, {"x", 1}, {"y", 1}, {"z", 1}, {"t", 2}},
                  {{"r", "x"}, {"r", "y"}, {"r", "z"}, {"x", "t"}, {"y", "t"}, {"z", "t"}},
                  Orientation::Increasing);
  CHECK(!bad.is_simplex_like());
}

TEST_CASE("opposite is an involution and flips orientation") {
  GradedPoset p = *pushout_poset();
  GradedPoset op = p.opposite();
  CHECK(op.orientation() == Orientation::Decreasing);
  CHECK(op.covers().size() == p.covers().size());
  GradedPoset opop = op.opposite();
  CHECK(opop.orientation() == Orientation::Increasing);
  for (auto& [a, b] : p.covers()) {
    bool found = false;
    for (auto& [c, d] : opop.covers())
      if (p.name(a) == opop.name(c) && p.name(b) == opop.name(d)) found = true;
    CHECK(found);
  }
}

TEST_CASE("delta object counts follow binomials") {
  for (int n = 0; n <= 5; ++n) {
    GradedPoset d = GradedPoset::delta(n);
    for (int k = 0; k <= n; ++k) {
      long expect = 1;
      for (int i = 0; i < k + 1; ++i) expect = expect * (n + 1 - i) / (i + 1);
      CHECK(long(d.objects_of_degree(k).size()) == expect);
    }
    CHECK(d.validate().empty());
  }
}

TEST_CASE("connected simplex-like posets put their minimal elements in degree 0") {
  Rng rng(5);
  int hits = 0;
  for (int t = 0; t < 60; ++t) {
    auto p = random_poset(rng);
    if (p->component_count() != 1 || !p->is_simplex_like()) continue;
    ++hits;
    for (int i = 0; i < p->size(); ++i)
      if (p->covers_in(i).empty()) CHECK(p->degree(i) == 0);
  }
  CHECK(hits > 0);
}

TEST_CASE("starred under-slice of the product corner") {
  // product of two pushout shapes: everything sits over the corner
  GradedPoset p({{"(a,a)", 0},
                 {"(a,b)", 1},
                 {"(b,a)", 1},
                 {"(a,c)", 1},
                 {"(c,a)", 1},
                 {"(c,b)", 2},
                 {"(b,b)", 2},
                 {"(b,c)", 2},
                 {"(c,c)", 2}},
                {{"(a,a)", "(a,b)"},
                 {"(a,a)", "(b,a)"},
                 {"(a,a)", "(a,c)"},
                 {"(a,a)", "(c,a)"},
                 {"(a,b)", "(c,b)"},
                 {"(a,b)", "(b,b)"},
                 {"(b,a)", "(b,b)"},
                 {"(b,a)", "(b,c)"},
                 {"(a,c)", "(b,c)"},
                 {"(a,c)", "(c,c)"},
                 {"(c,a)", "(c,c)"},
                 {"(c,a)", "(c,b)"}},
                Orientation::Increasing);
  auto s = p.slice(p.require("(a,a)"), true, true);
  CHECK(s.members.size() == 8);
}
