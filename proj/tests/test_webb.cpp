#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "limkit/webb.hpp"

using namespace limkit;

TEST_CASE("builtin groups") {
  CHECK(FiniteGroup::cyclic(6).order() == 6);
  CHECK(FiniteGroup::dihedral(8).order() == 8);
  CHECK(FiniteGroup::symmetric(4).order() == 24);
  CHECK(FiniteGroup::alternating(4).order() == 12);
  CHECK(FiniteGroup::quaternion(8).order() == 8);
  // Q8 has a unique element of order 2
  FiniteGroup q8 = FiniteGroup::quaternion(8);
  int involutions = 0;
  for (int x = 0; x < 8; ++x)
    if (x != q8.identity() && q8.element_order(x) == 2) ++involutions;
  CHECK(involutions == 1);
  CHECK(FiniteGroup::builtin("S4").order() == 24);
  CHECK(FiniteGroup::builtin("dihedral10").order() == 10);
  CHECK_THROWS_AS(FiniteGroup::builtin("nonsense"), Error);
}

TEST_CASE("sylow subgroups") {
  CHECK(sylow(FiniteGroup::symmetric(3), 2).size() == 2);
  CHECK(sylow(FiniteGroup::symmetric(3), 3).size() == 3);
  CHECK(sylow(FiniteGroup::dihedral(8), 2).size() == 8);
  CHECK(sylow(FiniteGroup::symmetric(4), 2).size() == 8);
  CHECK(sylow(FiniteGroup::symmetric(4), 3).size() == 3);
  CHECK(sylow(FiniteGroup::alternating(4), 2).size() == 4);
}

TEST_CASE("subgroups of a p-group") {
  FiniteGroup d8 = FiniteGroup::dihedral(8);
  Subgroup s = sylow(d8, 2);
  auto subs = subgroups_of_p_group(d8, s);
  CHECK(subs.size() == 10);  // 1, Z, C4, two V4s, four C2 reflections, D8
}

TEST_CASE("orbit poset for S3 at p = 2 and p = 3 is a point") {
  for (int p : {2, 3}) {
    OrbitPoset orbit = normal_chain_orbit_poset(FiniteGroup::symmetric(3), p);
    CHECK(orbit.poset.size() == 1);
    CHECK(orbit.poset.degree(0) == 0);
  }
}

TEST_CASE("orbit poset for D8 at p = 2") {
  OrbitPoset orbit = normal_chain_orbit_poset(FiniteGroup::dihedral(8), 2);
  const GradedPoset& p = orbit.poset;
  // 7 classes of nontrivial subgroups, 9 classes of pairs, 3 of triples
  CHECK(p.objects_of_degree(0).size() == 7);
  CHECK(p.objects_of_degree(1).size() == 9);
  CHECK(p.objects_of_degree(2).size() == 3);
  CHECK(p.component_count() == 1);
  CHECK(p.opposite().is_simplex_like());
}

TEST_CASE("K family and the psi bijection for D8") {
  FiniteGroup d8 = FiniteGroup::dihedral(8);
  OrbitPoset orbit = normal_chain_orbit_poset(d8, 2);
  GlobalFamily k = build_K_family(d8, orbit);
  CHECK(k.at(0).size() == 1);
  CHECK(k.at(1).size() == 6);
  CHECK(k.at(2).size() == 3);
  PsiReport psi = verify_psi_bijection(d8, orbit, k);
  CHECK(psi.ok());
}

TEST_CASE("trivial sylow is rejected") {
  CHECK_THROWS_AS(normal_chain_orbit_poset(FiniteGroup::cyclic(3), 2), Error);
}

TEST_CASE("webb verification for small groups") {
  struct Case {
    const char* name;
    int prime;
  };
  for (auto& c : std::initializer_list<Case>{{"S3", 2}, {"S3", 3}, {"D8", 2}, {"Q8", 2}}) {
    FiniteGroup g = FiniteGroup::builtin(c.name);
    WebbReport rep = webb_verify(g, c.prime);
    CHECK(rep.k_counts[0] == 1);
    CHECK(rep.psi.ok());
    CHECK(rep.globally_adequate);
    CHECK(rep.certificate.acyclic);
    CHECK(rep.cohomology_agrees);
    REQUIRE(!rep.cohomology_direct.empty());
    CHECK(rep.cohomology_direct[0] == FgAbGroup::free_of_rank(1));
    for (size_t i = 1; i < rep.cohomology_direct.size(); ++i)
      CHECK(rep.cohomology_direct[i].is_trivial());
    // adequacy counting: |Ob_{n-1}| = |K_{n-1}| + |K_n|
    for (size_t n = 0; n < rep.object_counts.size(); ++n) {
      long knext = n + 1 < rep.k_counts.size() ? rep.k_counts[n + 1] : 0;
      CHECK(rep.object_counts[n] == rep.k_counts[n] + knext);
    }
  }
}

TEST_CASE("webb verification at order up to 48") {
  for (auto& [name, prime] : std::initializer_list<std::pair<const char*, int>>{
           {"D16", 2}, {"C12", 2}, {"C12", 3}, {"A4", 3}, {"dihedral12", 2}, {"S4", 3}}) {
    WebbReport rep = webb_verify(FiniteGroup::builtin(name), prime);
    CHECK(rep.certificate.acyclic);
    CHECK(rep.cohomology_agrees);
    CHECK(rep.k_counts[0] == 1);
  }
}

TEST_CASE("webb verification beyond order 48") {
  for (auto& [name, prime] : std::initializer_list<std::pair<const char*, int>>{
           {"A5", 2}, {"A5", 3}, {"A5", 5}, {"S5", 2}}) {
    WebbReport rep = webb_verify(FiniteGroup::builtin(name), prime);
    CHECK(rep.certificate.acyclic);
    CHECK(rep.cohomology_agrees);
    CHECK(rep.psi.ok());
    CHECK(rep.k_counts[0] == 1);
  }
}
