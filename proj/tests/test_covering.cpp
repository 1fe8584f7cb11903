#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "limkit/covering.hpp"
#include "testutil.hpp"

using namespace limkit;
using namespace limkit::testing;

namespace {

Int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int b = 1;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

// RP^2 as the face poset of its 6-vertex triangulation, bounded above
GradedPoset rp2_poset() {
  std::vector<std::vector<int>> tris = {{1, 2, 4}, {1, 2, 5}, {1, 3, 4}, {1, 3, 6}, {1, 5, 6},
                                        {2, 3, 5}, {2, 3, 6}, {2, 4, 6}, {3, 4, 5}, {4, 5, 6}};
  std::set<std::vector<int>> faces;
  for (auto& t : tris) {
    faces.insert(t);
    for (int drop = 0; drop < 3; ++drop) {
      std::vector<int> e = t;
      e.erase(e.begin() + drop);
      faces.insert(e);
      for (int d2 = 0; d2 < 2; ++d2) {
        std::vector<int> v = e;
        v.erase(v.begin() + d2);
        faces.insert(v);
      }
    }
  }
  std::vector<std::pair<std::string, int>> objs;
  std::vector<std::pair<std::string, std::string>> arrows;
  for (auto& f : faces) objs.push_back({GradedPoset::delta_name(f), int(f.size()) - 1});
  for (auto& f : faces) {
    if (f.size() < 2) continue;
    for (size_t drop = 0; drop < f.size(); ++drop) {
      std::vector<int> face = f;
      face.erase(face.begin() + drop);
      arrows.push_back({GradedPoset::delta_name(f), GradedPoset::delta_name(face)});
    }
  }
  return GradedPoset(objs, arrows, Orientation::Decreasing);
}

}  // namespace

TEST_CASE("p-condensed checks") {
  GradedPoset d2 = GradedPoset::delta(2);
  auto base = std::make_shared<GradedPoset>(d2);
  AbDiagram cz = constant_z(base);
  CHECK(check_p_condensed(cz, 0));
  CHECK(!check_p_condensed(cz, 1));
}

TEST_CASE("compute_R on delta posets") {
  for (int n = 0; n <= 4; ++n) {
    DeltaCovering dc = delta_covering_family(n);
    RTable r = compute_R(dc.poset);
    for (int i = 0; i < dc.poset.size(); ++i) {
      int q = dc.poset.degree(i);
      for (int p = 0; p <= q; ++p) {
        Int expect = 0;
        for (int l = 0; l <= p; ++l)
          expect += ((p - l) % 2 == 0 ? 1 : -1) * binomial(q + 1, l);
        CHECK(r.at(i, p) == expect);
      }
      CHECK(r.at(i, q) == 1);  // simplex-like top values
    }
  }
  // delta_2 top object: 1, 2, 1
  DeltaCovering d2 = delta_covering_family(2);
  int top = d2.poset.require("[0,1,2]");
  RTable r = compute_R(d2.poset);
  CHECK(r.at(top, 0) == 1);
  CHECK(r.at(top, 1) == 2);
  CHECK(r.at(top, 2) == 1);
}

TEST_CASE("delta covering families validate and are adequate") {
  for (int n = 0; n <= 4; ++n) {
    DeltaCovering dc = delta_covering_family(n);
    CHECK(validate_covering(dc.poset, dc.family).empty());
    CHECK(check_adequate(dc.poset, dc.family));
  }
  // the paper's worked family on delta_2
  DeltaCovering d2 = delta_covering_family(2);
  int top = d2.poset.require("[0,1,2]");
  auto j0 = d2.family.at(top, 0);
  REQUIRE(j0.size() == 1);
  CHECK(d2.poset.name(j0[0]) == "[2]");
  auto j1 = d2.family.at(top, 1);
  std::set<std::string> names;
  for (int m : j1) names.insert(d2.poset.name(m));
  CHECK(names == std::set<std::string>{"[0,2]", "[1,2]"});
}

TEST_CASE("breaking inheritance breaks validation") {
  DeltaCovering d2 = delta_covering_family(2);
  CoveringFamily broken = d2.family;
  int top = d2.poset.require("[0,1,2]");
  // swap J^top_0 to a vertex not below every member of J^top_1
  broken.j[{top, 0}] = {d2.poset.require("[0]")};
  CHECK(!validate_covering(d2.poset, broken).empty());
}

TEST_CASE("simplexlike covering family generalizes the delta one") {
  DeltaCovering d3 = delta_covering_family(3);
  CoveringFamily fam = simplexlike_covering_family(d3.poset);
  // with the declaration order on vertices this reproduces the family
  for (auto& [key, members] : d3.family.j) CHECK(fam.at(key.first, key.second) == members);
  // pushout shape in the bounded-above arrangement: the face poset of a
  // segment, reversed
  GradedPoset pp({{"a", 1}, {"b", 0}, {"c", 0}}, {{"a", "b"}, {"a", "c"}},
                 Orientation::Decreasing);
  CoveringFamily pf = simplexlike_covering_family(pp);
  CHECK(check_adequate(pp, pf));
  // cycle opposite
  GradedPoset cy = cycle_poset()->opposite();
  CoveringFamily cf = simplexlike_covering_family(cy);
  CHECK(check_adequate(cy, cf));
}

TEST_CASE("Fp tower on delta_2 opposite") {
  DeltaCovering d2 = delta_covering_family(2);
  FpTower tower = build_Fp_tower(d2.poset, d2.family, 2);
  REQUIRE(tower.levels.size() == 3);
  int top = d2.poset.require("[0,1,2]");
  CHECK(tower.levels[1].value(top).gens == 2);
  CHECK(tower.levels[2].value(top).gens == 1);
  RTable r = compute_R(d2.poset);
  for (int p = 0; p <= 2; ++p)
    for (int i = 0; i < d2.poset.size(); ++i)
      if (d2.poset.degree(i) >= p) CHECK(Int(tower.levels[p].value(i).gens) == r.at(i, p));
  for (int p = 0; p <= 2; ++p) {
    CHECK(tower.levels[p].validate().empty());
    CHECK(check_p_condensed(tower.levels[p], p));
  }
}

TEST_CASE("tower maps restrict to the identity on shared non-J basis chains") {
  DeltaCovering d3 = delta_covering_family(3);
  FpTower tower = build_Fp_tower(d3.poset, d3.family, 3);
  const GradedPoset& p = d3.poset;
  for (int lvl = 1; lvl < int(tower.levels.size()); ++lvl) {
    const AbDiagram& f = tower.levels[lvl];
    const FpTower::Step& step = tower.steps[lvl];
    for (auto& [a, b] : p.covers()) {
      if (p.degree(a) < lvl || p.degree(b) < lvl) continue;
      IntMatrix m = f.cover_map(a, b);
      // basis chains shared by both sides map identically
      auto nonj_of = [&](int obj) {
        std::vector<std::pair<int, int>> out;  // label: (slice member, generator)
        const auto& slice = step.slice.at(obj);
        const auto& j = tower.family.at(obj, lvl - 1);
        for (int mmb : slice)
          if (!std::binary_search(j.begin(), j.end(), mmb))
            for (int g = 0; g < tower.levels[lvl - 1].value(mmb).gens; ++g)
              out.push_back({mmb, g});
        return out;
      };
      auto ba = nonj_of(a);
      auto bb = nonj_of(b);
      for (size_t col = 0; col < ba.size(); ++col) {
        auto [member, local] = ba[col];
        for (size_t row = 0; row < bb.size(); ++row) {
          if (bb[row] != ba[col]) continue;
          // matching labels: the unit column
          for (size_t r2 = 0; r2 < bb.size(); ++r2)
            CHECK(m(int(r2), int(col)) == (r2 == row ? 1 : 0));
        }
        (void)member;
        (void)local;
      }
    }
  }
}

TEST_CASE("tower does not depend on the adequate family") {
  // delta_2 with two different vertex orders gives equal canonical data
  DeltaCovering d2 = delta_covering_family(2);
  CoveringFamily other = simplexlike_covering_family(
      d2.poset, {d2.poset.require("[1]"), d2.poset.require("[2]"), d2.poset.require("[0]")});
  CHECK(check_adequate(d2.poset, other));
  FpTower t1 = build_Fp_tower(d2.poset, d2.family, 2);
  FpTower t2 = build_Fp_tower(d2.poset, other, 2);
  for (int p = 0; p < 3; ++p) {
    for (int i = 0; i < d2.poset.size(); ++i)
      CHECK(t1.levels[p].group(i) == t2.levels[p].group(i));
    CHECK(limit(t1.levels[p]) == limit(t2.levels[p]));
  }
}

TEST_CASE("skeleton limits agree with full limits") {
  DeltaCovering d3 = delta_covering_family(3);
  FpTower tower = build_Fp_tower(d3.poset, d3.family, 3);
  for (int p = 0; p < int(tower.levels.size()); ++p) CHECK_NOTHROW(lim_Fp_skeleton(tower, p));
  GradedPoset cy = cycle_poset()->opposite();
  FpTower ct = build_Fp_tower(cy, simplexlike_covering_family(cy), 1);
  CHECK(lim_Fp_skeleton(ct, 0) == FgAbGroup::free_of_rank(1));
}

TEST_CASE("cohomology via tower matches the cochain complex") {
  std::vector<GradedPoset> posets;
  posets.push_back(delta_covering_family(2).poset);
  posets.push_back(delta_covering_family(3).poset);
  posets.push_back(cycle_poset()->opposite());
  posets.push_back(GradedPoset({{"a", 1}, {"b", 0}, {"c", 0}}, {{"a", "b"}, {"a", "c"}},
                               Orientation::Decreasing));
  posets.push_back(rp2_poset());
  for (auto& p : posets) {
    CoveringFamily j = simplexlike_covering_family(p);
    REQUIRE(check_adequate(p, j));
    FpTower tower = build_Fp_tower(p, j, p.max_degree());
    auto pipeline = cohomology_via_tower(tower);
    auto direct = derived_inverse_limits(constant_z(std::make_shared<GradedPoset>(p)));
    for (size_t i = 0; i < std::max(pipeline.size(), direct.size()); ++i) {
      FgAbGroup a = i < pipeline.size() ? pipeline[i] : FgAbGroup::trivial();
      FgAbGroup b = i < direct.size() ? direct[i] : FgAbGroup::trivial();
      CHECK(a == b);
    }
    Int chi = euler_characteristic(p, compute_R(p));
    Int chi_h = 0;
    for (size_t i = 0; i < direct.size(); ++i)
      chi_h += (i % 2 == 0 ? 1 : -1) * Int(direct[i].free_rank());
    CHECK(chi == chi_h);
    CHECK(chi == euler_characteristic_simplexlike(p));
  }
}

TEST_CASE("rp2 cohomology carries the 2-torsion") {
  GradedPoset p = rp2_poset();
  auto h = derived_inverse_limits(constant_z(std::make_shared<GradedPoset>(p)));
  REQUIRE(h.size() >= 3);
  CHECK(h[0] == FgAbGroup::free_of_rank(1));
  CHECK(h[1].is_trivial());
  CHECK(h[2] == FgAbGroup::cyclic(2));
}

TEST_CASE("euler characteristic on worked posets") {
  DeltaCovering d2 = delta_covering_family(2);
  CHECK(euler_characteristic(d2.poset, compute_R(d2.poset)) == 1);
  GradedPoset pt({{"x", 0}}, {}, Orientation::Decreasing);
  CHECK(euler_characteristic(pt, compute_R(pt)) == 1);
  GradedPoset cy = cycle_poset()->opposite();
  CHECK(euler_characteristic(cy, compute_R(cy)) == 0);
}

TEST_CASE("condense step") {
  // one object: G = 0
  GradedPoset pt({{"x", 0}}, {}, Orientation::Decreasing);
  AbDiagram cz = constant_z(std::make_shared<GradedPoset>(pt));
  CondenseStep st = condense_step(cz, 0);
  CHECK(st.g.group(0).is_trivial());
  // delta_2 with c_Z: G at the top has rank 2 = R^top_1
  GradedPoset d2 = GradedPoset::delta(2);
  auto base = std::make_shared<GradedPoset>(d2);
  CondenseStep st2 = condense_step(constant_z(base), 0);
  int top = d2.require("[0,1,2]");
  CHECK(st2.g.group(top) == FgAbGroup::free_of_rank(2));
  CHECK(validate_naturality(constant_z(base), st2.ker_prime, st2.lambda).empty());
  // the obstruction report covers objects of degree > 1
  CHECK(st2.condensation_obstruction_clear.count(top));
  CHECK(st2.condensation_obstruction_clear.at(top));
}

TEST_CASE("global families and the acyclicity certificate") {
  // delta_2: K built from the psi-style pairing (faces containing the top
  // vertex pair with their extensions); here build K by hand
  DeltaCovering d2 = delta_covering_family(2);
  const GradedPoset& p = d2.poset;
  GlobalFamily k;
  // K_0 = {[2]}; K_1 = {[0,2],[1,2]}; K_2 = {[0,1,2]}
  k.k[0] = {p.require("[2]")};
  k.k[1] = {p.require("[0,2]"), p.require("[1,2]")};
  std::sort(k.k[1].begin(), k.k[1].end());
  k.k[2] = {p.require("[0,1,2]")};
  RTable r = compute_R(p);
  CHECK(check_global_adequate(p, r, k, nullptr));
  FpTower tower = build_Fp_tower(p, d2.family, 2);
  CHECK(validate_global(tower, k).empty());
  AcyclicityCertificate cert = acyclicity_certificate(p, d2.family, k);
  CHECK(cert.acyclic);
  CHECK(cert.h0_rank == 1);
  // K_p = Ob_p everywhere fails the counting identity
  GlobalFamily all;
  for (int d = 0; d <= p.max_degree(); ++d) all.k[d] = p.objects_of_degree(d);
  CHECK(!check_global_adequate(p, r, all, nullptr));
}

TEST_CASE("a sphere-like poset certifies as not acyclic") {
  // boundary of delta_3: chi = 2, so any counting-adequate K has |K_0| = 2
  // against one component; the certificate must say not-acyclic and the
  // cochain complex confirms the obstruction in degree 2
  GradedPoset full = GradedPoset::delta(3);
  std::vector<int> keep;
  for (int i = 0; i < full.size(); ++i)
    if (full.degree(i) < 3) keep.push_back(i);
  GradedPoset p = full.restrict(keep);
  CoveringFamily j = simplexlike_covering_family(p);
  REQUIRE(check_adequate(p, j));
  RTable r = compute_R(p);
  auto verts = p.objects_of_degree(0);
  auto edges = p.objects_of_degree(1);
  GlobalFamily k;
  k.k[0] = {verts[0], verts[1]};
  k.k[1] = {edges[0], edges[1]};
  k.k[2] = p.objects_of_degree(2);
  REQUIRE(check_global_adequate(p, r, k, nullptr));
  AcyclicityCertificate cert = acyclicity_certificate(p, j, k);
  CHECK(!cert.acyclic);
  CHECK(cert.h0_rank == 1);
  auto h = derived_inverse_limits(constant_z(std::make_shared<GradedPoset>(p)));
  CHECK(h[0] == FgAbGroup::free_of_rank(1));
  CHECK(h[2] == FgAbGroup::free_of_rank(1));
  // and indeed no choice of this shape passes the monomorphism gate: the
  // rank of lim F_1 already exceeds what K_1 can carry
  FpTower tower = build_Fp_tower(p, j, p.max_degree());
  CHECK(!validate_global(tower, k).empty());
}

TEST_CASE("condensed ker' takes the product over the bottom slice") {
  GradedPoset d2 = GradedPoset::delta(2);
  auto base = std::make_shared<GradedPoset>(d2);
  CondenseStep st = condense_step(constant_z(base), 0);
  int top = d2.require("[0,1,2]");
  CHECK(st.ker_prime.group(top) == FgAbGroup::free_of_rank(3));
  for (int e : {d2.require("[0,1]"), d2.require("[0,2]"), d2.require("[1,2]")})
    CHECK(st.ker_prime.group(e) == FgAbGroup::free_of_rank(2));
}

TEST_CASE("7-vertex torus through both cohomology routes") {
  // cyclic triangulation on vertices 0..6: {i, i+1, i+3} and {i, i+2, i+3}
  std::set<std::vector<int>> faces;
  for (int i = 0; i < 7; ++i) {
    for (auto off : {std::vector<int>{0, 1, 3}, std::vector<int>{0, 2, 3}}) {
      std::vector<int> t{(i + off[0]) % 7, (i + off[1]) % 7, (i + off[2]) % 7};
      std::sort(t.begin(), t.end());
      faces.insert(t);
      for (int drop = 0; drop < 3; ++drop) {
        std::vector<int> e = t;
        e.erase(e.begin() + drop);
        faces.insert(e);
        faces.insert({e[0]});
        faces.insert({e[1]});
      }
    }
  }
  std::vector<std::pair<std::string, int>> objs;
  std::vector<std::pair<std::string, std::string>> arrows;
  for (auto& f : faces) objs.push_back({GradedPoset::delta_name(f), int(f.size()) - 1});
  for (auto& f : faces) {
    if (f.size() < 2) continue;
    for (size_t drop = 0; drop < f.size(); ++drop) {
      std::vector<int> face = f;
      face.erase(face.begin() + drop);
      arrows.push_back({GradedPoset::delta_name(f), GradedPoset::delta_name(face)});
    }
  }
  GradedPoset p(objs, arrows, Orientation::Decreasing);
  REQUIRE(p.objects_of_degree(0).size() == 7);
  REQUIRE(p.objects_of_degree(1).size() == 21);
  REQUIRE(p.objects_of_degree(2).size() == 14);
  auto direct = derived_inverse_limits(constant_z(std::make_shared<GradedPoset>(p)));
  CHECK(direct[0] == FgAbGroup::free_of_rank(1));
  CHECK(direct[1] == FgAbGroup::free_of_rank(2));
  CHECK(direct[2] == FgAbGroup::free_of_rank(1));
  CoveringFamily j = simplexlike_covering_family(p);
  REQUIRE(check_adequate(p, j));
  FpTower tower = build_Fp_tower(p, j, p.max_degree());
  auto pipeline = cohomology_via_tower(tower);
  for (size_t i = 0; i < direct.size(); ++i) CHECK(pipeline[i] == direct[i]);
  CHECK(euler_characteristic(p, compute_R(p)) == 0);
}
