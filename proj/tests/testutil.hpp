#pragma once

#include <memory>
#include <random>

#include "limkit/derived.hpp"

namespace limkit::testing {

inline std::shared_ptr<GradedPoset> make_poset(
    std::vector<std::pair<std::string, int>> objects,
    std::vector<std::pair<std::string, std::string>> arrows,
    Orientation o = Orientation::Increasing) {
  return std::make_shared<GradedPoset>(std::move(objects), arrows, o);
}

// b_0 -> a_1, b_0 -> c_1 (the pushout shape of the worked examples)
inline std::shared_ptr<GradedPoset> pushout_poset() {
  return make_poset({{"b", 0}, {"a", 1}, {"c", 1}}, {{"b", "a"}, {"b", "c"}});
}

// a_1 -> b_0 <- c_1 with decreasing degrees
inline std::shared_ptr<GradedPoset> pullback_poset() {
  return make_poset({{"a", 1}, {"b", 0}, {"c", 1}}, {{"a", "b"}, {"c", "b"}},
                    Orientation::Decreasing);
}

// a, b in degree 0; c, d in degree 1; the undirected graph is a 4-cycle
inline std::shared_ptr<GradedPoset> cycle_poset() {
  return make_poset({{"a", 0}, {"b", 0}, {"c", 1}, {"d", 1}},
                    {{"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}});
}

inline std::shared_ptr<GradedPoset> cone_over_cycle_poset() {
  return make_poset({{"e", 0}, {"a", 1}, {"b", 1}, {"c", 2}, {"d", 2}},
                    {{"e", "a"}, {"e", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}});
}

inline std::shared_ptr<GradedPoset> telescope_poset(int n) {
  std::vector<std::pair<std::string, int>> objs;
  std::vector<std::pair<std::string, std::string>> arrows;
  for (int i = 0; i <= n; ++i) objs.push_back({"a" + std::to_string(i), i});
  for (int i = 0; i < n; ++i)
    arrows.push_back({"a" + std::to_string(i), "a" + std::to_string(i + 1)});
  return make_poset(std::move(objs), std::move(arrows));
}

// the five-object poset whose core is {a -> c, a -> d}
inline std::shared_ptr<GradedPoset> core_example_poset() {
  return make_poset({{"e", 0}, {"a", 1}, {"b", 1}, {"c", 2}, {"d", 2}},
                    {{"e", "a"}, {"e", "b"}, {"a", "c"}, {"a", "d"}, {"b", "d"}});
}

inline AbDiagram constant_z(std::shared_ptr<const GradedPoset> base) {
  return AbDiagram::constant(std::move(base), Presentation::free(1));
}

struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned seed) : gen(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  bool flip() { return uniform(0, 1) == 1; }
};

// random bounded-below graded poset (increasing degrees, every non-minimal
// object covered from below)
inline std::shared_ptr<GradedPoset> random_poset(Rng& rng, int max_objects = 6,
                                                 Orientation o = Orientation::Increasing) {
  int levels = rng.uniform(1, 3);
  std::vector<std::pair<std::string, int>> objs;
  std::vector<std::vector<int>> by_level(levels);
  int total = rng.uniform(2, max_objects);
  for (int i = 0; i < total; ++i) {
    int lvl = i == 0 ? 0 : rng.uniform(0, levels - 1);
    by_level[lvl].push_back(i);
    objs.push_back({"x" + std::to_string(i), lvl});
  }
  std::vector<std::pair<std::string, std::string>> arrows;
  for (int lvl = 1; lvl < levels; ++lvl)
    for (int v : by_level[lvl]) {
      if (by_level[lvl - 1].empty()) continue;
      int links = rng.uniform(1, int(by_level[lvl - 1].size()));
      std::vector<int> pool = by_level[lvl - 1];
      std::shuffle(pool.begin(), pool.end(), rng.gen);
      for (int k = 0; k < links; ++k)
        arrows.push_back({objs[pool[k]].first, objs[v].first});
    }
  if (o == Orientation::Decreasing)
    for (auto& [a, b] : arrows) std::swap(a, b);
  return make_poset(std::move(objs), std::move(arrows), o);
}

// random functorial diagram assembled from up-set summands: each seed
// contributes its group above a chosen object, with a fixed multiplier on
// every cover arrow (path independence holds degree-wise)
inline AbDiagram random_diagram(Rng& rng, std::shared_ptr<const GradedPoset> base,
                                bool allow_torsion = true, int max_seeds = 3,
                                bool force_torsion = false) {
  const GradedPoset& p = *base;
  int seeds = rng.uniform(1, max_seeds);
  struct Seed {
    int at;
    int gens;
    Int torsion;  // 0: free block
    int mult;
  };
  std::vector<Seed> data;
  for (int s = 0; s < seeds; ++s) {
    Seed sd;
    sd.at = rng.uniform(0, p.size() - 1);
    sd.gens = rng.uniform(1, 2);
    sd.torsion = force_torsion || (allow_torsion && rng.flip()) ? Int(rng.uniform(2, 6)) : Int(0);
    sd.mult = rng.uniform(-2, 3);
    data.push_back(sd);
  }
  auto hits = [&](int i) {
    std::vector<int> v;
    for (size_t s = 0; s < data.size(); ++s)
      if (p.leq(data[s].at, i)) v.push_back(int(s));
    return v;
  };
  std::vector<Presentation> vals;
  for (int i = 0; i < p.size(); ++i) {
    int gens = 0;
    std::vector<IntMatrix> rels;
    for (int s : hits(i)) {
      gens += data[s].gens;
      IntMatrix r(data[s].gens, data[s].torsion == 0 ? 0 : data[s].gens);
      if (data[s].torsion != 0)
        for (int g = 0; g < data[s].gens; ++g) r(g, g) = data[s].torsion;
      rels.push_back(r);
    }
    vals.push_back(Presentation(gens, IntMatrix::block_diagonal(rels)));
  }
  std::map<std::pair<int, int>, IntMatrix> maps;
  for (auto& [a, b] : p.covers()) {
    std::vector<int> ha = hits(a), hb = hits(b);
    IntMatrix m(vals[b].gens, vals[a].gens);
    int off_a = 0;
    for (int s : ha) {
      int off_b = 0;
      for (int t : hb) {
        if (t == s) {
          for (int g = 0; g < data[s].gens; ++g) m(off_b + g, off_a + g) = data[s].mult;
        }
        off_b += data[t].gens;
      }
      off_a += data[s].gens;
    }
    maps[{a, b}] = m;
  }
  return AbDiagram(base, vals, maps);
}

// random monic free diagram on a random rooted tree
inline AbDiagram random_monic_tree_diagram(Rng& rng, int max_objects = 6) {
  int total = rng.uniform(2, max_objects);
  std::vector<std::pair<std::string, int>> objs{{"x0", 0}};
  std::vector<std::pair<std::string, std::string>> arrows;
  std::vector<int> depth{0};
  for (int i = 1; i < total; ++i) {
    int parent = rng.uniform(0, i - 1);
    objs.push_back({"x" + std::to_string(i), depth[parent] + 1});
    depth.push_back(depth[parent] + 1);
    arrows.push_back({"x" + std::to_string(parent), "x" + std::to_string(i)});
  }
  auto base = make_poset(std::move(objs), std::move(arrows));
  std::vector<int> rank(base->size());
  for (int i = 0; i < base->size(); ++i) rank[i] = rng.uniform(1, 2);
  // ranks must not drop along arrows for injectivity to be possible
  for (auto& [a, b] : base->covers()) rank[b] = std::max(rank[b], rank[a]);
  std::vector<Presentation> vals;
  for (int i = 0; i < base->size(); ++i) vals.push_back(Presentation::free(rank[i]));
  std::map<std::pair<int, int>, IntMatrix> maps;
  for (auto& [a, b] : base->covers()) {
    IntMatrix m(rank[b], rank[a]);
    for (;;) {
      for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-3, 3);
      if (rank_of(m) == m.cols()) break;
    }
    maps[{a, b}] = m;
  }
  return AbDiagram(base, vals, maps);
}

}  // namespace limkit::testing
