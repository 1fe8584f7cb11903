#include "limkit/webb.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace limkit {

namespace {

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

bool perm_even(const std::vector<int>& p) {
  int inv = 0;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 == 0;
}

std::string cycle_name(const std::vector<int>& p) {
  std::vector<bool> seen(p.size(), false);
  std::ostringstream os;
  bool any = false;
  for (size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == int(i)) continue;
    any = true;
    os << "(";
    size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      os << (first ? "" : " ") << j + 1;
      first = false;
      j = p[j];
    }
    os << ")";
  }
  return any ? os.str() : "()";
}

FiniteGroup group_from_perm_set(std::vector<std::vector<int>> perms) {
  std::sort(perms.begin(), perms.end());
  std::map<std::vector<int>, int> idx;
  for (size_t i = 0; i < perms.size(); ++i) idx[perms[i]] = int(i);
  int n = int(perms.size());
  std::vector<int> table(size_t(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> c(perms[a].size());
      for (size_t i = 0; i < c.size(); ++i) c[i] = perms[a][perms[b][i]];
      auto it = idx.find(c);
      if (it == idx.end()) throw Error("InvalidGroup", "permutation set is not closed");
      table[size_t(a) * n + b] = it->second;
    }
  std::vector<std::string> names;
  for (auto& p : perms) names.push_back(cycle_name(p));
  return FiniteGroup(n, std::move(table), std::move(names));
}

}  // namespace

FiniteGroup::FiniteGroup(int n, std::vector<int> table, std::vector<std::string> names)
    : n_(n), table_(std::move(table)), names_(std::move(names)) {
  if (n_ <= 0 || int(table_.size()) != n_ * n_)
    throw Error("InvalidGroup", "multiplication table shape");
  for (int x : table_)
    if (x < 0 || x >= n_) throw Error("InvalidGroup", "table entry out of range");
  e_ = -1;
  for (int e = 0; e < n_; ++e) {
    bool ok = true;
    for (int x = 0; x < n_ && ok; ++x) ok = mul(e, x) == x && mul(x, e) == x;
    if (ok) {
      e_ = e;
      break;
    }
  }
  if (e_ < 0) throw Error("InvalidGroup", "no identity element");
  inv_.assign(n_, -1);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      if (mul(a, b) == e_ && mul(b, a) == e_) inv_[a] = b;
  for (int a = 0; a < n_; ++a)
    if (inv_[a] < 0) throw Error("InvalidGroup", "element without inverse");
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw Error("InvalidGroup", "multiplication is not associative");
  if (names_.empty())
    for (int i = 0; i < n_; ++i) names_.push_back("g" + std::to_string(i));
}

int FiniteGroup::element_order(int a) const {
  int x = a, k = 1;
  while (x != e_) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

FiniteGroup FiniteGroup::trivial() { return FiniteGroup(1, {0}, {"1"}); }

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw Error("InvalidGroup", "cyclic order must be positive");
  std::vector<int> t(size_t(n) * n);
  std::vector<std::string> names;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[size_t(a) * n + b] = (a + b) % n;
  for (int a = 0; a < n; ++a) names.push_back("r" + std::to_string(a));
  return FiniteGroup(n, std::move(t), std::move(names));
}

FiniteGroup FiniteGroup::dihedral(int order) {
  if (order < 2 || order % 2) throw Error("InvalidGroup", "dihedral order must be even");
  int m = order / 2;
  // elements r^i s^j, encoded i + m*j
  auto enc = [m](int i, int j) { return ((i % m + m) % m) + m * j; };
  std::vector<int> t(size_t(order) * order);
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < 2; ++l) {
          // (r^i s^j)(r^k s^l) = r^{i + (-1)^j k} s^{j+l}
          int ii = j == 0 ? i + k : i - k;
          t[size_t(enc(i, j)) * order + enc(k, l)] = enc(ii, (j + l) % 2);
        }
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < m; ++i) {
      std::string nm = j ? "r" + std::to_string(i) + "s" : "r" + std::to_string(i);
      names.resize(order);
      names[enc(i, j)] = nm;
    }
  return FiniteGroup(order, std::move(t), std::move(names));
}

FiniteGroup FiniteGroup::quaternion(int order) {
  if (order < 8 || order % 4) throw Error("InvalidGroup", "quaternion order must be 4m, m >= 2");
  int m = order / 2;  // a has order 2m = m2, b^2 = a^{m/...}
  auto enc = [m](int i, int j) { return ((i % m + m) % m) + m * j; };
  int half = m / 2;
  std::vector<int> t(size_t(order) * order);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < 2; ++l) {
          // (a^i b^j)(a^k b^l), with b a^k = a^{-k} b and b^2 = a^{half}
          int ii = j == 0 ? i + k : i - k;
          int jj = j + l;
          if (jj == 2) ii += half, jj = 0;
          t[size_t(enc(i, j)) * order + enc(k, l)] = enc(ii, jj);
        }
  return FiniteGroup(order, std::move(t));
}

FiniteGroup FiniteGroup::symmetric(int n) {
  if (n < 1 || n > 7) throw Error("InvalidGroup", "symmetric degree out of supported range");
  return group_from_perm_set(all_permutations(n));
}

FiniteGroup FiniteGroup::alternating(int n) {
  if (n < 2 || n > 7) throw Error("InvalidGroup", "alternating degree out of supported range");
  std::vector<std::vector<int>> perms;
  for (auto& p : all_permutations(n))
    if (perm_even(p)) perms.push_back(p);
  return group_from_perm_set(std::move(perms));
}

FiniteGroup FiniteGroup::from_permutations(int degree,
                                           const std::vector<std::vector<int>>& gens) {
  std::vector<int> id(degree);
  std::iota(id.begin(), id.end(), 0);
  std::set<std::vector<int>> elems{id};
  std::vector<std::vector<int>> queue{id};
  while (!queue.empty()) {
    auto x = queue.back();
    queue.pop_back();
    for (auto& g : gens) {
      if (int(g.size()) != degree) throw Error("InvalidGroup", "generator degree mismatch");
      std::vector<int> y(degree);
      for (int i = 0; i < degree; ++i) y[i] = g[x[i]];
      if (elems.insert(y).second) {
        if (elems.size() > 5040) throw Error("InvalidGroup", "permutation group too large");
        queue.push_back(y);
      }
    }
  }
  return group_from_perm_set({elems.begin(), elems.end()});
}

FiniteGroup FiniteGroup::builtin(const std::string& name) {
  auto starts = [&](const char* pre) { return name.rfind(pre, 0) == 0; };
  auto num = [&](size_t off) { return std::stoi(name.substr(off)); };
  if (name == "trivial" || name == "1") return trivial();
  if (starts("cyclic")) return cyclic(num(6));
  if (starts("dihedral")) return dihedral(num(8));
  if (starts("symmetric")) return symmetric(num(9));
  if (starts("alternating")) return alternating(num(11));
  if (starts("quaternion")) return quaternion(num(10));
  if (name.size() >= 2 && isdigit(name[1])) {
    switch (name[0]) {
      case 'C': return cyclic(num(1));
      case 'Z': return cyclic(num(1));
      case 'D': return dihedral(num(1));
      case 'S': return symmetric(num(1));
      case 'A': return alternating(num(1));
      case 'Q': return quaternion(num(1));
      default: break;
    }
  }
  throw Error("UnknownGroup", "no builtin group named '" + name + "'");
}

Subgroup closure(const FiniteGroup& g, std::vector<int> gens) {
  std::set<int> s{g.identity()};
  std::vector<int> queue{g.identity()};
  for (int x : gens)
    if (s.insert(x).second) queue.push_back(x);
  while (!queue.empty()) {
    int x = queue.back();
    queue.pop_back();
    for (int y : std::set<int>(s)) {
      for (int z : {g.mul(x, y), g.mul(y, x), g.inv(x)})
        if (s.insert(z).second) queue.push_back(z);
    }
  }
  return Subgroup(s.begin(), s.end());
}

Subgroup conjugate_subgroup(const FiniteGroup& g, const Subgroup& q, int by) {
  Subgroup out;
  for (int x : q) out.push_back(g.conj(by, x));
  std::sort(out.begin(), out.end());
  return out;
}

Subgroup normalizer_in(const FiniteGroup& g, const Subgroup& within, const Subgroup& q) {
  Subgroup out;
  for (int s : within)
    if (conjugate_subgroup(g, q, s) == q) out.push_back(s);
  return out;
}

bool is_normal_in(const FiniteGroup& g, const Subgroup& q, const Subgroup& top) {
  for (int s : top)
    if (conjugate_subgroup(g, q, s) != q) return false;
  return true;
}

Subgroup sylow(const FiniteGroup& g, int p) {
  if (p < 2) throw Error("InvalidArgument", "prime expected");
  int target = 1;
  while (g.order() % (target * p) == 0) target *= p;
  Subgroup h{g.identity()};
  while (int(h.size()) < target) {
    Subgroup full(g.order());
    std::iota(full.begin(), full.end(), 0);
    Subgroup n = normalizer_in(g, full, h);
    std::set<int> hs(h.begin(), h.end());
    bool grown = false;
    for (int x : n) {
      if (hs.count(x)) continue;
      int ord = g.element_order(x);
      bool p_power = true;
      while (ord > 1) {
        if (ord % p) {
          p_power = false;
          break;
        }
        ord /= p;
      }
      if (!p_power) continue;
      std::vector<int> gens = h;
      gens.push_back(x);
      Subgroup bigger = closure(g, gens);
      int sz = int(bigger.size());
      while (sz > 1 && sz % p == 0) sz /= p;
      if (sz == 1 && int(bigger.size()) <= target && bigger.size() > h.size()) {
        h = bigger;
        grown = true;
        break;
      }
    }
    if (!grown) throw Error("Internal", "Sylow growth stalled");
  }
  return h;
}

std::vector<Subgroup> subgroups_of_p_group(const FiniteGroup& g, const Subgroup& s) {
  std::set<Subgroup> found;
  found.insert(Subgroup{g.identity()});
  std::vector<Subgroup> queue{Subgroup{g.identity()}};
  std::set<int> s_set(s.begin(), s.end());
  while (!queue.empty()) {
    Subgroup h = queue.back();
    queue.pop_back();
    for (int x : s) {
      if (std::binary_search(h.begin(), h.end(), x)) continue;
      std::vector<int> gens = h;
      gens.push_back(x);
      Subgroup k = closure(g, gens);
      bool inside = true;
      for (int y : k)
        if (!s_set.count(y)) {
          inside = false;
          break;
        }
      if (inside && found.insert(k).second) queue.push_back(k);
    }
  }
  return {found.begin(), found.end()};
}

namespace {

using Chain = std::vector<Subgroup>;  // strictly increasing, all normal in back()

Chain conjugate_chain(const FiniteGroup& g, const Chain& c, int by) {
  Chain out;
  for (auto& q : c) out.push_back(conjugate_subgroup(g, q, by));
  return out;
}

bool chain_in(const Chain& c, const std::set<int>& s_set) {
  for (auto& q : c)
    for (int x : q)
      if (!s_set.count(x)) return false;
  return true;
}

// canonical representative: lexicographically least conjugate staying in S
Chain canonical_chain(const FiniteGroup& g, const Chain& c, const std::set<int>& s_set) {
  Chain best = c;
  for (int x = 0; x < g.order(); ++x) {
    Chain d = conjugate_chain(g, c, x);
    if (chain_in(d, s_set) && d < best) best = d;
  }
  return best;
}

std::string chain_label(const std::vector<int>& sub_ids) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < sub_ids.size(); ++i)
    os << "s" << sub_ids[i] << (i + 1 < sub_ids.size() ? "<" : "");
  os << "]";
  return os.str();
}

}  // namespace

OrbitPoset normal_chain_orbit_poset(const FiniteGroup& g, int p) {
  Subgroup s = sylow(g, p);
  if (s.size() == 1) throw Error("TrivialSylow", "the Sylow p-subgroup is trivial");
  OrbitPoset out;
  out.sylow_subgroup = s;
  std::set<int> s_set(s.begin(), s.end());
  std::vector<Subgroup> all = subgroups_of_p_group(g, s);
  for (auto& q : all)
    if (q.size() > 1) out.subgroups.push_back(q);
  std::map<Subgroup, int> sub_id;
  for (size_t i = 0; i < out.subgroups.size(); ++i) sub_id[out.subgroups[i]] = int(i);

  // enumerate normal chains: totally ordered subsets of the normal-in-top
  // subgroups, capped by the top itself
  std::set<Chain> unique_chains;
  for (auto& top : out.subgroups) {
    std::vector<Subgroup> below;
    for (auto& q : out.subgroups)
      if (q != top && q.size() < top.size() &&
          std::includes(top.begin(), top.end(), q.begin(), q.end()) && is_normal_in(g, q, top))
        below.push_back(q);
    std::sort(below.begin(), below.end(),
              [](const Subgroup& a, const Subgroup& b) { return a.size() < b.size(); });
    std::function<void(Chain&, size_t)> extend = [&](Chain& cur, size_t start) {
      Chain full = cur;
      full.push_back(top);
      unique_chains.insert(full);
      for (size_t idx = start; idx < below.size(); ++idx) {
        if (!cur.empty() && !std::includes(below[idx].begin(), below[idx].end(),
                                           cur.back().begin(), cur.back().end()))
          continue;
        if (!cur.empty() && below[idx].size() <= cur.back().size()) continue;
        cur.push_back(below[idx]);
        extend(cur, idx + 1);
        cur.pop_back();
      }
    };
    Chain empty;
    extend(empty, 0);
  }

  // orbit classes
  std::map<Chain, int> class_of;
  for (auto& c : unique_chains) {
    Chain canon = canonical_chain(g, c, s_set);
    if (!class_of.count(canon)) {
      int id = int(out.chains.size());
      class_of[canon] = id;
      std::vector<int> ids;
      for (auto& q : canon) ids.push_back(sub_id[q]);
      out.chains.push_back(ids);
      out.orbit.push_back({});
    }
  }
  // register every member chain with its class
  std::map<Chain, int> member_class;
  for (auto& c : unique_chains) member_class[c] = class_of[canonical_chain(g, c, s_set)];
  for (auto& [c, id] : member_class) {
    std::vector<int> ids;
    for (auto& q : c) ids.push_back(sub_id[q]);
    out.orbit[id].push_back(ids);
  }

  std::vector<std::pair<std::string, int>> objs;
  for (auto& ids : out.chains) objs.push_back({chain_label(ids), int(ids.size()) - 1});
  std::vector<std::pair<std::string, std::string>> arrows;
  for (size_t k = 0; k < out.chains.size(); ++k) {
    if (out.chains[k].size() < 2) continue;
    Chain rep;
    for (int id : out.chains[k]) rep.push_back(out.subgroups[id]);
    for (size_t drop = 0; drop < rep.size(); ++drop) {
      Chain face = rep;
      face.erase(face.begin() + drop);
      arrows.push_back({objs[k].first, objs[member_class.at(face)].first});
    }
  }
  std::sort(arrows.begin(), arrows.end());
  arrows.erase(std::unique(arrows.begin(), arrows.end()), arrows.end());
  out.poset = GradedPoset(objs, arrows, Orientation::Decreasing);
  out.poset.ensure_valid();
  if (!out.poset.opposite().is_simplex_like())
    throw Error("Internal", "orbit poset is unexpectedly not simplex-like");
  return out;
}

namespace {

// largest |cap_i N_S(Q_i)| over the orbit, with one maximizing representative
std::pair<Subgroup, long> best_normalizer_intersection(const FiniteGroup& g,
                                                       const OrbitPoset& orbit, int obj) {
  const Subgroup& s = orbit.sylow_subgroup;
  Subgroup best_n;
  long best = -1;
  for (auto& member : orbit.orbit[obj]) {
    Subgroup n = s;
    for (int id : member) {
      Subgroup q = orbit.subgroups[id];
      Subgroup nq = normalizer_in(g, s, q);
      Subgroup meet;
      std::set_intersection(n.begin(), n.end(), nq.begin(), nq.end(), std::back_inserter(meet));
      n = meet;
    }
    if (long(n.size()) > best) {
      best = long(n.size());
      best_n = n;
    }
  }
  return {best_n, best};
}

}  // namespace

GlobalFamily build_K_family(const FiniteGroup& g, const OrbitPoset& orbit) {
  GlobalFamily k;
  const GradedPoset& p = orbit.poset;
  for (int obj = 0; obj < p.size(); ++obj) {
    auto [n, best] = best_normalizer_intersection(g, orbit, obj);
    long top_size = long(orbit.subgroups[orbit.chains[obj].back()].size());
    if (best == top_size) k.k[p.degree(obj)].push_back(obj);
  }
  for (auto& [d, v] : k.k) std::sort(v.begin(), v.end());
  return k;
}

PsiReport verify_psi_bijection(const FiniteGroup& g, const OrbitPoset& orbit,
                               const GlobalFamily& k) {
  PsiReport rep;
  const GradedPoset& p = orbit.poset;
  std::set<int> s_set(orbit.sylow_subgroup.begin(), orbit.sylow_subgroup.end());
  std::map<Subgroup, int> sub_id;
  for (size_t i = 0; i < orbit.subgroups.size(); ++i) sub_id[orbit.subgroups[i]] = int(i);
  std::map<std::vector<int>, int> class_by_chain;
  for (int obj = 0; obj < p.size(); ++obj)
    for (auto& member : orbit.orbit[obj]) class_by_chain[member] = obj;

  int top_degree = p.max_degree();
  for (int n = 0; n <= top_degree; ++n) {
    std::set<int> kn(k.at(n).begin(), k.at(n).end());
    std::set<int> images;
    for (int obj : p.objects_of_degree(n)) {
      if (kn.count(obj)) continue;
      // psi over every maximizing representative; all must land in one class
      auto [bestn, best] = best_normalizer_intersection(g, orbit, obj);
      (void)bestn;
      std::set<int> candidate_classes;
      for (auto& member : orbit.orbit[obj]) {
        Subgroup inter = orbit.sylow_subgroup;
        for (int id : member) {
          Subgroup q = orbit.subgroups[id];
          Subgroup nq = normalizer_in(g, orbit.sylow_subgroup, q);
          Subgroup meet;
          std::set_intersection(inter.begin(), inter.end(), nq.begin(), nq.end(),
                                std::back_inserter(meet));
          inter = meet;
        }
        if (long(inter.size()) != best) continue;
        std::vector<int> extended = member;
        auto it = sub_id.find(inter);
        if (it == sub_id.end()) {
          rep.well_defined = false;
          continue;
        }
        extended.push_back(it->second);
        auto cls = class_by_chain.find(extended);
        if (cls == class_by_chain.end())
          rep.well_defined = false;
        else
          candidate_classes.insert(cls->second);
      }
      if (candidate_classes.size() != 1) {
        rep.well_defined = false;
        continue;
      }
      int image = *candidate_classes.begin();
      const auto& knext = k.at(n + 1);
      if (!std::binary_search(knext.begin(), knext.end(), image)) rep.lands_in_k = false;
      if (!images.insert(image).second) rep.injective = false;
    }
    for (int obj : k.at(n + 1))
      if (!images.count(obj)) rep.surjective = false;
  }
  return rep;
}

WebbReport webb_verify(const FiniteGroup& g, int p) {
  WebbReport rep;
  rep.orbit = normal_chain_orbit_poset(g, p);
  const GradedPoset& poset = rep.orbit.poset;
  rep.simplex_like = poset.opposite().is_simplex_like();
  rep.k = build_K_family(g, rep.orbit);
  for (int d = 0; d <= poset.max_degree(); ++d) {
    rep.object_counts.push_back(long(poset.objects_of_degree(d).size()));
    rep.k_counts.push_back(long(rep.k.at(d).size()));
  }
  rep.psi = verify_psi_bijection(g, rep.orbit, rep.k);
  CoveringFamily j = simplexlike_covering_family(poset);
  RTable r = compute_R(poset);
  rep.globally_adequate = check_global_adequate(poset, r, rep.k, nullptr);
  rep.certificate = acyclicity_certificate(poset, j, rep.k);
  FpTower tower = build_Fp_tower(poset, j, poset.max_degree());
  rep.cohomology_pipeline = cohomology_via_tower(tower);
  AbDiagram cz = AbDiagram::constant(std::make_shared<GradedPoset>(poset),
                                     Presentation::free(1));
  rep.cohomology_direct = derived_inverse_limits(cz);
  rep.cohomology_agrees = true;
  size_t n = std::max(rep.cohomology_pipeline.size(), rep.cohomology_direct.size());
  for (size_t i = 0; i < n; ++i) {
    FgAbGroup a = i < rep.cohomology_pipeline.size() ? rep.cohomology_pipeline[i]
                                                     : FgAbGroup::trivial();
    FgAbGroup b = i < rep.cohomology_direct.size() ? rep.cohomology_direct[i]
                                                   : FgAbGroup::trivial();
    if (a != b) rep.cohomology_agrees = false;
  }
  return rep;
}

}  // namespace limkit
