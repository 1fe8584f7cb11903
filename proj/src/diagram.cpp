#include "limkit/diagram.hpp"

#include <algorithm>
#include <sstream>

namespace limkit {

namespace {

IntMatrix blockdiag_rels(const AbDiagram& f, const std::vector<int>& objs) {
  std::vector<IntMatrix> blocks;
  for (int i : objs) blocks.push_back(f.value(i).rels);
  return IntMatrix::block_diagonal(blocks);
}

std::vector<int> offsets_of(const AbDiagram& f, const std::vector<int>& objs, int* total) {
  std::vector<int> off;
  int t = 0;
  for (int i : objs) {
    off.push_back(t);
    t += f.value(i).gens;
  }
  *total = t;
  return off;
}

}  // namespace

Presentation Presentation::of_group(const FgAbGroup& g) {
  int n = int(g.free_rank() + g.invariant_factors().size());
  IntMatrix rels(n, int(g.invariant_factors().size()));
  for (size_t k = 0; k < g.invariant_factors().size(); ++k)
    rels(int(g.free_rank() + k), int(k)) = g.invariant_factors()[k];
  return Presentation(n, rels);
}

AbDiagram::AbDiagram(std::shared_ptr<const GradedPoset> base, std::vector<Presentation> values,
                     std::map<std::pair<int, int>, IntMatrix> cover_maps)
    : base_(std::move(base)), values_(std::move(values)), cover_maps_(std::move(cover_maps)) {
  if (int(values_.size()) != base_->size())
    throw Error("DimensionMismatch", "one value per object required");
  for (auto& [ab, m] : cover_maps_) {
    if (m.rows() != values_[ab.second].gens || m.cols() != values_[ab.first].gens)
      throw Error("DimensionMismatch", "map on arrow " + base_->name(ab.first) + " -> " +
                                           base_->name(ab.second) + " has wrong shape");
  }
  for (auto& [a, b] : base_->covers())
    if (!cover_maps_.count({a, b}))
      throw Error("MissingMap", "no map for arrow " + base_->name(a) + " -> " + base_->name(b));
}

AbDiagram AbDiagram::constant(std::shared_ptr<const GradedPoset> base, const Presentation& value) {
  std::vector<Presentation> vals(base->size(), value);
  std::map<std::pair<int, int>, IntMatrix> maps;
  for (auto& [a, b] : base->covers()) maps[{a, b}] = IntMatrix::identity(value.gens);
  return AbDiagram(base, std::move(vals), std::move(maps));
}

const IntMatrix& AbDiagram::cover_map(int a, int b) const {
  auto it = cover_maps_.find({a, b});
  if (it == cover_maps_.end()) throw Error("UnknownArrow", "not a cover arrow");
  return it->second;
}

IntMatrix AbDiagram::composite(int i, int j) const {
  if (i == j) return IntMatrix::identity(values_[i].gens);
  if (!base_->lt(i, j)) throw Error("UnknownArrow", "objects are incomparable");
  auto it = composite_cache_.find({i, j});
  if (it != composite_cache_.end()) return it->second;
  // canonical first step: smallest cover successor of i below j
  for (int k : base_->covers_out(i)) {
    if (k != j && !base_->lt(k, j)) continue;
    IntMatrix m = (k == j) ? cover_map(i, j) : composite(k, j) * cover_map(i, k);
    composite_cache_[{i, j}] = m;
    return m;
  }
  throw Error("InvalidPoset", "no cover path (poset is not graded)");
}

std::vector<std::string> AbDiagram::validate() const {
  std::vector<std::string> bad;
  auto pv = base_->validate();
  bad.insert(bad.end(), pv.begin(), pv.end());
  if (!bad.empty()) return bad;
  // relations map into relations: the matrix induces a map of quotients
  for (auto& [ab, m] : cover_maps_) {
    const Presentation& s = values_[ab.first];
    const Presentation& t = values_[ab.second];
    if (s.rels.cols() == 0) continue;
    if (!solve_matrix(t.rels, m * s.rels))
      bad.push_back("map on " + base_->name(ab.first) + " -> " + base_->name(ab.second) +
                    " is not well defined on the presented quotient");
  }
  if (!bad.empty()) return bad;
  // path independence: every first-step factorization agrees with the
  // canonical composite, modulo target relations
  for (int i = 0; i < base_->size(); ++i)
    for (int j = 0; j < base_->size(); ++j) {
      if (!base_->lt(i, j)) continue;
      IntMatrix canon = composite(i, j);
      for (int k : base_->covers_out(i)) {
        if (!(k == j || base_->lt(k, j))) continue;
        IntMatrix alt = (k == j) ? cover_map(i, j) : composite(k, j) * cover_map(i, k);
        IntMatrix diff = alt - canon;
        if (diff.is_zero()) continue;
        if (values_[j].rels.cols() == 0 || !solve_matrix(values_[j].rels, diff)) {
          bad.push_back("composites " + base_->name(i) + " -> " + base_->name(j) +
                        " depend on the path (via " + base_->name(k) + ")");
        }
      }
    }
  return bad;
}

void AbDiagram::ensure_valid() const {
  auto v = validate();
  if (!v.empty()) throw Error("InvalidDiagram", v.front());
}

std::vector<std::string> validate_naturality(const AbDiagram& src, const AbDiagram& tgt,
                                             const NatTransform& nat) {
  std::vector<std::string> bad;
  const GradedPoset& p = src.base();
  if (int(nat.at.size()) != p.size()) return {"component count mismatch"};
  for (int i = 0; i < p.size(); ++i)
    if (nat.at[i].rows() != tgt.value(i).gens || nat.at[i].cols() != src.value(i).gens)
      bad.push_back("component at '" + p.name(i) + "' has wrong shape");
  if (!bad.empty()) return bad;
  for (auto& [a, b] : p.covers()) {
    IntMatrix diff = tgt.cover_map(a, b) * nat.at[a] - nat.at[b] * src.cover_map(a, b);
    if (diff.is_zero()) continue;
    if (tgt.value(b).rels.cols() == 0 || !solve_matrix(tgt.value(b).rels, diff))
      bad.push_back("naturality square fails on " + p.name(a) + " -> " + p.name(b));
  }
  return bad;
}

IntMatrix im_object_gens(const AbDiagram& f, int i0) {
  const GradedPoset& p = f.base();
  IntMatrix gens(f.value(i0).gens, 0);
  for (int a : p.covers_in(i0)) gens = gens.hstack(f.cover_map(a, i0));
  return gens;
}

FgAbGroup coker_object(const AbDiagram& f, int i0) {
  return fg_from_presentation(f.value(i0).gens, f.value(i0).rels.hstack(im_object_gens(f, i0)));
}

IntMatrix ker_object_gens(const AbDiagram& f, int i0) {
  const GradedPoset& p = f.base();
  if (p.covers_out(i0).empty()) return IntMatrix::identity(f.value(i0).gens);
  std::vector<IntMatrix> maps, rels;
  for (int b : p.covers_out(i0)) {
    maps.push_back(f.cover_map(i0, b));
    rels.push_back(f.value(b).rels);
  }
  IntMatrix stacked = maps[0];
  for (size_t k = 1; k < maps.size(); ++k) stacked = stacked.vstack(maps[k]);
  return preimage_gens(stacked, IntMatrix::block_diagonal(rels));
}

namespace {

int family_cap(int max_family) {
  if (max_family > 0) return max_family;
  if (const char* env = std::getenv("LIMKIT_MAX_INDEGREE")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 64;
}

}  // namespace

CheckResult check_pseudo_projective(const AbDiagram& f, int d, int max_family) {
  if (d == 0) return {};  // identities are monomorphisms
  const GradedPoset& p = f.base();
  int cap = family_cap(max_family);
  for (int i0 = 0; i0 < p.size(); ++i0) {
    std::vector<int> sources;
    for (int i = 0; i < p.size(); ++i)
      if (p.lt(i, i0) && std::abs(p.degree(i0) - p.degree(i)) == d) sources.push_back(i);
    if (sources.empty()) continue;
    if (int(sources.size()) > cap)
      return {CheckVerdict::NotChecked,
              "family at '" + p.name(i0) + "' exceeds the in-degree cap"};
    int total;
    auto off = offsets_of(f, sources, &total);
    IntMatrix joint(f.value(i0).gens, total);
    for (size_t k = 0; k < sources.size(); ++k) {
      IntMatrix m = f.composite(sources[k], i0);
      for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) joint(r, off[k] + c) = m(r, c);
    }
    IntMatrix ker = preimage_gens(joint, f.value(i0).rels);
    for (int c = 0; c < ker.cols(); ++c)
      for (size_t k = 0; k < sources.size(); ++k) {
        int ik = sources[k];
        std::vector<Int> xk(f.value(ik).gens);
        for (int r = 0; r < f.value(ik).gens; ++r) xk[r] = ker(off[k] + r, c);
        IntMatrix target_lattice = im_object_gens(f, ik).hstack(f.value(ik).rels);
        if (!in_span(target_lattice, xk)) {
          std::ostringstream w;
          w << "kernel element of the degree-" << d << " family into '" << p.name(i0)
            << "' has component outside Im('" << p.name(ik) << "')";
          return {CheckVerdict::False, w.str()};
        }
      }
  }
  return {};
}

CheckResult check_pseudo_projective_all(const AbDiagram& f, int max_family) {
  for (int d = 1; d <= f.base().max_degree(); ++d) {
    CheckResult r = check_pseudo_projective(f, d, max_family);
    if (r.verdict != CheckVerdict::True) return r;
  }
  return {};
}

CheckResult check_pseudo_projective_subsets(const AbDiagram& f, int d) {
  if (d == 0) return {};
  const GradedPoset& p = f.base();
  for (int i0 = 0; i0 < p.size(); ++i0) {
    std::vector<int> sources;
    for (int i = 0; i < p.size(); ++i)
      if (p.lt(i, i0) && std::abs(p.degree(i0) - p.degree(i)) == d) sources.push_back(i);
    if (sources.empty() || sources.size() > 16) continue;
    for (unsigned long mask = 1; mask < (1ul << sources.size()); ++mask) {
      std::vector<int> fam;
      for (size_t k = 0; k < sources.size(); ++k)
        if (mask & (1ul << k)) fam.push_back(sources[k]);
      int total;
      auto off = offsets_of(f, fam, &total);
      IntMatrix joint(f.value(i0).gens, total);
      for (size_t k = 0; k < fam.size(); ++k) {
        IntMatrix m = f.composite(fam[k], i0);
        for (int r = 0; r < m.rows(); ++r)
          for (int c = 0; c < m.cols(); ++c) joint(r, off[k] + c) = m(r, c);
      }
      IntMatrix ker = preimage_gens(joint, f.value(i0).rels);
      for (int c = 0; c < ker.cols(); ++c)
        for (size_t k = 0; k < fam.size(); ++k) {
          int ik = fam[k];
          std::vector<Int> xk(f.value(ik).gens);
          for (int r = 0; r < f.value(ik).gens; ++r) xk[r] = ker(off[k] + r, c);
          if (!in_span(im_object_gens(f, ik).hstack(f.value(ik).rels), xk))
            return {CheckVerdict::False, "subset family failure at '" + p.name(i0) + "'"};
        }
    }
  }
  return {};
}

bool check_pre_projective(const AbDiagram& f) {
  for (int i = 0; i < f.base().size(); ++i)
    if (!coker_object(f, i).is_free()) return false;
  return check_pseudo_projective_all(f).ok();
}

CheckResult check_pseudo_injective(const AbDiagram& f, int d, int max_family) {
  if (d == 0) return {};
  const GradedPoset& p = f.base();
  int cap = family_cap(max_family);
  for (int i0 = 0; i0 < p.size(); ++i0) {
    std::vector<int> targets;
    for (int i = 0; i < p.size(); ++i)
      if (p.lt(i0, i) && std::abs(p.degree(i) - p.degree(i0)) == d) targets.push_back(i);
    if (targets.empty()) continue;
    if (int(targets.size()) > cap)
      return {CheckVerdict::NotChecked,
              "family at '" + p.name(i0) + "' exceeds the out-degree cap"};
    IntMatrix stacked(0, f.value(i0).gens);
    std::vector<IntMatrix> rels;
    std::vector<int> row_off;
    int rows = 0;
    for (int j : targets) {
      row_off.push_back(rows);
      stacked = stacked.vstack(f.composite(i0, j));
      rels.push_back(f.value(j).rels);
      rows += f.value(j).gens;
    }
    IntMatrix sys = stacked.hstack(IntMatrix::block_diagonal(rels));
    for (size_t k = 0; k < targets.size(); ++k) {
      IntMatrix kg = ker_object_gens(f, targets[k]);
      for (int c = 0; c < kg.cols(); ++c) {
        std::vector<Int> b(rows);
        for (int r = 0; r < f.value(targets[k]).gens; ++r) b[row_off[k] + r] = kg(r, c);
        if (!solve_in_lattice(sys, b)) {
          std::ostringstream w;
          w << "element of ker('" << p.name(targets[k]) << "') has no joint preimage in '"
            << p.name(i0) << "' across the degree-" << d << " family";
          return {CheckVerdict::False, w.str()};
        }
      }
    }
  }
  return {};
}

CheckResult check_pseudo_injective_all(const AbDiagram& f, int max_family) {
  for (int d = 1; d <= f.base().max_degree(); ++d) {
    CheckResult r = check_pseudo_injective(f, d, max_family);
    if (r.verdict != CheckVerdict::True) return r;
  }
  return {};
}

FPrimeResult build_F_prime_direct(const AbDiagram& f) {
  const GradedPoset& p = f.base();
  auto base = f.base_ptr();
  // block of F'(i0): one summand per arrow i -> i0, including the identity
  std::vector<std::vector<int>> blocks(p.size());
  for (int i0 = 0; i0 < p.size(); ++i0)
    for (int i = 0; i < p.size(); ++i)
      if (p.leq(i, i0)) blocks[i0].push_back(i);

  std::vector<Presentation> vals;
  std::vector<std::vector<int>> off(p.size());
  for (int i0 = 0; i0 < p.size(); ++i0) {
    std::vector<IntMatrix> rels;
    int t = 0;
    for (int i : blocks[i0]) {
      off[i0].push_back(t);
      t += f.value(i).gens;
      rels.push_back(f.value(i).rels);
    }
    vals.push_back(Presentation(t, IntMatrix::block_diagonal(rels)));
  }
  std::map<std::pair<int, int>, IntMatrix> maps;
  for (auto& [a, b] : p.covers()) {
    IntMatrix m(vals[b].gens, vals[a].gens);
    for (size_t k = 0; k < blocks[a].size(); ++k) {
      int i = blocks[a][k];
      size_t pos = std::lower_bound(blocks[b].begin(), blocks[b].end(), i) - blocks[b].begin();
      for (int r = 0; r < f.value(i).gens; ++r) m(off[b][pos] + r, off[a][k] + r) = 1;
    }
    maps[{a, b}] = m;
  }
  FPrimeResult res;
  res.f_prime = AbDiagram(base, vals, maps);
  res.pi.at.resize(p.size());
  for (int i0 = 0; i0 < p.size(); ++i0) {
    IntMatrix m(f.value(i0).gens, vals[i0].gens);
    for (size_t k = 0; k < blocks[i0].size(); ++k) {
      IntMatrix c = f.composite(blocks[i0][k], i0);
      for (int r = 0; r < c.rows(); ++r)
        for (int cc = 0; cc < c.cols(); ++cc) m(r, off[i0][k] + cc) = c(r, cc);
    }
    res.pi.at[i0] = m;
  }
  KernelResult k = kernel_of_transform(res.f_prime, f, res.pi);
  res.k1 = std::move(k.kernel);
  res.k1_incl = std::move(k.incl);
  return res;
}

KerPrimeSections sections_p_condensed(const AbDiagram& f, int p) {
  const GradedPoset& base = f.base();
  KerPrimeSections s;
  s.s.resize(base.size());
  s.ker_gens.resize(base.size());
  for (int i = 0; i < base.size(); ++i) {
    int g = f.value(i).gens;
    if (base.degree(i) == p) {
      s.ker_gens[i] = IntMatrix::identity(g);
      s.s[i] = IntMatrix::identity(g);
    } else {
      s.ker_gens[i] = IntMatrix(g, 0);
      s.s[i] = IntMatrix(0, g);
    }
  }
  return s;
}

KerPrimeSections sections_monic_default(const AbDiagram& f) {
  const GradedPoset& base = f.base();
  KerPrimeSections s;
  s.s.resize(base.size());
  s.ker_gens.resize(base.size());
  for (int i = 0; i < base.size(); ++i) {
    s.ker_gens[i] = ker_object_gens(f, i);
    if (base.covers_out(i).empty())
      s.s[i] = IntMatrix::identity(f.value(i).gens);  // ker(i) = F(i) on sinks
    else
      s.s[i] = IntMatrix(s.ker_gens[i].cols(), f.value(i).gens);
  }
  return s;
}

KerPrimeResult build_ker_prime_inverse(const AbDiagram& f, const KerPrimeSections& sections) {
  const GradedPoset& p = f.base();
  auto base = f.base_ptr();
  std::vector<std::vector<int>> blocks(p.size());
  for (int i0 = 0; i0 < p.size(); ++i0)
    for (int i = 0; i < p.size(); ++i)
      if (p.leq(i0, i)) blocks[i0].push_back(i);

  auto ker_rank = [&](int i) { return sections.ker_gens[i].cols(); };
  // ker(i) inherits relations of F(i) pulled back along its generators
  std::vector<IntMatrix> ker_rels(p.size());
  for (int i = 0; i < p.size(); ++i)
    ker_rels[i] = preimage_gens(sections.ker_gens[i], f.value(i).rels);

  std::vector<Presentation> vals;
  std::vector<std::vector<int>> off(p.size());
  for (int i0 = 0; i0 < p.size(); ++i0) {
    std::vector<IntMatrix> rels;
    int t = 0;
    for (int i : blocks[i0]) {
      off[i0].push_back(t);
      t += ker_rank(i);
      rels.push_back(ker_rels[i]);
    }
    vals.push_back(Presentation(t, IntMatrix::block_diagonal(rels)));
  }
  std::map<std::pair<int, int>, IntMatrix> maps;
  for (auto& [a, b] : p.covers()) {
    // summand over i >= a survives iff i >= b (the arrow factors through a -> b)
    IntMatrix m(vals[b].gens, vals[a].gens);
    for (size_t k = 0; k < blocks[a].size(); ++k) {
      int i = blocks[a][k];
      if (!p.leq(b, i)) continue;
      size_t pos = std::lower_bound(blocks[b].begin(), blocks[b].end(), i) - blocks[b].begin();
      for (int r = 0; r < ker_rank(i); ++r) m(off[b][pos] + r, off[a][k] + r) = 1;
    }
    maps[{a, b}] = m;
  }
  KerPrimeResult res;
  res.ker_prime = AbDiagram(base, vals, maps);
  res.blocks = blocks;
  res.lambda.at.resize(p.size());
  for (int i0 = 0; i0 < p.size(); ++i0) {
    IntMatrix m(vals[i0].gens, f.value(i0).gens);
    for (size_t k = 0; k < blocks[i0].size(); ++k) {
      int i = blocks[i0][k];
      IntMatrix blk = sections.s[i] * f.composite(i0, i);
      for (int r = 0; r < blk.rows(); ++r)
        for (int c = 0; c < blk.cols(); ++c) m(off[i0][k] + r, c) = blk(r, c);
    }
    res.lambda.at[i0] = m;
  }
  CokernelResult c = cokernel_of_transform(f, res.ker_prime, res.lambda);
  res.c1 = std::move(c.cokernel);
  return res;
}

FgAbGroup colimit(const AbDiagram& f) {
  const GradedPoset& p = f.base();
  std::vector<int> all(p.size());
  for (int i = 0; i < p.size(); ++i) all[i] = i;
  int total;
  auto off = offsets_of(f, all, &total);
  IntMatrix rels = blockdiag_rels(f, all);
  for (auto& [a, b] : p.covers()) {
    IntMatrix m = f.cover_map(a, b);
    IntMatrix cols(total, f.value(a).gens);
    for (int c = 0; c < f.value(a).gens; ++c) {
      for (int r = 0; r < m.rows(); ++r) cols(off[b] + r, c) = m(r, c);
      cols(off[a] + c, c) -= 1;
    }
    rels = rels.hstack(cols);
  }
  return fg_from_presentation(total, rels);
}

namespace {

// difference map prod_i F(i) -> prod_{covers a->b} F(b), x |-> F(a->b)x_a - x_b
IntMatrix limit_difference(const AbDiagram& f, std::vector<int>* offsets, int* total_out,
                           IntMatrix* target_rels) {
  const GradedPoset& p = f.base();
  std::vector<int> all(p.size());
  for (int i = 0; i < p.size(); ++i) all[i] = i;
  int total;
  auto off = offsets_of(f, all, &total);
  int rows = 0;
  std::vector<IntMatrix> rel_blocks;
  for (auto& [a, b] : p.covers()) {
    rows += f.value(b).gens;
    rel_blocks.push_back(f.value(b).rels);
  }
  IntMatrix d(rows, total);
  int ro = 0;
  for (auto& [a, b] : p.covers()) {
    const IntMatrix& m = f.cover_map(a, b);
    for (int r = 0; r < m.rows(); ++r) {
      for (int c = 0; c < m.cols(); ++c) d(ro + r, off[a] + c) = m(r, c);
      d(ro + r, off[b] + r) -= 1;
    }
    ro += f.value(b).gens;
  }
  if (offsets) *offsets = off;
  if (total_out) *total_out = total;
  if (target_rels) *target_rels = IntMatrix::block_diagonal(rel_blocks);
  return d;
}

}  // namespace

FgAbGroup limit(const AbDiagram& f) {
  const GradedPoset& p = f.base();
  std::vector<int> all(p.size());
  for (int i = 0; i < p.size(); ++i) all[i] = i;
  int total;
  IntMatrix target_rels;
  std::vector<int> off;
  IntMatrix d = limit_difference(f, &off, &total, &target_rels);
  IntMatrix num = preimage_gens(d, target_rels);
  IntMatrix den = preimage_gens(num, blockdiag_rels(f, all));
  return fg_from_presentation(num.cols(), den);
}

LimitLattice limit_lattice(const AbDiagram& f) {
  for (int i = 0; i < f.base().size(); ++i)
    if (f.value(i).rels.cols() != 0)
      throw Error("NotFree", "limit_lattice requires free values");
  LimitLattice l;
  IntMatrix d = limit_difference(f, &l.offsets, &l.total, nullptr);
  l.basis = kernel_basis(d);
  return l;
}

KernelResult kernel_of_transform(const AbDiagram& src, const AbDiagram& tgt,
                                 const NatTransform& nat) {
  const GradedPoset& p = src.base();
  std::vector<IntMatrix> gens(p.size());
  std::vector<Presentation> vals(p.size());
  for (int i = 0; i < p.size(); ++i) {
    gens[i] = preimage_gens(nat.at[i], tgt.value(i).rels);
    vals[i] = Presentation(gens[i].cols(), preimage_gens(gens[i], src.value(i).rels));
  }
  std::map<std::pair<int, int>, IntMatrix> maps;
  for (auto& [a, b] : p.covers()) {
    IntMatrix image = src.cover_map(a, b) * gens[a];
    auto sol = solve_matrix(gens[b].hstack(src.value(b).rels), image);
    if (!sol) throw Error("Internal", "kernel generators are not functorial");
    std::vector<int> top(gens[b].cols());
    for (int r = 0; r < gens[b].cols(); ++r) top[r] = r;
    maps[{a, b}] = sol->submatrix_rows(top);
  }
  KernelResult res;
  res.kernel = AbDiagram(src.base_ptr(), vals, maps);
  res.incl.at = gens;
  return res;
}

CokernelResult cokernel_of_transform(const AbDiagram& src, const AbDiagram& tgt,
                                     const NatTransform& nat) {
  const GradedPoset& p = src.base();
  std::vector<Presentation> vals(p.size());
  for (int i = 0; i < p.size(); ++i)
    vals[i] = Presentation(tgt.value(i).gens, tgt.value(i).rels.hstack(nat.at[i]));
  std::map<std::pair<int, int>, IntMatrix> maps;
  for (auto& [a, b] : p.covers()) maps[{a, b}] = tgt.cover_map(a, b);
  CokernelResult res;
  res.cokernel = AbDiagram(tgt.base_ptr(), vals, maps);
  res.proj.at.resize(p.size());
  for (int i = 0; i < p.size(); ++i) res.proj.at[i] = IntMatrix::identity(tgt.value(i).gens);
  return res;
}

bool ker_injective(const FgAbGroup& g) { return g.is_trivial(); }

}  // namespace limkit
