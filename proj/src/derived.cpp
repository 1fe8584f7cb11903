#include "limkit/derived.hpp"

#include <algorithm>
#include <map>

namespace limkit {

namespace {

ChainLevel make_level(const AbDiagram& f, const std::vector<std::vector<int>>& chains,
                      bool use_first) {
  ChainLevel l;
  l.chains = chains;
  std::vector<IntMatrix> rels;
  for (const auto& ch : chains) {
    int obj = use_first ? ch.front() : ch.back();
    l.offsets.push_back(l.gens);
    l.gens += f.value(obj).gens;
    rels.push_back(f.value(obj).rels);
  }
  l.rels = IntMatrix::block_diagonal(rels);
  return l;
}

int chain_index(const std::map<std::vector<int>, int>& idx, const std::vector<int>& ch) {
  auto it = idx.find(ch);
  if (it == idx.end()) throw Error("Internal", "face chain not found in level basis");
  return it->second;
}

void add_block(IntMatrix& m, int row_off, int col_off, const IntMatrix& b, int sign) {
  for (int r = 0; r < b.rows(); ++r)
    for (int c = 0; c < b.cols(); ++c) m(row_off + r, col_off + c) += sign * b(r, c);
}

// weakly monotone chains (identities allowed), up to length cap
std::vector<std::vector<std::vector<int>>> weak_chains(const GradedPoset& p, int n_cap) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> cur;
  for (int i = 0; i < p.size(); ++i) cur.push_back({i});
  for (int n = 0; n <= n_cap; ++n) {
    out.push_back(cur);
    if (n == n_cap) break;
    std::vector<std::vector<int>> next;
    for (const auto& ch : cur)
      for (int j = 0; j < p.size(); ++j)
        if (p.leq(ch.back(), j)) {
          auto e = ch;
          e.push_back(j);
          next.push_back(std::move(e));
        }
    cur = std::move(next);
  }
  return out;
}

ChainComplex build_chain(const AbDiagram& f,
                         const std::vector<std::vector<std::vector<int>>>& chains) {
  ChainComplex cx;
  cx.cohomological = false;
  for (const auto& level : chains) cx.levels.push_back(make_level(f, level, /*use_first=*/true));
  cx.d.resize(cx.levels.size());
  for (size_t n = 1; n < cx.levels.size(); ++n) {
    std::map<std::vector<int>, int> idx;
    for (size_t k = 0; k < cx.levels[n - 1].chains.size(); ++k)
      idx[cx.levels[n - 1].chains[k]] = int(k);
    IntMatrix d(cx.levels[n - 1].gens, cx.levels[n].gens);
    for (size_t k = 0; k < cx.levels[n].chains.size(); ++k) {
      const auto& ch = cx.levels[n].chains[k];
      for (size_t i = 0; i <= n; ++i) {
        std::vector<int> face = ch;
        face.erase(face.begin() + i);
        int fk = chain_index(idx, face);
        int sign = (i % 2 == 0) ? 1 : -1;
        if (i == 0) {
          // value travels along the first arrow
          IntMatrix m = (ch[0] == ch[1]) ? IntMatrix::identity(f.value(ch[0]).gens)
                                         : f.composite(ch[0], ch[1]);
          add_block(d, cx.levels[n - 1].offsets[fk], cx.levels[n].offsets[k], m, sign);
        } else {
          add_block(d, cx.levels[n - 1].offsets[fk], cx.levels[n].offsets[k],
                    IntMatrix::identity(f.value(ch[0]).gens), sign);
        }
      }
    }
    cx.d[n] = std::move(d);
  }
  return cx;
}

ChainComplex build_cochain(const AbDiagram& f,
                           const std::vector<std::vector<std::vector<int>>>& chains) {
  ChainComplex cx;
  cx.cohomological = true;
  for (const auto& level : chains) cx.levels.push_back(make_level(f, level, /*use_first=*/false));
  cx.d.resize(cx.levels.size());
  for (size_t n = 0; n + 1 < cx.levels.size(); ++n) {
    std::map<std::vector<int>, int> idx;
    for (size_t k = 0; k < cx.levels[n].chains.size(); ++k) idx[cx.levels[n].chains[k]] = int(k);
    IntMatrix d(cx.levels[n + 1].gens, cx.levels[n].gens);
    for (size_t k = 0; k < cx.levels[n + 1].chains.size(); ++k) {
      const auto& ch = cx.levels[n + 1].chains[k];
      for (size_t i = 0; i <= n + 1; ++i) {
        std::vector<int> face = ch;
        face.erase(face.begin() + i);
        int fk = chain_index(idx, face);
        int sign = (i % 2 == 0) ? 1 : -1;
        if (i == n + 1) {
          // last face forgets the final object: component travels along
          // the closing arrow into F(sigma_{n+1})
          int a = ch[n], b = ch[n + 1];
          IntMatrix m = (a == b) ? IntMatrix::identity(f.value(a).gens) : f.composite(a, b);
          add_block(d, cx.levels[n + 1].offsets[k], cx.levels[n].offsets[fk], m, sign);
        } else {
          add_block(d, cx.levels[n + 1].offsets[k], cx.levels[n].offsets[fk],
                    IntMatrix::identity(f.value(ch.back()).gens), sign);
        }
      }
    }
    cx.d[n] = std::move(d);
  }
  return cx;
}

}  // namespace

ChainComplex moore_chain_complex(const AbDiagram& f) {
  return build_chain(f, f.base().strict_chains());
}

ChainComplex moore_cochain_complex(const AbDiagram& f) {
  return build_cochain(f, f.base().strict_chains());
}

ChainComplex moore_chain_complex_unnormalized(const AbDiagram& f, int n_cap) {
  return build_chain(f, weak_chains(f.base(), n_cap));
}

ChainComplex moore_cochain_complex_unnormalized(const AbDiagram& f, int n_cap) {
  return build_cochain(f, weak_chains(f.base(), n_cap));
}

std::vector<FgAbGroup> homology(const ChainComplex& c) {
  int n_levels = int(c.levels.size());
  std::vector<FgAbGroup> h;
  for (int n = 0; n < n_levels; ++n) {
    const ChainLevel& lvl = c.levels[n];
    IntMatrix d_out(0, lvl.gens), d_in(lvl.gens, 0);
    IntMatrix next_rels(0, 0);
    if (!c.cohomological) {
      if (n >= 1) d_out = c.d[n], next_rels = c.levels[n - 1].rels;
      if (n + 1 < n_levels) d_in = c.d[n + 1];
    } else {
      if (n + 1 < n_levels) d_out = c.d[n], next_rels = c.levels[n + 1].rels;
      if (n >= 1) d_in = c.d[n - 1];
    }
    IntMatrix num = preimage_gens(d_out, next_rels);
    IntMatrix den = d_in.hstack(lvl.rels);
    h.push_back(subquotient(num, den));
  }
  return h;
}

std::vector<FgAbGroup> derived_direct_limits(const AbDiagram& f) {
  if (f.base().size() == 0) return {};
  return homology(moore_chain_complex(f));
}

std::vector<FgAbGroup> derived_inverse_limits(const AbDiagram& f) {
  if (f.base().size() == 0) return {};
  return homology(moore_cochain_complex(f));
}

FgAbGroup k_sequence(const AbDiagram& f, int j) {
  if (j < 0) throw Error("InvalidArgument", "negative degree");
  if (j == 0) return colimit(f);
  AbDiagram k = f;
  for (int step = 0; step < j - 1; ++step) k = build_F_prime_direct(k).k1;
  auto lims = derived_direct_limits(k);
  return lims.size() > 1 ? lims[1] : FgAbGroup::trivial();
}

KerPrimeSections sections_full(const AbDiagram& f) {
  KerPrimeSections s;
  for (int i = 0; i < f.base().size(); ++i) {
    s.ker_gens.push_back(IntMatrix::identity(f.value(i).gens));
    s.s.push_back(IntMatrix::identity(f.value(i).gens));
  }
  return s;
}

FgAbGroup c_sequence(const AbDiagram& f, int j) {
  if (j < 0) throw Error("InvalidArgument", "negative degree");
  if (j == 0) return limit(f);
  AbDiagram c = f;
  for (int step = 0; step < j - 1; ++step)
    c = build_ker_prime_inverse(c, sections_full(c)).c1;
  auto lims = derived_inverse_limits(c);
  return lims.size() > 1 ? lims[1] : FgAbGroup::trivial();
}

namespace {

struct FlowSpace {
  std::vector<std::pair<int, int>> arrows;  // degree-1 arrows = cover arrows
  std::vector<int> offsets;
  int total = 0;
};

FlowSpace flow_space(const AbDiagram& f) {
  FlowSpace s;
  s.arrows = f.base().covers();
  std::sort(s.arrows.begin(), s.arrows.end());
  for (auto& [a, b] : s.arrows) {
    (void)b;
    s.offsets.push_back(s.total);
    s.total += f.value(a).gens;
  }
  return s;
}

std::vector<Int> flow_vector(const AbDiagram& f, const FlowSpace& s, const Flow& x) {
  std::vector<Int> v(s.total);
  for (auto& [arrow, val] : x.values) {
    auto it = std::lower_bound(s.arrows.begin(), s.arrows.end(), arrow);
    if (it == s.arrows.end() || *it != arrow)
      throw Error("UnknownArrow", "flow value on a non-degree-1 arrow");
    size_t k = it - s.arrows.begin();
    if (int(val.size()) != f.value(arrow.first).gens)
      throw Error("DimensionMismatch", "flow value has wrong generator count");
    for (size_t r = 0; r < val.size(); ++r) v[s.offsets[k] + r] = val[r];
  }
  return v;
}

// balance map: (+)_{deg-1 arrows} F(src) -> (+)_objects F(i)
IntMatrix balance_matrix(const AbDiagram& f, const FlowSpace& s, std::vector<int>* obj_off) {
  const GradedPoset& p = f.base();
  std::vector<int> off(p.size());
  int total = 0;
  for (int i = 0; i < p.size(); ++i) off[i] = total, total += f.value(i).gens;
  IntMatrix m(total, s.total);
  for (size_t k = 0; k < s.arrows.size(); ++k) {
    auto [a, b] = s.arrows[k];
    add_block(m, off[b], s.offsets[k], f.cover_map(a, b), 1);
    add_block(m, off[a], s.offsets[k], IntMatrix::identity(f.value(a).gens), -1);
  }
  if (obj_off) *obj_off = off;
  return m;
}

IntMatrix object_rels(const AbDiagram& f) {
  std::vector<IntMatrix> rels;
  for (int i = 0; i < f.base().size(); ++i) rels.push_back(f.value(i).rels);
  return IntMatrix::block_diagonal(rels);
}

// columns of [d2 | R1] of the Moore complex, plus the coordinate split of C1
struct BoundaryData {
  ChainComplex cx;
  IntMatrix d2r1;                 // C2 gens + C1 rels -> C1 gens
  std::vector<int> deg1_coords;   // C1 coordinates on degree-1 arrow blocks
  std::vector<int> other_coords;  // remaining coordinates
  std::vector<int> arrow_offset_in_c1;  // per flow-space arrow
};

BoundaryData boundary_data(const AbDiagram& f, const FlowSpace& s) {
  BoundaryData b;
  b.cx = moore_chain_complex(f);
  const ChainLevel& c1 = b.cx.levels.size() > 1 ? b.cx.levels[1] : ChainLevel{};
  IntMatrix d2 = (b.cx.levels.size() > 2) ? b.cx.d[2] : IntMatrix(c1.gens, 0);
  b.d2r1 = d2.hstack(c1.rels);
  b.arrow_offset_in_c1.assign(s.arrows.size(), -1);
  std::vector<bool> is_deg1(c1.gens, false);
  for (size_t k = 0; k < c1.chains.size(); ++k) {
    std::pair<int, int> arrow{c1.chains[k][0], c1.chains[k][1]};
    int deg_gap = std::abs(f.base().degree(arrow.second) - f.base().degree(arrow.first));
    if (deg_gap == 1) {
      auto it = std::lower_bound(s.arrows.begin(), s.arrows.end(), arrow);
      b.arrow_offset_in_c1[it - s.arrows.begin()] = c1.offsets[k];
      for (int r = 0; r < f.value(arrow.first).gens; ++r) is_deg1[c1.offsets[k] + r] = true;
    }
  }
  for (int i = 0; i < c1.gens; ++i)
    (is_deg1[i] ? b.deg1_coords : b.other_coords).push_back(i);
  return b;
}

}  // namespace

bool is_flow(const AbDiagram& f, const Flow& x) {
  FlowSpace s = flow_space(f);
  std::vector<Int> v = flow_vector(f, s, x);
  IntMatrix bal = balance_matrix(f, s, nullptr);
  std::vector<Int> r = bal.apply(v);
  IntMatrix rels = object_rels(f);
  if (rels.cols() == 0) {
    for (const Int& e : r)
      if (e != 0) return false;
    return true;
  }
  return in_span(rels, r);
}

FgAbGroup lim1_via_flows(const AbDiagram& f) {
  FlowSpace s = flow_space(f);
  if (s.total == 0) return FgAbGroup::trivial();
  IntMatrix bal = balance_matrix(f, s, nullptr);
  IntMatrix flows = preimage_gens(bal, object_rels(f));

  // trivial flows: boundaries (plus relation shifts) supported in degree 1
  BoundaryData b = boundary_data(f, s);
  IntMatrix restricted_other = b.d2r1.submatrix_rows(b.other_coords);
  IntMatrix w = kernel_basis(restricted_other);
  IntMatrix in_deg1 = b.d2r1.submatrix_rows(b.deg1_coords) * w;

  // rewrite C1 degree-1 coordinates in flow-space order
  IntMatrix trivial(s.total, in_deg1.cols());
  int row = 0;
  for (size_t k = 0; k < s.arrows.size(); ++k) {
    int c1_off = b.arrow_offset_in_c1[k];
    for (int r = 0; r < f.value(s.arrows[k].first).gens; ++r) {
      int pos = int(std::lower_bound(b.deg1_coords.begin(), b.deg1_coords.end(), c1_off + r) -
                    b.deg1_coords.begin());
      for (int c = 0; c < in_deg1.cols(); ++c) trivial(row, c) = in_deg1(pos, c);
      ++row;
    }
  }
  return subquotient(flows, trivial);
}

Flow reduce_flow_to_core(const AbDiagram& f, const Flow& x) {
  const GradedPoset& p = f.base();
  FlowSpace s = flow_space(f);
  std::vector<Int> v = flow_vector(f, s, x);
  if (!is_flow(f, x)) throw Error("NotAFlow", "input does not satisfy the balance equations");

  GradedPoset core = p.core();
  auto in_core = [&](const std::pair<int, int>& arrow) {
    auto a = core.index_of(p.name(arrow.first));
    auto b = core.index_of(p.name(arrow.second));
    return a && b;
  };

  BoundaryData bd = boundary_data(f, s);
  // coordinates that must vanish: all chains except degree-1 arrows of the core
  std::vector<int> bad = bd.other_coords;
  std::vector<Int> x_in_c1(bd.cx.levels.size() > 1 ? bd.cx.levels[1].gens : 0);
  for (size_t k = 0; k < s.arrows.size(); ++k) {
    int c1_off = bd.arrow_offset_in_c1[k];
    for (int r = 0; r < f.value(s.arrows[k].first).gens; ++r)
      x_in_c1[c1_off + r] = v[s.offsets[k] + r];
    if (!in_core(s.arrows[k]))
      for (int r = 0; r < f.value(s.arrows[k].first).gens; ++r) bad.push_back(c1_off + r);
  }
  std::sort(bad.begin(), bad.end());

  IntMatrix sys = bd.d2r1.submatrix_rows(bad);
  std::vector<Int> rhs(bad.size());
  for (size_t i = 0; i < bad.size(); ++i) rhs[i] = -x_in_c1[bad[i]];
  auto sol = solve_in_lattice(sys, rhs);
  if (!sol) throw Error("ReductionFailed", "no core-supported representative found");
  std::vector<Int> shift = bd.d2r1.apply(*sol);

  Flow out;
  for (size_t k = 0; k < s.arrows.size(); ++k) {
    if (!in_core(s.arrows[k])) continue;
    int c1_off = bd.arrow_offset_in_c1[k];
    std::vector<Int> val(f.value(s.arrows[k].first).gens);
    bool nonzero = false;
    for (size_t r = 0; r < val.size(); ++r) {
      val[r] = x_in_c1[c1_off + r] + shift[c1_off + r];
      if (val[r] != 0) nonzero = true;
    }
    if (nonzero) out.values[s.arrows[k]] = val;
  }
  return out;
}

bool flows_equivalent(const AbDiagram& f, const Flow& a, const Flow& b) {
  FlowSpace s = flow_space(f);
  std::vector<Int> va = flow_vector(f, s, a), vb = flow_vector(f, s, b);
  BoundaryData bd = boundary_data(f, s);
  std::vector<Int> diff(bd.cx.levels.size() > 1 ? bd.cx.levels[1].gens : 0);
  for (size_t k = 0; k < s.arrows.size(); ++k) {
    int c1_off = bd.arrow_offset_in_c1[k];
    for (int r = 0; r < f.value(s.arrows[k].first).gens; ++r)
      diff[c1_off + r] = va[s.offsets[k] + r] - vb[s.offsets[k] + r];
  }
  return in_span(bd.d2r1, diff);
}

}  // namespace limkit
