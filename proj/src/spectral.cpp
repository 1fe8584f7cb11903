#include "limkit/spectral.hpp"

#include <algorithm>

namespace limkit {

namespace {

struct VariantSpec {
  bool cochain;
  Orientation orientation;
  bool weight_by_last;  // deg(sigma_n) vs deg(sigma_0)
  bool geq;             // ">= p" (stored negated) vs "<= p"
};

VariantSpec variant_spec(int variant) {
  switch (variant) {
    case 1: return {false, Orientation::Decreasing, true, true};
    case 2: return {false, Orientation::Decreasing, false, false};
    case 3: return {false, Orientation::Increasing, true, false};
    case 4: return {false, Orientation::Increasing, false, true};
    case 5: return {true, Orientation::Decreasing, true, false};
    case 6: return {true, Orientation::Decreasing, false, true};
    case 7: return {true, Orientation::Increasing, true, true};
    case 8: return {true, Orientation::Increasing, false, false};
    default: throw Error("InvalidArgument", "variant must be 1..8");
  }
}

}  // namespace

FilteredComplex build_filtered(const AbDiagram& f, int variant) {
  VariantSpec spec = variant_spec(variant);
  const GradedPoset& p = f.base();
  if (p.size() == 0) throw Error("UnboundedFiltration", "empty poset has no filtration levels");
  if (p.orientation() != spec.orientation)
    throw Error("OrientationMismatch",
                "variant " + std::to_string(variant) + " expects a " +
                    (spec.orientation == Orientation::Increasing ? "increasing" : "decreasing") +
                    " degree function");
  FilteredComplex fc;
  fc.variant = variant;
  fc.cochain = spec.cochain;
  fc.weight_negated = spec.geq;
  fc.cx = spec.cochain ? moore_cochain_complex(f) : moore_chain_complex(f);
  fc.wmin = 1 << 30;
  fc.wmax = -(1 << 30);
  fc.weight.resize(fc.cx.levels.size());
  for (size_t n = 0; n < fc.cx.levels.size(); ++n)
    for (const auto& ch : fc.cx.levels[n].chains) {
      int deg = p.degree(spec.weight_by_last ? ch.back() : ch.front());
      int w = spec.geq ? -deg : deg;
      fc.weight[n].push_back(w);
      fc.wmin = std::min(fc.wmin, w);
      fc.wmax = std::max(fc.wmax, w);
    }
  return fc;
}

namespace {

// Coordinate bookkeeping for one complex level under the filtration.
struct LevelCoords {
  std::vector<int> weight_of_coord;
  std::vector<int> rel_col_weight;  // weight of each relation column's block
};

LevelCoords level_coords(const FilteredComplex& fc, int n) {
  LevelCoords lc;
  const ChainLevel& lvl = fc.cx.levels[n];
  lc.weight_of_coord.resize(lvl.gens);
  for (size_t k = 0; k < lvl.chains.size(); ++k) {
    int next = (k + 1 < lvl.chains.size()) ? lvl.offsets[k + 1] : lvl.gens;
    for (int c = lvl.offsets[k]; c < next; ++c) lc.weight_of_coord[c] = fc.weight[n][k];
  }
  // block-diagonal relations: each column lives in a single chain block
  lc.rel_col_weight.resize(lvl.rels.cols(), fc.wmin);
  for (int c = 0; c < lvl.rels.cols(); ++c)
    for (int r = 0; r < lvl.rels.rows(); ++r)
      if (lvl.rels(r, c) != 0) {
        lc.rel_col_weight[c] = lc.weight_of_coord[r];
        break;
      }
  return lc;
}

struct Engine {
  const FilteredComplex& fc;
  std::vector<LevelCoords> coords;

  explicit Engine(const FilteredComplex& f) : fc(f) {
    for (int n = 0; n <= f.cx.top(); ++n) coords.push_back(level_coords(f, n));
  }

  int out_level(int n) const { return fc.cochain ? n + 1 : n - 1; }
  int in_level(int n) const { return fc.cochain ? n - 1 : n + 1; }
  bool has_level(int n) const { return n >= 0 && n <= fc.cx.top(); }

  IntMatrix d_from(int n) const {  // differential leaving level n, or empty
    int m = out_level(n);
    if (!has_level(m)) return IntMatrix(0, fc.cx.levels[n].gens);
    return fc.cochain ? fc.cx.d[n] : fc.cx.d[n];
  }

  std::vector<int> coords_leq(int n, int p) const {
    std::vector<int> v;
    for (int c = 0; c < fc.cx.levels[n].gens; ++c)
      if (coords[n].weight_of_coord[c] <= p) v.push_back(c);
    return v;
  }
  std::vector<int> coords_gt(int n, int p) const {
    std::vector<int> v;
    for (int c = 0; c < fc.cx.levels[n].gens; ++c)
      if (coords[n].weight_of_coord[c] > p) v.push_back(c);
    return v;
  }
  IntMatrix rels_leq(int n, int p) const {
    std::vector<int> cols;
    for (int c = 0; c < fc.cx.levels[n].rels.cols(); ++c)
      if (coords[n].rel_col_weight[c] <= p) cols.push_back(c);
    return fc.cx.levels[n].rels.submatrix_cols(cols);
  }

  // Z_r(p, n) = F_p C_n  with  d x in F_{p-r} + relations, embedded in full
  // level coordinates.
  IntMatrix z_lattice(int n, int p, int r) const {
    const ChainLevel& lvl = fc.cx.levels[n];
    std::vector<int> sup = coords_leq(n, p);
    int m = out_level(n);
    IntMatrix gens_sub;
    if (!has_level(m)) {
      gens_sub = IntMatrix::identity(int(sup.size()));
    } else {
      IntMatrix d = d_from(n).submatrix_cols(sup);
      std::vector<int> high = coords_gt(m, p - r);
      IntMatrix d_high = d.submatrix_rows(high);
      IntMatrix rels_high = fc.cx.levels[m].rels.submatrix_rows(high);
      gens_sub = preimage_gens(d_high, rels_high);
    }
    IntMatrix out(lvl.gens, gens_sub.cols());
    for (size_t i = 0; i < sup.size(); ++i)
      for (int c = 0; c < gens_sub.cols(); ++c) out(sup[i], c) = gens_sub(int(i), c);
    return out;
  }

  // Clear coordinates above level p by a relation shift: columns of `cols`
  // are congruent to supported vectors, and the shift realizes that.
  IntMatrix clear_above(int n, int p, const IntMatrix& cols) const {
    std::vector<int> high = coords_gt(n, p);
    if (high.empty() || cols.cols() == 0) return cols;
    IntMatrix high_part = cols.submatrix_rows(high);
    if (high_part.is_zero()) return cols;
    IntMatrix rels_high = fc.cx.levels[n].rels.submatrix_rows(high);
    auto w = solve_matrix(rels_high, high_part);
    if (!w) throw Error("Internal", "boundary does not reduce into the filtration step");
    return cols - fc.cx.levels[n].rels * (*w);
  }

  struct Entry {
    IntMatrix num;  // generators of Z_r(p,n)
    IntMatrix den;
    FgAbGroup group;
  };

  Entry entry(int n, int p, int r) const {
    Entry e;
    e.num = z_lattice(n, p, r);
    IntMatrix den = z_lattice(n, p - 1, r - 1);
    int src = in_level(n);
    if (has_level(src)) {
      IntMatrix zsrc = z_lattice(src, p + r - 1, r - 1);
      den = den.hstack(clear_above(n, p, d_from(src) * zsrc));
    }
    den = den.hstack(rels_leq(n, p));
    e.den = den;
    e.group = subquotient(e.num, e.den);
    return e;
  }
};

}  // namespace

PagesResult pages(const FilteredComplex& fc, int r_max) {
  Engine eng(fc);
  PagesResult out;
  int r_stable = fc.wmax - fc.wmin + 1;  // F_{p-r} empties and F_{p+r-1} fills
  int r_top = std::min(r_max, r_stable);
  std::vector<bool> has_dr;
  for (int r = 1; r <= r_top; ++r) {
    Page page;
    page.r = r;
    bool any_dr = false;
    std::map<std::pair<int, int>, Engine::Entry> entries;
    for (int n = 0; n <= fc.cx.top(); ++n)
      for (int p = fc.wmin; p <= fc.wmax; ++p) {
        auto e = eng.entry(n, p, r);
        if (!e.group.is_trivial()) page.entries[{fc.display_p(p), n}] = e.group;
        entries[{p, n}] = std::move(e);
      }
    // d_r : E_r(p, n) -> E_r(p - r, out_level(n)); nonzero iff some image
    // generator falls outside the target denominator
    for (auto& [key, e] : entries) {
      auto [p, n] = key;
      int m = eng.out_level(n);
      if (!eng.has_level(m) || e.group.is_trivial()) continue;
      auto tgt = entries.find({p - r, m});
      if (tgt == entries.end()) continue;
      IntMatrix img = eng.clear_above(m, p - r, eng.d_from(n) * e.num);
      bool nonzero = false;
      for (int c = 0; c < img.cols() && !nonzero; ++c)
        if (!in_span(tgt->second.den, img.col(c))) nonzero = true;
      if (nonzero) {
        page.dr_nonzero[{fc.display_p(p), n}] = true;
        any_dr = true;
      }
    }
    out.pages.push_back(std::move(page));
    has_dr.push_back(any_dr);
  }
  if (r_top == r_stable) {
    // collapse: the first page from which every later differential vanishes
    int r = r_top;
    while (r >= 2 && !has_dr[r - 2]) --r;
    out.collapse_at = r;
  }
  return out;
}

Page e_infinity(const FilteredComplex& fc) {
  Engine eng(fc);
  int r = fc.wmax - fc.wmin + 2;
  Page page;
  page.r = r;
  for (int n = 0; n <= fc.cx.top(); ++n)
    for (int p = fc.wmin; p <= fc.wmax; ++p) {
      auto e = eng.entry(n, p, r);
      if (!e.group.is_trivial()) page.entries[{fc.display_p(p), n}] = e.group;
    }
  return page;
}

std::vector<FgAbGroup> convergence_target(const FilteredComplex& fc) { return homology(fc.cx); }

bool verify_page_transition(const FilteredComplex& fc, int r) {
  Engine eng(fc);
  for (int n = 0; n <= fc.cx.top(); ++n)
    for (int p = fc.wmin; p <= fc.wmax; ++p) {
      Engine::Entry e = eng.entry(n, p, r);
      // kernel of d_r: generators a with d(num a) falling into the target
      // denominator, taken inside the target entry one page out
      IntMatrix ker_gens = e.num;
      int m = eng.out_level(n);
      if (eng.has_level(m)) {
        Engine::Entry tgt = eng.entry(m, p - r, r);
        IntMatrix img = eng.clear_above(m, p - r, eng.d_from(n) * e.num);
        IntMatrix a = preimage_gens(img, tgt.den);
        ker_gens = e.num * a;
      }
      IntMatrix den = e.den;
      int src = eng.in_level(n);
      if (eng.has_level(src)) {
        Engine::Entry se = eng.entry(src, p + r, r);
        den = den.hstack(eng.clear_above(n, p, eng.d_from(src) * se.num));
      }
      FgAbGroup h = subquotient(ker_gens, den);
      if (h != eng.entry(n, p, r + 1).group) return false;
    }
  return true;
}

ConvergenceReport check_weak_convergence(const FilteredComplex& fc,
                                         const std::vector<FgAbGroup>& target) {
  Page inf = e_infinity(fc);
  ConvergenceReport rep;
  for (int n = 0; n <= fc.cx.top(); ++n) {
    ConvergenceLine line;
    line.n = n;
    line.torsion_product = 1;
    for (auto& [key, g] : inf.entries) {
      if (key.second != n) continue;
      line.rank_sum += g.free_rank();
      line.torsion_product *= g.torsion_order();
    }
    const FgAbGroup& t = n < int(target.size()) ? target[n] : FgAbGroup::trivial();
    line.target_rank = t.free_rank();
    line.target_torsion = t.torsion_order();
    line.rank_ok = line.rank_sum == line.target_rank;
    line.torsion_ok = line.torsion_product == line.target_torsion;
    rep.lines.push_back(std::move(line));
  }
  return rep;
}

}  // namespace limkit
