#pragma once

#include <map>

#include "limkit/derived.hpp"

namespace limkit {

/// The eight first-filtration variants of the Moore (co)chain complex:
///   1: C_*, decreasing deg, deg(sigma_n) >= p     5: C^*, decreasing, deg(sigma_n) <= p
///   2: C_*, decreasing deg, deg(sigma_0) <= p     6: C^*, decreasing, deg(sigma_0) >= p
///   3: C_*, increasing deg, deg(sigma_n) <= p     7: C^*, increasing, deg(sigma_n) >= p
///   4: C_*, increasing deg, deg(sigma_0) >= p     8: C^*, increasing, deg(sigma_0) <= p
struct FilteredComplex {
  int variant = 3;
  bool cochain = false;
  bool weight_negated = false;  // ">= p" filtrations are stored negated
  ChainComplex cx;
  std::vector<std::vector<int>> weight;  // internal weight per level per chain
  int wmin = 0, wmax = 0;

  /// natural filtration level of an internal weight
  int display_p(int w) const { return weight_negated ? -w : w; }
};

FilteredComplex build_filtered(const AbDiagram& f, int variant);

struct Page {
  int r = 1;
  /// entries keyed by (natural filtration level p, complex degree n)
  std::map<std::pair<int, int>, FgAbGroup> entries;
  /// d_r presence per source key (true when the induced map is nonzero)
  std::map<std::pair<int, int>, bool> dr_nonzero;
};

struct PagesResult {
  std::vector<Page> pages;
  int collapse_at = -1;  // first r with all later differentials zero
};

/// Pages E_1 .. up to collapse or r_max.
PagesResult pages(const FilteredComplex& fc, int r_max);

/// Entries of the stable page E_infinity.
Page e_infinity(const FilteredComplex& fc);

struct ConvergenceLine {
  int n = 0;
  long rank_sum = 0;
  long target_rank = 0;
  Int torsion_product;
  Int target_torsion;
  bool rank_ok = false;
  bool torsion_ok = false;
};

struct ConvergenceReport {
  std::vector<ConvergenceLine> lines;
  bool all_ok() const {
    for (auto& l : lines)
      if (!l.rank_ok || !l.torsion_ok) return false;
    return true;
  }
  bool ranks_ok() const {
    for (auto& l : lines)
      if (!l.rank_ok) return false;
    return true;
  }
};

/// Compare E_infinity against the target groups along each total degree:
/// free ranks must add up and torsion orders must multiply up.
ConvergenceReport check_weak_convergence(const FilteredComplex& fc,
                                         const std::vector<FgAbGroup>& target);

/// The natural target of the variant: lim_* for chain rows, lim^* for
/// cochain rows.
std::vector<FgAbGroup> convergence_target(const FilteredComplex& fc);

/// Entry-wise check that the homology of (E_r, d_r) reproduces E_{r+1}.
bool verify_page_transition(const FilteredComplex& fc, int r);

}  // namespace limkit
