#pragma once

#include <map>
#include <memory>

#include "limkit/derived.hpp"

namespace limkit {

/// Subsets J^{i0}_p of (i0 down P)_p for each object i0 and 0 <= p <= deg(i0).
struct CoveringFamily {
  std::map<std::pair<int, int>, std::vector<int>> j;  // (object, p) -> sorted members

  const std::vector<int>& at(int i0, int p) const {
    static const std::vector<int> empty;
    auto it = j.find({i0, p});
    return it == j.end() ? empty : it->second;
  }
};

/// Subsets K_p of the degree-p objects.
struct GlobalFamily {
  std::map<int, std::vector<int>> k;  // p -> sorted members

  const std::vector<int>& at(int p) const {
    static const std::vector<int> empty;
    auto it = k.find(p);
    return it == k.end() ? empty : it->second;
  }
};

/// The integers R^i_p defined by R^i_0 = 1 and
/// R^{i0}_p = sum_{i in (i0 down P)_{p-1}} R^i_{p-1} - R^{i0}_{p-1}.
struct RTable {
  std::map<std::pair<int, int>, Int> r;
  const Int& at(int i, int p) const;
};

/// Chapter-5 entry conditions: valid poset, decreasing degree function,
/// every sink in degree 0 (all maximal objects share a degree).
void require_bounded_above_form(const GradedPoset& p);

bool check_p_condensed(const AbDiagram& f, int p);

struct CondenseStep {
  AbDiagram ker_prime;
  NatTransform lambda;
  AbDiagram g;  // cokernel functor
  /// for objects of degree > p+1: is F(i0) -> lim over the starred
  /// under-slice an isomorphism (the (p+1)-condensation criterion)?
  std::map<int, bool> condensation_obstruction_clear;
};
CondenseStep condense_step(const AbDiagram& f, int p);

RTable compute_R(const GradedPoset& p);

std::vector<std::string> validate_covering(const GradedPoset& p, const CoveringFamily& fam);
bool check_adequate(const GradedPoset& p, const CoveringFamily& fam,
                    std::vector<std::string>* reasons = nullptr);

struct DeltaCovering {
  GradedPoset poset;
  CoveringFamily family;
};
/// The adequate covering family on Delta_n spanned by the faces containing
/// the largest vertex.
DeltaCovering delta_covering_family(int n);

/// Adequate family on a simplex-like bounded-above poset, from a total
/// order on the degree-0 objects (default: declaration order).
CoveringFamily simplexlike_covering_family(
    const GradedPoset& p, const std::vector<int>& degree0_order = {});

/// The sequence c_Z = F_0, F_1, ... of J-determined free functors, with the
/// section data of every short exact sequence.
struct FpTower {
  std::shared_ptr<const GradedPoset> base;
  CoveringFamily family;
  std::vector<AbDiagram> levels;
  struct Step {
    std::map<int, std::vector<int>> slice;  // (i0 down P)_{p-1}, sorted
    std::map<int, IntMatrix> pi;            // projection onto F_p(i0)
    std::map<int, IntMatrix> delta;         // section F_p(i0) -> prod coords
  };
  std::vector<Step> steps;  // steps[p] builds F_p from F_{p-1}; steps[0] unused
};
FpTower build_Fp_tower(const GradedPoset& p, const CoveringFamily& fam, int p_max);

/// lim F_p computed on the degree-(p, p+1) band; asserted equal to the
/// limit over the whole poset.
FgAbGroup lim_Fp_skeleton(const FpTower& tower, int p);

std::vector<std::string> validate_global(const FpTower& tower, const GlobalFamily& k);
bool check_global_adequate(const GradedPoset& p, const RTable& r, const GlobalFamily& k,
                           std::vector<std::string>* reasons = nullptr);

struct AcyclicityCertificate {
  bool acyclic = false;
  long h0_rank = 0;
  std::vector<std::string> notes;
};
AcyclicityCertificate acyclicity_certificate(const GradedPoset& p, const CoveringFamily& j,
                                             const GlobalFamily& k);

Int euler_characteristic(const GradedPoset& p, const RTable& r);
Int euler_characteristic_simplexlike(const GradedPoset& p);

/// H^p(P; Z) recovered from the long-exact tails of the tower sequences:
/// H^p = coker(lim ker'_{F_{p-1}} -> lim F_p), H^0 = Z^{components}.
std::vector<FgAbGroup> cohomology_via_tower(const FpTower& tower);

/// The map omega_p : prod_{Ob_{p-1}} F_{p-1}(i) -> lim F_p in the basis of
/// the limit lattice, plus the lattice itself.
struct OmegaData {
  IntMatrix omega;
  LimitLattice lim;
  std::vector<int> source_objects;   // degree p-1 objects, sorted
  std::vector<int> source_offsets;
  int source_total = 0;
};
OmegaData omega_map(const FpTower& tower, int p);

}  // namespace limkit
