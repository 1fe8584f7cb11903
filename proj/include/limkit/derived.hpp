#pragma once

#include <map>
#include <vector>

#include "limkit/diagram.hpp"

namespace limkit {

/// One homological degree of a (co)chain complex: basis chains are strictly
/// monotone object paths; each chain carries the generators of its value
/// group (F(sigma_0) for chains, F(sigma_n) for cochains).
struct ChainLevel {
  std::vector<std::vector<int>> chains;
  std::vector<int> offsets;  // generator offset per chain
  int gens = 0;
  IntMatrix rels{0, 0};
};

struct ChainComplex {
  bool cohomological = false;
  std::vector<ChainLevel> levels;
  /// homological: d[n] : level n -> level n-1 (n >= 1);
  /// cohomological: d[n] : level n -> level n+1 (n <= N-1).
  std::vector<IntMatrix> d;

  int top() const { return int(levels.size()) - 1; }
};

/// Normalized Moore chain complex of F (nondegenerate simplices only).
ChainComplex moore_chain_complex(const AbDiagram& f);
/// Normalized Moore cochain complex of F.
ChainComplex moore_cochain_complex(const AbDiagram& f);

/// Unnormalized complexes on weakly monotone chains, capped by degree;
/// oracle for the normalization theorems, not used in production paths.
ChainComplex moore_chain_complex_unnormalized(const AbDiagram& f, int n_cap);
ChainComplex moore_cochain_complex_unnormalized(const AbDiagram& f, int n_cap);

/// Homology (or cohomology) groups of the complex, degree by degree.
std::vector<FgAbGroup> homology(const ChainComplex& c);

std::vector<FgAbGroup> derived_direct_limits(const AbDiagram& f);
std::vector<FgAbGroup> derived_inverse_limits(const AbDiagram& f);

/// lim_j F computed as lim_1 K_{j-1} through the kernel recursion
/// K_{l+1} = ker(K_l' => K_l); for j = 0 this is the colimit.
FgAbGroup k_sequence(const AbDiagram& f, int j);
/// lim^j F computed as lim^1 C_{j-1} through the cokernel recursion; the
/// full product construction keeps the comparison monic for arbitrary F.
FgAbGroup c_sequence(const AbDiagram& f, int j);

/// Sections selecting all of F(i) at every object (the F'-inverse cover).
KerPrimeSections sections_full(const AbDiagram& f);

/// Value in F(source) for each degree-1 arrow; missing arrows mean zero.
struct Flow {
  std::map<std::pair<int, int>, std::vector<Int>> values;
};

bool is_flow(const AbDiagram& f, const Flow& x);
FgAbGroup lim1_via_flows(const AbDiagram& f);

/// Representative of the same lim_1 class supported on degree-1 arrows of
/// core(base); the difference is an exact boundary by construction.
Flow reduce_flow_to_core(const AbDiagram& f, const Flow& x);

/// True iff the two flows represent the same class in lim_1.
bool flows_equivalent(const AbDiagram& f, const Flow& a, const Flow& b);

}  // namespace limkit
