#pragma once

#include <map>
#include <optional>

#include "limkit/derived.hpp"
#include "limkit/webb.hpp"

namespace limkit {

/// Diagram of finite groups over a graded poset with a cone into a finite
/// group G0. Homomorphisms are stored as full element maps.
struct GroupDiagram {
  std::shared_ptr<const GradedPoset> base;
  std::vector<FiniteGroup> groups;                        // per object
  std::map<std::pair<int, int>, std::vector<int>> maps;   // cover arrow element maps
  FiniteGroup g0;
  std::vector<std::vector<int>> cone;  // per object: element map into g0

  std::vector<int> composite(int i, int j) const;  // element map along i <= j
  std::vector<std::string> validate(bool require_monic_cone = true) const;
  void ensure_valid(bool require_monic_cone = true) const;
};

enum class Contractibility { CertifiedInitial, CertifiedTerminal, AssumedAcyclic };

/// Cone point => contractible; otherwise the caller must pass `assume` and
/// the nerve must at least be acyclic with one component.
Contractibility check_contractible_base(const GradedPoset& p, bool assume = false);

/// The monic free functor H with H(i) = ker(Z[G0] -> Z[G0 / tau_i(G_i)]).
struct HFunctor {
  AbDiagram h;
  std::vector<IntMatrix> basis;  // per object: basis vectors inside Z[G0]
  std::vector<long> coset_counts;
};
HFunctor build_H(const GroupDiagram& gd);

struct FiberHomology {
  std::vector<FgAbGroup> h;  // h[j] for j = 0..j_max; entries below 2 unused
  long pi0_classes = 0;      // |Coker(lim G -> G0)| as a coset count
  bool pi0_trivial = false;
  std::optional<long> pi1_order;  // absent: colimit enumeration did not close
  bool pi1_computed = false;
};
FiberHomology fiber_homology(const GroupDiagram& gd, int j_max, bool assume_contractible = false,
                             long coset_limit = 20000);

/// Bounded coset enumeration of the colimit of the group diagram; returns
/// the group order and the order of ker(lim G -> G0) when it closes.
struct ColimitEnumeration {
  bool closed = false;
  long order = 0;
  long kernel_order = 0;
};
ColimitEnumeration enumerate_colimit(const GroupDiagram& gd, long coset_limit);

/// The Libman diagram: pushout x pushout with the trivial group at the
/// initial corner and g0 elsewhere, identity maps and identity cone.
GroupDiagram libman_diagram(const FiniteGroup& g0);

}  // namespace limkit
