#pragma once

#include <map>
#include <string>
#include <vector>

#include "limkit/covering.hpp"

namespace limkit {

/// Finite group as a multiplication table; axioms are verified on load.
class FiniteGroup {
 public:
  FiniteGroup() = default;
  FiniteGroup(int n, std::vector<int> table, std::vector<std::string> names = {});

  int order() const { return n_; }
  int mul(int a, int b) const { return table_[size_t(a) * n_ + b]; }
  int inv(int a) const { return inv_[a]; }
  int identity() const { return e_; }
  int conj(int g, int x) const { return mul(mul(g, x), inv(g)); }  // g x g^-1
  int element_order(int a) const;
  const std::string& element_name(int a) const { return names_[a]; }

  static FiniteGroup trivial();
  static FiniteGroup cyclic(int n);
  static FiniteGroup dihedral(int order);    // order = 2m, m >= 1
  static FiniteGroup quaternion(int order);  // order = 4m, m >= 2
  static FiniteGroup symmetric(int n);       // n <= 7
  static FiniteGroup alternating(int n);
  static FiniteGroup from_permutations(int degree, const std::vector<std::vector<int>>& gens);

  /// cyclicN / dihedralN / symmetricN / alternatingN / quaternionN and the
  /// short aliases CN, DN, SN, AN, QN (N = group order for C/D/Q).
  static FiniteGroup builtin(const std::string& name);

 private:
  int n_ = 0, e_ = 0;
  std::vector<int> table_, inv_;
  std::vector<std::string> names_;
};

using Subgroup = std::vector<int>;  // sorted element indices, contains identity

Subgroup closure(const FiniteGroup& g, std::vector<int> gens);
Subgroup conjugate_subgroup(const FiniteGroup& g, const Subgroup& q, int by);
/// normalizer of q inside the subgroup `within`
Subgroup normalizer_in(const FiniteGroup& g, const Subgroup& within, const Subgroup& q);
bool is_normal_in(const FiniteGroup& g, const Subgroup& q, const Subgroup& top);

Subgroup sylow(const FiniteGroup& g, int p);
/// all subgroups of the p-group s (trivial and full included)
std::vector<Subgroup> subgroups_of_p_group(const FiniteGroup& g, const Subgroup& s);

/// The orbit poset [S_norm(F)]^op of G-conjugacy classes of normal chains of
/// nontrivial p-subgroups of a Sylow subgroup; arrows are face maps.
struct OrbitPoset {
  GradedPoset poset;  // decreasing orientation, deg = chain length
  Subgroup sylow_subgroup;
  std::vector<Subgroup> subgroups;                  // nontrivial subgroups of S
  std::vector<std::vector<int>> chains;             // canonical chain per object
  std::vector<std::vector<std::vector<int>>> orbit; // all class members per object
};
OrbitPoset normal_chain_orbit_poset(const FiniteGroup& g, int p);

/// K_n = classes whose fully normalized representatives satisfy
/// cap_i N_S(Q_i) = Q_n; computed by maximizing |cap N_S(Q_i)| over the orbit.
GlobalFamily build_K_family(const FiniteGroup& g, const OrbitPoset& orbit);

struct PsiReport {
  bool well_defined = true;
  bool lands_in_k = true;
  bool injective = true;
  bool surjective = true;
  bool ok() const { return well_defined && lands_in_k && injective && surjective; }
};
/// The pairing Ob_n minus K_n -> K_{n+1} extending a maximizing
/// representative by the joint normalizer; verified level by level.
PsiReport verify_psi_bijection(const FiniteGroup& g, const OrbitPoset& orbit,
                               const GlobalFamily& k);

struct WebbReport {
  OrbitPoset orbit;
  GlobalFamily k;
  std::vector<long> object_counts;  // per degree
  std::vector<long> k_counts;
  PsiReport psi;
  bool simplex_like = false;
  bool globally_adequate = false;
  AcyclicityCertificate certificate;
  std::vector<FgAbGroup> cohomology_pipeline;  // from the tower tails
  std::vector<FgAbGroup> cohomology_direct;    // cochain complex of c_Z
  bool cohomology_agrees = false;
};
WebbReport webb_verify(const FiniteGroup& g, int p);

}  // namespace limkit
