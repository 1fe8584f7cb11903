#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace limkit {

/// Whether the degree function grows or shrinks along arrows.
enum class Orientation { Increasing, Decreasing };

struct Slice {
  int base = -1;
  bool under = true;  // under: {j | base -> j}; over: {j | j -> base}
  bool starred = false;
  std::vector<int> members;  // object indices, sorted
};

struct SimplexWitness {
  // per object: the atoms of its over-slice and, for every slice member,
  // the atom subset it corresponds to (as a bitmask over `atoms`).
  struct Local {
    std::vector<int> atoms;
    std::vector<std::pair<int, unsigned long>> member_subsets;
  };
  std::vector<Local> locals;  // indexed by object
};

/// Finite graded poset. Arrows are stored on covering relations only;
/// the order relation is recovered by path existence. Degrees are
/// normalized on load so that the minimum is 0.
class GradedPoset {
 public:
  GradedPoset() = default;
  GradedPoset(std::vector<std::pair<std::string, int>> objects,
              const std::vector<std::pair<std::string, std::string>>& cover_arrows,
              Orientation orientation);

  int size() const { return int(names_.size()); }
  const std::string& name(int i) const { return names_[i]; }
  int degree(int i) const { return degrees_[i]; }
  Orientation orientation() const { return orientation_; }
  std::optional<int> index_of(const std::string& name) const;
  int require(const std::string& name) const;

  const std::vector<std::pair<int, int>>& covers() const { return covers_; }
  const std::vector<int>& covers_out(int i) const { return out_[i]; }
  const std::vector<int>& covers_in(int i) const { return in_[i]; }

  /// All graded-poset invariant violations (empty means valid).
  std::vector<std::string> validate() const;
  bool is_valid() const { return validate().empty(); }
  void ensure_valid() const;

  bool leq(int i, int j) const { return i == j || reach_[i][j]; }
  bool lt(int i, int j) const { return i != j && reach_[i][j]; }

  /// Full sub-poset objects {j : i0 -> j} (under) or {j : j -> i0} (over).
  std::vector<int> slice_members(int i0, bool under, bool starred) const;
  Slice slice(int i0, bool under, bool starred,
              const std::optional<std::vector<int>>& degree_filter = std::nullopt) const;

  std::vector<int> objects_of_degree(int d) const;
  int max_degree() const;

  /// Component id per object plus the number of components.
  std::pair<std::vector<int>, int> connected_components() const;
  int component_count() const { return connected_components().second; }
  /// Connectivity of the full subcategory on `members` (zig-zag of arrows).
  bool subset_connected(const std::vector<int>& members) const;

  /// Stable subposet after repeatedly deleting sources whose starred
  /// under-slice is empty or connected.
  GradedPoset core() const;

  bool is_tree() const;         // undirected cover graph has no cycle
  bool is_rooted_tree() const;  // tree with an initial object
  std::optional<int> initial_object() const;
  std::optional<int> terminal_object() const;

  bool is_simplex_like(SimplexWitness* witness = nullptr) const;

  GradedPoset opposite() const;

  /// Induced full subposet (covering relations recomputed).
  GradedPoset restrict(const std::vector<int>& keep) const;

  /// Pairs (i, j) with i < j and |deg(j) - deg(i)| = d.
  std::vector<std::pair<int, int>> arrows_of_degree(int d) const;
  std::vector<std::pair<int, int>> all_strict_arrows() const;

  /// chains[n] lists the strictly monotone chains with n+1 objects,
  /// in lexicographic object order; chains[0] is one chain per object.
  std::vector<std::vector<std::vector<int>>> strict_chains() const;
  int longest_chain_length() const;  // number of arrows in a longest flag

  static GradedPoset delta(int n);
  static std::string delta_name(const std::vector<int>& seq);

 private:
  void build_indices();

  std::vector<std::string> names_;
  std::vector<int> degrees_;
  Orientation orientation_ = Orientation::Increasing;
  std::vector<std::pair<int, int>> covers_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<std::vector<bool>> reach_;  // strict reachability via covers
  std::map<std::string, int> index_;
};

}  // namespace limkit
