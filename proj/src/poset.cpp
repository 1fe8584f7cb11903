#include "limkit/poset.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "limkit/exactalg.hpp"

namespace limkit {

GradedPoset::GradedPoset(std::vector<std::pair<std::string, int>> objects,
                         const std::vector<std::pair<std::string, std::string>>& cover_arrows,
                         Orientation orientation)
    : orientation_(orientation) {
  for (auto& [n, d] : objects) {
    if (index_.count(n)) throw Error("DuplicateObject", "object '" + n + "' declared twice");
    index_[n] = int(names_.size());
    names_.push_back(n);
    degrees_.push_back(d);
  }
  // translation invariance: shift degrees so the minimum is 0
  if (!degrees_.empty()) {
    int mn = *std::min_element(degrees_.begin(), degrees_.end());
    for (int& d : degrees_) d -= mn;
  }
  for (const auto& [a, b] : cover_arrows) {
    auto ia = index_.find(a), ib = index_.find(b);
    if (ia == index_.end()) throw Error("UnknownReference", "arrow source '" + a + "' undeclared");
    if (ib == index_.end()) throw Error("UnknownReference", "arrow target '" + b + "' undeclared");
    covers_.push_back({ia->second, ib->second});
  }
  build_indices();
}

void GradedPoset::build_indices() {
  int n = size();
  out_.assign(n, {});
  in_.assign(n, {});
  for (auto& [a, b] : covers_) {
    out_[a].push_back(b);
    in_[b].push_back(a);
  }
  for (auto& v : out_) std::sort(v.begin(), v.end());
  for (auto& v : in_) std::sort(v.begin(), v.end());
  reach_.assign(n, std::vector<bool>(n, false));
  for (int s = 0; s < n; ++s) {
    std::deque<int> q(out_[s].begin(), out_[s].end());
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      if (reach_[s][x]) continue;
      reach_[s][x] = true;
      for (int y : out_[x]) q.push_back(y);
    }
  }
}

std::optional<int> GradedPoset::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int GradedPoset::require(const std::string& name) const {
  auto i = index_of(name);
  if (!i) throw Error("UnknownObject", "no object named '" + name + "'");
  return *i;
}

std::vector<std::string> GradedPoset::validate() const {
  std::vector<std::string> bad;
  std::set<std::pair<int, int>> seen;
  for (auto& [a, b] : covers_) {
    if (a == b) {
      bad.push_back("self-arrow on '" + names_[a] + "'");
      continue;
    }
    if (!seen.insert({a, b}).second)
      bad.push_back("duplicate arrow " + names_[a] + " -> " + names_[b]);
    int step = orientation_ == Orientation::Increasing ? degrees_[b] - degrees_[a]
                                                       : degrees_[a] - degrees_[b];
    if (step != 1)
      bad.push_back("arrow " + names_[a] + " -> " + names_[b] +
                    " does not raise degree by 1 in the declared orientation (got " +
                    std::to_string(step) + ")");
  }
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if (reach_[i][j] && reach_[j][i])
        bad.push_back("2-cycle between '" + names_[i] + "' and '" + names_[j] + "'");
  return bad;
}

void GradedPoset::ensure_valid() const {
  auto v = validate();
  if (!v.empty()) throw Error("InvalidPoset", v.front());
}

std::vector<int> GradedPoset::slice_members(int i0, bool under, bool starred) const {
  std::vector<int> m;
  for (int j = 0; j < size(); ++j) {
    bool rel = under ? leq(i0, j) : leq(j, i0);
    if (!rel) continue;
    if (starred && j == i0) continue;
    m.push_back(j);
  }
  return m;
}

Slice GradedPoset::slice(int i0, bool under, bool starred,
                         const std::optional<std::vector<int>>& degree_filter) const {
  if (i0 < 0 || i0 >= size()) throw Error("UnknownObject", "slice base out of range");
  Slice s;
  s.base = i0;
  s.under = under;
  s.starred = starred;
  for (int j : slice_members(i0, under, starred)) {
    if (degree_filter &&
        std::find(degree_filter->begin(), degree_filter->end(), degrees_[j]) ==
            degree_filter->end())
      continue;
    s.members.push_back(j);
  }
  return s;
}

std::vector<int> GradedPoset::objects_of_degree(int d) const {
  std::vector<int> v;
  for (int i = 0; i < size(); ++i)
    if (degrees_[i] == d) v.push_back(i);
  return v;
}

int GradedPoset::max_degree() const {
  int m = 0;
  for (int d : degrees_) m = std::max(m, d);
  return m;
}

std::pair<std::vector<int>, int> GradedPoset::connected_components() const {
  std::vector<int> comp(size(), -1);
  int c = 0;
  for (int s = 0; s < size(); ++s) {
    if (comp[s] != -1) continue;
    std::deque<int> q{s};
    comp[s] = c;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int y : out_[x])
        if (comp[y] == -1) comp[y] = c, q.push_back(y);
      for (int y : in_[x])
        if (comp[y] == -1) comp[y] = c, q.push_back(y);
    }
    ++c;
  }
  return {comp, c};
}

bool GradedPoset::subset_connected(const std::vector<int>& members) const {
  if (members.empty()) return true;
  std::set<int> in_set(members.begin(), members.end());
  std::set<int> vis;
  std::deque<int> q{members.front()};
  vis.insert(members.front());
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    // zig-zag connectivity of the full subcategory: use induced order relations
    for (int y : in_set)
      if (!vis.count(y) && (lt(x, y) || lt(y, x))) vis.insert(y), q.push_back(y);
  }
  return vis.size() == in_set.size();
}

GradedPoset GradedPoset::core() const {
  ensure_valid();
  std::vector<int> keep(size());
  for (int i = 0; i < size(); ++i) keep[i] = i;
  GradedPoset cur = *this;
  for (;;) {
    std::vector<int> next;
    for (int i = 0; i < cur.size(); ++i) {
      bool is_source = cur.in_[i].empty();
      if (!is_source) {
        next.push_back(i);
        continue;
      }
      auto under = cur.slice_members(i, /*under=*/true, /*starred=*/true);
      if (under.empty() || cur.subset_connected(under)) continue;  // removed
      next.push_back(i);
    }
    if (int(next.size()) == cur.size()) return cur;
    cur = cur.restrict(next);
  }
}

bool GradedPoset::is_tree() const {
  // no cycle in the associated undirected graph
  auto [comp, c] = connected_components();
  (void)comp;
  return int(covers_.size()) == size() - c;
}

std::optional<int> GradedPoset::initial_object() const {
  for (int i = 0; i < size(); ++i) {
    bool all = true;
    for (int j = 0; j < size() && all; ++j) all = leq(i, j);
    if (all) return i;
  }
  return std::nullopt;
}

std::optional<int> GradedPoset::terminal_object() const {
  for (int i = 0; i < size(); ++i) {
    bool all = true;
    for (int j = 0; j < size() && all; ++j) all = leq(j, i);
    if (all) return i;
  }
  return std::nullopt;
}

bool GradedPoset::is_rooted_tree() const { return is_tree() && initial_object().has_value(); }

bool GradedPoset::is_simplex_like(SimplexWitness* witness) const {
  ensure_valid();
  if (witness) witness->locals.assign(size(), {});
  for (int x = 0; x < size(); ++x) {
    std::vector<int> over = slice_members(x, /*under=*/false, /*starred=*/false);
    std::vector<int> atoms;
    for (int y : over) {
      bool minimal = true;
      for (int z : over)
        if (lt(z, y)) {
          minimal = false;
          break;
        }
      if (minimal) atoms.push_back(y);
    }
    if (atoms.size() > 30) return false;  // beyond any desk-scale simplex
    unsigned long full = (atoms.size() >= 1) ? ((1ul << atoms.size()) - 1) : 0;
    if (over.size() != full) return false;
    std::set<unsigned long> seen;
    std::vector<std::pair<int, unsigned long>> ms;
    for (int y : over) {
      unsigned long mask = 0;
      for (size_t k = 0; k < atoms.size(); ++k)
        if (leq(atoms[k], y)) mask |= 1ul << k;
      if (mask == 0 || !seen.insert(mask).second) return false;
      ms.push_back({y, mask});
    }
    // order must agree with subset inclusion both ways
    for (auto& [y, my] : ms)
      for (auto& [z, mz] : ms) {
        bool sub = (my & mz) == my;
        if (sub != leq(y, z)) return false;
      }
    if (witness) {
      witness->locals[x].atoms = atoms;
      witness->locals[x].member_subsets = ms;
    }
  }
  return true;
}

GradedPoset GradedPoset::opposite() const {
  std::vector<std::pair<std::string, int>> objs;
  for (int i = 0; i < size(); ++i) objs.push_back({names_[i], degrees_[i]});
  std::vector<std::pair<std::string, std::string>> arrows;
  for (auto& [a, b] : covers_) arrows.push_back({names_[b], names_[a]});
  Orientation o = orientation_ == Orientation::Increasing ? Orientation::Decreasing
                                                          : Orientation::Increasing;
  return GradedPoset(std::move(objs), arrows, o);
}

GradedPoset GradedPoset::restrict(const std::vector<int>& keep) const {
  std::set<int> in_set(keep.begin(), keep.end());
  std::vector<std::pair<std::string, int>> objs;
  std::vector<int> sorted(in_set.begin(), in_set.end());
  for (int i : sorted) objs.push_back({names_[i], degrees_[i]});
  std::vector<std::pair<std::string, std::string>> arrows;
  for (int i : sorted)
    for (int j : sorted) {
      if (!lt(i, j)) continue;
      bool cover = true;  // covering relation of the induced order
      for (int z : sorted)
        if (lt(i, z) && lt(z, j)) {
          cover = false;
          break;
        }
      if (cover) arrows.push_back({names_[i], names_[j]});
    }
  return GradedPoset(std::move(objs), arrows, orientation_);
}

std::vector<std::pair<int, int>> GradedPoset::arrows_of_degree(int d) const {
  std::vector<std::pair<int, int>> v;
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      if (lt(i, j) && std::abs(degrees_[j] - degrees_[i]) == d) v.push_back({i, j});
  return v;
}

std::vector<std::pair<int, int>> GradedPoset::all_strict_arrows() const {
  std::vector<std::pair<int, int>> v;
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      if (lt(i, j)) v.push_back({i, j});
  return v;
}

std::vector<std::vector<std::vector<int>>> GradedPoset::strict_chains() const {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> cur;
  for (int i = 0; i < size(); ++i) cur.push_back({i});
  while (!cur.empty()) {
    out.push_back(cur);
    std::vector<std::vector<int>> next;
    for (const auto& ch : cur)
      for (int j = 0; j < size(); ++j)
        if (lt(ch.back(), j)) {
          auto e = ch;
          e.push_back(j);
          next.push_back(std::move(e));
        }
    cur = std::move(next);
  }
  return out;
}

int GradedPoset::longest_chain_length() const {
  auto ch = strict_chains();
  return ch.empty() ? -1 : int(ch.size()) - 1;
}

std::string GradedPoset::delta_name(const std::vector<int>& seq) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < seq.size(); ++i) os << seq[i] << (i + 1 < seq.size() ? "," : "");
  os << "]";
  return os.str();
}

GradedPoset GradedPoset::delta(int n) {
  std::vector<std::pair<std::string, int>> objs;
  std::vector<std::pair<std::string, std::string>> arrows;
  std::vector<std::vector<int>> seqs;
  for (unsigned long mask = 1; mask < (1ul << (n + 1)); ++mask) {
    std::vector<int> s;
    for (int b = 0; b <= n; ++b)
      if (mask & (1ul << b)) s.push_back(b);
    seqs.push_back(s);
  }
  for (auto& s : seqs) objs.push_back({delta_name(s), int(s.size()) - 1});
  for (auto& s : seqs) {
    if (s.size() < 2) continue;
    for (size_t l = 0; l < s.size(); ++l) {
      std::vector<int> face = s;
      face.erase(face.begin() + l);
      arrows.push_back({delta_name(s), delta_name(face)});
    }
  }
  return GradedPoset(std::move(objs), arrows, Orientation::Decreasing);
}

}  // namespace limkit
