#include "limkit/textio.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace limkit {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, delim)) out.push_back(trim(item));
  return out;
}

[[noreturn]] void fail(const std::string& code, int line, const std::string& what) {
  throw Error(code, "line " + std::to_string(line) + ": " + what);
}

// "(1 2)(3 4)" or "()" as a permutation of the given degree (1-based input)
std::vector<int> parse_cycles(const std::string& tok, int degree, int line) {
  std::vector<int> p(degree);
  std::iota(p.begin(), p.end(), 0);
  size_t i = 0;
  while (i < tok.size()) {
    if (tok[i] != '(') fail("SyntaxError", line, "expected '(' in permutation '" + tok + "'");
    size_t close = tok.find(')', i);
    if (close == std::string::npos) fail("SyntaxError", line, "unclosed cycle");
    std::string body = tok.substr(i + 1, close - i - 1);
    std::vector<int> cyc;
    for (auto& t : split(body, ' '))
      if (!t.empty()) {
        int v = std::stoi(t) - 1;
        if (v < 0 || v >= degree) fail("SyntaxError", line, "cycle point out of range");
        cyc.push_back(v);
      }
    for (size_t k = 0; k < cyc.size(); ++k) p[cyc[k]] = cyc[(k + 1) % cyc.size()];
    i = close + 1;
  }
  return p;
}

IntMatrix parse_matrix(const std::string& text, int rows, int cols, int line) {
  // "[[a,b],[c,d]]" with exact shape; "[]" is the empty matrix
  std::string s = trim(text);
  if (s == "[]" || s == "[[]]") {
    if (rows != 0 && cols != 0)
      fail("DimensionMismatch", line, "empty matrix where a " + std::to_string(rows) + "x" +
                                          std::to_string(cols) + " matrix is required");
    return IntMatrix(rows, cols);
  }
  if (s.size() < 4 || s.front() != '[' || s.back() != ']')
    fail("SyntaxError", line, "matrix must look like [[..],[..]]");
  std::vector<std::vector<Int>> data;
  size_t i = 1;
  while (i < s.size() - 1) {
    if (s[i] == ',' || s[i] == ' ') {
      ++i;
      continue;
    }
    if (s[i] != '[') fail("SyntaxError", line, "expected '[' starting a matrix row");
    size_t close = s.find(']', i);
    if (close == std::string::npos) fail("SyntaxError", line, "unclosed matrix row");
    std::vector<Int> row;
    for (auto& t : split(s.substr(i + 1, close - i - 1), ','))
      if (!t.empty()) row.push_back(Int(t));
    data.push_back(std::move(row));
    i = close + 1;
  }
  if (int(data.size()) != rows) fail("DimensionMismatch", line, "matrix row count mismatch");
  IntMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (int(data[r].size()) != cols)
      fail("DimensionMismatch", line, "matrix column count mismatch");
    for (int c = 0; c < cols; ++c) m(r, c) = data[r][c];
  }
  return m;
}

struct RawPoset {
  std::vector<std::pair<std::string, int>> objects;
  std::vector<std::pair<std::string, std::string>> arrows;
  Orientation orientation = Orientation::Increasing;
  bool orientation_seen = false;
};

struct GdGroup {
  FiniteGroup fg;
  std::vector<std::vector<int>> perms;  // empty unless built from permutations
  int degree = 0;
};

GdGroup make_perm_group(int degree, const std::vector<std::vector<int>>& gens, int line) {
  GdGroup g;
  g.degree = degree;
  std::set<std::vector<int>> elems;
  std::vector<int> id(degree);
  std::iota(id.begin(), id.end(), 0);
  elems.insert(id);
  std::vector<std::vector<int>> queue{id};
  while (!queue.empty()) {
    auto x = queue.back();
    queue.pop_back();
    for (auto& gen : gens) {
      std::vector<int> y(degree);
      for (int i = 0; i < degree; ++i) y[i] = gen[x[i]];
      if (elems.insert(y).second) {
        if (elems.size() > 5040) fail("DimensionMismatch", line, "permutation group too large");
        queue.push_back(y);
      }
    }
  }
  g.perms.assign(elems.begin(), elems.end());
  std::map<std::vector<int>, int> idx;
  for (size_t i = 0; i < g.perms.size(); ++i) idx[g.perms[i]] = int(i);
  int n = int(g.perms.size());
  std::vector<int> table(size_t(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> c(degree);
      for (int i = 0; i < degree; ++i) c[i] = g.perms[a][g.perms[b][i]];
      table[size_t(a) * n + b] = idx[c];
    }
  g.fg = FiniteGroup(n, std::move(table));
  return g;
}

GdGroup builtin_as_perm_group(const std::string& name, int line) {
  // realize builtins by permutations so elements can be written as cycles
  auto cyc = [&](int n) {
    std::vector<int> c(n);
    for (int i = 0; i < n; ++i) c[i] = (i + 1) % n;
    return c;
  };
  try {
    if (name == "trivial" || name == "1") return make_perm_group(1, {}, line);
    FiniteGroup fg = FiniteGroup::builtin(name);
    int n = fg.order();
    std::string head = name.substr(0, 1);
    if (name.rfind("cyclic", 0) == 0 || head == "C" || head == "Z")
      return make_perm_group(n, {cyc(n)}, line);
    if (name.rfind("dihedral", 0) == 0 || head == "D") {
      int m = n / 2;
      std::vector<int> refl(m);
      for (int i = 0; i < m; ++i) refl[i] = (m - i) % m;
      return make_perm_group(m, {cyc(m), refl}, line);
    }
    auto factorial_degree = [](long target) {
      long f = 1;
      for (int d = 1; d <= 8; ++d) {
        f *= d;
        if (f == target) return d;
      }
      return -1;
    };
    if (name.rfind("symmetric", 0) == 0 || head == "S") {
      int deg = factorial_degree(n);
      std::vector<int> tr(deg);
      std::iota(tr.begin(), tr.end(), 0);
      std::swap(tr[0], tr[1]);
      return make_perm_group(deg, {cyc(deg), tr}, line);
    }
    if (name.rfind("alternating", 0) == 0 || head == "A") {
      int deg = factorial_degree(2l * n);
      std::vector<int> three(deg);
      std::iota(three.begin(), three.end(), 0);
      three[0] = 1, three[1] = 2, three[2] = 0;
      std::vector<int> gen2(deg);
      std::iota(gen2.begin(), gen2.end(), 0);
      if (deg % 2 == 1) {
        gen2 = cyc(deg);
      } else {
        // an n-1 cycle fixing the first point generates A_n with a 3-cycle
        for (int i = 1; i < deg; ++i) gen2[i] = i % (deg - 1) + 1;
        gen2[0] = 0;
      }
      return make_perm_group(deg, {three, gen2}, line);
    }
    // fall back to the regular representation
    std::vector<std::vector<int>> gens;
    for (int a = 0; a < n; ++a) {
      std::vector<int> row(n);
      for (int b = 0; b < n; ++b) row[b] = fg.mul(a, b);
      gens.push_back(row);
    }
    return make_perm_group(n, gens, line);
  } catch (const Error& e) {
    fail("UnknownReference", line, e.what());
  }
}

int find_perm(const GdGroup& g, const std::vector<int>& p, int line) {
  auto it = std::find(g.perms.begin(), g.perms.end(), p);
  if (it == g.perms.end()) fail("UnknownReference", line, "permutation is not a group element");
  return int(it - g.perms.begin());
}

// words of every element in the given generators (generators as element ids)
std::vector<std::vector<int>> element_words(const FiniteGroup& g, const std::vector<int>& gens,
                                            int line) {
  std::vector<std::vector<int>> words(g.order());
  std::vector<bool> seen(g.order(), false);
  seen[g.identity()] = true;
  std::vector<int> queue{g.identity()};
  while (!queue.empty()) {
    int x = queue.front();
    queue.erase(queue.begin());
    for (int gi : gens) {
      int y = g.mul(x, gi);
      if (!seen[y]) {
        seen[y] = true;
        words[y] = words[x];
        words[y].push_back(gi);
        queue.push_back(y);
      }
    }
  }
  for (int x = 0; x < g.order(); ++x)
    if (!seen[x]) fail("UnknownReference", line, "map generators do not generate the group");
  return words;
}

std::vector<int> hom_from_generator_images(const FiniteGroup& src, const FiniteGroup& tgt,
                                           const std::vector<std::pair<int, int>>& gen_images,
                                           int line) {
  std::vector<int> gens;
  std::map<int, int> img;
  for (auto& [a, b] : gen_images) {
    gens.push_back(a);
    img[a] = b;
  }
  auto words = element_words(src, gens, line);
  std::vector<int> f(src.order());
  for (int x = 0; x < src.order(); ++x) {
    int y = tgt.identity();
    for (int gi : words[x]) y = tgt.mul(y, img[gi]);
    f[x] = y;
  }
  for (int x = 0; x < src.order(); ++x)
    for (int y = 0; y < src.order(); ++y)
      if (f[src.mul(x, y)] != tgt.mul(f[x], f[y]))
        fail("DimensionMismatch", line, "generator images do not extend to a homomorphism");
  return f;
}

}  // namespace

InputDocument parse_document(const std::string& text,
                             const std::optional<std::string>& g0_override) {
  InputDocument doc;
  RawPoset raw;
  std::map<std::string, std::pair<std::string, int>> groups;  // diagram section
  std::map<std::pair<std::string, std::string>, std::pair<std::string, int>> matrices;
  std::map<std::string, std::pair<std::string, int>> gd_groups;
  std::map<std::pair<std::string, std::string>, std::pair<std::string, int>> gd_maps;
  std::map<std::string, std::pair<std::string, int>> gd_cones;
  std::optional<std::pair<std::string, int>> gd_g0;
  std::vector<std::tuple<std::string, int, std::string, int>> fam_j;  // obj, p, rhs, line
  std::vector<std::tuple<int, std::string, int>> fam_k;
  bool has_diagram = false, has_gd = false, has_family = false;

  std::istringstream in(text);
  std::string line_text;
  std::string section;
  int line = 0;
  while (std::getline(in, line_text)) {
    ++line;
    std::string s = line_text;
    size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[' && s.back() == ']') {
      section = s.substr(1, s.size() - 2);
      if (section != "poset" && section != "diagram" && section != "group-diagram" &&
          section != "family")
        fail("SyntaxError", line, "unknown section '" + section + "'");
      if (section == "diagram") has_diagram = true;
      if (section == "group-diagram") has_gd = true;
      if (section == "family") has_family = true;
      continue;
    }
    if (section == "poset") {
      if (s.rfind("orientation", 0) == 0) {
        auto v = trim(s.substr(s.find(':') + 1));
        if (v == "increasing")
          raw.orientation = Orientation::Increasing;
        else if (v == "decreasing")
          raw.orientation = Orientation::Decreasing;
        else
          fail("SyntaxError", line, "orientation must be increasing or decreasing");
        raw.orientation_seen = true;
      } else if (s.rfind("object", 0) == 0) {
        auto rest = trim(s.substr(6));
        auto colon = rest.rfind(':');
        if (colon == std::string::npos) fail("SyntaxError", line, "object needs 'name : degree'");
        std::string name = trim(rest.substr(0, colon));
        int deg = 0;
        try {
          deg = std::stoi(trim(rest.substr(colon + 1)));
        } catch (...) {
          fail("SyntaxError", line, "bad degree");
        }
        raw.objects.push_back({name, deg});
      } else if (s.rfind("arrow", 0) == 0) {
        auto rest = trim(s.substr(5));
        auto pos = rest.find("->");
        if (pos == std::string::npos) fail("SyntaxError", line, "arrow needs 'a -> b'");
        raw.arrows.push_back({trim(rest.substr(0, pos)), trim(rest.substr(pos + 2))});
      } else {
        fail("SyntaxError", line, "unrecognized poset line");
      }
    } else if (section == "diagram") {
      if (s.rfind("group", 0) == 0) {
        auto eq = s.find('=');
        if (eq == std::string::npos) fail("SyntaxError", line, "group needs '='");
        groups[trim(s.substr(5, eq - 5))] = {trim(s.substr(eq + 1)), line};
      } else if (s.rfind("map", 0) == 0) {
        auto eq = s.find('=');
        auto arrow = s.find("->");
        if (eq == std::string::npos || arrow == std::string::npos || arrow > eq)
          fail("SyntaxError", line, "map needs 'map a -> b = [[..]]'");
        std::string a = trim(s.substr(3, arrow - 3));
        std::string b = trim(s.substr(arrow + 2, eq - arrow - 2));
        matrices[{a, b}] = {trim(s.substr(eq + 1)), line};
      } else {
        fail("SyntaxError", line, "unrecognized diagram line");
      }
    } else if (section == "group-diagram") {
      auto colon_split = [&](size_t head_len) -> std::pair<std::string, std::string> {
        auto c = s.find(':', head_len);
        auto eq = s.find('=', head_len);
        size_t cut = std::min(c == std::string::npos ? s.size() : c,
                              eq == std::string::npos ? s.size() : eq);
        return {trim(s.substr(head_len, cut - head_len)),
                cut < s.size() ? trim(s.substr(cut + 1)) : ""};
      };
      if (s.rfind("g0", 0) == 0) {
        gd_g0 = {trim(s.substr(s.find_first_of(":=") + 1)), line};
      } else if (s.rfind("group", 0) == 0) {
        auto [name, rhs] = colon_split(5);
        gd_groups[name] = {rhs, line};
      } else if (s.rfind("map", 0) == 0) {
        auto arrow = s.find("->");
        auto cut = s.find(':', arrow);
        if (arrow == std::string::npos || cut == std::string::npos)
          fail("SyntaxError", line, "map needs 'map a -> b : images'");
        gd_maps[{trim(s.substr(3, arrow - 3)), trim(s.substr(arrow + 2, cut - arrow - 2))}] = {
            trim(s.substr(cut + 1)), line};
      } else if (s.rfind("cone", 0) == 0) {
        auto [name, rhs] = colon_split(4);
        gd_cones[name] = {rhs, line};
      } else {
        fail("SyntaxError", line, "unrecognized group-diagram line");
      }
    } else if (section == "family") {
      if (s.rfind("J", 0) == 0) {
        auto eq = s.find('=');
        if (eq == std::string::npos) fail("SyntaxError", line, "J line needs '='");
        auto head = split(trim(s.substr(1, eq - 1)), ' ');
        std::vector<std::string> parts;
        for (auto& h : head)
          if (!h.empty()) parts.push_back(h);
        if (parts.size() != 2) fail("SyntaxError", line, "J line needs 'J <object> <p> = ...'");
        fam_j.push_back({parts[0], std::stoi(parts[1]), trim(s.substr(eq + 1)), line});
      } else if (s.rfind("K", 0) == 0) {
        auto eq = s.find('=');
        if (eq == std::string::npos) fail("SyntaxError", line, "K line needs '='");
        fam_k.push_back({std::stoi(trim(s.substr(1, eq - 1))), trim(s.substr(eq + 1)), line});
      } else {
        fail("SyntaxError", line, "unrecognized family line");
      }
    } else {
      fail("SyntaxError", line, "content before any [section] header");
    }
  }

  if (raw.objects.empty()) fail("SyntaxError", line, "no [poset] section with objects");
  try {
    doc.poset = GradedPoset(raw.objects, raw.arrows, raw.orientation);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("poset: ") + e.what());
  }
  auto base = std::make_shared<GradedPoset>(*doc.poset);

  if (has_diagram) {
    std::vector<Presentation> vals(base->size());
    std::vector<bool> seen(base->size(), false);
    for (auto& [name, spec] : groups) {
      auto idx = base->index_of(name);
      if (!idx) fail("UnknownReference", spec.second, "group for undeclared object '" + name + "'");
      auto toks = split(spec.first, ' ');
      std::vector<std::string> t;
      for (auto& x : toks)
        if (!x.empty()) t.push_back(x);
      long free_rank = -1;
      std::vector<Int> torsion;
      for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] == "free" && i + 1 < t.size())
          free_rank = std::stol(t[++i]);
        else if (t[i] == "torsion" && i + 1 < t.size())
          for (auto& d : split(t[++i], ',')) torsion.push_back(Int(d));
        else
          fail("SyntaxError", spec.second, "group spec must be 'free R [torsion d1,d2,..]'");
      }
      if (free_rank < 0) fail("SyntaxError", spec.second, "group spec is missing 'free R'");
      int gens = int(free_rank + torsion.size());
      IntMatrix rels(gens, int(torsion.size()));
      for (size_t k = 0; k < torsion.size(); ++k) rels(int(free_rank + k), int(k)) = torsion[k];
      vals[*idx] = Presentation(gens, rels);
      seen[*idx] = true;
    }
    for (int i = 0; i < base->size(); ++i)
      if (!seen[i])
        throw Error("UnknownReference", "diagram has no group for object '" + base->name(i) + "'");
    std::map<std::pair<int, int>, IntMatrix> maps;
    for (auto& [a, b] : base->covers()) {
      auto it = matrices.find({base->name(a), base->name(b)});
      if (it == matrices.end())
        throw Error("UnknownReference",
                    "diagram has no map for arrow " + base->name(a) + " -> " + base->name(b));
      maps[{a, b}] =
          parse_matrix(it->second.first, vals[b].gens, vals[a].gens, it->second.second);
    }
    for (auto& [key, spec] : matrices) {
      auto a = base->index_of(key.first), b = base->index_of(key.second);
      if (!a || !b) fail("UnknownReference", spec.second, "map on undeclared objects");
      if (!maps.count({*a, *b})) fail("UnknownReference", spec.second, "map on a non-cover arrow");
    }
    doc.diagram = AbDiagram(base, vals, maps);
  }

  if (has_gd) {
    if (!gd_g0) throw Error("UnknownReference", "group-diagram needs a g0 line");
    GdGroup g0;
    std::string g0spec = gd_g0->first;
    if (g0spec == "external") {
      if (!g0_override)
        fail("UnknownReference", gd_g0->second, "g0 is external; pass --g0 to bind it");
      g0spec = "builtin " + *g0_override;
    }
    auto parse_group_spec = [&](const std::string& spec, int ln) -> GdGroup {
      auto t = split(spec, ' ');
      std::vector<std::string> tok;
      for (auto& x : t)
        if (!x.empty()) tok.push_back(x);
      if (tok.empty()) fail("SyntaxError", ln, "empty group spec");
      if (tok[0] == "trivial") return make_perm_group(1, {}, ln);
      if (tok[0] == "builtin" && tok.size() == 2) return builtin_as_perm_group(tok[1], ln);
      if (tok[0] == "perm" && tok.size() >= 2) {
        int degree = std::stoi(tok[1]);
        std::string rest = trim(spec.substr(spec.find(tok[1]) + tok[1].size()));
        if (!rest.empty() && rest.front() == ':') rest = trim(rest.substr(1));
        std::vector<std::vector<int>> gens;
        for (auto& g : split(rest, ','))
          if (!g.empty()) gens.push_back(parse_cycles(g, degree, ln));
        return make_perm_group(degree, gens, ln);
      }
      if (tok[0] == "table" && tok.size() >= 2) {
        int n = std::stoi(tok[1]);
        std::string rest = trim(spec.substr(spec.find(tok[1]) + tok[1].size()));
        if (!rest.empty() && rest.front() == ':') rest = trim(rest.substr(1));
        std::vector<int> entries;
        for (auto& e : split(rest, ' '))
          if (!e.empty()) entries.push_back(std::stoi(e));
        if (int(entries.size()) != n * n) fail("DimensionMismatch", ln, "table needs n*n entries");
        GdGroup g;
        g.fg = FiniteGroup(n, entries);
        return g;
      }
      fail("SyntaxError", ln, "group spec must be trivial | g0 | builtin N | perm D : .. | table N : ..");
    };
    g0 = parse_group_spec(g0spec, gd_g0->second);

    GroupDiagram gd;
    gd.base = base;
    gd.g0 = g0.fg;
    std::vector<GdGroup> gd_group_data(base->size());
    gd.groups.resize(base->size());
    gd.cone.resize(base->size());
    for (int i = 0; i < base->size(); ++i) {
      auto it = gd_groups.find(base->name(i));
      if (it == gd_groups.end())
        throw Error("UnknownReference",
                    "group-diagram has no group for object '" + base->name(i) + "'");
      GdGroup g = it->second.first == "g0" ? g0 : parse_group_spec(it->second.first,
                                                                   it->second.second);
      gd.groups[i] = g.fg;
      gd_group_data[i] = std::move(g);
    }
    auto parse_hom = [&](const GdGroup& src, const GdGroup& tgt, const std::string& rhs,
                         int ln) -> std::vector<int> {
      if (rhs == "identity") {
        if (src.fg.order() != tgt.fg.order())
          fail("DimensionMismatch", ln, "identity map between groups of different order");
        std::vector<int> f(src.fg.order());
        std::iota(f.begin(), f.end(), 0);
        for (int x = 0; x < src.fg.order(); ++x)
          for (int y = 0; y < src.fg.order(); ++y)
            if (f[src.fg.mul(x, y)] != tgt.fg.mul(f[x], f[y]))
              fail("DimensionMismatch", ln, "identity is not a homomorphism here");
        return f;
      }
      if (rhs == "trivial") return std::vector<int>(src.fg.order(), tgt.fg.identity());
      if (rhs.rfind("elems", 0) == 0) {
        std::vector<int> f;
        for (auto& e : split(trim(rhs.substr(5)), ' '))
          if (!e.empty()) f.push_back(std::stoi(e));
        if (int(f.size()) != src.fg.order())
          fail("DimensionMismatch", ln, "elems map needs one image per element");
        return f;
      }
      // generator images "(..) -> (..), (..) -> (..)"
      std::vector<std::pair<int, int>> gen_images;
      for (auto& part : split(rhs, ',')) {
        if (part.empty()) continue;
        auto pos = part.find("->");
        if (pos == std::string::npos) fail("SyntaxError", ln, "expected 'perm -> perm'");
        auto lhs = parse_cycles(trim(part.substr(0, pos)), src.degree, ln);
        auto rhs2 = parse_cycles(trim(part.substr(pos + 2)), tgt.degree, ln);
        gen_images.push_back({find_perm(src, lhs, ln), find_perm(tgt, rhs2, ln)});
      }
      return hom_from_generator_images(src.fg, tgt.fg, gen_images, ln);
    };
    for (auto& [a, b] : base->covers()) {
      auto it = gd_maps.find({base->name(a), base->name(b)});
      if (it == gd_maps.end())
        throw Error("UnknownReference",
                    "group-diagram has no map for arrow " + base->name(a) + " -> " + base->name(b));
      gd.maps[{a, b}] =
          parse_hom(gd_group_data[a], gd_group_data[b], it->second.first, it->second.second);
    }
    for (int i = 0; i < base->size(); ++i) {
      auto it = gd_cones.find(base->name(i));
      if (it == gd_cones.end())
        throw Error("UnknownReference",
                    "group-diagram has no cone for object '" + base->name(i) + "'");
      gd.cone[i] = parse_hom(gd_group_data[i], g0, it->second.first, it->second.second);
    }
    doc.group_diagram = std::move(gd);
  }

  if (has_family) {
    CoveringFamily j;
    GlobalFamily k;
    bool any_j = false, any_k = false;
    auto object_list = [&](const std::string& rhs, int ln) {
      std::vector<int> out;
      for (auto& name : split(rhs, ',')) {
        if (name.empty()) continue;
        auto idx = base->index_of(name);
        if (!idx) fail("UnknownReference", ln, "family references unknown object '" + name + "'");
        out.push_back(*idx);
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    for (auto& [obj, p, rhs, ln] : fam_j) {
      auto idx = base->index_of(obj);
      if (!idx) fail("UnknownReference", ln, "J entry for unknown object '" + obj + "'");
      j.j[{*idx, p}] = object_list(rhs, ln);
      any_j = true;
    }
    for (auto& [p, rhs, ln] : fam_k) {
      k.k[p] = object_list(rhs, ln);
      any_k = true;
    }
    if (any_j) doc.family_j = std::move(j);
    if (any_k) doc.family_k = std::move(k);
  }
  return doc;
}

std::string emit_document(const InputDocument& doc) {
  std::ostringstream os;
  if (doc.poset) {
    const GradedPoset& p = *doc.poset;
    os << "[poset]\n";
    os << "orientation: "
       << (p.orientation() == Orientation::Increasing ? "increasing" : "decreasing") << "\n";
    for (int i = 0; i < p.size(); ++i) os << "object " << p.name(i) << " : " << p.degree(i) << "\n";
    for (auto& [a, b] : p.covers()) os << "arrow " << p.name(a) << " -> " << p.name(b) << "\n";
  }
  if (doc.diagram) {
    const AbDiagram& f = *doc.diagram;
    const GradedPoset& p = f.base();
    os << "\n[diagram]\n";
    for (int i = 0; i < p.size(); ++i) {
      // emit the presentation in free+torsion form: canonicalize first
      FgAbGroup g = f.group(i);
      os << "group " << p.name(i) << " = free " << g.free_rank();
      if (!g.invariant_factors().empty()) {
        os << " torsion ";
        for (size_t k = 0; k < g.invariant_factors().size(); ++k)
          os << g.invariant_factors()[k] << (k + 1 < g.invariant_factors().size() ? "," : "");
      }
      os << "\n";
    }
    for (auto& [a, b] : p.covers())
      os << "map " << p.name(a) << " -> " << p.name(b) << " = " << f.cover_map(a, b).to_string()
         << "\n";
  }
  if (doc.group_diagram) {
    const GroupDiagram& gd = *doc.group_diagram;
    const GradedPoset& p = *gd.base;
    os << "\n[group-diagram]\n";
    auto table_of = [](const FiniteGroup& g) {
      std::ostringstream t;
      t << "table " << g.order() << " :";
      for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < g.order(); ++b) t << " " << g.mul(a, b);
      return t.str();
    };
    os << "g0 = " << table_of(gd.g0) << "\n";
    for (int i = 0; i < p.size(); ++i)
      os << "group " << p.name(i) << " = " << table_of(gd.groups[i]) << "\n";
    for (auto& [ab, f] : gd.maps) {
      os << "map " << p.name(ab.first) << " -> " << p.name(ab.second) << " : elems";
      for (int x : f) os << " " << x;
      os << "\n";
    }
    for (int i = 0; i < p.size(); ++i) {
      os << "cone " << p.name(i) << " : elems";
      for (int x : gd.cone[i]) os << " " << x;
      os << "\n";
    }
  }
  if (doc.family_j || doc.family_k) {
    os << "\n[family]\n";
    const GradedPoset& p = *doc.poset;
    if (doc.family_j)
      for (auto& [key, members] : doc.family_j->j) {
        os << "J " << p.name(key.first) << " " << key.second << " =";
        for (size_t k = 0; k < members.size(); ++k)
          os << " " << p.name(members[k]) << (k + 1 < members.size() ? "," : "");
        os << "\n";
      }
    if (doc.family_k)
      for (auto& [deg, members] : doc.family_k->k) {
        os << "K " << deg << " =";
        for (size_t k = 0; k < members.size(); ++k)
          os << " " << p.name(members[k]) << (k + 1 < members.size() ? "," : "");
        os << "\n";
      }
  }
  return os.str();
}

std::string group_to_string(const FgAbGroup& g) { return g.to_string(); }

}  // namespace limkit
