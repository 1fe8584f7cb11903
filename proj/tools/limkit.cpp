#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "limkit/spectral.hpp"
#include "limkit/textio.hpp"

using nlohmann::json;
using namespace limkit;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Output {
  bool as_json = false;
  json j = json::object();

  void kv(const std::string& key, const std::string& value) {
    j[key] = value;
    if (!as_json) std::cout << key << " = " << value << "\n";
  }
  void kv(const std::string& key, long value) {
    j[key] = value;
    if (!as_json) std::cout << key << " = " << value << "\n";
  }
  void kv(const std::string& key, bool value) {
    j[key] = value;
    if (!as_json) std::cout << key << " = " << (value ? "true" : "false") << "\n";
  }
  void line(const std::string& text) {
    if (!as_json) std::cout << text << "\n";
  }
  void finish() {
    if (as_json) std::cout << j.dump(2) << "\n";
  }
};

AbDiagram require_diagram(const InputDocument& doc) {
  if (doc.diagram) return *doc.diagram;
  if (!doc.poset) throw Error("UnknownReference", "input has no poset");
  // default coefficient system: the constant functor Z
  return AbDiagram::constant(std::make_shared<GradedPoset>(*doc.poset), Presentation::free(1));
}

int run_validate(const std::string& file, Output& out) {
  InputDocument doc = parse_document(read_file(file));
  std::vector<std::string> bad = doc.poset->validate();
  if (bad.empty() && doc.diagram) bad = doc.diagram->validate();
  if (bad.empty() && doc.group_diagram) bad = doc.group_diagram->validate(false);
  if (doc.family_j && bad.empty()) {
    auto fbad = validate_covering(*doc.poset, *doc.family_j);
    bad.insert(bad.end(), fbad.begin(), fbad.end());
  }
  out.kv("valid", bad.empty());
  json arr = json::array();
  for (auto& b : bad) {
    out.line("violation: " + b);
    arr.push_back(b);
  }
  out.j["violations"] = arr;
  return bad.empty() ? 0 : 1;
}

int run_limits(const std::string& file, bool inverse, int max_degree, Output& out) {
  InputDocument doc = parse_document(read_file(file));
  AbDiagram f = require_diagram(doc);
  f.ensure_valid();
  auto lims = inverse ? derived_inverse_limits(f) : derived_direct_limits(f);
  json arr = json::array();
  for (size_t i = 0; i < lims.size(); ++i) {
    if (max_degree >= 0 && int(i) > max_degree) break;
    std::string key = inverse ? "lim^" + std::to_string(i) : "lim_" + std::to_string(i);
    out.kv(key, lims[i].to_string());
    arr.push_back(lims[i].to_string());
  }
  out.j[inverse ? "inverse_limits" : "direct_limits"] = arr;
  return 0;
}

int run_check(const std::string& file, const std::string& what, int p_level, Output& out) {
  InputDocument doc = parse_document(read_file(file));
  AbDiagram f = require_diagram(doc);
  f.ensure_valid();
  if (what == "pseudo-projective") {
    CheckResult r = check_pseudo_projective_all(f);
    out.kv("pseudo_projective", r.verdict == CheckVerdict::True
                                    ? "true"
                                    : r.verdict == CheckVerdict::False ? "false" : "not checked");
    if (!r.witness.empty()) out.kv("witness", r.witness);
  } else if (what == "pseudo-injective") {
    CheckResult r = check_pseudo_injective_all(f);
    out.kv("pseudo_injective", r.verdict == CheckVerdict::True
                                   ? "true"
                                   : r.verdict == CheckVerdict::False ? "false" : "not checked");
    if (!r.witness.empty()) out.kv("witness", r.witness);
  } else if (what == "pre-projective") {
    out.kv("pre_projective", check_pre_projective(f));
  } else if (what == "p-condensed") {
    out.kv("p_condensed", check_p_condensed(f, p_level));
  } else {
    throw Error("UsageError", "unknown check '" + what + "'");
  }
  return 0;
}

int run_spectral(const std::string& file, int variant, int r_max, Output& out) {
  InputDocument doc = parse_document(read_file(file));
  AbDiagram f = require_diagram(doc);
  f.ensure_valid();
  FilteredComplex fc = build_filtered(f, variant);
  PagesResult pr = pages(fc, r_max);
  out.kv("variant", long(variant));
  out.kv("collapse_at", long(pr.collapse_at));
  json jpages = json::array();
  int pmin = fc.display_p(fc.weight_negated ? fc.wmax : fc.wmin);
  int pmax = fc.display_p(fc.weight_negated ? fc.wmin : fc.wmax);
  for (auto& page : pr.pages) {
    out.line("page E_" + std::to_string(page.r) + "  (rows n, columns p):");
    std::vector<std::vector<std::string>> grid(fc.cx.top() + 1);
    std::vector<size_t> width(pmax - pmin + 1, 1);
    for (int n = 0; n <= fc.cx.top(); ++n)
      for (int p = pmin; p <= pmax; ++p) {
        auto it = page.entries.find({p, n});
        std::string cell = it == page.entries.end() ? "." : it->second.to_string();
        if (page.dr_nonzero.count({p, n})) cell += "*";
        grid[n].push_back(cell);
        width[p - pmin] = std::max(width[p - pmin], cell.size());
      }
    {
      std::ostringstream os;
      os << "  n\\p ";
      for (int p = pmin; p <= pmax; ++p)
        os << " " << std::string(width[p - pmin] - std::to_string(p).size(), ' ') << p;
      out.line(os.str());
    }
    for (int n = fc.cx.top(); n >= 0; --n) {
      std::ostringstream os;
      os << "  " << n << "   ";
      for (int p = pmin; p <= pmax; ++p) {
        const std::string& cell = grid[n][p - pmin];
        os << " " << std::string(width[p - pmin] - cell.size(), ' ') << cell;
      }
      out.line(os.str());
    }
    out.line("  (* marks a nonzero d_r leaving the entry)");
    json jp = json::object();
    jp["r"] = page.r;
    json jent = json::array();
    for (auto& [key, g] : page.entries)
      jent.push_back({{"p", key.first}, {"n", key.second}, {"group", g.to_string()}});
    jp["entries"] = jent;
    jpages.push_back(jp);
  }
  out.j["pages"] = jpages;
  ConvergenceReport rep = check_weak_convergence(fc, convergence_target(fc));
  out.kv("weak_convergence_ranks", rep.ranks_ok());
  out.kv("weak_convergence_full", rep.all_ok());
  return 0;
}

int run_cohomology(const std::string& file, const std::string& family_file,
                   const std::string& global_file, Output& out) {
  InputDocument doc = parse_document(read_file(file));
  GradedPoset p = *doc.poset;
  // family files hold bare [family] sections; object names resolve on the poset
  auto with_poset = [&](const std::string& path) {
    InputDocument base;
    base.poset = p;
    return parse_document(emit_document(base) + "\n" + read_file(path));
  };
  CoveringFamily j;
  if (!family_file.empty()) {
    InputDocument jdoc = with_poset(family_file);
    if (!jdoc.family_j) throw Error("UnknownReference", "family file has no J entries");
    j = *jdoc.family_j;
  } else if (doc.family_j) {
    j = *doc.family_j;
  } else {
    j = simplexlike_covering_family(p);
  }
  std::vector<std::string> reasons;
  bool adequate = check_adequate(p, j, &reasons);
  out.kv("family_adequate", adequate);
  if (!adequate) {
    for (auto& r : reasons) out.line("reason: " + r);
    return 1;
  }
  FpTower tower = build_Fp_tower(p, j, p.max_degree());
  auto h = cohomology_via_tower(tower);
  for (size_t i = 0; i < h.size(); ++i) out.kv("H^" + std::to_string(i), h[i].to_string());
  RTable r = compute_R(p);
  out.kv("euler_characteristic", euler_characteristic(p, r).get_str());
  std::optional<GlobalFamily> k;
  if (!global_file.empty()) {
    InputDocument kdoc = with_poset(global_file);
    if (!kdoc.family_k) throw Error("UnknownReference", "global family file has no K entries");
    k = *kdoc.family_k;
  } else if (doc.family_k) {
    k = *doc.family_k;
  }
  if (k) {
    AcyclicityCertificate cert = acyclicity_certificate(p, j, *k);
    out.kv("certificate", cert.acyclic ? std::string("acyclic") : std::string("not-acyclic"));
    out.kv("H0_rank", cert.h0_rank);
  }
  return 0;
}

int run_webb(const std::string& group_name, int prime, Output& out) {
  FiniteGroup g = FiniteGroup::builtin(group_name);
  WebbReport rep = webb_verify(g, prime);
  out.kv("group", group_name);
  out.kv("prime", long(prime));
  out.kv("sylow_order", long(rep.orbit.sylow_subgroup.size()));
  for (size_t d = 0; d < rep.object_counts.size(); ++d) {
    out.kv("objects_deg" + std::to_string(d), rep.object_counts[d]);
    out.kv("K" + std::to_string(d), rep.k_counts[d]);
  }
  out.kv("psi_bijection", rep.psi.ok());
  out.kv("globally_adequate", rep.globally_adequate);
  out.kv("certificate", rep.certificate.acyclic ? std::string("acyclic")
                                                : std::string("not-acyclic"));
  out.kv("K0", long(rep.k_counts.empty() ? 0 : rep.k_counts[0]));
  for (size_t i = 0; i < rep.cohomology_direct.size(); ++i)
    out.kv("H^" + std::to_string(i), rep.cohomology_direct[i].to_string());
  out.kv("pipeline_matches_cochain", rep.cohomology_agrees);
  return rep.certificate.acyclic && rep.cohomology_agrees ? 0 : 1;
}

int run_fiber(const std::string& file, const std::string& g0_name, int j_max, bool assume,
              Output& out) {
  std::optional<std::string> g0;
  if (!g0_name.empty()) g0 = g0_name;
  InputDocument doc = parse_document(read_file(file), g0);
  if (!doc.group_diagram) throw Error("UnknownReference", "input has no [group-diagram] section");
  FiberHomology fh = fiber_homology(*doc.group_diagram, j_max, assume);
  for (int jdeg = 2; jdeg < int(fh.h.size()); ++jdeg)
    out.kv("H_" + std::to_string(jdeg) + "(F)", fh.h[jdeg].to_string());
  out.kv("pi0_classes", fh.pi0_classes);
  if (fh.pi1_computed)
    out.kv("pi1_order", *fh.pi1_order);
  else
    out.kv("pi1_order", std::string("not computed"));
  return 0;
}

int run_core(const std::string& file, Output& out) {
  InputDocument doc = parse_document(read_file(file));
  GradedPoset core = doc.poset->core();
  out.kv("objects", long(core.size()));
  InputDocument cdoc;
  cdoc.poset = core;
  out.line(emit_document(cdoc));
  out.j["core"] = emit_document(cdoc);
  return 0;
}

int run_euler(const std::string& file, Output& out) {
  InputDocument doc = parse_document(read_file(file));
  GradedPoset p = *doc.poset;
  RTable r = compute_R(p);
  out.kv("euler_characteristic", euler_characteristic(p, r).get_str());
  if (p.opposite().is_simplex_like())
    out.kv("object_count_form", euler_characteristic_simplexlike(p).get_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"limkit: exact higher limits over finite graded posets"};
  app.require_subcommand(1);
  std::string format = "plain";
  app.add_option("--format", format, "plain or json")->check(CLI::IsMember({"plain", "json"}));

  std::string file, family_file, global_file, check_what, group_name = "D8", g0_name;
  int max_degree = -1, variant = 3, pages_r = 4, prime = 2, p_level = 0, fiber_max = 3;
  bool inverse = false, direct = false, assume = false;

  auto* validate = app.add_subcommand("validate", "validate a document");
  validate->add_option("file", file)->required();

  auto* limits = app.add_subcommand("limits", "derived direct/inverse limits");
  limits->add_option("file", file)->required();
  limits->add_flag("--direct", direct, "left derived functors of colim (default)");
  limits->add_flag("--inverse", inverse, "right derived functors of lim");
  limits->add_option("--max-degree", max_degree);

  auto* check = app.add_subcommand("check", "structural predicates on a diagram");
  check->add_option("file", file)->required();
  bool f_pp = false, f_pi = false, f_pre = false;
  std::string p_cond;
  check->add_flag("--pseudo-projective", f_pp);
  check->add_flag("--pseudo-injective", f_pi);
  check->add_flag("--pre-projective", f_pre);
  check->add_option("--p-condensed", p_cond, "check p-condensedness at the given level");

  auto* spectral = app.add_subcommand("spectral", "spectral sequence pages");
  spectral->add_option("file", file)->required();
  spectral->add_option("--variant", variant)->check(CLI::Range(1, 8));
  spectral->add_option("--pages", pages_r);

  auto* cohomology = app.add_subcommand("cohomology", "poset cohomology via covering families");
  cohomology->add_option("file", file)->required();
  cohomology->add_option("--family", family_file, "covering family file (J entries)");
  cohomology->add_option("--global", global_file, "global family file (K entries)");

  auto* webb = app.add_subcommand("webb", "normal-chain orbit poset acyclicity");
  webb->add_option("--group", group_name, "builtin group name (e.g. D8, S4, quaternion8)");
  webb->add_option("--prime", prime)->required();

  auto* fiber = app.add_subcommand("fiber", "homotopy-colimit fiber homology");
  fiber->add_option("file", file)->required();
  fiber->add_option("--g0", g0_name, "builtin group bound to 'g0 = external'");
  fiber->add_option("--max-degree", fiber_max);
  fiber->add_flag("--assume-contractible", assume);

  auto* core = app.add_subcommand("core", "core of the poset");
  core->add_option("file", file)->required();

  auto* euler = app.add_subcommand("euler", "Euler characteristic from the R table");
  euler->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Output out;
  out.as_json = format == "json";
  int rc = 0;
  try {
    if (app.got_subcommand(validate)) rc = run_validate(file, out);
    if (app.got_subcommand(limits)) rc = run_limits(file, inverse && !direct, max_degree, out);
    if (app.got_subcommand(check)) {
      if (f_pp)
        rc = run_check(file, "pseudo-projective", 0, out);
      else if (f_pi)
        rc = run_check(file, "pseudo-injective", 0, out);
      else if (f_pre)
        rc = run_check(file, "pre-projective", 0, out);
      else if (!p_cond.empty())
        rc = run_check(file, "p-condensed", std::stoi(p_cond), out);
      else
        throw Error("UsageError", "choose a predicate to check");
    }
    if (app.got_subcommand(spectral)) rc = run_spectral(file, variant, pages_r, out);
    if (app.got_subcommand(cohomology)) rc = run_cohomology(file, family_file, global_file, out);
    if (app.got_subcommand(webb)) rc = run_webb(group_name, prime, out);
    if (app.got_subcommand(fiber)) rc = run_fiber(file, g0_name, fiber_max, assume, out);
    if (app.got_subcommand(core)) rc = run_core(file, out);
    if (app.got_subcommand(euler)) rc = run_euler(file, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == "UsageError" ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  out.finish();
  return rc;
}
