// cwf-lab: load manifests, run law suites, emit reports and fixtures.
//
// Exit status: 0 when every check passes, 1 when any fails (or, for
// `validate`, when the manifest has law violations), 2 on load errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cwflab/bundled.hpp"
#include "cwflab/manifest.hpp"
#include "cwflab/report.hpp"
#include "cwflab/suites.hpp"

namespace {

using namespace cwflab;

struct Options {
  std::string input;
  std::vector<std::string> suites;
  std::string format = "text";
  unsigned seed = 0;
  std::optional<int> fuel;
  std::optional<std::size_t> pi_budget;
  std::optional<int> max_objects, max_card;
  std::optional<std::size_t> cap;
  std::optional<std::string> terminal;
  std::string out;
};

void common_flags(CLI::App* app, Options& o) {
  app->add_option("--seed", o.seed, "seed for sampled fixture families")->default_val(0);
  app->add_option("--fuel", o.fuel, "depth of generated base CwFs and chain categories");
  app->add_option("--pi-fiber-budget", o.pi_budget, "largest Π fiber enumerated");
  app->add_option("--max-objects", o.max_objects, "largest category used for generated fixtures");
  app->add_option("--max-card", o.max_card, "largest carrier or fiber in generated fixtures");
  app->add_option("--cap", o.cap, "generated instances kept per family");
}

void apply_overrides(Json& j, const Options& o) {
  if (!j.is_object()) return;
  auto& b = j["budgets"];
  if (b.is_null()) b = Json::object();
  if (o.fuel) b["fuel"] = *o.fuel;
  if (o.pi_budget) b["pi_fiber_budget"] = *o.pi_budget;
  auto& f = b["fixture_bounds"];
  if (f.is_null()) f = Json::object();
  if (o.max_objects) f["max_objects"] = *o.max_objects;
  if (o.max_card) f["max_card"] = *o.max_card;
  if (o.cap) f["cap"] = *o.cap;
}

Manifest load(const Json& doc, const Options& o, const std::string& where) {
  Json j = doc;
  apply_overrides(j, o);
  try {
    return parse_manifest(j);
  } catch (const Error& e) {
    throw Error(e.kind(), where + ": " + e.message());
  }
}

void print_violations(const Manifest& m, std::ostream& os) {
  for (const auto& v : m.validation) os << "violation  " << v.law << "  " << v.witness << "\n";
}

int emit(const Report& r, const Options& o) {
  std::string text = o.format == "json" ? report_json(r).dump(2) + "\n" : report_text(r);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out);
    if (!f) throw Error(ErrorKind::lookup, "cannot write '" + o.out + "'");
    f << text;
  }
  return r.any_fail() ? 1 : 0;
}

/// Runs `suites` (or the manifest's own list when empty) on a valid manifest.
int run(const Manifest& m, const Options& o, std::vector<std::string> suites) {
  if (!m.validation.empty()) {
    print_violations(m, std::cerr);
    std::cerr << "manifest has " << m.validation.size() << " law violation(s)\n";
    return 2;
  }
  auto cfg = config_from(m, o.seed);
  cfg.terminal = o.terminal;
  if (suites.empty() && m.suites.empty()) return emit(Report{}, o);
  return emit(run_suites(m, cfg, suites), o);
}

int cmd_validate(const Options& o) {
  auto m = load(read_json_file(o.input), o, o.input);
  print_violations(m, std::cout);
  const auto& d = m.docs;
  std::size_t n = d.categories.size() + d.presheaves.size() + d.nats.size() + d.deptys.size() + d.terms.size() +
                  d.base_cwfs.size();
  std::cout << n << " documents, " << m.validation.size() << " violations\n";
  return m.validation.empty() ? 0 : 1;
}

int cmd_internalize(const Options& o) {
  auto doc = read_json_file(o.input);
  // A bare base CwF document, or a manifest carrying base_cwfs.
  Json man = doc;
  if (!doc.contains("base_cwfs")) man = Json{{"v", 1}, {"base_cwfs", {{"base", doc}}}};
  auto m = load(man, o, o.input);
  return run(m, o, {"internal"});
}

int cmd_modality(const Options& o) {
  auto doc = read_json_file(o.input);
  // A bare presheaf document, or a manifest.
  Json man = doc;
  if (!doc.contains("presheaves") && !doc.contains("categories")) man = Json{{"v", 1}, {"presheaves", {{"ctx", doc}}}};
  auto m = load(man, o, o.input);
  // An explicit terminal must be one; otherwise every context would be skipped.
  if (o.terminal) {
    for (const auto& [name, g] : m.docs.presheaves) {
      jio::at("presheaves." + name + ": --terminal", [&] { return detail::require_terminal(g.base(), *o.terminal); });
    }
  }
  return run(m, o, {"modality"});
}

int cmd_pi(const Options& o, const std::string& dom) {
  auto m = load(read_json_file(o.input), o, o.input);
  if (dom.empty()) return run(m, o, {"pi", "pi-mutation"});
  auto a = Registry::lookup(m.docs.deptys, dom, "depty", "--dom");
  auto pi = pi_ty(a, ty_subst(a, proj_p(a.ctx(), a)), m.budgets.pi_fiber_budget);
  Json out{{"v", 1}, {"dom", dom}, {"elements", Json::array()}};
  for (std::size_t k = 0; k < a.ctx().elem_object_count(); ++k) {
    for (std::size_t i = 0; i < pi.ty().fiber_size(static_cast<int>(k)); ++i) {
      out["elements"].push_back(pi_element_json(pi, static_cast<int>(k), static_cast<int>(i)));
    }
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_fixtures_emit(const Options& o, const std::string& which, const std::string& category) {
  Json out;
  if (!o.input.empty()) {
    // Generated families over one of the manifest's categories.
    auto m = load(read_json_file(o.input), o, o.input);
    auto c = Registry::lookup(m.docs.categories, category, "category", "--category");
    auto cfg = config_from(m, o.seed);
    auto k = suite::caps(cfg.bounds);
    out = {{"v", 1}, {"presheaves", Json::object()}, {"deptys", Json::object()}};
    auto ctxs = suite::contexts(c, cfg, 1);
    for (std::size_t i = 0; i < ctxs.size(); ++i) {
      auto name = category + "-ctx" + std::to_string(i);
      out["presheaves"][name] = to_json(ctxs[i], category);
      auto tys = depty_family(ctxs[i], cfg.bounds.max_card, k.types, suite::mix(o.seed, i), k.exhaustive);
      for (std::size_t t = 0; t < tys.size(); ++t) {
        auto dj = to_json(tys[t]);
        dj["ctx"] = name;
        out["deptys"][name + "-ty" + std::to_string(t)] = dj;
      }
    }
    out["categories"] = {{category, to_json(c)}};
  } else if (which == "bundled") {
    out = bundled_manifest();
  } else if (which == "broken-composition") {
    out = broken_composition_manifest();
  } else if (which == "unknown-reference") {
    out = unknown_reference_manifest();
  } else {
    throw Error(ErrorKind::lookup, "unknown fixture set '" + which + "'");
  }
  if (o.out.empty()) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::ofstream f(o.out);
    if (!f) throw Error(ErrorKind::lookup, "cannot write '" + o.out + "'");
    f << out.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cwf-lab: finite presheaf models of dependent type theory"};
  app.require_subcommand(1);
  Options o;
  std::string dom, which = "bundled", category;

  auto* validate = app.add_subcommand("validate", "load a manifest and report law violations");
  validate->add_option("manifest", o.input)->required();
  common_flags(validate, o);

  auto* laws = app.add_subcommand("laws", "run the category, presheaf, CwF and term suites");
  laws->add_option("manifest", o.input)->required();
  laws->add_option("--suite", o.suites, "suites to run");
  laws->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));
  common_flags(laws, o);

  auto* internalize = app.add_subcommand("internalize", "check the internal CwF of a base CwF");
  internalize->add_option("base", o.input)->required();
  internalize->add_option("--suite", o.suites, "all or internal");
  internalize->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));
  common_flags(internalize, o);

  auto* modality = app.add_subcommand("modality", "check □, its counit and letbox over a context");
  modality->add_option("ctx", o.input)->required();
  modality->add_option("--terminal", o.terminal, "terminal object of the base category");
  modality->add_option("--suite", o.suites, "all or modality");
  modality->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));
  common_flags(modality, o);

  auto* pi = app.add_subcommand("pi", "run the Π suites, or print Π(A, A{p}) elements for --dom");
  pi->add_option("manifest", o.input)->required();
  pi->add_option("--dom", dom, "named type A whose Π(A, A{p}) elements are printed");
  pi->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));
  common_flags(pi, o);

  auto* report = app.add_subcommand("report", "run suites and emit a report");
  report->add_option("manifest", o.input)->required();
  report->add_option("--suite", o.suites, "suites to run, or all");
  report->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}))->default_val("text");
  report->add_option("--out", o.out, "write the report here instead of stdout");
  common_flags(report, o);

  auto* fixtures = app.add_subcommand("fixtures", "fixture documents");
  fixtures->require_subcommand(1);
  auto* fx_emit = fixtures->add_subcommand("emit", "print a bundled manifest, or generated families");
  fx_emit->add_option("--set", which, "bundled | broken-composition | unknown-reference");
  fx_emit->add_option("--manifest", o.input, "generate families over a category of this manifest");
  fx_emit->add_option("--category", category, "category to generate over");
  fx_emit->add_option("--out", o.out, "write here instead of stdout");
  common_flags(fx_emit, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(o);
    if (*laws) {
      auto m = load(read_json_file(o.input), o, o.input);
      if (o.suites.empty()) o.suites = {"fincat", "presheaf", "cwf", "terms"};
      return run(m, o, o.suites);
    }
    if (*internalize) return cmd_internalize(o);
    if (*modality) return cmd_modality(o);
    if (*pi) return cmd_pi(o, dom);
    if (*report) {
      auto m = load(read_json_file(o.input), o, o.input);
      return run(m, o, o.suites);
    }
    if (*fx_emit) {
      if (!o.input.empty() && category.empty()) throw Error(ErrorKind::lookup, "--manifest needs --category");
      return cmd_fixtures_emit(o, which, category);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
