#pragma once

// Suite reports: one entry per check, each tagged with the topic it verifies,
// emitted as text or as stable-ordered JSON. Reports carry no timing so that
// identical inputs give byte-identical output.

#include <algorithm>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cwflab/cwf.hpp"
#include "cwflab/error.hpp"

namespace cwflab {

/// Topic anchors, keyed by law name. Every law a suite can emit is listed.
inline const std::map<std::string, std::string>& anchor_table() {
  static const std::map<std::string, std::string> t = {
      // fincat
      {"category-laws", "fincat/identity-and-associativity"},
      {"chain-builder", "fincat/builders"},
      {"terminal-object", "fincat/terminal"},
      // presheaf
      {"presheaf-laws", "presheaf/functoriality"},
      {"naturality", "presheaf/natural-transformations"},
      {"elements-category", "presheaf/category-of-elements"},
      {"terminal-presheaf", "presheaf/terminal"},
      // cwf
      {"depty-laws", "cwf/types-over-elements"},
      {"term-coherence", "cwf/terms"},
      {"term-oracle", "cwf/terms"},
      {"comprehension-shape", "cwf/comprehension"},
      {"p-after-ext", "cwf/laws"},
      {"v-under-ext", "cwf/laws"},
      {"ext-eta", "cwf/laws"},
      {"q-natural", "cwf/q"},
      // pi
      {"pi-fiber-oracle", "pi/coherence-predicate"},
      {"pi-lambda-image", "pi/abstraction"},
      {"pi-iso-count", "pi/isomorphism"},
      {"pi-iso-roundtrip", "pi/isomorphism"},
      {"pi-subst", "pi/laws"},
      {"lambda-subst", "pi/laws"},
      {"app-subst", "pi/laws"},
      {"app-subst-general", "pi/laws"},
      {"beta", "pi/laws"},
      {"pi-mutation-detected", "pi/laws"},
      {"ext-mutation-detected", "cwf/laws"},
      {"base-mutation-detected", "internal/base-cwf"},
      // internal
      {"base-cwf-valid", "internal/base-cwf"},
      {"ctx-iso", "internal/contexts"},
      {"hom-iso", "internal/morphisms"},
      {"vty-iso", "internal/types"},
      {"vtm-iso", "internal/terms"},
      {"closed-vty-iso", "internal/closed-types"},
      {"closed-vtm-valid", "internal/closed-terms"},
      {"internal-id", "internal/category"},
      {"internal-comp", "internal/category"},
      {"internal-comp-identity", "internal/category"},
      {"internal-comp-assoc", "internal/category"},
      {"internal-tysub", "internal/type-substitution"},
      {"internal-tmsub", "internal/term-substitution"},
      {"internal-q-base", "internal/q"},
      {"internal-q-composite", "internal/q"},
      {"internal-pi-beta", "internal/pi"},
      // modality
      {"box-idempotent", "modality/constant-presheaves"},
      {"box-comprehension", "modality/box-types"},
      {"box-tm-valid", "modality/box-types"},
      {"counit-naturality", "modality/counit"},
      {"counit-identity", "modality/counit"},
      {"box-intro", "modality/box"},
      {"tele-subst", "modality/telescopes"},
      {"letbox-valid", "modality/letbox"},
      {"letbox-reindex", "modality/letbox"},
  };
  return t;
}

inline const std::string& anchor_for(const std::string& law) {
  const auto& t = anchor_table();
  auto it = t.find(law);
  if (it == t.end()) throw Error(ErrorKind::lookup, "no anchor for law '" + law + "'");
  return it->second;
}

struct CheckResult {
  std::string id;      ///< suite/fixture/law
  std::string anchor;
  std::string status;  ///< pass | fail | skipped
  std::size_t instances = 0;
  std::string witness;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;

  /// Records a law check under `fixture`.
  void add(const std::string& fixture, const LawCheck& c) {
    checks.push_back({suite + "/" + fixture + "/" + c.law, anchor_for(c.law), c.status(), c.instances, c.witness});
  }
  void add(const std::string& fixture, const LawReport& r) {
    for (const auto& c : r) add(fixture, c);
  }
  void skip(const std::string& fixture, const std::string& law, const std::string& reason) {
    checks.push_back({suite + "/" + fixture + "/" + law, anchor_for(law), "skipped", 0, reason});
  }
};

struct ReportSummary {
  std::size_t checks = 0;
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t skipped = 0;
};

struct Report {
  std::vector<SuiteResult> suites;

  ReportSummary summary() const {
    ReportSummary s;
    for (const auto& su : suites) {
      for (const auto& c : su.checks) {
        ++s.checks;
        if (c.status == "pass") ++s.pass;
        else if (c.status == "fail") ++s.fail;
        else ++s.skipped;
      }
    }
    return s;
  }
  bool any_fail() const { return summary().fail > 0; }

  /// Suites by name, checks by id.
  void sort() {
    std::sort(suites.begin(), suites.end(), [](const auto& a, const auto& b) { return a.suite < b.suite; });
    for (auto& s : suites) {
      std::sort(s.checks.begin(), s.checks.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    }
  }
};

inline nlohmann::json report_json(Report r) {
  r.sort();
  nlohmann::json j;
  j["v"] = 1;
  j["suites"] = nlohmann::json::array();
  for (const auto& s : r.suites) {
    nlohmann::json sj;
    sj["suite"] = s.suite;
    sj["checks"] = nlohmann::json::array();
    for (const auto& c : s.checks) {
      nlohmann::json cj{{"id", c.id}, {"anchor", c.anchor}, {"status", c.status}, {"instances", c.instances}};
      if (!c.witness.empty()) cj["witness"] = c.witness;
      sj["checks"].push_back(std::move(cj));
    }
    j["suites"].push_back(std::move(sj));
  }
  auto sum = r.summary();
  j["summary"] = {{"checks", sum.checks}, {"pass", sum.pass}, {"fail", sum.fail}, {"skipped", sum.skipped}};
  return j;
}

inline Report report_from_json(const nlohmann::json& j) {
  try {
    if (j.at("v").get<int>() != 1) throw Error(ErrorKind::parse, "report: unsupported version");
    Report r;
    for (const auto& sj : j.at("suites")) {
      SuiteResult s{sj.at("suite").get<std::string>(), {}};
      for (const auto& cj : sj.at("checks")) {
        s.checks.push_back({cj.at("id").get<std::string>(), cj.at("anchor").get<std::string>(),
                            cj.at("status").get<std::string>(), cj.at("instances").get<std::size_t>(),
                            cj.value("witness", std::string())});
      }
      r.suites.push_back(std::move(s));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("report: ") + e.what());
  }
}

inline std::string report_text(Report r) {
  r.sort();
  std::ostringstream out;
  for (const auto& s : r.suites) {
    out << "[" << s.suite << "]\n";
    for (const auto& c : s.checks) {
      std::string tag = c.status == "pass" ? "PASS" : c.status == "fail" ? "FAIL" : "SKIP";
      out << "  " << tag << "  " << c.id << "  (" << c.instances << ")";
      if (!c.witness.empty()) out << "  " << c.witness;
      out << "\n";
    }
  }
  auto sum = r.summary();
  out << sum.pass << "/" << sum.checks << " checks passed";
  if (sum.fail) out << ", " << sum.fail << " failed";
  if (sum.skipped) out << ", " << sum.skipped << " skipped";
  out << "\n";
  return out.str();
}

}  // namespace cwflab
