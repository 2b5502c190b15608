#pragma once

// Manifests: named documents, the suites to run over them, and budgets.
//
//   {"v": 1,
//    "categories": {name: doc}, "presheaves": {...}, "nats": {...},
//    "deptys": {...}, "terms": {...}, "base_cwfs": {...},
//    "suites": ["all"] | ["cwf", {"name": "pi", ...params}],
//    "budgets": {"pi_fiber_budget": n, "fuel": n,
//                "fixture_bounds": {"max_objects", "max_card", "cap"}}}
//
// Documents are loaded kind by kind in the order above, so a document may
// refer by name to any document of an earlier kind.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cwflab/base_cwf.hpp"
#include "cwflab/enumerate.hpp"
#include "cwflab/error.hpp"
#include "cwflab/json_io.hpp"
#include "cwflab/pi.hpp"

namespace cwflab {

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s = {"cwf", "fincat", "internal", "modality",
                                             "pi", "pi-mutation", "presheaf", "terms"};
  return s;
}

inline constexpr int kDefaultFuel = 2;

struct Budgets {
  std::size_t pi_fiber_budget = kDefaultPiFiberBudget;
  FixtureBounds bounds;
  int fuel = kDefaultFuel;  ///< depth of generated base CwFs
};

struct SuiteRequest {
  std::string name;
  Json params = Json::object();
};

struct Manifest {
  Registry docs;
  std::vector<SuiteRequest> suites;
  Budgets budgets;
  /// Law violations found while loading; loading itself only fails on
  /// parse, lookup and structural errors.
  ValidationReport validation;
};

namespace detail {

inline void absorb(ValidationReport& into, const std::string& doc, const ValidationReport& r) {
  for (const auto& v : r) into.push_back({v.law, doc + ": " + v.witness});
}

inline std::vector<SuiteRequest> parse_suites(const Json& j) {
  std::vector<SuiteRequest> out;
  if (!j.is_array()) jio::fail("suites", "expected an array");
  for (std::size_t i = 0; i < j.size(); ++i) {
    SuiteRequest r;
    if (j[i].is_string()) {
      r.name = j[i].get<std::string>();
    } else {
      r.name = jio::str_field(j[i], "name", "suites[" + std::to_string(i) + "]");
      r.params = j[i];
    }
    if (r.name == "all") {
      for (const auto& s : known_suites()) out.push_back({s, r.params});
      continue;
    }
    const auto& ks = known_suites();
    if (std::find(ks.begin(), ks.end(), r.name) == ks.end()) {
      throw Error(ErrorKind::lookup, "suites[" + std::to_string(i) + "]: unknown suite '" + r.name + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

inline Budgets parse_budgets(const Json& j) {
  Budgets b;
  if (j.is_null()) return b;
  if (!j.is_object()) jio::fail("budgets", "expected an object");
  if (j.contains("pi_fiber_budget")) {
    if (!j["pi_fiber_budget"].is_number_unsigned()) jio::fail("budgets.pi_fiber_budget", "expected a count");
    b.pi_fiber_budget = j["pi_fiber_budget"].get<std::size_t>();
  }
  b.fuel = jio::int_field(j, "fuel", "budgets", b.fuel);
  if (j.contains("fixture_bounds")) {
    const auto& f = j["fixture_bounds"];
    b.bounds.max_objects = jio::int_field(f, "max_objects", "budgets.fixture_bounds", b.bounds.max_objects);
    b.bounds.max_card = jio::int_field(f, "max_card", "budgets.fixture_bounds", b.bounds.max_card);
    b.bounds.cap = static_cast<std::size_t>(jio::int_field(f, "cap", "budgets.fixture_bounds", static_cast<int>(b.bounds.cap)));
  }
  return b;
}

/// Resolves and validates a manifest document.
inline Manifest parse_manifest(const Json& j) {
  if (!j.is_object()) jio::fail("manifest", "expected an object");
  if (j.contains("v") && j["v"] != 1) jio::fail("manifest.v", "unsupported version");
  Manifest m;
  m.budgets = parse_budgets(j.contains("budgets") ? j["budgets"] : Json());
  auto& r = m.docs;
  auto section = [&](const char* key, auto&& load) {
    if (!j.contains(key)) return;
    const auto& s = j[key];
    if (!s.is_object()) jio::fail(key, "expected an object");
    for (const auto& [name, doc] : s.items()) load(name, doc, std::string(key) + "." + name);
  };
  section("categories", [&](const std::string& name, const Json& doc, const std::string& w) {
    auto c = fincat_from_json(doc, w);
    detail::absorb(m.validation, w, validate_category(c));
    r.categories.emplace(name, std::move(c));
  });
  section("presheaves", [&](const std::string& name, const Json& doc, const std::string& w) {
    auto p = presheaf_from_json(doc, r, w);
    detail::absorb(m.validation, w, validate_presheaf(p));
    r.presheaves.emplace(name, std::move(p));
  });
  section("nats", [&](const std::string& name, const Json& doc, const std::string& w) {
    auto s = nat_from_json(doc, r, w);
    detail::absorb(m.validation, w, validate_nat(s));
    r.nats.emplace(name, std::move(s));
  });
  section("deptys", [&](const std::string& name, const Json& doc, const std::string& w) {
    try {
      r.deptys.emplace(name, depty_from_json(doc, r, w));
    } catch (const ValidationError& e) {
      detail::absorb(m.validation, w, e.report());
    }
  });
  section("terms", [&](const std::string& name, const Json& doc, const std::string& w) {
    try {
      r.terms.emplace(name, term_from_json(doc, r, w));
    } catch (const ValidationError& e) {
      detail::absorb(m.validation, w, e.report());
    }
  });
  section("base_cwfs", [&](const std::string& name, const Json& doc, const std::string& w) {
    Json d = doc;
    // Builders without explicit depth follow the manifest fuel.
    if (d.is_object() && d.contains("builtin")) {
      if (d["builtin"] == "d1_pi" && !d.contains("depth")) d["depth"] = m.budgets.fuel;
      if (d["builtin"] == "dvar" && !d.contains("max_len")) d["max_len"] = m.budgets.fuel;
    }
    auto b = base_cwf_from_json(d, r, w);
    detail::absorb(m.validation, w, validate_base_cwf(b));
    r.base_cwfs.emplace(name, std::move(b));
  });
  if (j.contains("suites")) m.suites = detail::parse_suites(j["suites"]);
  return m;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::lookup, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::parse, path + ": " + e.what());
  }
}

inline Manifest load_manifest(const std::string& path) {
  try {
    return parse_manifest(read_json_file(path));
  } catch (const Error& e) {
    if (e.message().rfind(path, 0) == 0) throw;
    throw Error(e.kind(), path + ": " + e.message());
  }
}

}  // namespace cwflab
