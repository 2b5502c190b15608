#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <string>

#include "cwflab/bundled.hpp"
#include "cwflab/enumerate.hpp"
#include "cwflab/fixtures.hpp"
#include "cwflab/json_io.hpp"
#include "cwflab/manifest.hpp"
#include "cwflab/suites.hpp"

using namespace cwflab;

namespace {

std::string fixture_path(const std::string& rel) { return std::string(CWFLAB_FIXTURES) + "/" + rel; }

std::string write_temp(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / ("cwflab_io_" + name);
  std::ofstream(p) << text;
  return p.string();
}

std::optional<ErrorKind> kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace

TEST(Json, CategoryRoundTrip) {
  for (const auto& c : {fixtures::c1(), fixtures::c2(), chain(3)}) EXPECT_EQ(fincat_from_json(to_json(c)), c);
}

TEST(Json, PresheafNatAndTypeRoundTrip) {
  Registry r;
  auto g = fixtures::gamma2();
  EXPECT_EQ(presheaf_from_json(to_json(g), r), g);
  auto s = fixtures::sigma2();
  EXPECT_EQ(nat_from_json(to_json(s), r), s);
  auto a = fixtures::a2();
  EXPECT_EQ(depty_from_json(to_json(a), r), a);
  for (const auto& gg : presheaf_family(chain(2), 2, 6, 3, 64)) {
    EXPECT_EQ(presheaf_from_json(to_json(gg), r), gg);
    for (const auto& aa : depty_family(gg, 2, 2, 4, 64)) {
      EXPECT_EQ(depty_from_json(to_json(aa), r), aa);
      for (const auto& m : sample(enumerate_terms(aa), 2, 5)) EXPECT_EQ(term_from_json(to_json(m), r), m);
    }
  }
}

TEST(Json, TermRoundTripOnA2) {
  Registry r;
  auto m = enumerate_terms(fixtures::a2()).front();
  auto j = to_json(m);
  EXPECT_EQ(j["assign"], (Json{{"a|0", "p"}, {"a|1", "r"}, {"b|x", "u"}}));
  EXPECT_EQ(term_from_json(j, r), m);
}

TEST(Json, BaseCwFRoundTrip) {
  Registry r;
  for (const auto& b : {fixtures::d1(), fixtures::d1_pi(2), fixtures::dvar(2)}) {
    auto back = base_cwf_from_json(to_json(b), r);
    EXPECT_EQ(to_json(back), to_json(b));
    EXPECT_TRUE(validate_base_cwf(back).empty());
  }
}

TEST(Json, IncoherentTermIsValidationError) {
  Registry r;
  auto j = to_json(enumerate_terms(fixtures::a2()).front());
  j["assign"]["a|0"] = "q";
  EXPECT_THROW(term_from_json(j, r), ValidationError);
}

TEST(Json, ErrorsCarryTheirLocation) {
  Registry r;
  try {
    presheaf_from_json(Json{{"base", "c9"}, {"carrier", Json::object()}}, r, "presheaves.g");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::lookup);
    EXPECT_NE(std::string(e.what()).find("presheaves.g"), std::string::npos) << e.what();
  }
  auto j = to_json(fixtures::gamma2());
  j["carrier"] = 3;
  EXPECT_EQ(kind_of([&] { presheaf_from_json(j, r); }), ErrorKind::parse);
}

TEST(Manifest, MalformedFileIsParseError) {
  auto p = write_temp("bad.json", "{\"v\": 1, \"categories\": ");
  try {
    load_manifest(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    EXPECT_NE(std::string(e.what()).find(p), std::string::npos);
  }
  EXPECT_EQ(kind_of([] { load_manifest("/nonexistent/cwflab.json"); }), ErrorKind::lookup);
}

TEST(Manifest, BundledFileMatchesBuilder) {
  EXPECT_EQ(read_json_file(fixture_path("c2.json")), bundled_manifest());
  EXPECT_EQ(read_json_file(fixture_path("mutations/broken_composition.json")), broken_composition_manifest());
  EXPECT_EQ(read_json_file(fixture_path("mutations/unknown_reference.json")), unknown_reference_manifest());
}

TEST(Manifest, BundledResolvesAndValidates) {
  auto m = load_manifest(fixture_path("c2.json"));
  EXPECT_TRUE(m.validation.empty());
  EXPECT_EQ(m.docs.presheaves.at("gamma2"), fixtures::gamma2());
  EXPECT_EQ(m.docs.deptys.at("a2"), fixtures::a2());
  EXPECT_EQ(m.docs.nats.at("sigma2"), fixtures::sigma2());
  EXPECT_EQ(m.docs.terms.at("m2"), enumerate_terms(fixtures::a2()).front());
  EXPECT_EQ(m.docs.base_cwfs.at("dvar").cat.object_count(), 7u);
  EXPECT_EQ(m.suites.size(), known_suites().size());
  EXPECT_EQ(m.budgets.bounds.cap, 128u);
}

TEST(Manifest, BrokenCompositionReportsViolations) {
  auto m = load_manifest(fixture_path("mutations/broken_composition.json"));
  ASSERT_FALSE(m.validation.empty());
  std::set<std::string> laws;
  for (const auto& v : m.validation) laws.insert(v.law);
  EXPECT_TRUE(laws.contains("right-identity")) << m.validation.front().law;
}

TEST(Manifest, UnknownReferenceIsLookupError) {
  try {
    load_manifest(fixture_path("mutations/unknown_reference.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::lookup);
    EXPECT_NE(std::string(e.what()).find("gamma3"), std::string::npos);
    // Rewrapping adds each location once.
    auto s = std::string(e.what());
    EXPECT_EQ(s.find("lookup"), s.rfind("lookup"));
  }
}

TEST(Manifest, UnknownSuiteIsLookupError) {
  auto j = bundled_manifest();
  j["suites"] = {"fincat", "nope"};
  EXPECT_EQ(kind_of([&] { parse_manifest(j); }), ErrorKind::lookup);
}

TEST(Report, JsonRoundTripAndDeterminism) {
  auto m = parse_manifest(bundled_manifest());
  auto cfg = config_from(m, 1);
  auto r1 = run_suites(m, cfg, {"fincat", "presheaf"});
  auto r2 = run_suites(m, cfg, {"presheaf", "fincat", "fincat"});
  EXPECT_EQ(report_json(r1).dump(), report_json(r2).dump());
  EXPECT_EQ(report_text(r1), report_text(r2));
  EXPECT_EQ(report_json(report_from_json(report_json(r1))), report_json(r1));
  auto j = report_json(r1);
  ASSERT_EQ(j["suites"].size(), 2u);
  EXPECT_EQ(j["suites"][0]["suite"], "fincat");
  for (const auto& s : j["suites"]) {
    for (const auto& c : s["checks"]) {
      EXPECT_EQ(c["id"].get<std::string>().rfind(s["suite"].get<std::string>() + "/", 0), 0u);
      EXPECT_FALSE(c["anchor"].get<std::string>().empty());
    }
  }
  EXPECT_EQ(j["summary"]["fail"], 0);
  EXPECT_EQ(j["summary"]["checks"], j["summary"]["pass"].get<int>() + j["summary"]["skipped"].get<int>());
}

TEST(Report, SummaryLineCountsChecks) {
  Report r;
  SuiteResult s{"fincat", {}};
  LawCheck ok("category-laws");
  ok.instances = 3;
  LawCheck bad("terminal-object");
  bad.instances = 2;
  bad.failures = 1;
  bad.witness = "f";
  s.add("x", ok);
  s.add("x", bad);
  s.skip("y", "category-laws", "no instances");
  r.suites.push_back(s);
  auto text = report_text(r);
  EXPECT_NE(text.find("1/3 checks passed, 1 failed, 1 skipped"), std::string::npos) << text;
  EXPECT_NE(text.find("FAIL  fincat/x/terminal-object  (2)  f"), std::string::npos) << text;
  EXPECT_TRUE(r.any_fail());
}

TEST(Report, EmptyManifestGivesEmptyReport) {
  Manifest m;
  auto r = run_suites(m, SuiteConfig{});
  EXPECT_TRUE(r.suites.empty());
  EXPECT_EQ(report_text(r), "0/0 checks passed\n");
  EXPECT_EQ(report_json(r)["summary"]["checks"], 0);
}

TEST(Report, MalformedReportIsParseError) {
  EXPECT_EQ(kind_of([] { report_from_json(Json{{"v", 1}}); }), ErrorKind::parse);
}

TEST(PiJson, ElementTablesRoundTrip) {
  auto a = fixtures::a2();
  auto pi = pi_ty(a, ty_subst(a, proj_p(a.ctx(), a)));
  std::size_t n = 0;
  for (std::size_t k = 0; k < pi.ty().ctx().elem_object_count(); ++k) {
    for (std::size_t i = 0; i < pi.ty().fiber_size(static_cast<int>(k)); ++i) {
      auto j = pi_element_json(pi, static_cast<int>(k), static_cast<int>(i));
      EXPECT_TRUE(j.contains("anchor"));
      EXPECT_EQ(pi_element_value(j), pi.ty().element(static_cast<int>(k), static_cast<int>(i)));
      ++n;
    }
  }
  EXPECT_GT(n, 0u);
}
