// One line per acceptance criterion. Exit status is the number of failing
// criteria.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "cwflab/bundled.hpp"
#include "cwflab/internal.hpp"
#include "cwflab/manifest.hpp"
#include "cwflab/suites.hpp"

using namespace cwflab;

namespace {

// Wall-time limits, seconds.
constexpr double kCwfLimit = 10.0;
constexpr double kPiLimit = 30.0;
constexpr double kModalityLimit = 10.0;
constexpr double kEndToEndLimit = 60.0;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
};

struct Tally {
  std::size_t pass = 0, fail = 0, skipped = 0, instances = 0;
  std::string first_fail;
};

Tally tally(const SuiteResult& s, const std::function<bool(const CheckResult&)>& keep = {}) {
  Tally t;
  for (const auto& c : s.checks) {
    if (keep && !keep(c)) continue;
    t.instances += c.instances;
    if (c.status == "pass") ++t.pass;
    else if (c.status == "fail") {
      if (!t.fail++) t.first_fail = c.id + ": " + c.witness;
    } else ++t.skipped;
  }
  return t;
}

bool law_is(const CheckResult& c, const std::string& law) {
  return c.id.size() >= law.size() && c.id.compare(c.id.size() - law.size(), law.size(), law) == 0 &&
         c.id[c.id.size() - law.size() - 1] == '/';
}

void require_tally(Outcome& o, const Tally& t, const std::string& what) {
  o.detail << " " << what << " " << t.pass << " pass/" << t.fail << " fail/" << t.skipped << " skipped ("
           << t.instances << " instances);";
  o.require(t.fail == 0, what + " failed: " + t.first_fail);
  o.require(t.pass > 0, what + " ran nothing");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int criterion(int n, const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail << " [error: " << e.what() << "]";
  }
  std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << n << ": " << name << " --" << o.detail.str() << "\n";
  return o.ok ? 0 : 1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  const std::string manifest_path = std::string(CWFLAB_FIXTURES) + "/c2.json";
  const auto m = load_manifest(manifest_path);
  const auto cfg = config_from(m, 0);
  int failed = 0;

  failed += criterion(1, "CwF laws on fixtures and generated families", [&](Outcome& o) {
    auto t0 = std::chrono::steady_clock::now();
    auto s = suite::cwf(m, cfg);
    double dt = seconds_since(t0);
    require_tally(o, tally(s), "checks");
    for (const auto& fx : {"generated-c1", "generated-c2", "a2"}) {
      auto t = tally(s, [&](const CheckResult& c) { return c.id.find(std::string("/") + fx + "/") != std::string::npos; });
      o.require(t.pass > 0 && t.fail == 0, std::string("no passing checks on ") + fx);
    }
    o.detail << " " << dt << " s (limit " << kCwfLimit << ")";
    o.require(dt < kCwfLimit, "too slow");
  });

  failed += criterion(2, "term enumeration equals brute force; |Tm(Γ2, A2)| = 1", [&](Outcome& o) {
    require_tally(o, tally(suite::terms(m, cfg)), "checks");
    auto n = enumerate_terms(m.docs.deptys.at("a2")).size();
    o.detail << " |Tm(Γ2, A2)| = " << n;
    o.require(n == 1, "A2 term count");
    for (const auto& c : suite::term_oracle(m.docs.deptys.at("a2"), 1u << 20)) o.require(c.status() == "pass", c.law);
  });

  failed += criterion(3, "Π isomorphism and fiber oracle", [&](Outcome& o) {
    auto t0 = std::chrono::steady_clock::now();
    auto s = suite::pi(m, cfg);
    double dt = seconds_since(t0);
    for (const auto* law : {"pi-iso-count", "pi-iso-roundtrip", "pi-lambda-image", "pi-fiber-oracle"}) {
      require_tally(o, tally(s, [&](const CheckResult& c) { return law_is(c, law); }), law);
    }
    o.detail << " " << dt << " s (limit " << kPiLimit << ")";
    o.require(dt < kPiLimit, "too slow");
  });

  failed += criterion(4, "Π laws hold and every law catches a mutation", [&](Outcome& o) {
    auto s = suite::pi(m, cfg);
    for (const auto* law : {"pi-subst", "lambda-subst", "app-subst", "app-subst-general", "beta"}) {
      require_tally(o, tally(s, [&](const CheckResult& c) { return law_is(c, law); }), law);
    }
    auto mut = suite::pi_mutation(m, cfg);
    for (const auto* law : {"pi-subst", "lambda-subst", "app-subst", "app-subst-general", "beta"}) {
      auto t = tally(mut, [&](const CheckResult& c) {
        return c.id == std::string("pi-mutation/") + law + "/pi-mutation-detected";
      });
      o.require(t.pass == 1 && t.fail == 0, std::string("mutation not detected for ") + law);
    }
    require_tally(o, tally(mut), "mutations");
  });

  failed += criterion(5, "internalization isomorphisms on D1 and DVar", [&](Outcome& o) {
    for (const auto& name : {"d1", "dvar"}) {
      const auto& b = m.docs.base_cwfs.at(name);
      for (const auto& r : {ctx_iso(b), hom_iso(b), vty_iso(b), vtm_iso(b)}) {
        o.require(r.ok(), std::string(name) + " " + r.name + ": " + r.witness);
      }
      auto ctx = ctx_iso(b);
      o.require(ctx.terms == b.cat.object_count(), std::string(name) + " |Tm(⊤̂, Ctx)| != |Obj|");
      auto closed = closed_iso(b);
      o.require(closed.ok(), std::string(name) + " closed VTy");
      o.require(closed.closed.terms == b.types(b.terminal).size(), std::string(name) + " |Tm(⊤̂, VTy')| != |Ty(⊤)|");
      o.detail << " " << name << ": |Obj| = " << ctx.terms << ", |Ty(⊤)| = " << closed.closed.terms
               << ", |Tm(⊤̂, VTy)| = " << vty_iso(b).terms << ";";
    }
  });

  failed += criterion(6, "internal id, comp and q reproduce the base tables", [&](Outcome& o) {
    for (const auto& name : {"d1", "d1_pi", "dvar"}) {
      const auto& b = m.docs.base_cwfs.at(name);
      std::size_t inst = 0, fails = 0;
      for (const auto& c : internal_faithfulness(b, internal_terms(b))) {
        inst += c.instances;
        fails += c.failures;
        o.require(c.failures == 0, std::string(name) + " " + c.law + ": " + c.witness);
        o.require(c.instances > 0, std::string(name) + " " + c.law + " ran nothing");
      }
      o.detail << " " << name << " " << inst << " tuples, " << fails << " mismatches;";
    }
  });

  failed += criterion(7, "□ equations, counit naturality, letbox validity", [&](Outcome& o) {
    auto t0 = std::chrono::steady_clock::now();
    auto s = suite::modality(m, cfg);
    double dt = seconds_since(t0);
    require_tally(o, tally(s), "checks");
    for (const auto* law : {"box-idempotent", "box-comprehension", "counit-naturality", "letbox-valid"}) {
      auto t = tally(s, [&](const CheckResult& c) { return law_is(c, law); });
      o.require(t.pass > 0 && t.fail == 0, law);
    }
    o.detail << " " << dt << " s (limit " << kModalityLimit << ")";
    o.require(dt < kModalityLimit, "too slow");
  });

  failed += criterion(8, "cwf-lab report --suite all is green and deterministic", [&](Outcome& o) {
    auto dir = std::filesystem::temp_directory_path() / "cwflab_acceptance";
    std::filesystem::create_directories(dir);
    std::string outs[2];
    for (int i = 0; i < 2; ++i) {
      auto out = dir / ("report" + std::to_string(i) + ".json");
      std::string cmd = std::string(CWFLAB_BIN) + " report " + manifest_path + " --suite all --format json --out " +
                        out.string() + " > /dev/null";
      auto t0 = std::chrono::steady_clock::now();
      int rc = std::system(cmd.c_str());
      double dt = seconds_since(t0);
      int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
      o.detail << " run " << i + 1 << ": exit " << code << ", " << dt << " s;";
      o.require(code == 0, "non-zero exit");
      o.require(dt < kEndToEndLimit, "too slow");
      outs[i] = slurp(out);
    }
    o.require(!outs[0].empty() && outs[0] == outs[1], "reports differ");
    auto j = nlohmann::json::parse(outs[0]);
    o.detail << " " << j["summary"]["pass"] << "/" << j["summary"]["checks"] << " pass, " << j["summary"]["skipped"]
             << " skipped";
    o.require(j["summary"]["fail"] == 0, "report has failures");
  });

  return failed;
}
