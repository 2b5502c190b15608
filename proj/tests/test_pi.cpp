#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "cwflab/cwf.hpp"
#include "cwflab/enumerate.hpp"
#include "cwflab/fixtures.hpp"
#include "cwflab/mutate.hpp"
#include "cwflab/pi.hpp"
#include "cwflab/suites.hpp"

using namespace cwflab;

namespace {

DepTy weaken_by_self(const DepTy& a) { return ty_subst(a, proj_p(a.ctx(), a)); }

SuiteConfig small_config() {
  SuiteConfig cfg;
  cfg.bounds.cap = 32;
  return cfg;
}

/// Over ⊤̂(C2): A(a) = {p}, A(b) = ∅; B = {u, v} everywhere over Γ.A.
struct Sparse {
  DepTy a, b;
};

Sparse sparse() {
  auto top = terminal_presheaf(fixtures::c2());
  fixtures::DepTyTables t;
  t.fiber[{"a", star()}] = {atom("p")};
  t.fiber[{"b", star()}] = {};
  auto a = fixtures::depty_from(top, t);
  auto b = fixtures::constant_depty(a.comprehension(), fixtures::atoms({"u", "v"}));
  return {a, b};
}

}  // namespace

TEST(Pi, FiberMatchesBruteForceOnA2) {
  auto a = fixtures::a2();
  auto pi = pi_ty(a, weaken_by_self(a));
  EXPECT_TRUE(validate_depty(pi.ty()).empty());
  auto c = suite::pi_fiber_oracle(pi, 100000);
  EXPECT_EQ(c.status(), "pass") << c.witness;
}

TEST(Pi, IsomorphismOnA2) {
  auto a = fixtures::a2();
  auto pi = pi_ty(a, weaken_by_self(a));
  auto ms = enumerate_terms(pi.cod());
  auto ns = enumerate_terms(pi.ty());
  // Over Γ2.A2: (x,u) ↦ u forces (0,p) ↦ p along f, (1,r) ↦ r, and
  // (0,q) is free in {p,q}.
  EXPECT_EQ(ms.size(), 2u);
  EXPECT_EQ(ns.size(), 2u);
  for (const auto& m : ms) EXPECT_EQ(lambda_inv(pi, lambda(pi, m)), m);
  for (const auto& n : ns) EXPECT_EQ(lambda(pi, lambda_inv(pi, n)), n);
  for (const auto& r : suite::pi_iso(pi, 100000)) EXPECT_EQ(r.status(), "pass") << r.law << ": " << r.witness;
}

// The pointwise exponent A(d,s) -> B(d,(s,a)) forgets the later stages: at
// a it has two functions {p} -> {u,v}, at b only the empty one, and any
// action from b to a leaves one global element. Π̂ gets both.
TEST(Pi, PointwiseExponentUndercountsTerms) {
  auto [a, b] = sparse();
  auto tm_ab = enumerate_terms(b);
  EXPECT_EQ(tm_ab.size(), 2u);

  const auto& top = a.ctx();
  const auto& c = top.base();
  int ka = top.elem_object(c.object_index("a"), 0);
  int kb = top.elem_object(c.object_index("b"), 0);
  for (int choice = 0; choice < 2; ++choice) {
    std::vector<std::vector<Value>> fibers(top.elem_object_count());
    fibers[ka] = fixtures::atoms({"fu", "fv"});
    fibers[kb] = fixtures::atoms({"empty"});
    std::vector<std::vector<int>> act(top.elem_morphism_count());
    for (std::size_t m = 0; m < c.morphism_count(); ++m) {
      const auto& mor = c.morphism(static_cast<int>(m));
      int e = top.elem_morphism(static_cast<int>(m), 0);
      if (c.is_identity(static_cast<int>(m))) {
        act[e].resize(fibers[top.elem_object(mor.cod, 0)].size());
        for (std::size_t i = 0; i < act[e].size(); ++i) act[e][i] = static_cast<int>(i);
      } else {
        act[e] = {choice};
      }
    }
    auto naive = DepTy::from_tables(top, fibers, act);
    EXPECT_EQ(enumerate_terms(naive).size(), 1u) << choice;
  }

  auto pi = pi_ty(a, b);
  EXPECT_EQ(enumerate_terms(pi.ty()).size(), tm_ab.size());
  EXPECT_EQ(suite::pi_fiber_oracle(pi, 100000).status(), "pass");
}

TEST(Pi, BudgetExceededIsCapacityError) {
  auto a = fixtures::a2();
  try {
    pi_ty(a, weaken_by_self(a), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::capacity);
  }
}

TEST(Pi, BetaOnA2) {
  auto a = fixtures::a2();
  auto b = weaken_by_self(a);
  auto pi = pi_ty(a, b);
  const auto& gamma = a.ctx();
  for (const auto& m : enumerate_terms(b)) {
    for (const auto& n : enumerate_terms(a)) {
      EXPECT_EQ(app(pi, lambda(pi, m), n), tm_subst(m, ext(nat_id(gamma), a, n)));
    }
  }
}

TEST(PiLaws, HoldOnFixturesAndGeneratedTypes) {
  auto cfg = small_config();
  std::vector<DepTy> types = {fixtures::a2(), sparse().a};
  for (const auto& c : {fixtures::c1(), fixtures::c2(), chain(2)}) {
    for (auto& a : suite::generated_types(c, cfg, 41, 2)) types.push_back(std::move(a));
  }
  std::size_t n = 0;
  for (std::size_t i = 0; i < types.size(); ++i) {
    for (const auto& b : suite::pi_codomains(types[i], cfg, 50 + i)) {
      auto pi = pi_ty(types[i], b);
      // An empty context has no anchors, so nothing to compare.
      EXPECT_NE(suite::pi_fiber_oracle(pi, 100000).status(), "fail");
      for (const auto& r : suite::pi_iso(pi, 100000)) EXPECT_NE(r.status(), "fail") << r.law << ": " << r.witness;
      auto inst = suite::pi_instances(types[i], b, cfg, kDefaultPiFiberBudget);
      for (const auto& r : law_suite_pi(inst)) EXPECT_NE(r.status(), "fail") << r.law << ": " << r.witness;
      n += inst.size();
    }
  }
  EXPECT_GT(n, 50u);
}

// Sensitivity: every law is broken by at least one of the corrupted
// operations, on the same instances where the real ones pass.
TEST(PiLaws, MutationsAreDetectedPerLaw) {
  auto cfg = small_config();
  std::vector<PiInstance> inst;
  std::vector<DepTy> types = {fixtures::a2()};
  for (auto& a : suite::generated_types(fixtures::c2(), cfg, 43, 2)) types.push_back(std::move(a));
  for (std::size_t i = 0; i < types.size(); ++i) {
    for (const auto& b : suite::pi_codomains(types[i], cfg, 60 + i)) {
      for (auto& x : suite::pi_instances(types[i], b, cfg, kDefaultPiFiberBudget)) inst.push_back(std::move(x));
    }
  }
  ASSERT_TRUE(all_pass(law_suite_pi(inst)));
  std::set<std::string> caught;
  for (const auto& ops : {mutate::corrupt_pi_action(), mutate::corrupt_lambda(), mutate::corrupt_lambda_inv()}) {
    for (const auto& r : law_suite_pi(inst, ops)) {
      if (r.failures > 0) caught.insert(r.law);
    }
  }
  EXPECT_EQ(caught, (std::set<std::string>{"pi-subst", "lambda-subst", "app-subst", "app-subst-general", "beta"}));
}
