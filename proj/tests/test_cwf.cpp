#include <gtest/gtest.h>

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cwflab/cwf.hpp"
#include "cwflab/enumerate.hpp"
#include "cwflab/fixtures.hpp"
#include "cwflab/mutate.hpp"

using namespace cwflab;

namespace {

std::set<std::string> carrier_strings(const Presheaf& g, const std::string& obj) {
  std::set<std::string> out;
  for (const auto& v : g.carrier(g.base().object_index(obj))) out.insert(v.to_string());
  return out;
}

/// (σ, M) pairs and σ' for the law suite, from every Δ in `deltas`.
struct Inputs {
  std::vector<std::pair<NatTrans, Term>> sm;
  std::vector<NatTrans> sp;
};

Inputs all_inputs(const DepTy& a, const std::vector<Presheaf>& deltas) {
  Inputs in;
  for (const auto& d : deltas) {
    for (const auto& s : enumerate_nats(d, a.ctx())) {
      for (auto& m : enumerate_terms(ty_subst(a, s))) in.sm.emplace_back(s, std::move(m));
    }
    for (auto& s : enumerate_nats(d, a.comprehension())) in.sp.push_back(std::move(s));
  }
  return in;
}

}  // namespace

TEST(DepTy, A2IsValidOverGamma2) {
  auto a = fixtures::a2();
  EXPECT_TRUE(validate_depty(a).empty());
  EXPECT_EQ(a.ctx(), fixtures::gamma2());
}

// Γ2.A2 is the dependent-pair presheaf: Σ over Γ2(d) of the fibers.
TEST(Comprehension, Gamma2A2CarriersAndAction) {
  auto a = fixtures::a2();
  const auto& g = a.comprehension();
  EXPECT_TRUE(validate_presheaf(g).empty());
  EXPECT_EQ(carrier_strings(g, "a"), (std::set<std::string>{"(0,p)", "(0,q)", "(1,r)"}));
  EXPECT_EQ(carrier_strings(g, "b"), (std::set<std::string>{"(x,u)"}));
  const auto& c = g.base();
  EXPECT_EQ(g.act_value(c.morphism_index("f"), Value::pair(atom("x"), atom("u"))).to_string(), "(0,p)");
}

TEST(Comprehension, ProjectionAndVariable) {
  auto a = fixtures::a2();
  auto p = proj_p(a.ctx(), a);
  EXPECT_TRUE(validate_nat(p).empty());
  const auto& c = a.ctx().base();
  auto ai = c.object_index("a");
  EXPECT_EQ(p.at_value(ai, Value::pair(atom("1"), atom("r"))), atom("1"));
  auto v = var_v(a.ctx(), a);
  EXPECT_EQ(v.ty(), ty_subst(a, p));
  const auto& ga = a.comprehension();
  EXPECT_EQ(v.value(ai, ga.index(ai, Value::pair(atom("0"), atom("q")))), atom("q"));
}

TEST(Substitution, TypeSubstitutionAlongSigma2) {
  auto a = fixtures::a2();
  auto s = fixtures::sigma2();
  auto as = ty_subst(a, s);
  EXPECT_TRUE(validate_depty(as).empty());
  const auto& c = s.src().base();
  EXPECT_EQ(as.fiber_size(s.src().elem_object(c.object_index("a"), 0)), 2u);
  EXPECT_EQ(as.fiber_size(s.src().elem_object(c.object_index("b"), 0)), 1u);
  // The unique term of A2 restricts to a term of A2{σ2}.
  auto m = enumerate_terms(a);
  ASSERT_EQ(m.size(), 1u);
  auto ms = tm_subst(m.front(), s);
  EXPECT_EQ(ms.ty(), as);
  EXPECT_EQ(ms.value(c.object_index("a"), 0), atom("p"));
}

// A{id} = A and A{σ}{τ} = A{σ ∘ τ}, likewise for terms, over every
// substitution between small generated contexts.
TEST(Substitution, FunctorialOnGeneratedFamilies) {
  auto c = fixtures::c2();
  auto ctxs = presheaf_family(c, 2, 6, 1, 64);
  std::size_t checked = 0;
  for (const auto& gamma : ctxs) {
    for (const auto& a : depty_family(gamma, 2, 3, 2, 64)) {
      EXPECT_EQ(ty_subst(a, nat_id(gamma)), a);
      for (const auto& delta : ctxs) {
        auto sigmas = sample(enumerate_nats(delta, gamma), 3, 4);
        for (const auto& s : sigmas) {
          for (const auto& theta : ctxs) {
            for (const auto& t : sample(enumerate_nats(theta, delta), 2, 5)) {
              EXPECT_EQ(ty_subst(ty_subst(a, s), t), ty_subst(a, nat_compose(s, t)));
              for (const auto& m : sample(enumerate_terms(a), 2, 6)) {
                EXPECT_EQ(tm_subst(tm_subst(m, s), t), tm_subst(m, nat_compose(s, t)));
                ++checked;
              }
            }
          }
        }
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(CwfLaws, HoldExhaustivelyOnGamma2A2) {
  auto a = fixtures::a2();
  auto in = all_inputs(a, {terminal_presheaf(fixtures::c2()), fixtures::gamma2(), a.comprehension()});
  ASSERT_FALSE(in.sm.empty());
  ASSERT_FALSE(in.sp.empty());
  auto r = law_suite_cwf(a, in.sm, in.sp);
  ASSERT_EQ(r.size(), 3u);
  for (const auto& c : r) {
    EXPECT_EQ(c.status(), "pass") << c.law << ": " << c.witness;
    EXPECT_GT(c.instances, 0u);
  }
}

TEST(CwfLaws, HoldOnGeneratedFamiliesOverChain) {
  auto c = chain(2);
  for (const auto& gamma : presheaf_family(c, 2, 6, 11, 64)) {
    for (const auto& a : depty_family(gamma, 2, 3, 12, 64)) {
      auto in = all_inputs(a, {terminal_presheaf(c), gamma});
      auto r = law_suite_cwf(a, in.sm, in.sp);
      EXPECT_TRUE(all_pass(r));
    }
  }
}

TEST(CwfLaws, QIsNaturalAndCommutesWithP) {
  auto a = fixtures::a2();
  for (const auto& s : enumerate_nats(fixtures::gamma2(), fixtures::gamma2())) {
    auto q = q_morphism(s, a);
    EXPECT_TRUE(validate_nat(q).empty());
    // p ∘ q(σ, A) = σ ∘ p
    EXPECT_EQ(nat_compose(proj_p(a.ctx(), a), q),
              nat_compose(s, proj_p(s.src(), ty_subst(a, s))));
  }
}

// Sensitivity: a corrupted extension must violate some law.
TEST(CwfLaws, CorruptedExtIsDetected) {
  auto a = fixtures::a2();
  auto in = all_inputs(a, {terminal_presheaf(fixtures::c2()), fixtures::gamma2()});
  auto r = law_suite_cwf(a, in.sm, in.sp, mutate::corrupt_ext());
  EXPECT_FALSE(all_pass(r));
}

// On C2 every family is functorial, so the broken one lives over chain(2):
// the long arrow sends p to q while the short ones fix both.
TEST(DepTy, NonFunctorialFamilyIsRejected) {
  auto c = chain(2);
  auto gamma = terminal_presheaf(c);
  auto k = fixtures::constant_depty(gamma, fixtures::atoms({"p", "q"}));
  EXPECT_TRUE(validate_depty(k).empty());
  auto n = [&](int i) { return c.object_name(i); };
  auto long_arrow = c.morphism_index(hom_set(c, n(0), n(2)).front());
  int e = gamma.elem_morphism(long_arrow, 0);
  auto bad = mutate::remap_depty_action(k, e, 0, 1);
  EXPECT_FALSE(validate_depty(bad).empty());
}
