#include <gtest/gtest.h>

#include <cstddef>
#include <random>

#include "cwflab/enumerate.hpp"
#include "cwflab/fixtures.hpp"
#include "cwflab/mutate.hpp"
#include "cwflab/presheaf.hpp"

using namespace cwflab;

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST(Presheaf, Gamma2TablesAndElements) {
  auto g = fixtures::gamma2();
  const auto& c = g.base();
  EXPECT_TRUE(validate_presheaf(g).empty());
  EXPECT_EQ(g.size(c.object_index("a")), 2u);
  EXPECT_EQ(g.size(c.object_index("b")), 1u);
  EXPECT_EQ(g.act_value(c.morphism_index("f"), atom("x")), atom("0"));

  // ∫Γ2: one object per element, one morphism per (m, s2 ∈ Γ(cod m)).
  std::size_t objs = 0, mors = 0;
  for (std::size_t d = 0; d < c.object_count(); ++d) objs += g.size(static_cast<int>(d));
  for (const auto& m : c.morphisms()) mors += g.size(m.cod);
  const auto& el = g.elements();
  EXPECT_EQ(objs, 3u);
  EXPECT_EQ(mors, 4u);
  EXPECT_EQ(el.cat.object_count(), objs);
  EXPECT_EQ(el.cat.morphism_count(), mors);
  EXPECT_TRUE(validate_category(el.cat).empty());
  // The non-identity element morphism runs (a,0) -> (b,x).
  int e = g.elem_morphism(c.morphism_index("f"), 0);
  const auto& em = el.cat.morphism(e);
  EXPECT_EQ(em.dom, g.elem_object(c.object_index("a"), g.index(c.object_index("a"), atom("0"))));
  EXPECT_EQ(em.cod, g.elem_object(c.object_index("b"), 0));
}

TEST(Presheaf, TerminalPresheafIsSingletonEverywhere) {
  for (const auto& c : {fixtures::c1(), fixtures::c2(), chain(3)}) {
    auto t = terminal_presheaf(c);
    EXPECT_TRUE(validate_presheaf(t).empty());
    for (std::size_t d = 0; d < c.object_count(); ++d) EXPECT_EQ(t.size(static_cast<int>(d)), 1u);
    EXPECT_EQ(t.elements().cat.object_count(), c.object_count());
  }
}

TEST(Presheaf, FunctorialityFailureIsReported) {
  auto c = chain(2);
  auto n = [&](int i) { return c.object_name(i); };
  std::map<std::string, std::vector<Value>> car;
  for (int i = 0; i < 3; ++i) car[n(i)] = fixtures::atoms({"p", "q"});
  std::vector<ActionSpec> act;
  for (const auto& m : c.morphisms()) {
    for (const char* v : {"p", "q"}) act.push_back({m.id, atom(v), atom(v)});
  }
  auto g = Presheaf::make(c, car, act);
  EXPECT_TRUE(validate_presheaf(g).empty());
  auto long_arrow = hom_set(c, n(0), n(2));
  ASSERT_EQ(long_arrow.size(), 1u);
  auto bad = mutate::remap_action(g, long_arrow.front(), atom("p"), atom("q"));
  EXPECT_FALSE(validate_presheaf(bad).empty());
}

TEST(NatTrans, Sigma2IsNaturalAndComposes) {
  auto s = fixtures::sigma2();
  EXPECT_TRUE(validate_nat(s).empty());
  EXPECT_EQ(nat_compose(nat_id(s.dst()), s), s);
  EXPECT_EQ(nat_compose(s, nat_id(s.src())), s);
  EXPECT_EQ(nat_compose(bang(s.dst()), s), bang(s.src()));
}

// Picking 1 at a breaks naturality: Γ2(f) sends x to 0.
TEST(NatTrans, UnnaturalComponentIsReported) {
  auto bad = NatTrans::make(terminal_presheaf(fixtures::c2()), fixtures::gamma2(),
                            {{"a", {{star(), atom("1")}}}, {"b", {{star(), atom("x")}}}});
  EXPECT_FALSE(validate_nat(bad).empty());
}

// A presheaf on a -> b is a function X(b) -> X(a): Σ n_a^{n_b} of them.
TEST(Enumerate, WalkingArrowCountMatchesFunctionCount) {
  for (int card = 0; card <= 3; ++card) {
    std::size_t expect = 0;
    for (int na = 0; na <= card; ++na) {
      for (int nb = 0; nb <= card; ++nb) expect += ipow(na, nb);
    }
    auto all = enumerate_presheaves(fixtures::c2(), card);
    EXPECT_EQ(all.size(), expect) << card;
    for (const auto& g : all) EXPECT_TRUE(validate_presheaf(g).empty());
  }
}

// On chain(2) the long arrow's action is forced by the two short ones.
TEST(Enumerate, ChainCountMatchesFactorisedOracle) {
  std::size_t expect = 0;
  for (int n0 = 0; n0 <= 2; ++n0) {
    for (int n1 = 0; n1 <= 2; ++n1) {
      for (int n2 = 0; n2 <= 2; ++n2) expect += ipow(n1, n2) * ipow(n0, n1);
    }
  }
  EXPECT_EQ(expect, 47u);
  EXPECT_EQ(enumerate_presheaves(chain(2), 2).size(), expect);
}

TEST(Enumerate, LimitIsCapacityError) {
  try {
    enumerate_presheaves(fixtures::c2(), 3, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::capacity);
  }
}

TEST(Enumerate, FamiliesAreSeededAndValid) {
  auto c = chain(2);
  auto a = presheaf_family(c, 3, 16, 7, 64);
  auto b = presheaf_family(c, 3, 16, 7, 64);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_FALSE(a.empty());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_TRUE(validate_presheaf(a[i]).empty());
    EXPECT_TRUE(validate_category(a[i].elements().cat).empty());
  }
}

// Property: every generated presheaf's category of elements is a category,
// and every random draw is a valid presheaf.
TEST(Enumerate, RandomPresheavesAreFunctors) {
  std::mt19937 rng(3);
  for (const auto& c : {fixtures::c2(), chain(2)}) {
    for (int i = 0; i < 20; ++i) {
      auto g = random_presheaf(c, 3, rng);
      ASSERT_TRUE(g);
      EXPECT_TRUE(validate_presheaf(*g).empty());
      EXPECT_TRUE(validate_category(g->elements().cat).empty());
    }
  }
}
