#include <gtest/gtest.h>

#include <cstddef>
#include <set>
#include <string>

#include "cwflab/base_cwf.hpp"
#include "cwflab/internal.hpp"
#include "cwflab/mutate.hpp"

using namespace cwflab;

namespace {

std::size_t product_of_homs(const BaseCwF& b) {
  std::size_t n = 1;
  for (const auto& psi : b.cat.object_names()) {
    for (const auto& phi : b.cat.object_names()) n *= hom_set(b.cat, psi, phi).size();
  }
  return n;
}

std::size_t product_of_types(const BaseCwF& b) {
  std::size_t n = 1;
  for (const auto& psi : b.cat.object_names()) n *= b.types(psi).size();
  return n;
}

void expect_faithful(const BaseCwF& b) {
  auto it = internal_terms(b);
  for (const auto& [name, m] : it.terms) EXPECT_TRUE(check_term(m.ty(), m.assign()).empty()) << name;
  for (const auto& c : internal_faithfulness(b, it)) {
    EXPECT_EQ(c.failures, 0u) << c.law << ": " << c.witness;
    EXPECT_GT(c.instances, 0u) << c.law;
  }
}

}  // namespace

TEST(BaseCwF, FixturesAreValid) {
  EXPECT_TRUE(validate_base_cwf(fixtures::d1()).empty());
  EXPECT_TRUE(validate_base_cwf(fixtures::d1_pi(2)).empty());
  EXPECT_TRUE(validate_base_cwf(fixtures::dvar(2)).empty());
}

// Lists over two base types up to length 2: 1 + 2 + 4.
TEST(BaseCwF, DVarHasSevenContexts) {
  auto b = fixtures::dvar(2);
  EXPECT_EQ(b.cat.object_count(), 7u);
  EXPECT_TRUE(validate_category(b.cat).empty());
}

TEST(BaseCwF, RedirectedExtensionIsDetected) {
  auto bad = mutate::corrupt_base_ext(fixtures::dvar(2));
  ASSERT_TRUE(bad);
  EXPECT_FALSE(validate_base_cwf(*bad).empty());
  // In D1 every hom-set is a singleton, so there is nothing to redirect to.
  EXPECT_FALSE(mutate::corrupt_base_ext(fixtures::d1()));
}

TEST(Internal, CtxTypeHasObjectFibersAndIdentityActions) {
  for (const auto& b : {fixtures::d1(), fixtures::dvar(2)}) {
    auto t = ctx_ty(b);
    EXPECT_TRUE(validate_depty(t).empty());
    for (std::size_t k = 0; k < t.ctx().elem_object_count(); ++k) {
      auto f = t.fiber(static_cast<int>(k));
      std::set<std::string> names;
      for (const auto& v : f) names.insert(v.to_string());
      auto objs = b.cat.object_names();
      EXPECT_EQ(names, std::set<std::string>(objs.begin(), objs.end()));
    }
    EXPECT_TRUE(detail::has_identity_actions(t));
  }
}

TEST(Internal, CtxIsoCardinalityIsObjectCount) {
  auto d1 = ctx_iso(fixtures::d1());
  EXPECT_TRUE(d1.ok()) << d1.witness;
  EXPECT_EQ(d1.terms, 1u);
  auto dv = ctx_iso(fixtures::dvar(2));
  EXPECT_TRUE(dv.ok()) << dv.witness;
  EXPECT_EQ(dv.terms, 7u);
  EXPECT_EQ(dv.functions, 7u);
}

// Tm(⊤̂.Ctx.Ctx, Hom) ≅ Π_{Ψ,Φ} Hom(Ψ,Φ); in DVar some hom-sets are empty,
// so both sides are empty.
TEST(Internal, HomIsoMatchesProductOfHomSets) {
  for (const auto& b : {fixtures::d1(), fixtures::dvar(2)}) {
    auto r = hom_iso(b);
    EXPECT_TRUE(r.ok()) << r.witness;
    EXPECT_EQ(r.terms, product_of_homs(b));
  }
  EXPECT_EQ(hom_iso(fixtures::d1()).terms, 1u);
}

TEST(Internal, VTyIsoMatchesProductOfTypeSets) {
  auto d1 = vty_iso(fixtures::d1());
  EXPECT_TRUE(d1.ok()) << d1.witness;
  EXPECT_EQ(d1.terms, 2u);
  auto dv = vty_iso(fixtures::dvar(2));
  EXPECT_TRUE(dv.ok()) << dv.witness;
  EXPECT_EQ(dv.terms, product_of_types(fixtures::dvar(2)));
  EXPECT_EQ(dv.terms, 128u);
}

TEST(Internal, VTmIsoOnD1IsSingleton) {
  auto r = vtm_iso(fixtures::d1());
  EXPECT_TRUE(r.ok()) << r.witness;
  EXPECT_EQ(r.terms, 1u);
  EXPECT_TRUE(vtm_iso(fixtures::dvar(2)).ok());
}

// |Tm(⊤̂, VTy')| = |Ty(⊤)|.
TEST(Internal, ClosedTypesMatchTerminalTypes) {
  for (const auto& b : {fixtures::d1(), fixtures::dvar(2)}) {
    auto r = closed_iso(b);
    EXPECT_TRUE(r.ok()) << r.closed.witness << r.at_terminal.witness << r.cross_witness;
    EXPECT_EQ(r.closed.terms, b.types(b.terminal).size());
    EXPECT_EQ(r.at_terminal.terms, b.types(b.terminal).size());
    EXPECT_TRUE(validate_depty(closed_vty(b)).empty());
    EXPECT_TRUE(validate_depty(closed_vtm(b)).empty());
  }
  EXPECT_EQ(closed_iso(fixtures::dvar(2)).closed.terms, 2u);
}

TEST(Internal, FaithfulOnD1) { expect_faithful(fixtures::d1()); }
TEST(Internal, FaithfulOnD1Pi) { expect_faithful(fixtures::d1_pi(2)); }
TEST(Internal, FaithfulOnDVar) { expect_faithful(fixtures::dvar(2)); }

TEST(Internal, PiTermsOnlyWithPiTables) {
  auto with = internal_terms(fixtures::d1_pi(2));
  EXPECT_TRUE(with.terms.contains("pi"));
  EXPECT_TRUE(with.terms.contains("lam"));
  EXPECT_TRUE(with.terms.contains("app"));
  auto without = internal_terms(fixtures::dvar(2));
  EXPECT_FALSE(without.terms.contains("pi"));
  EXPECT_FALSE(without.notices.empty());
}

// The internal identity over D1 is the constant id_o family.
TEST(Internal, IdentityOverD1IsConstant) {
  auto b = fixtures::d1();
  auto it = internal_terms(b);
  const auto& id = it.at("id");
  for (std::size_t k = 0; k < id.ctx().elem_object_count(); ++k) {
    EXPECT_EQ(id.value(static_cast<int>(k)).to_string(), b.id(b.terminal));
  }
}
