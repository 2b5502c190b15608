#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "cwflab/enumerate.hpp"
#include "cwflab/fixtures.hpp"
#include "cwflab/modality.hpp"
#include "cwflab/suites.hpp"

using namespace cwflab;

namespace {

SuiteConfig small_config() {
  SuiteConfig cfg;
  cfg.bounds.cap = 32;
  return cfg;
}

std::set<std::string> carrier_strings(const Presheaf& g, const std::string& obj) {
  std::set<std::string> out;
  for (const auto& v : g.carrier(g.base().object_index(obj))) out.insert(v.to_string());
  return out;
}

}  // namespace

// In C2 the terminal object is b, so □Γ2 is Γ2(b) = {x} everywhere.
TEST(Box, Gamma2IsConstantAtTerminal) {
  auto g = fixtures::gamma2();
  auto box = box_presheaf(g, "b");
  EXPECT_TRUE(validate_presheaf(box).empty());
  EXPECT_EQ(carrier_strings(box, "a"), (std::set<std::string>{"x"}));
  EXPECT_EQ(carrier_strings(box, "b"), (std::set<std::string>{"x"}));
  EXPECT_FALSE(box_idempotence_witness(g, "b"));

  auto e = counit(g, "b");
  EXPECT_TRUE(validate_nat(e).empty());
  const auto& c = g.base();
  EXPECT_EQ(e.at_value(c.object_index("a"), atom("x")), atom("0"));
  EXPECT_EQ(e.at_value(c.object_index("b"), atom("x")), atom("x"));
  EXPECT_FALSE(counit_identity_witness(box, "b"));
}

TEST(Box, NonTerminalObjectIsPreconditionError) {
  auto g = fixtures::gamma2();
  try {
    box_presheaf(g, "a");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition);
  }
  try {
    box_presheaf(g, "nowhere");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::lookup);
  }
}

// Property: on every generated presheaf over a category with a terminal
// object, □ is idempotent, ε is natural and the identity on constants.
TEST(Box, StructuralEquationsOnGeneratedPresheaves) {
  auto cfg = small_config();
  std::size_t n = 0;
  for (const auto& c : {fixtures::c1(), fixtures::c2(), chain(2)}) {
    auto t = c.object_name(*c.terminal_object());
    for (const auto& g : suite::contexts(c, cfg, 71, 2)) {
      for (const auto& r : suite::box_checks(g, t)) EXPECT_EQ(r.status(), "pass") << r.law << ": " << r.witness;
      ++n;
    }
  }
  EXPECT_GT(n, 10u);
}

TEST(Box, ComprehensionAndTermsOnA2) {
  auto a = fixtures::a2();
  EXPECT_FALSE(box_comprehension_witness(a, "b"));
  auto ba = box_ty(a, "b");
  EXPECT_TRUE(validate_depty(ba).empty());
  // □A2 over □Γ2 is A2(b, x) = {u} at every stage.
  for (std::size_t k = 0; k < ba.ctx().elem_object_count(); ++k) EXPECT_EQ(ba.fiber_size(static_cast<int>(k)), 1u);
  auto ms = enumerate_terms(a);
  ASSERT_EQ(ms.size(), 1u);
  auto bm = box_tm(ms.front(), "b");
  EXPECT_TRUE(check_term(bm.ty(), bm.assign()).empty());
  EXPECT_EQ(box_tm(bm, "b"), bm);
  for (std::size_t k = 0; k < bm.ctx().elem_object_count(); ++k) EXPECT_EQ(bm.value(static_cast<int>(k)), atom("u"));
}

TEST(Box, TypeChecksOnGeneratedTypes) {
  auto cfg = small_config();
  for (const auto& c : {fixtures::c2(), chain(2)}) {
    auto t = c.object_name(*c.terminal_object());
    for (const auto& a : suite::generated_types(c, cfg, 73, 2)) {
      for (const auto& r : suite::box_type_checks(a, t, cfg)) EXPECT_NE(r.status(), "fail") << r.law << ": " << r.witness;
    }
  }
}

TEST(Telescope, SubstitutionAlongSigma2) {
  auto s = fixtures::sigma2();
  auto tel = Telescope::make(fixtures::gamma2(), {fixtures::a2()});
  EXPECT_FALSE(suite::tele_subst_witness(s, tel));
  auto ts = tele_subst(s, tel);
  EXPECT_EQ(ts.tele.size(), 1u);
  EXPECT_EQ(ts.tele.entries()[0], ty_subst(fixtures::a2(), s));
  // The empty telescope substitutes to itself with q = σ.
  auto empty = tele_subst(s, Telescope(fixtures::gamma2()));
  EXPECT_EQ(empty.tele.size(), 0u);
  EXPECT_EQ(empty.q, s);
}

TEST(Telescope, EntryOverWrongContextIsRejected) {
  Telescope tel(fixtures::gamma2());
  EXPECT_THROW(tel.extend(fixtures::constant_depty(terminal_presheaf(fixtures::c2()), fixtures::atoms({"u"}))), Error);
}

TEST(Letbox, BoxIntroNeedsConstantContext) {
  auto a = fixtures::a2();
  auto m = enumerate_terms(a).front();
  try {
    box_intro(m, Telescope(a.ctx()), "b");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition);
  }
}

// letbox(box(M0), N) at (Ψ, (s, s')) is N at (Ψ, ((s, M0(⊤, s)), s')),
// computed here from values alone.
TEST(Letbox, BetaOnGamma2) {
  auto cfg = small_config();
  auto k = suite::caps(cfg.bounds);
  auto delta = fixtures::gamma2();
  auto bd = box_presheaf(delta, "b");
  const auto& c = delta.base();
  auto ti = c.object_index("b");
  std::size_t checked = 0;
  for (const auto& a : suite::inhabited_types(bd, 2, 5, k)) {
    for (int len = 0; len <= 1; ++len) {
      Telescope tel(bd);
      if (len == 1) {
        auto next = suite::inhabited_types(bd, 1, 6, k);
        ASSERT_FALSE(next.empty());
        tel = tel.extend(next.front());
      }
      auto fr = letbox_frame(delta, a, tel, "b");
      auto bs = suite::inhabited_types(fr.box_a_k.comprehension(), 1, 7, k);
      ASSERT_FALSE(bs.empty());
      const auto& b = bs.front();
      for (const auto& m0 : sample(enumerate_terms(a), 2, 8)) {
        auto bm = box_intro(m0, tel, "b");
        for (const auto& n : sample(enumerate_terms(fr.n_type(b)), 3, 9)) {
          auto out = letbox(fr, b, bm, n);
          EXPECT_EQ(out.ty(), fr.result_type(b, bm));
          const auto& x = tel.ctx();
          const auto& y = fr.gamma_p.tele.ctx();
          for (std::size_t e = 0; e < x.elem_object_count(); ++e) {
            auto lab = x.elem_label(static_cast<int>(e));
            auto [s, rest] = LetboxFrame::split(x.element(lab.obj, lab.elem), tel.size());
            auto target = renest(Value::pair(s, m0.value(ti, bd.index(ti, s))), rest);
            EXPECT_EQ(out.value(static_cast<int>(e)), n.value(lab.obj, y.index(lab.obj, target)));
            ++checked;
          }
        }
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(Letbox, WrongTypeForNIsRejected) {
  auto cfg = small_config();
  auto k = suite::caps(cfg.bounds);
  auto delta = fixtures::gamma2();
  auto bd = box_presheaf(delta, "b");
  auto as = suite::inhabited_types(bd, 1, 5, k);
  ASSERT_FALSE(as.empty());
  auto fr = letbox_frame(delta, as.front(), Telescope(bd), "b");
  auto bs = suite::inhabited_types(fr.box_a_k.comprehension(), 1, 7, k);
  ASSERT_FALSE(bs.empty());
  auto m = enumerate_terms(fr.box_a_k).front();
  // With Γ empty, B{<q, v>} is B itself, so a term of B is accepted; one
  // over ⊤̂ is not.
  EXPECT_NO_THROW(letbox(fr, bs.front(), m, enumerate_terms(bs.front()).front()));
  auto other = fixtures::constant_depty(terminal_presheaf(fixtures::c2()), fixtures::atoms({"u"}));
  EXPECT_THROW(letbox(fr, bs.front(), m, enumerate_terms(other).front()), Error);
  EXPECT_THROW(fr.n_type(other), Error);
}

TEST(Letbox, ChecksPassOnFixturesAndGeneratedContexts) {
  auto cfg = small_config();
  std::vector<std::pair<FinCat, Presheaf>> inputs = {{fixtures::c2(), fixtures::gamma2()},
                                                      {fixtures::c2(), terminal_presheaf(fixtures::c2())}};
  for (const auto& c : {fixtures::c2(), chain(2)}) {
    for (auto& g : suite::contexts(c, cfg, 75, 2)) inputs.emplace_back(c, std::move(g));
  }
  std::size_t salt = 80;
  std::size_t inst = 0;
  for (const auto& [c, g] : inputs) {
    auto t = c.object_name(*c.terminal_object());
    for (const auto& r : suite::letbox_checks(g, t, cfg, ++salt)) {
      EXPECT_NE(r.status(), "fail") << r.law << ": " << r.witness;
      inst += r.instances;
    }
  }
  EXPECT_GT(inst, 50u);
  for (const auto& r : suite::letbox_checks(fixtures::gamma2(), "b", cfg, 90)) {
    EXPECT_EQ(r.status(), "pass") << r.law;
    EXPECT_GT(r.instances, 0u) << r.law;
  }
}
