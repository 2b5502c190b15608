#include <gtest/gtest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cwflab/cwf.hpp"
#include "cwflab/enumerate.hpp"
#include "cwflab/fixtures.hpp"

using namespace cwflab;

namespace {

// Oracle: a term picks M(d,s) ∈ A(d,s) for every element so that, for every
// m : d -> d2 and s2 ∈ Γ(d2), A(m)(M(d2,s2)) = M(d, Γ(m)s2). Written against
// values, not against check_term or the constraint solver.
std::set<std::map<std::string, std::string>> brute_force_terms(const DepTy& a) {
  const auto& g = a.ctx();
  const auto& c = g.base();
  struct Elem {
    int obj, s;
    std::vector<Value> fiber;
  };
  std::vector<Elem> elems;
  for (std::size_t d = 0; d < c.object_count(); ++d) {
    for (std::size_t s = 0; s < g.size(static_cast<int>(d)); ++s) {
      auto f = a.fiber(static_cast<int>(d), static_cast<int>(s));
      elems.push_back({static_cast<int>(d), static_cast<int>(s), {f.begin(), f.end()}});
    }
  }
  auto key = [&](int d, int s) { return c.object_name(d) + "|" + g.element(d, s).to_string(); };
  std::set<std::map<std::string, std::string>> out;
  std::map<std::string, Value> pick;
  std::vector<std::size_t> cur(elems.size(), 0);
  for (const auto& e : elems) {
    if (e.fiber.empty()) return out;
  }
  while (true) {
    pick.clear();
    for (std::size_t i = 0; i < elems.size(); ++i) pick.emplace(key(elems[i].obj, elems[i].s), elems[i].fiber[cur[i]]);
    bool ok = true;
    for (std::size_t m = 0; m < c.morphism_count() && ok; ++m) {
      int mi = static_cast<int>(m);
      const auto& mor = c.morphism(mi);
      for (std::size_t s2 = 0; s2 < g.size(mor.cod) && ok; ++s2) {
        int s2i = static_cast<int>(s2);
        int s1 = g.act(mi, s2i);
        int k2 = g.elem_object(mor.cod, s2i);
        int k1 = g.elem_object(mor.dom, s1);
        int e = g.elem_morphism(mi, s2i);
        const auto& v2 = pick.at(key(mor.cod, s2i));
        const auto& moved = a.element(k1, a.act(e, a.index(k2, v2)));
        ok = moved == pick.at(key(mor.dom, s1));
      }
    }
    if (ok) {
      std::map<std::string, std::string> t;
      for (const auto& [k, v] : pick) t[k] = v.to_string();
      out.insert(t);
    }
    std::size_t i = 0;
    while (i < elems.size() && ++cur[i] == elems[i].fiber.size()) cur[i++] = 0;
    if (i == elems.size()) break;
  }
  return out;
}

std::set<std::map<std::string, std::string>> solver_terms(const DepTy& a) {
  const auto& g = a.ctx();
  std::set<std::map<std::string, std::string>> out;
  for (const auto& m : enumerate_terms(a)) {
    std::map<std::string, std::string> t;
    for (std::size_t k = 0; k < g.elem_object_count(); ++k) {
      auto lab = g.elem_label(static_cast<int>(k));
      t[g.base().object_name(lab.obj) + "|" + g.element(lab.obj, lab.elem).to_string()] =
          m.value(static_cast<int>(k)).to_string();
    }
    out.insert(t);
  }
  return out;
}

}  // namespace

// u over (b,x) must go to p along f, so M(a,0) = p; (a,1) has only r.
TEST(Terms, A2HasExactlyOneTerm) {
  auto a = fixtures::a2();
  auto brute = brute_force_terms(a);
  ASSERT_EQ(brute.size(), 1u);
  std::map<std::string, std::string> expect = {{"a|0", "p"}, {"a|1", "r"}, {"b|x", "u"}};
  EXPECT_EQ(*brute.begin(), expect);
  EXPECT_EQ(solver_terms(a), brute);
}

TEST(Terms, ConstantTypeOverPointHasOneTermPerElement) {
  auto a = fixtures::constant_depty(terminal_presheaf(fixtures::c1()), fixtures::atoms({"u", "v", "w"}));
  EXPECT_EQ(enumerate_terms(a).size(), 3u);
  EXPECT_EQ(brute_force_terms(a).size(), 3u);
}

TEST(Terms, IncoherentAssignmentIsRejected) {
  auto a = fixtures::a2();
  const auto& g = a.ctx();
  const auto& c = g.base();
  auto ai = c.object_index("a");
  std::vector<Value> vals(g.elem_object_count());
  vals[g.elem_object(ai, g.index(ai, atom("0")))] = atom("q");
  vals[g.elem_object(ai, g.index(ai, atom("1")))] = atom("r");
  vals[g.elem_object(c.object_index("b"), 0)] = atom("u");
  EXPECT_FALSE(check_term(a, {a.index(0, vals[0]), a.index(1, vals[1]), a.index(2, vals[2])}).empty());
  try {
    Term::from_values(a, vals);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_FALSE(e.report().empty());
  }
}

// Property: the solver agrees with brute force on every generated type.
TEST(Terms, SolverMatchesBruteForceOnGeneratedTypes) {
  std::size_t types = 0;
  for (const auto& c : {fixtures::c1(), fixtures::c2(), chain(2)}) {
    for (const auto& gamma : presheaf_family(c, 2, 8, 21, 128)) {
      for (const auto& a : depty_family(gamma, 3, 6, 22, 128)) {
        EXPECT_EQ(solver_terms(a), brute_force_terms(a));
        for (const auto& m : enumerate_terms(a)) EXPECT_TRUE(check_term(a, m.assign()).empty());
        ++types;
      }
    }
  }
  EXPECT_GT(types, 30u);
}
