#pragma once

// Named fixtures shared by tests, suites and the CLI.
//
//   C1     terminal category
//   C2     walking arrow a -f-> b
//   Γ2     on C2: a ↦ {0,1}, b ↦ {x}, f acts x ↦ 0
//   A2     over Γ2: (a,0) ↦ {p,q}, (a,1) ↦ {r}, (b,x) ↦ {u}, u ↦ p along f
//   σ2     ⊤̂(C2) ⇒ Γ2 picking 0 at a and x at b

#include <map>
#include <string>
#include <vector>

#include "cwflab/cwf.hpp"
#include "cwflab/fincat.hpp"
#include "cwflab/presheaf.hpp"
#include "cwflab/value.hpp"

namespace cwflab::fixtures {

inline FinCat c1() { return terminal_category(); }
inline FinCat c2() { return walking_arrow(); }

inline Presheaf gamma2() {
  return Presheaf::make(c2(), {{"a", {atom("0"), atom("1")}}, {"b", {atom("x")}}},
                        {{"f", atom("x"), atom("0")}});
}

/// A DepTy from readable tables: fibers keyed by (object, element), actions
/// keyed by (morphism, target element, fiber element). Identity actions may
/// be omitted.
struct DepTyTables {
  std::map<std::pair<std::string, Value>, std::vector<Value>> fiber;
  struct Entry {
    std::string mor;
    Value s2;
    Value arg;
    Value result;
  };
  std::vector<Entry> action;
};

inline DepTy depty_from(const Presheaf& ctx, const DepTyTables& t) {
  const auto& el = ctx.elements();
  std::map<std::string, std::vector<Value>> carrier;
  for (std::size_t k = 0; k < el.labels.size(); ++k) {
    auto lab = el.labels[k];
    auto it = t.fiber.find({ctx.base().object_name(lab.obj), ctx.element(lab.obj, lab.elem)});
    if (it == t.fiber.end()) {
      throw Error(ErrorKind::structural,
                  "fiber missing at " + elem_object_name(ctx, lab.obj, lab.elem));
    }
    carrier[el.cat.object_name(static_cast<int>(k))] = it->second;
  }
  std::vector<ActionSpec> act;
  for (const auto& e : t.action) {
    int m = ctx.base().morphism_index(e.mor);
    int s2 = ctx.index(ctx.base().morphism(m).cod, e.s2);
    act.push_back({el.cat.morphism(ctx.elem_morphism(m, s2)).id, e.arg, e.result});
  }
  return DepTy::make(ctx, Presheaf::make(el.cat, carrier, act));
}

inline DepTy a2() {
  DepTyTables t;
  t.fiber[{"a", atom("0")}] = {atom("p"), atom("q")};
  t.fiber[{"a", atom("1")}] = {atom("r")};
  t.fiber[{"b", atom("x")}] = {atom("u")};
  t.action.push_back({"f", atom("x"), atom("u"), atom("p")});
  return depty_from(gamma2(), t);
}

inline NatTrans sigma2() {
  return NatTrans::make(terminal_presheaf(c2()), gamma2(),
                        {{"a", {{star(), atom("0")}}}, {"b", {{star(), atom("x")}}}});
}

/// A DepTy with the same fiber everywhere and identity actions; only valid
/// when the context's actions cannot move between differently-sized fibers,
/// which holds for any constant family.
inline DepTy constant_depty(const Presheaf& ctx, const std::vector<Value>& fiber) {
  const auto& el = ctx.elements();
  std::vector<std::vector<Value>> fibers(el.labels.size(), fiber);
  std::vector<std::vector<int>> act(el.embed.size());
  for (auto& a : act) {
    a.resize(fiber.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<int>(i);
  }
  return DepTy::from_tables(ctx, std::move(fibers), std::move(act));
}

inline std::vector<Value> atoms(std::initializer_list<const char*> names) {
  std::vector<Value> out;
  for (const char* n : names) out.push_back(atom(n));
  return out;
}

}  // namespace cwflab::fixtures
