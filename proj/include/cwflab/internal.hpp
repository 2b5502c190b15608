#pragma once

// Internalization of a base CwF inside presheaves over its category.
//
// Every internal context is an iterated comprehension of the terminal
// presheaf by families that ignore the world: their fibers depend only on
// the tuple built so far and their actions are identities. A Tower builds
// such contexts; its elements are nested pairs (((*, x1), x2), ..., xn).
//
// Internal operator terms delegate to the base tables. Where a base table is
// partial (comprehension, extension, Π), the last layer of the term's
// context is cut down to the tuples at which the table is defined.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cwflab/base_cwf.hpp"
#include "cwflab/cwf.hpp"
#include "cwflab/error.hpp"
#include "cwflab/presheaf.hpp"
#include "cwflab/value.hpp"

namespace cwflab {

class Tower {
 public:
  using FiberFn = std::function<std::vector<Value>(std::span<const Value>)>;

  explicit Tower(const FinCat& c) : ctx_(terminal_presheaf(c)) {}

  const Presheaf& ctx() const noexcept { return ctx_; }
  std::size_t depth() const noexcept { return layers_.size(); }
  const DepTy& layer(std::size_t i) const { return layers_.at(i); }

  /// A family over ctx() whose fiber at a tuple is fn(tuple), identity actions.
  DepTy family(const FiberFn& fn) const {
    const auto& el = ctx_.elements();
    std::vector<std::vector<Value>> fibers(el.labels.size());
    for (std::size_t k = 0; k < fibers.size(); ++k) {
      auto lab = el.labels[k];
      auto parts = unnest(ctx_.element(lab.obj, lab.elem), depth());
      fibers[k] = fn(parts);
      std::sort(fibers[k].begin(), fibers[k].end());
    }
    std::vector<std::vector<int>> act(el.embed.size());
    for (std::size_t e = 0; e < act.size(); ++e) {
      const auto& mor = el.cat.morphism(static_cast<int>(e));
      if (fibers[mor.dom] != fibers[mor.cod]) {
        throw Error(ErrorKind::structural, "family is not constant along " + mor.id);
      }
      act[e].resize(fibers[mor.cod].size());
      for (std::size_t i = 0; i < act[e].size(); ++i) act[e][i] = static_cast<int>(i);
    }
    return DepTy::from_tables(ctx_, std::move(fibers), std::move(act));
  }

  Tower push(const FiberFn& fn) const {
    Tower out = *this;
    out.layers_.push_back(family(fn));
    out.ctx_ = out.layers_.back().comprehension();
    return out;
  }

  /// Index of a tuple in ctx() at a world.
  int element(ObjIndex world, std::span<const Value> parts) const {
    return ctx_.index(world, renest(star(), parts));
  }

 private:
  Presheaf ctx_;
  std::vector<DepTy> layers_;
};

/// Term over a tower context with a world-independent type and value.
inline Term internal_term(const Tower& t, const Tower::FiberFn& type,
                          const std::function<Value(std::span<const Value>)>& value) {
  auto ty = t.family(type);
  const auto& g = t.ctx();
  std::vector<Value> vals(g.elem_object_count());
  for (std::size_t k = 0; k < vals.size(); ++k) {
    auto lab = g.elem_label(static_cast<int>(k));
    vals[k] = value(unnest(g.element(lab.obj, lab.elem), t.depth()));
  }
  return Term::from_values(std::move(ty), vals);
}

/// A term's value at a world and tuple.
inline Value eval(const Term& m, ObjIndex world, std::span<const Value> parts) {
  return m.value(world, m.ctx().index(world, renest(star(), parts)));
}

namespace detail {

struct BaseView {
  const BaseCwF& b;

  std::vector<Value> objects() const {
    std::vector<Value> out;
    for (const auto& o : b.cat.object_names()) out.push_back(atom(o));
    return out;
  }
  std::vector<Value> hom(const Value& from, const Value& to) const {
    std::vector<Value> out;
    for (const auto& m : hom_set(b.cat, from.name(), to.name())) out.push_back(atom(m));
    return out;
  }
  std::vector<Value> types(const Value& psi) const { return atoms_of(b.types(psi.name())); }
  /// Types S at Ψ with Ψ.S listed.
  std::vector<Value> types_c(const Value& psi) const {
    std::vector<Value> out;
    for (const auto& s : b.types(psi.name())) {
      if (b.compr.contains({psi.name(), s})) out.push_back(atom(s));
    }
    return out;
  }
  std::vector<Value> terms(const Value& psi, const Value& s) const { return atoms_of(b.terms(psi.name(), s.name())); }

  static std::vector<Value> atoms_of(const std::vector<std::string>& xs) {
    std::vector<Value> out;
    for (const auto& x : xs) out.push_back(atom(x));
    return out;
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Internal types.

inline Tower ctx_tower(const BaseCwF& b, int copies) {
  detail::BaseView bv{b};
  Tower t(b.cat);
  for (int i = 0; i < copies; ++i) t = t.push([&](std::span<const Value>) { return bv.objects(); });
  return t;
}

/// Ctx over ⊤̂: every fiber is Obj(𝒟), every action the identity.
inline DepTy ctx_ty(const BaseCwF& b) { return ctx_tower(b, 1).layer(0); }

/// Hom over ⊤̂.Ctx.Ctx: fiber at (Ψ, Φ) is the hom-set Ψ -> Φ.
inline DepTy hom_ty(const BaseCwF& b) {
  detail::BaseView bv{b};
  return ctx_tower(b, 2).family([&](std::span<const Value> x) { return bv.hom(x[0], x[1]); });
}

/// VTy over ⊤̂.Ctx: fiber at Ψ is Ty(Ψ).
inline DepTy vty(const BaseCwF& b) {
  detail::BaseView bv{b};
  return ctx_tower(b, 1).family([&](std::span<const Value> x) { return bv.types(x[0]); });
}

inline Tower vty_tower(const BaseCwF& b) {
  detail::BaseView bv{b};
  return ctx_tower(b, 1).push([&](std::span<const Value> x) { return bv.types(x[0]); });
}

/// VTm over ⊤̂.Ctx.VTy: fiber at (Ψ, S) is Tm(Ψ, S).
inline DepTy vtm(const BaseCwF& b) {
  detail::BaseView bv{b};
  return vty_tower(b).family([&](std::span<const Value> x) { return bv.terms(x[0], x[1]); });
}

/// VTy' over ⊤̂: fiber at Ψ is Ty(Ψ), acting by substitution.
inline DepTy closed_vty(const BaseCwF& b) {
  const auto& c = b.cat;
  auto top = terminal_presheaf(c);
  std::vector<std::vector<Value>> fibers(c.object_count());
  for (std::size_t d = 0; d < fibers.size(); ++d) {
    fibers[d] = detail::BaseView::atoms_of(b.types(c.object_name(static_cast<int>(d))));
    std::sort(fibers[d].begin(), fibers[d].end());
  }
  std::vector<std::vector<int>> act(c.morphism_count());
  for (std::size_t m = 0; m < act.size(); ++m) {
    const auto& mor = c.morphism(static_cast<int>(m));
    for (const auto& s : fibers[mor.cod]) {
      auto r = atom(b.sub_ty(s.name(), mor.id));
      auto it = std::lower_bound(fibers[mor.dom].begin(), fibers[mor.dom].end(), r);
      if (it == fibers[mor.dom].end() || !(*it == r)) {
        throw Error(ErrorKind::structural, "ty_subst leaves Ty at " + mor.id);
      }
      act[m].push_back(static_cast<int>(it - fibers[mor.dom].begin()));
    }
  }
  return DepTy::from_tables(top, std::move(fibers), std::move(act));
}

/// VTm' over ⊤̂.VTy': fiber at (Ψ, S) is Tm(Ψ, S), acting by substitution.
inline DepTy closed_vtm(const BaseCwF& b) {
  auto vt = closed_vty(b);
  const auto& ctx = vt.comprehension();
  const auto& c = b.cat;
  std::vector<std::vector<Value>> fibers(ctx.elem_object_count());
  for (std::size_t k = 0; k < fibers.size(); ++k) {
    auto lab = ctx.elem_label(static_cast<int>(k));
    const auto& s = ctx.element(lab.obj, lab.elem)[1];
    fibers[k] = detail::BaseView::atoms_of(b.terms(c.object_name(lab.obj), s.name()));
    std::sort(fibers[k].begin(), fibers[k].end());
  }
  std::vector<std::vector<int>> act(ctx.elem_morphism_count());
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    int mi = static_cast<int>(m);
    const auto& mor = c.morphism(mi);
    for (std::size_t x = 0; x < ctx.size(mor.cod); ++x) {
      int xi = static_cast<int>(x);
      const auto& s = ctx.element(mor.cod, xi)[1];
      const auto& src = fibers[ctx.elem_object(mor.cod, xi)];
      const auto& dst = fibers[ctx.elem_object(mor.dom, ctx.act(mi, xi))];
      auto& row = act[ctx.elem_morphism(mi, xi)];
      for (const auto& t : src) {
        auto r = atom(b.sub_tm(s.name(), t.name(), mor.id));
        auto it = std::lower_bound(dst.begin(), dst.end(), r);
        if (it == dst.end() || !(*it == r)) throw Error(ErrorKind::structural, "tm_subst leaves Tm at " + mor.id);
        row.push_back(static_cast<int>(it - dst.begin()));
      }
    }
  }
  return DepTy::from_tables(ctx, std::move(fibers), std::move(act));
}

// ---------------------------------------------------------------------------
// Internal operator terms.

/// Contexts, in order of layers:
///   id      [Ψ]
///   comp    [Ψ, Φ, Ξ, σ : Ψ -> Φ, σ' : Φ -> Ξ]
///   tysub   [Ψ, Φ, S ∈ Ty(Ψ), σ : Φ -> Ψ]
///   tmsub   [Ψ, Φ, S ∈ Ty(Ψ), t ∈ Tm(Ψ, S), σ : Φ -> Ψ]
///   compr, proj, var  [Ψ, S] with Ψ.S listed
///   ext     [Ψ, Φ, S, σ : Φ -> Ψ, t ∈ Tm(Φ, S{σ})] with ⟨σ, t⟩ listed
///   q       [Ψ, Φ, S, σ : Φ -> Ψ] with q(σ, S) listed
/// and, when the base has Π,
///   pi      [Ψ, S, T ∈ Ty(Ψ.S)] with Π(S, T) listed
///   lam     [Ψ, S, T, t ∈ Tm(Ψ.S, T)] with Λ(t) listed
///   app     [Ψ, S, T, t ∈ Tm(Ψ, Π(S,T)), s ∈ Tm(Ψ, S)] with App(t, s) and ⟨id, s⟩ listed
struct InternalTerms {
  std::map<std::string, Term> terms;
  std::vector<std::string> notices;

  const Term& at(const std::string& name) const {
    auto it = terms.find(name);
    if (it == terms.end()) throw Error(ErrorKind::lookup, "no internal term '" + name + "'");
    return it->second;
  }
};

inline InternalTerms internal_terms(const BaseCwF& b) {
  detail::BaseView bv{b};
  InternalTerms out;
  auto add = [&](const std::string& name, Term t) { out.terms.emplace(name, std::move(t)); };
  auto objs = [&](std::span<const Value>) { return bv.objects(); };
  auto A = [](const std::string& s) { return atom(s); };
  auto sub_ty = [&](const Value& s, const Value& sig) { return A(b.sub_ty(s.name(), sig.name())); };

  auto t1 = ctx_tower(b, 1);
  {
    // id : Hom{⟨id, v⟩}, the diagonal reading of Hom.
    auto ctx = ctx_ty(b);
    auto top = terminal_presheaf(b.cat);
    auto diag = ext(nat_id(t1.ctx()), ty_subst(ctx, proj_p(top, ctx)), var_v(top, ctx));
    auto ty = ty_subst(hom_ty(b), diag);
    std::vector<int> assign(t1.ctx().elem_object_count());
    for (std::size_t k = 0; k < assign.size(); ++k) {
      auto lab = t1.ctx().elem_label(static_cast<int>(k));
      auto psi = unnest(t1.ctx().element(lab.obj, lab.elem), 1)[0];
      assign[k] = ty.index(static_cast<int>(k), A(b.id(psi.name())));
    }
    add("id", Term::make(std::move(ty), std::move(assign)));
  }
  {
    auto t = ctx_tower(b, 3)
                 .push([&](std::span<const Value> x) { return bv.hom(x[0], x[1]); })
                 .push([&](std::span<const Value> x) { return bv.hom(x[1], x[2]); });
    add("comp", internal_term(
                    t, [&](std::span<const Value> x) { return bv.hom(x[0], x[2]); },
                    [&](std::span<const Value> x) { return A(b.comp(x[4].name(), x[3].name())); }));
  }
  {
    auto t = ctx_tower(b, 2)
                 .push([&](std::span<const Value> x) { return bv.types(x[0]); })
                 .push([&](std::span<const Value> x) { return bv.hom(x[1], x[0]); });
    add("tysub", internal_term(
                     t, [&](std::span<const Value> x) { return bv.types(x[1]); },
                     [&](std::span<const Value> x) { return sub_ty(x[2], x[3]); }));
  }
  {
    auto t = ctx_tower(b, 2)
                 .push([&](std::span<const Value> x) { return bv.types(x[0]); })
                 .push([&](std::span<const Value> x) { return bv.terms(x[0], x[2]); })
                 .push([&](std::span<const Value> x) { return bv.hom(x[1], x[0]); });
    add("tmsub", internal_term(
                     t, [&](std::span<const Value> x) { return bv.terms(x[1], sub_ty(x[2], x[4])); },
                     [&](std::span<const Value> x) {
                       return A(b.sub_tm(x[2].name(), x[3].name(), x[4].name()));
                     }));
  }
  auto compr_of = [&](const Value& psi, const Value& s) { return A(b.compr.at({psi.name(), s.name()})); };
  auto p_of = [&](const Value& psi, const Value& s) { return A(b.p.at({psi.name(), s.name()})); };
  {
    auto t = t1.push([&](std::span<const Value> x) { return bv.types_c(x[0]); });
    add("compr", internal_term(
                     t, objs, [&](std::span<const Value> x) { return compr_of(x[0], x[1]); }));
    add("proj", internal_term(
                    t, [&](std::span<const Value> x) { return bv.hom(compr_of(x[0], x[1]), x[0]); },
                    [&](std::span<const Value> x) { return p_of(x[0], x[1]); }));
    add("var", internal_term(
                   t,
                   [&](std::span<const Value> x) {
                     return bv.terms(compr_of(x[0], x[1]), sub_ty(x[1], p_of(x[0], x[1])));
                   },
                   [&](std::span<const Value> x) { return A(b.v.at({x[0].name(), x[1].name()})); }));
  }
  auto t_ext_prefix = ctx_tower(b, 2)
                          .push([&](std::span<const Value> x) { return bv.types_c(x[0]); })
                          .push([&](std::span<const Value> x) { return bv.hom(x[1], x[0]); });
  {
    auto t = t_ext_prefix.push([&](std::span<const Value> x) {
      std::vector<Value> out;
      for (const auto& tm : bv.terms(x[1], sub_ty(x[2], x[3]))) {
        if (b.ext.contains({x[3].name(), x[2].name(), tm.name()})) out.push_back(tm);
      }
      return out;
    });
    add("ext", internal_term(
                   t, [&](std::span<const Value> x) { return bv.hom(x[1], compr_of(x[0], x[2])); },
                   [&](std::span<const Value> x) {
                     return A(b.ext.at({x[3].name(), x[2].name(), x[4].name()}));
                   }));
  }
  {
    // Restrict σ to those where q(σ, S) is listed.
    auto t = ctx_tower(b, 2)
                 .push([&](std::span<const Value> x) { return bv.types_c(x[0]); })
                 .push([&](std::span<const Value> x) {
                   std::vector<Value> out;
                   for (const auto& sig : bv.hom(x[1], x[0])) {
                     if (b.q(sig.name(), x[2].name())) out.push_back(sig);
                   }
                   return out;
                 });
    add("q", internal_term(
                 t,
                 [&](std::span<const Value> x) {
                   return bv.hom(compr_of(x[1], sub_ty(x[2], x[3])), compr_of(x[0], x[2]));
                 },
                 [&](std::span<const Value> x) { return A(*b.q(x[3].name(), x[2].name())); }));
  }
  if (!b.pi) {
    out.notices.push_back("no pi tables: pi, lam and app not internalized");
    return out;
  }
  const auto& pi = *b.pi;
  auto t_pi = ctx_tower(b, 1)
                  .push([&](std::span<const Value> x) { return bv.types_c(x[0]); })
                  .push([&](std::span<const Value> x) {
                    std::vector<Value> out2;
                    for (const auto& tt : bv.types(compr_of(x[0], x[1]))) {
                      if (pi.pi.contains({x[0].name(), x[1].name(), tt.name()})) out2.push_back(tt);
                    }
                    return out2;
                  });
  auto pi_of = [&](std::span<const Value> x) { return A(pi.pi.at({x[0].name(), x[1].name(), x[2].name()})); };
  add("pi", internal_term(
                t_pi, [&](std::span<const Value> x) { return bv.types(x[0]); }, pi_of));
  {
    auto t = t_pi.push([&](std::span<const Value> x) {
      std::vector<Value> out2;
      for (const auto& tm : bv.terms(compr_of(x[0], x[1]), x[2])) {
        if (pi.lam.contains({x[0].name(), x[1].name(), x[2].name(), tm.name()})) out2.push_back(tm);
      }
      return out2;
    });
    add("lam", internal_term(
                   t, [&](std::span<const Value> x) { return bv.terms(x[0], pi_of(x)); },
                   [&](std::span<const Value> x) {
                     return A(pi.lam.at({x[0].name(), x[1].name(), x[2].name(), x[3].name()}));
                   }));
  }
  {
    auto t = t_pi.push([&](std::span<const Value> x) { return bv.terms(x[0], pi_of(x)); })
                 .push([&](std::span<const Value> x) {
                   std::vector<Value> out2;
                   for (const auto& s : bv.terms(x[0], x[1])) {
                     if (pi.app.contains({x[0].name(), x[1].name(), x[2].name(), x[3].name(), s.name()}) &&
                         b.ext.contains({b.id(x[0].name()), x[1].name(), s.name()})) {
                       out2.push_back(s);
                     }
                   }
                   return out2;
                 });
    add("app", internal_term(
                   t,
                   [&](std::span<const Value> x) {
                     const auto& e = b.ext.at({b.id(x[0].name()), x[1].name(), x[4].name()});
                     return bv.terms(x[0], A(b.sub_ty(x[2].name(), e)));
                   },
                   [&](std::span<const Value> x) {
                     return A(pi.app.at({x[0].name(), x[1].name(), x[2].name(), x[3].name(), x[4].name()}));
                   }));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphisms.

struct IsoReport {
  std::string name;
  std::size_t terms = 0;      ///< brute-forced semantic terms
  std::size_t functions = 0;  ///< the other side of the bijection
  std::size_t failures = 0;
  std::string witness;

  bool ok() const { return failures == 0 && terms == functions; }
};

namespace detail {

inline void iso_fail(IsoReport& r, const std::string& w) {
  if (r.failures++ == 0) r.witness = w;
}

inline bool has_identity_actions(const DepTy& t) {
  const auto& el = t.family().base();
  for (std::size_t e = 0; e < el.morphism_count(); ++e) {
    const auto& tab = t.action_table(static_cast<int>(e));
    for (std::size_t i = 0; i < tab.size(); ++i) {
      if (tab[i] != static_cast<int>(i)) return false;
    }
  }
  return true;
}

}  // namespace detail

/// For a family with identity actions over a constant context, Tm(Γ, T)
/// against dependent functions on the tuples of Γ: f(M) = (x ↦ M(t, x)) and
/// g(φ) = the world-independent family φ. Both round trips are checked on
/// every element.
inline IsoReport constancy_iso(const std::string& name, const DepTy& ty, ObjIndex t,
                               std::size_t limit = kDefaultEnumerationLimit) {
  IsoReport r;
  r.name = name;
  const auto& g = ty.ctx();
  if (!detail::has_identity_actions(ty)) {
    detail::iso_fail(r, "family has a non-identity action");
    return r;
  }
  for (std::size_t d = 0; d < g.base().object_count(); ++d) {
    auto cd = g.carrier(static_cast<int>(d));
    auto ct = g.carrier(t);
    if (!std::equal(cd.begin(), cd.end(), ct.begin(), ct.end())) {
      detail::iso_fail(r, "context is not constant at " + g.base().object_name(static_cast<int>(d)));
      return r;
    }
  }
  const std::size_t n = g.size(t);
  std::vector<int> sizes(n);
  for (std::size_t i = 0; i < n; ++i) sizes[i] = static_cast<int>(ty.fiber_size(g.elem_object(t, static_cast<int>(i))));
  // Dependent functions as index vectors.
  std::vector<std::vector<int>> funcs;
  bool empty = false;
  for (int s : sizes) empty = empty || s == 0;
  if (!empty) {
    std::vector<int> cur(n, 0);
    while (true) {
      funcs.push_back(cur);
      if (funcs.size() > limit) throw Error(ErrorKind::capacity, name + ": dependent function space exceeds limit");
      std::size_t k = 0;
      while (k < n && ++cur[k] == sizes[k]) cur[k++] = 0;
      if (k == n) break;
    }
  }
  auto terms = enumerate_terms(ty, limit);
  r.terms = terms.size();
  r.functions = funcs.size();
  auto f = [&](const Term& m) {
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = m.at(t, static_cast<int>(i));
    return out;
  };
  auto g_of = [&](const std::vector<int>& phi) {
    std::vector<int> assign(g.elem_object_count());
    for (std::size_t k = 0; k < assign.size(); ++k) {
      auto lab = g.elem_label(static_cast<int>(k));
      assign[k] = phi[lab.elem];  // constant context: same tuple order at every world
    }
    return Term::make(ty, std::move(assign));
  };
  for (std::size_t i = 0; i < terms.size(); ++i) {
    try {
      if (!(g_of(f(terms[i])) == terms[i])) detail::iso_fail(r, "g(f(M)) != M for term #" + std::to_string(i));
    } catch (const Error& e) {
      detail::iso_fail(r, e.what());
    }
  }
  for (std::size_t i = 0; i < funcs.size(); ++i) {
    try {
      if (f(g_of(funcs[i])) != funcs[i]) detail::iso_fail(r, "f(g(phi)) != phi for function #" + std::to_string(i));
    } catch (const Error& e) {
      detail::iso_fail(r, e.what());
    }
  }
  return r;
}

/// Tm(⊤̂, Ctx) ≅ Obj(𝒟).
inline IsoReport ctx_iso(const BaseCwF& b) {
  return constancy_iso("ctx-iso", ctx_ty(b), b.cat.object_index(b.terminal));
}

/// Tm(⊤̂.Ctx.Ctx, Hom) ≅ (Ψ, Φ) → Hom(Ψ, Φ).
inline IsoReport hom_iso(const BaseCwF& b) {
  return constancy_iso("hom-iso", hom_ty(b), b.cat.object_index(b.terminal));
}

/// Tm(⊤̂.Ctx, VTy) ≅ (Ψ) → Ty(Ψ).
inline IsoReport vty_iso(const BaseCwF& b) {
  return constancy_iso("vty-iso", vty(b), b.cat.object_index(b.terminal));
}

/// Tm(⊤̂.Ctx.VTy, VTm) ≅ (Ψ, S) → Tm(Ψ, S).
inline IsoReport vtm_iso(const BaseCwF& b) {
  return constancy_iso("vtm-iso", vtm(b), b.cat.object_index(b.terminal));
}

struct ClosedIsoReport {
  IsoReport closed;        ///< Tm(⊤̂, VTy') against Ty(⊤)
  IsoReport at_terminal;   ///< Tm(⊤̂, VTy{⊤}) against Ty(⊤)
  std::size_t cross_failures = 0;
  std::string cross_witness;

  bool ok() const { return closed.ok() && at_terminal.ok() && cross_failures == 0; }
};

/// Tm(⊤̂, VTy') ≅ Ty(⊤) ≅ Tm(⊤̂, VTy{⊤}): the first leg by M ↦ M(⊤, *) and
/// S ↦ (Ψ ↦ S{!_Ψ}); the second through the constant family at ⊤.
inline ClosedIsoReport closed_iso(const BaseCwF& b) {
  ClosedIsoReport out;
  out.closed.name = "closed-vty-iso";
  const auto& c = b.cat;
  ObjIndex t = c.object_index(b.terminal);
  auto vt = closed_vty(b);
  auto terms = enumerate_terms(vt);
  auto tys = b.types(b.terminal);
  out.closed.terms = terms.size();
  out.closed.functions = tys.size();
  auto f = [&](const Term& m) { return m.value(t, 0); };
  auto g = [&](const std::string& s) {
    std::vector<Value> vals(c.object_count());
    for (std::size_t d = 0; d < vals.size(); ++d) {
      vals[d] = atom(b.sub_ty(s, b.bang.at(c.object_name(static_cast<int>(d)))));
    }
    return Term::from_values(vt, vals);
  };
  for (const auto& m : terms) {
    try {
      if (!(g(f(m).name()) == m)) detail::iso_fail(out.closed, "g(f(M)) != M at " + f(m).to_string());
    } catch (const Error& e) {
      detail::iso_fail(out.closed, e.what());
    }
  }
  for (const auto& s : tys) {
    try {
      if (!(f(g(s)) == atom(s))) detail::iso_fail(out.closed, "f(g(S)) != S at " + s);
    } catch (const Error& e) {
      detail::iso_fail(out.closed, e.what());
    }
  }
  // VTy{⟨!, ⊤⟩}: VTy read at the terminal context.
  auto ctx = ctx_ty(b);
  auto top = ctx.ctx();
  std::vector<Value> at_t(c.object_count(), atom(b.terminal));
  auto pick_t = Term::from_values(ctx, at_t);
  auto vt_t = ty_subst(vty(b), ext(nat_id(top), ctx, pick_t));
  out.at_terminal = constancy_iso("closed-vty-at-terminal", vt_t, t);
  // The composite Tm(⊤̂, VTy') -> Ty(⊤) -> Tm(⊤̂, VTy{⊤}) must be a bijection.
  std::set<std::vector<int>> images;
  for (const auto& m : terms) {
    try {
      std::vector<Value> vals(c.object_count(), f(m));
      images.insert(Term::from_values(vt_t, vals).assign());
    } catch (const Error& e) {
      if (out.cross_failures++ == 0) out.cross_witness = e.what();
    }
  }
  if (images.size() != terms.size() || terms.size() != out.at_terminal.terms) {
    if (out.cross_failures++ == 0) out.cross_witness = "composite is not a bijection";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Faithfulness: internal terms evaluated pointwise against the base tables.

inline LawReport internal_faithfulness(const BaseCwF& b, const InternalTerms& it) {
  const auto& c = b.cat;
  LawCheck id_c("internal-id"), comp_c("internal-comp"), unit_c("internal-comp-identity"),
      assoc_c("internal-comp-assoc"), tysub_c("internal-tysub"), tmsub_c("internal-tmsub"),
      q_base("internal-q-base"), q_comp("internal-q-composite");
  auto A = [](const std::string& s) { return atom(s); };
  auto obj = [&](int d) { return A(c.object_name(d)); };
  auto mid = [&](int m) { return A(c.morphism(m).id); };
  const auto& id = it.at("id");
  const auto& comp = it.at("comp");
  auto eq = [](const Value& l, const Value& r) -> std::optional<std::string> {
    if (l == r) return std::nullopt;
    return l.to_string() + " vs " + r.to_string();
  };
  for (std::size_t w = 0; w < c.object_count(); ++w) {
    int wi = static_cast<int>(w);
    auto world = "world " + c.object_name(wi);
    for (std::size_t d = 0; d < c.object_count(); ++d) {
      int di = static_cast<int>(d);
      check_instance(id_c, world, [&] { return eq(eval(id, wi, std::vector<Value>{obj(di)}), mid(c.identity(di))); });
    }
    for (std::size_t g = 0; g < c.morphism_count(); ++g) {
      const auto& mg = c.morphism(static_cast<int>(g));
      for (int f : c.morphisms_into(mg.dom)) {
        const auto& mf = c.morphism(f);
        std::vector<Value> x{obj(mf.dom), obj(mf.cod), obj(mg.cod), mid(f), mid(static_cast<int>(g))};
        check_instance(comp_c, world, [&] { return eq(eval(comp, wi, x), mid(c.compose(static_cast<int>(g), f))); });
        // comp(id, f) = f and comp(f, id) = f, through the internal id.
        if (static_cast<int>(g) == c.identity(mg.dom)) {
          auto idv = eval(id, wi, std::vector<Value>{obj(mf.cod)});
          std::vector<Value> l{obj(mf.dom), obj(mf.cod), obj(mf.cod), mid(f), idv};
          auto idd = eval(id, wi, std::vector<Value>{obj(mf.dom)});
          std::vector<Value> r{obj(mf.dom), obj(mf.dom), obj(mf.cod), idd, mid(f)};
          check_instance(unit_c, world, [&]() -> std::optional<std::string> {
            if (auto w1 = eq(eval(comp, wi, l), mid(f))) return "left " + *w1;
            if (auto w2 = eq(eval(comp, wi, r), mid(f))) return "right " + *w2;
            return std::nullopt;
          });
        }
        for (int h2 = 0; h2 < static_cast<int>(c.morphism_count()); ++h2) {
          const auto& mh = c.morphism(h2);
          if (mh.dom != mg.cod) continue;
          check_instance(assoc_c, world, [&] {
            auto gf = eval(comp, wi, std::vector<Value>{obj(mf.dom), obj(mf.cod), obj(mg.cod), mid(f), mid(static_cast<int>(g))});
            auto hg = eval(comp, wi, std::vector<Value>{obj(mg.dom), obj(mg.cod), obj(mh.cod), mid(static_cast<int>(g)), mid(h2)});
            auto l = eval(comp, wi, std::vector<Value>{obj(mf.dom), obj(mg.cod), obj(mh.cod), gf, mid(h2)});
            auto r = eval(comp, wi, std::vector<Value>{obj(mf.dom), obj(mf.cod), obj(mh.cod), mid(f), hg});
            return eq(l, r);
          });
        }
      }
    }
    for (std::size_t m = 0; m < c.morphism_count(); ++m) {
      const auto& sm = c.morphism(static_cast<int>(m));
      const auto& psi = c.object_name(sm.cod);
      for (const auto& s : b.types(psi)) {
        std::vector<Value> x{A(psi), obj(sm.dom), A(s), mid(static_cast<int>(m))};
        check_instance(tysub_c, world, [&] { return eq(eval(it.at("tysub"), wi, x), A(b.sub_ty(s, sm.id))); });
        for (const auto& tm : b.terms(psi, s)) {
          std::vector<Value> y{A(psi), obj(sm.dom), A(s), A(tm), mid(static_cast<int>(m))};
          check_instance(tmsub_c, world, [&] { return eq(eval(it.at("tmsub"), wi, y), A(b.sub_tm(s, tm, sm.id))); });
        }
      }
    }
  }
  // q directly against the base ext table, and against ext composed with
  // the substitution assembled from the other internal terms.
  const auto& q = it.at("q");
  const auto& ex = it.at("ext");
  const auto& qctx = q.ctx();
  const auto& ectx = ex.ctx();
  std::vector<std::vector<int>> theta(c.object_count());
  bool theta_ok = true;
  std::string theta_err;
  for (std::size_t w = 0; w < c.object_count(); ++w) {
    int wi = static_cast<int>(w);
    for (const auto& elt : qctx.carrier(wi)) {
      auto x = unnest(elt, 4);  // Ψ, Φ, S, σ
      const auto& psi = x[0];
      const auto& phi = x[1];
      const auto& s = x[2];
      const auto& sig = x[3];
      check_instance(q_base, "world " + c.object_name(wi), [&] {
        auto ss = b.sub_ty(s.name(), sig.name());
        auto expect = b.ext.at({b.comp(sig.name(), b.p.at({phi.name(), ss})), s.name(), b.v.at({phi.name(), ss})});
        return eq(eval(q, wi, x), A(expect));
      });
      try {
        auto ss = eval(it.at("tysub"), wi, std::vector<Value>{psi, phi, s, sig});
        auto phi_s = eval(it.at("compr"), wi, std::vector<Value>{phi, ss});
        auto p = eval(it.at("proj"), wi, std::vector<Value>{phi, ss});
        auto v = eval(it.at("var"), wi, std::vector<Value>{phi, ss});
        auto sp = eval(comp, wi, std::vector<Value>{phi_s, phi, psi, p, sig});
        theta[w].push_back(ex.ctx().index(wi, renest(star(), std::vector<Value>{psi, phi_s, s, sp, v})));
      } catch (const Error& e) {
        theta_ok = false;
        if (theta_err.empty()) theta_err = e.what();
        theta[w].push_back(0);
      }
    }
  }
  check_instance(q_comp, "", [&]() -> std::optional<std::string> {
    if (!theta_ok) return "substitution into the ext context failed: " + theta_err;
    auto th = NatTrans::from_tables(qctx, ectx, theta);
    if (auto w = validate_nat(th); !w.empty()) return "assembled substitution is not natural";
    return term_mismatch(tm_subst(ex, th), q);
  });
  LawReport out{id_c, comp_c, unit_c, assoc_c, tysub_c, tmsub_c, q_base, q_comp};
  if (it.terms.contains("app")) {
    LawCheck beta("internal-pi-beta");
    const auto& lam = it.at("lam");
    const auto& app = it.at("app");
    const auto& pi = *b.pi;
    for (std::size_t w = 0; w < c.object_count(); ++w) {
      int wi = static_cast<int>(w);
      for (const auto& elt : lam.ctx().carrier(wi)) {
        auto x = unnest(elt, 4);  // Ψ, S, T, t
        auto l = eval(lam, wi, x);
        for (const auto& s : b.terms(x[0].name(), x[1].name())) {
          if (!pi.app.contains({x[0].name(), x[1].name(), x[2].name(), l.name(), s})) continue;
          auto e = b.ext.find({b.id(x[0].name()), x[1].name(), s});
          if (e == b.ext.end()) continue;
          check_instance(beta, "world " + c.object_name(wi), [&] {
            auto lhs = eval(app, wi, std::vector<Value>{x[0], x[1], x[2], l, A(s)});
            return eq(lhs, A(b.sub_tm(x[2].name(), x[3].name(), e->second)));
          });
        }
      }
    }
    out.push_back(beta);
  }
  return out;
}

}  // namespace cwflab
