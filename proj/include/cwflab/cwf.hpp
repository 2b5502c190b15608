#pragma once

// The CwF structure on presheaves over a finite category.
//
// A DepTy over Γ is a presheaf on the category of elements of Γ; its fibers
// and actions are indexed by Γ's flat element numbering. A Term picks one
// fiber index per element of Γ. Both are validated on construction, so every
// value of these types satisfies its laws (mutate.hpp is the only way around
// that, and exists for sensitivity tests).

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cwflab/csp.hpp"
#include "cwflab/error.hpp"
#include "cwflab/fincat.hpp"
#include "cwflab/presheaf.hpp"
#include "cwflab/value.hpp"

namespace cwflab {

namespace mutate {
struct Access;
}

inline constexpr std::size_t kDefaultEnumerationLimit = 200000;

class DepTy {
 public:
  /// `family` must be a presheaf on ctx.elements().cat.
  static DepTy make(Presheaf ctx, Presheaf family) {
    check_shape(ctx, family);
    DepTy out(std::move(ctx), std::move(family));
    throw_if_invalid("dependent type", out.laws());
    return out;
  }

  /// fibers[k] and action[e] are indexed by ctx.elem_object / ctx.elem_morphism.
  static DepTy from_tables(Presheaf ctx, std::vector<std::vector<Value>> fibers,
                           std::vector<std::vector<int>> action) {
    auto family = Presheaf::from_tables(ctx.elements().cat, std::move(fibers), std::move(action));
    return make(std::move(ctx), std::move(family));
  }

  const Presheaf& ctx() const noexcept { return data_->ctx; }
  const Presheaf& family() const noexcept { return data_->family; }

  std::span<const Value> fiber(int k) const { return data_->family.carrier(k); }
  std::span<const Value> fiber(ObjIndex d, int s) const { return fiber(ctx().elem_object(d, s)); }
  std::size_t fiber_size(int k) const { return data_->family.size(k); }
  const Value& element(int k, int i) const { return data_->family.element(k, i); }
  int index(int k, const Value& v) const { return data_->family.index(k, v); }
  std::optional<int> index_of(int k, const Value& v) const { return data_->family.index_of(k, v); }

  /// Action along the element morphism e : (d, Γ(m)s2) -> (d2, s2).
  int act(int e, int i) const { return data_->family.act(e, i); }
  const std::vector<int>& action_table(int e) const { return data_->family.action_table(e); }

  /// Γ.A, built once per DepTy value.
  const Presheaf& comprehension() const;

  friend bool operator==(const DepTy& a, const DepTy& b) {
    if (a.data_ == b.data_) return true;
    return a.data_->family.same_tables(b.data_->family) && a.data_->ctx == b.data_->ctx;
  }

  ValidationReport laws() const {
    ValidationReport out;
    for (auto& v : validate_presheaf(data_->family)) {
      v.law = v.law == "presheaf-identity" ? "depty-identity" : "depty-composition";
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  friend struct mutate::Access;

  struct Data {
    Data(Presheaf c, Presheaf f) : ctx(std::move(c)), family(std::move(f)) {}
    Presheaf ctx;
    Presheaf family;
    mutable std::once_flag compr_once;
    mutable std::unique_ptr<Presheaf> compr;
  };

  static void check_shape(const Presheaf& ctx, const Presheaf& family) {
    const auto& el = ctx.elements().cat;
    if (!family.base().same_as(el) && !(family.base() == el)) {
      throw Error(ErrorKind::structural,
                  "dependent type family is not indexed by the category of elements of its context");
    }
  }

  DepTy(Presheaf ctx, Presheaf family)
      : data_(std::make_shared<const Data>(std::move(ctx), std::move(family))) {}

  std::shared_ptr<const Data> data_;
};

inline ValidationReport validate_depty(const DepTy& a) { return a.laws(); }

/// Violations of the term coherence condition: for every element morphism
/// e : (d', Γ(δ)s) -> (d, s), A(e)(assign(d, s)) = assign(d', Γ(δ)s).
inline ValidationReport check_term(const DepTy& ty, const std::vector<int>& assign) {
  const auto& g = ty.ctx();
  if (assign.size() != g.elem_object_count()) {
    throw Error(ErrorKind::structural, "term assignment is not total over the context");
  }
  ValidationReport report;
  for (std::size_t k = 0; k < assign.size(); ++k) {
    if (assign[k] < 0 || assign[k] >= static_cast<int>(ty.fiber_size(static_cast<int>(k)))) {
      auto lab = g.elem_label(static_cast<int>(k));
      throw Error(ErrorKind::structural,
                  "term value at " + elem_object_name(g, lab.obj, lab.elem) + " leaves the fiber");
    }
  }
  const auto& c = g.base();
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    int mi = static_cast<int>(m);
    if (c.is_identity(mi)) continue;
    const auto& mor = c.morphism(mi);
    for (std::size_t s2 = 0; s2 < g.size(mor.cod); ++s2) {
      int e = g.elem_morphism(mi, static_cast<int>(s2));
      int k2 = g.elem_object(mor.cod, static_cast<int>(s2));
      int k = g.elem_object(mor.dom, g.act(mi, static_cast<int>(s2)));
      if (ty.act(e, assign[k2]) != assign[k]) {
        report.push_back({"term-coherence", elem_morphism_name(g, mi, static_cast<int>(s2))});
      }
    }
  }
  return report;
}

class Term {
 public:
  /// assign[k] is a fiber index at ctx element k.
  static Term make(DepTy ty, std::vector<int> assign) {
    throw_if_invalid("term", check_term(ty, assign));
    return Term(std::move(ty), std::move(assign));
  }

  /// From one fiber element per context element, in flat element order.
  static Term from_values(DepTy ty, const std::vector<Value>& values) {
    if (values.size() != ty.ctx().elem_object_count()) {
      throw Error(ErrorKind::structural, "term assignment is not total over the context");
    }
    std::vector<int> assign(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
      auto i = ty.index_of(static_cast<int>(k), values[k]);
      if (!i) {
        throw Error(ErrorKind::structural,
                    "term value " + values[k].to_string() + " is not in its fiber");
      }
      assign[k] = *i;
    }
    return make(std::move(ty), std::move(assign));
  }

  const DepTy& ty() const noexcept { return data_->ty; }
  const Presheaf& ctx() const noexcept { return data_->ty.ctx(); }
  int at(int k) const { return data_->assign.at(k); }
  int at(ObjIndex d, int s) const { return at(ctx().elem_object(d, s)); }
  const Value& value(int k) const { return data_->ty.element(k, at(k)); }
  const Value& value(ObjIndex d, int s) const { return value(ctx().elem_object(d, s)); }
  const std::vector<int>& assign() const noexcept { return data_->assign; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.data_ == b.data_) return true;
    return a.data_->assign == b.data_->assign && a.data_->ty == b.data_->ty;
  }

 private:
  friend struct mutate::Access;

  struct Data {
    DepTy ty;
    std::vector<int> assign;
  };

  Term(DepTy ty, std::vector<int> assign)
      : data_(std::make_shared<const Data>(Data{std::move(ty), std::move(assign)})) {}

  std::shared_ptr<const Data> data_;
};

// ---------------------------------------------------------------------------
// Mismatch reports used as law witnesses: the first differing entry, if any.

inline std::optional<std::string> nat_mismatch(const NatTrans& lhs, const NatTrans& rhs) {
  if (!(lhs.src() == rhs.src())) return std::string("sources differ");
  if (!(lhs.dst() == rhs.dst())) return std::string("targets differ");
  const auto& g = lhs.src();
  for (std::size_t d = 0; d < g.base().object_count(); ++d) {
    int di = static_cast<int>(d);
    for (std::size_t s = 0; s < g.size(di); ++s) {
      int si = static_cast<int>(s);
      if (lhs.at(di, si) != rhs.at(di, si)) {
        return elem_object_name(g, di, si) + ": " + lhs.dst().element(di, lhs.at(di, si)).to_string() +
               " vs " + rhs.dst().element(di, rhs.at(di, si)).to_string();
      }
    }
  }
  return std::nullopt;
}

inline std::optional<std::string> depty_mismatch(const DepTy& lhs, const DepTy& rhs) {
  if (!(lhs.ctx() == rhs.ctx())) return std::string("contexts differ");
  const auto& g = lhs.ctx();
  for (std::size_t k = 0; k < g.elem_object_count(); ++k) {
    int ki = static_cast<int>(k);
    auto lf = lhs.fiber(ki);
    auto rf = rhs.fiber(ki);
    if (!std::equal(lf.begin(), lf.end(), rf.begin(), rf.end())) {
      auto lab = g.elem_label(ki);
      return "fiber at " + elem_object_name(g, lab.obj, lab.elem);
    }
  }
  const auto& c = g.base();
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    const auto& mor = c.morphism(static_cast<int>(m));
    for (std::size_t s2 = 0; s2 < g.size(mor.cod); ++s2) {
      int e = g.elem_morphism(static_cast<int>(m), static_cast<int>(s2));
      if (lhs.action_table(e) != rhs.action_table(e)) {
        return "action along " + elem_morphism_name(g, static_cast<int>(m), static_cast<int>(s2));
      }
    }
  }
  return std::nullopt;
}

inline std::optional<std::string> term_mismatch(const Term& lhs, const Term& rhs) {
  if (auto w = depty_mismatch(lhs.ty(), rhs.ty())) return "types differ: " + *w;
  const auto& g = lhs.ctx();
  for (std::size_t k = 0; k < g.elem_object_count(); ++k) {
    int ki = static_cast<int>(k);
    if (lhs.at(ki) != rhs.at(ki)) {
      auto lab = g.elem_label(ki);
      return elem_object_name(g, lab.obj, lab.elem) + ": " + lhs.value(ki).to_string() + " vs " +
             rhs.value(ki).to_string();
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Substitution, comprehension, p, v, extension, q.

namespace detail {

inline void require_same(const Presheaf& expected, const Presheaf& actual, const char* what) {
  if (!(expected == actual)) throw Error(ErrorKind::structural, std::string(what) + ": endpoint mismatch");
}

/// Γ.A: carrier(d) = {(s, a)}; pairs come out already in sorted order.
inline Presheaf build_comprehension(const DepTy& a) {
  const auto& g = a.ctx();
  const auto& c = g.base();
  std::vector<std::vector<Value>> car(c.object_count());
  std::vector<std::vector<int>> start(c.object_count());
  for (std::size_t d = 0; d < c.object_count(); ++d) {
    int di = static_cast<int>(d);
    for (std::size_t s = 0; s < g.size(di); ++s) {
      start[d].push_back(static_cast<int>(car[d].size()));
      for (const auto& x : a.fiber(di, static_cast<int>(s))) {
        car[d].push_back(Value::pair(g.element(di, static_cast<int>(s)), x));
      }
    }
  }
  std::vector<std::vector<int>> act(c.morphism_count());
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    int mi = static_cast<int>(m);
    const auto& mor = c.morphism(mi);
    for (std::size_t s2 = 0; s2 < g.size(mor.cod); ++s2) {
      int s = g.act(mi, static_cast<int>(s2));
      int e = g.elem_morphism(mi, static_cast<int>(s2));
      for (std::size_t x = 0; x < a.fiber_size(g.elem_object(mor.cod, static_cast<int>(s2))); ++x) {
        act[m].push_back(start[mor.dom][s] + a.act(e, static_cast<int>(x)));
      }
    }
  }
  return Presheaf::from_tables(c, std::move(car), std::move(act));
}

}  // namespace detail

inline const Presheaf& DepTy::comprehension() const {
  std::call_once(data_->compr_once, [this] {
    data_->compr = std::make_unique<Presheaf>(detail::build_comprehension(*this));
  });
  return *data_->compr;
}

/// A{σ} for σ : Δ ⇒ Γ.
inline DepTy ty_subst(const DepTy& a, const NatTrans& sigma) {
  detail::require_same(a.ctx(), sigma.dst(), "ty_subst");
  const auto& delta = sigma.src();
  const auto& gamma = a.ctx();
  const auto& c = delta.base();
  std::vector<std::vector<Value>> fibers(delta.elem_object_count());
  for (std::size_t k = 0; k < fibers.size(); ++k) {
    auto lab = delta.elem_label(static_cast<int>(k));
    auto f = a.fiber(lab.obj, sigma.at(lab.obj, lab.elem));
    fibers[k].assign(f.begin(), f.end());
  }
  std::vector<std::vector<int>> act(delta.elem_morphism_count());
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    int mi = static_cast<int>(m);
    const auto& mor = c.morphism(mi);
    for (std::size_t s2 = 0; s2 < delta.size(mor.cod); ++s2) {
      int e = gamma.elem_morphism(mi, sigma.at(mor.cod, static_cast<int>(s2)));
      act[delta.elem_morphism(mi, static_cast<int>(s2))] = a.action_table(e);
    }
  }
  return DepTy::from_tables(delta, std::move(fibers), std::move(act));
}

/// M{σ} for σ : Δ ⇒ Γ.
inline Term tm_subst(const Term& m, const NatTrans& sigma) {
  auto ty = ty_subst(m.ty(), sigma);
  const auto& delta = sigma.src();
  std::vector<int> assign(delta.elem_object_count());
  for (std::size_t k = 0; k < assign.size(); ++k) {
    auto lab = delta.elem_label(static_cast<int>(k));
    assign[k] = m.at(lab.obj, sigma.at(lab.obj, lab.elem));
  }
  return Term::make(std::move(ty), std::move(assign));
}

inline Presheaf comprehension(const Presheaf& gamma, const DepTy& a) {
  detail::require_same(gamma, a.ctx(), "comprehension");
  return a.comprehension();
}

/// p : Γ.A ⇒ Γ, the first projection.
inline NatTrans proj_p(const Presheaf& gamma, const DepTy& a) {
  const auto& ga = comprehension(gamma, a);
  std::vector<std::vector<int>> comp(gamma.base().object_count());
  for (std::size_t d = 0; d < comp.size(); ++d) {
    int di = static_cast<int>(d);
    for (const auto& pair : ga.carrier(di)) comp[d].push_back(gamma.index(di, pair[0]));
  }
  return NatTrans::from_tables(ga, gamma, std::move(comp));
}

/// v : Tm(Γ.A, A{p}), the second projection.
inline Term var_v(const Presheaf& gamma, const DepTy& a) {
  auto ty = ty_subst(a, proj_p(gamma, a));
  const auto& ga = ty.ctx();
  std::vector<int> assign(ga.elem_object_count());
  for (std::size_t k = 0; k < assign.size(); ++k) {
    auto lab = ga.elem_label(static_cast<int>(k));
    assign[k] = ty.index(static_cast<int>(k), ga.element(lab.obj, lab.elem)[1]);
  }
  return Term::make(std::move(ty), std::move(assign));
}

/// ⟨σ, M⟩ : Δ ⇒ Γ.A for σ : Δ ⇒ Γ and M : Tm(Δ, A{σ}).
inline NatTrans ext(const NatTrans& sigma, const DepTy& a, const Term& m) {
  detail::require_same(a.ctx(), sigma.dst(), "ext");
  if (auto w = depty_mismatch(m.ty(), ty_subst(a, sigma))) {
    throw Error(ErrorKind::structural, "ext: term type is not A{sigma} (" + *w + ")");
  }
  const auto& delta = sigma.src();
  const auto& gamma = a.ctx();
  const auto& ga = a.comprehension();
  std::vector<std::vector<int>> comp(delta.base().object_count());
  for (std::size_t d = 0; d < comp.size(); ++d) {
    int di = static_cast<int>(d);
    for (std::size_t s = 0; s < delta.size(di); ++s) {
      int si = static_cast<int>(s);
      comp[d].push_back(
          ga.index(di, Value::pair(gamma.element(di, sigma.at(di, si)), m.value(di, si))));
    }
  }
  return NatTrans::from_tables(delta, ga, std::move(comp));
}

/// q(σ, A) : Δ.A{σ} ⇒ Γ.A, (s, a) ↦ (σ s, a).
inline NatTrans q_morphism(const NatTrans& sigma, const DepTy& a) {
  auto a_sigma = ty_subst(a, sigma);
  const auto& src = a_sigma.comprehension();
  const auto& dst = a.comprehension();
  const auto& delta = sigma.src();
  const auto& gamma = sigma.dst();
  std::vector<std::vector<int>> comp(delta.base().object_count());
  for (std::size_t d = 0; d < comp.size(); ++d) {
    int di = static_cast<int>(d);
    for (const auto& pair : src.carrier(di)) {
      const auto& s = gamma.element(di, sigma.at(di, delta.index(di, pair[0])));
      comp[d].push_back(dst.index(di, Value::pair(s, pair[1])));
    }
  }
  return NatTrans::from_tables(src, dst, std::move(comp));
}

// ---------------------------------------------------------------------------
// Enumeration of terms.

/// Every Term of type A, in a fixed order.
inline std::vector<Term> enumerate_terms(const DepTy& a, std::size_t limit = kDefaultEnumerationLimit) {
  const auto& g = a.ctx();
  std::vector<int> sizes(g.elem_object_count());
  for (std::size_t k = 0; k < sizes.size(); ++k) sizes[k] = static_cast<int>(a.fiber_size(static_cast<int>(k)));
  FunctionalCsp csp(std::move(sizes));
  const auto& c = g.base();
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    int mi = static_cast<int>(m);
    if (c.is_identity(mi)) continue;
    const auto& mor = c.morphism(mi);
    for (std::size_t s2 = 0; s2 < g.size(mor.cod); ++s2) {
      int e = g.elem_morphism(mi, static_cast<int>(s2));
      csp.link(g.elem_object(mor.cod, static_cast<int>(s2)),
               g.elem_object(mor.dom, g.act(mi, static_cast<int>(s2))), &a.action_table(e));
    }
  }
  std::vector<Term> out;
  csp.solve([&](const std::vector<int>& v) {
    out.push_back(Term::make(a, v));
    return true;
  }, limit, "term enumeration");
  return out;
}

/// Every natural transformation Δ ⇒ Γ, in a fixed order.
inline std::vector<NatTrans> enumerate_nats(const Presheaf& delta, const Presheaf& gamma,
                                            std::size_t limit = kDefaultEnumerationLimit) {
  if (!(delta.base() == gamma.base())) {
    throw Error(ErrorKind::structural, "enumerate_nats: presheaves over different bases");
  }
  const auto& c = delta.base();
  std::vector<int> sizes(delta.elem_object_count());
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    sizes[k] = static_cast<int>(gamma.size(delta.elem_label(static_cast<int>(k)).obj));
  }
  FunctionalCsp csp(std::move(sizes));
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    int mi = static_cast<int>(m);
    if (c.is_identity(mi)) continue;
    const auto& mor = c.morphism(mi);
    for (std::size_t s2 = 0; s2 < delta.size(mor.cod); ++s2) {
      csp.link(delta.elem_object(mor.cod, static_cast<int>(s2)),
               delta.elem_object(mor.dom, delta.act(mi, static_cast<int>(s2))), &gamma.action_table(mi));
    }
  }
  std::vector<NatTrans> out;
  csp.solve([&](const std::vector<int>& v) {
    std::vector<std::vector<int>> comp(c.object_count());
    for (std::size_t k = 0; k < v.size(); ++k) comp[delta.elem_label(static_cast<int>(k)).obj].push_back(v[k]);
    out.push_back(NatTrans::from_tables(delta, gamma, std::move(comp)));
    return true;
  }, limit, "natural transformation enumeration");
  return out;
}

// ---------------------------------------------------------------------------
// Law reports.

struct LawCheck {
  explicit LawCheck(std::string name = {}) : law(std::move(name)) {}

  std::string law;
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::string witness;  ///< first failure

  std::string status() const {
    if (failures > 0) return "fail";
    return instances == 0 ? "skipped" : "pass";
  }
};

using LawReport = std::vector<LawCheck>;

/// Runs one instance of a law. `mismatch` returns a witness when the two
/// sides differ; a construction error on either side also counts as a failure.
inline void check_instance(LawCheck& check, const std::string& where,
                           const std::function<std::optional<std::string>()>& mismatch) {
  ++check.instances;
  std::optional<std::string> w;
  try {
    w = mismatch();
  } catch (const Error& e) {
    w = std::string(e.what());
  }
  if (w) {
    if (check.failures++ == 0) check.witness = where.empty() ? *w : where + ": " + *w;
  }
}

inline bool all_pass(const LawReport& r) {
  for (const auto& c : r) {
    if (c.failures > 0) return false;
  }
  return true;
}

/// Operations the CwF law suite goes through, replaceable for sensitivity tests.
struct CwfOps {
  std::function<NatTrans(const NatTrans&, const DepTy&, const Term&)> ext =
      [](const NatTrans& s, const DepTy& a, const Term& m) { return cwflab::ext(s, a, m); };
};

/// The three CwF laws for a type A over Γ:
///   p ∘ ⟨σ, M⟩ = σ and v{⟨σ, M⟩} = M for each (σ, M);
///   ⟨p ∘ σ', v{σ'}⟩ = σ' for each σ' into Γ.A.
inline LawReport law_suite_cwf(const DepTy& a, const std::vector<std::pair<NatTrans, Term>>& sigma_m,
                               const std::vector<NatTrans>& sigma_prime, const CwfOps& ops = {}) {
  const auto& gamma = a.ctx();
  LawCheck l1{"p-after-ext"}, l2{"v-under-ext"}, l3{"ext-eta"};
  auto p = proj_p(gamma, a);
  auto v = var_v(gamma, a);
  for (std::size_t i = 0; i < sigma_m.size(); ++i) {
    const auto& [sigma, m] = sigma_m[i];
    auto where = "instance " + std::to_string(i);
    std::optional<NatTrans> e;
    try {
      e = ops.ext(sigma, a, m);
    } catch (const Error&) {
    }
    check_instance(l1, where, [&]() -> std::optional<std::string> {
      if (!e) e = ops.ext(sigma, a, m);
      return nat_mismatch(nat_compose(p, *e), sigma);
    });
    check_instance(l2, where, [&]() -> std::optional<std::string> {
      if (!e) e = ops.ext(sigma, a, m);
      return term_mismatch(tm_subst(v, *e), m);
    });
  }
  for (std::size_t i = 0; i < sigma_prime.size(); ++i) {
    const auto& sp = sigma_prime[i];
    check_instance(l3, "instance " + std::to_string(i), [&]() -> std::optional<std::string> {
      auto lhs = ops.ext(nat_compose(p, sp), a, tm_subst(v, sp));
      return nat_mismatch(lhs, sp);
    });
  }
  return {l1, l2, l3};
}

}  // namespace cwflab
