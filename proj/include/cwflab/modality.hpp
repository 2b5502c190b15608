#pragma once

// Telescopes, the constant-presheaf comonad □ and its counit, box and letbox.
//
// □ fixes a presheaf at the terminal world: □Γ(Ψ) = Γ(⊤) with identity
// actions. A context of the form □Δ is any presheaf equal to its own box.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cwflab/cwf.hpp"
#include "cwflab/error.hpp"
#include "cwflab/presheaf.hpp"
#include "cwflab/value.hpp"

namespace cwflab {

// ---------------------------------------------------------------------------
// Telescopes.

class Telescope {
 public:
  explicit Telescope(Presheaf base) : base_(base) { ctxs_.push_back(std::move(base)); }

  /// Entry k must be over base extended by entries 0..k-1.
  static Telescope make(Presheaf base, std::vector<DepTy> entries) {
    Telescope t(std::move(base));
    for (auto& e : entries) t = t.extend(std::move(e));
    return t;
  }

  Telescope extend(DepTy a) const {
    if (!(a.ctx() == ctx())) {
      throw Error(ErrorKind::structural, "telescope entry " + std::to_string(size()) +
                                             " is not over the accumulated context");
    }
    Telescope out = *this;
    out.ctxs_.push_back(a.comprehension());
    out.entries_.push_back(std::move(a));
    return out;
  }

  const Presheaf& base() const noexcept { return base_; }
  /// base;Γ.
  const Presheaf& ctx() const noexcept { return ctxs_.back(); }
  /// The context entry k lives over.
  const Presheaf& ctx_before(std::size_t k) const { return ctxs_.at(k); }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<DepTy>& entries() const noexcept { return entries_; }

 private:
  Presheaf base_;
  std::vector<Presheaf> ctxs_;
  std::vector<DepTy> entries_;
};

namespace detail {

inline void require_base(const Presheaf& delta, const Telescope& g, const char* what) {
  if (!(g.base() == delta)) throw Error(ErrorKind::structural, std::string(what) + ": telescope is not over the given context");
}

}  // namespace detail

/// Δ;Γ.
inline Presheaf tele_concat(const Presheaf& delta, const Telescope& g) {
  detail::require_base(delta, g, "tele_concat");
  return g.ctx();
}

/// p^k : Δ;Γ ⇒ Δ.
inline NatTrans tele_weaken(const Presheaf& delta, const Telescope& g) {
  detail::require_base(delta, g, "tele_weaken");
  NatTrans acc = nat_id(delta);
  for (std::size_t k = 0; k < g.size(); ++k) acc = nat_compose(acc, proj_p(g.ctx_before(k), g.entries()[k]));
  return acc;
}

struct TeleSubst {
  Telescope tele;  ///< Γ{σ} over Δ′
  NatTrans q;      ///< q(σ, Γ) : Δ′;Γ{σ} ⇒ Δ;Γ
};

/// q(σ, ⊤) = σ, q(σ, Γ.A) = q(q(σ, Γ), A), Δ′;(Γ.A){σ} = Δ′;Γ{σ}.A{q(σ, Γ)}.
inline TeleSubst tele_subst(const NatTrans& sigma, const Telescope& g) {
  detail::require_base(sigma.dst(), g, "tele_subst");
  Telescope out(sigma.src());
  NatTrans q = sigma;
  for (const auto& a : g.entries()) {
    out = out.extend(ty_subst(a, q));
    q = q_morphism(q, a);
  }
  return {std::move(out), std::move(q)};
}

// ---------------------------------------------------------------------------
// □.

namespace detail {

inline ObjIndex require_terminal(const FinCat& c, const std::string& t) {
  auto d = c.find_object(t);
  if (!d) throw Error(ErrorKind::lookup, "unknown object '" + t + "'");
  if (!c.is_terminal(*d)) throw Error(ErrorKind::precondition, "object '" + t + "' is not terminal");
  return *d;
}

inline std::vector<std::vector<int>> identity_tables(const FinCat& c, const std::vector<std::size_t>& sizes_by_cod) {
  std::vector<std::vector<int>> act(c.morphism_count());
  for (std::size_t m = 0; m < act.size(); ++m) {
    act[m].resize(sizes_by_cod[m]);
    for (std::size_t i = 0; i < act[m].size(); ++i) act[m][i] = static_cast<int>(i);
  }
  return act;
}

}  // namespace detail

inline Presheaf box_presheaf(const Presheaf& g, const std::string& t) {
  const auto& c = g.base();
  ObjIndex ti = detail::require_terminal(c, t);
  auto fixed = g.carrier(ti);
  std::vector<std::vector<Value>> car(c.object_count(), std::vector<Value>(fixed.begin(), fixed.end()));
  std::vector<std::size_t> sizes(c.morphism_count(), fixed.size());
  return Presheaf::from_tables(c, std::move(car), detail::identity_tables(c, sizes));
}

/// ε : □Γ ⇒ Γ, at Ψ the action of Γ along the unique Ψ -> ⊤.
inline NatTrans counit(const Presheaf& g, const std::string& t) {
  auto box = box_presheaf(g, t);
  const auto& c = g.base();
  ObjIndex ti = c.object_index(t);
  std::vector<std::vector<int>> comp(c.object_count());
  for (std::size_t d = 0; d < comp.size(); ++d) {
    int bang = c.bang(static_cast<int>(d), ti);
    for (std::size_t i = 0; i < g.size(ti); ++i) comp[d].push_back(g.act(bang, static_cast<int>(i)));
  }
  return NatTrans::from_tables(std::move(box), g, std::move(comp));
}

/// □A over □Γ: □A(Ψ, s) = A(⊤, s).
inline DepTy box_ty(const DepTy& a, const std::string& t) {
  auto box = box_presheaf(a.ctx(), t);
  ObjIndex ti = box.base().object_index(t);
  std::vector<std::vector<Value>> fibers(box.elem_object_count());
  for (std::size_t k = 0; k < fibers.size(); ++k) {
    auto f = a.fiber(ti, box.elem_label(static_cast<int>(k)).elem);
    fibers[k].assign(f.begin(), f.end());
  }
  const auto& el = box.elements().cat;
  std::vector<std::size_t> sizes(el.morphism_count());
  for (std::size_t e = 0; e < sizes.size(); ++e) sizes[e] = fibers[el.morphism(static_cast<int>(e)).cod].size();
  return DepTy::from_tables(std::move(box), std::move(fibers), detail::identity_tables(el, sizes));
}

/// □M : Tm(□Γ, □A), □M(Ψ, s) = M(⊤, s).
inline Term box_tm(const Term& m, const std::string& t) {
  auto ty = box_ty(m.ty(), t);
  ObjIndex ti = ty.ctx().base().object_index(t);
  std::vector<int> assign(ty.ctx().elem_object_count());
  for (std::size_t k = 0; k < assign.size(); ++k) assign[k] = m.at(ti, ty.ctx().elem_label(static_cast<int>(k)).elem);
  return Term::make(std::move(ty), std::move(assign));
}

namespace detail {

inline void require_boxed(const Presheaf& g, const std::string& t, const char* what) {
  if (!(box_presheaf(g, t) == g)) {
    throw Error(ErrorKind::precondition, std::string(what) + ": context is not constant (not of the form □Δ)");
  }
}

}  // namespace detail

/// box(M) = □M{p^k} : Tm(□Δ;Γ, □A{p^k}), for M : Tm(□Δ, A).
inline Term box_intro(const Term& m, const Telescope& g, const std::string& t) {
  detail::require_boxed(m.ctx(), t, "box");
  return tm_subst(box_tm(m, t), tele_weaken(m.ctx(), g));
}

// ---------------------------------------------------------------------------
// letbox.

/// Everything letbox's inputs are typed against, for A over □Δ and Γ over □Δ.
struct LetboxFrame {
  std::string terminal;
  Presheaf box_delta;   ///< □Δ
  DepTy a;              ///< A over □Δ
  Telescope gamma;      ///< Γ over □Δ
  DepTy box_a_k;        ///< □A{p^k} over □Δ;Γ
  Presheaf global;      ///< □(□Δ.A)
  NatTrans p;           ///< □(□Δ.A) ⇒ □Δ, (s, a) ↦ s
  TeleSubst gamma_p;    ///< Γ{p} and q(p, Γ)
  Term var;             ///< v_□A{p^k} : Tm(□(□Δ.A);Γ{p}, □A{p^k}{q(p, Γ)})

  /// The type N must have: B{⟨q(p, Γ), v_□A{p^k}⟩}.
  DepTy n_type(const DepTy& b) const {
    check_b(b);
    return ty_subst(b, ext(gamma_p.q, box_a_k, var));
  }

  /// The type letbox(M, N) has: B{⟨id, M⟩}.
  DepTy result_type(const DepTy& b, const Term& m) const {
    check_b(b);
    return ty_subst(b, ext(nat_id(gamma.ctx()), box_a_k, m));
  }

  /// The reindexing (Ψ, (s, s')) ↦ (Ψ, ((s, M(Ψ, (s, s'))), s')).
  NatTrans plug(const Term& m) const {
    check_m(m);
    const auto& x = gamma.ctx();
    const auto& y = gamma_p.tele.ctx();
    const std::size_t k = gamma.size();
    std::vector<std::vector<int>> comp(x.base().object_count());
    for (std::size_t d = 0; d < comp.size(); ++d) {
      int di = static_cast<int>(d);
      for (std::size_t i = 0; i < x.size(di); ++i) {
        auto [s, rest] = split(x.element(di, static_cast<int>(i)), k);
        const auto& av = m.value(di, static_cast<int>(i));
        comp[d].push_back(y.index(di, renest(Value::pair(s, av), rest)));
      }
    }
    return NatTrans::from_tables(x, y, std::move(comp));
  }

  void check_b(const DepTy& b) const {
    if (!(b.ctx() == box_a_k.comprehension())) {
      throw Error(ErrorKind::structural, "letbox: B must be over (□Δ;Γ).□A{p^k}, a context of " +
                                             std::to_string(box_a_k.comprehension().elem_object_count()) +
                                             " elements; got one of " +
                                             std::to_string(b.ctx().elem_object_count()));
    }
  }

  void check_m(const Term& m) const {
    if (auto w = depty_mismatch(m.ty(), box_a_k)) {
      throw Error(ErrorKind::structural, "letbox: M must have type □A{p^k} over □Δ;Γ: " + *w);
    }
  }

  /// Splits an element of X;Γ into its X part and its k telescope components.
  static std::pair<Value, std::vector<Value>> split(const Value& x, std::size_t k) {
    auto parts = unnest(x, k);
    Value root = x;
    for (std::size_t i = 0; i < k; ++i) root = root[0];
    return {root, parts};
  }
};

inline LetboxFrame letbox_frame(const Presheaf& delta, const DepTy& a, const Telescope& g, const std::string& t) {
  auto box_delta = box_presheaf(delta, t);
  if (!(a.ctx() == box_delta)) throw Error(ErrorKind::structural, "letbox: A must be over □Δ");
  detail::require_base(box_delta, g, "letbox");
  // □A is over □□Δ, which is □Δ on the nose.
  auto box_a = box_ty(a, t);
  auto pk = tele_weaken(box_delta, g);
  auto box_a_k = ty_subst(box_a, pk);
  auto global = box_presheaf(comprehension(box_delta, a), t);
  const auto& c = delta.base();
  std::vector<std::vector<int>> pc(c.object_count());
  for (std::size_t d = 0; d < pc.size(); ++d) {
    for (const auto& sa : global.carrier(static_cast<int>(d))) pc[d].push_back(box_delta.index(static_cast<int>(d), sa[0]));
  }
  auto p = NatTrans::from_tables(global, box_delta, std::move(pc));
  auto gamma_p = tele_subst(p, g);
  // v_□A : Tm(□(□Δ.A), □A{p}), (s, a) ↦ a, then weakened past Γ{p}.
  auto box_a_p = ty_subst(box_a, p);
  std::vector<Value> vals;
  for (std::size_t k = 0; k < global.elem_object_count(); ++k) {
    auto lab = global.elem_label(static_cast<int>(k));
    vals.push_back(global.element(lab.obj, lab.elem)[1]);
  }
  auto v = Term::from_values(box_a_p, vals);
  auto var = tm_subst(v, tele_weaken(global, gamma_p.tele));
  return LetboxFrame{t, std::move(box_delta), a, g, std::move(box_a_k), std::move(global),
                     std::move(p), std::move(gamma_p), std::move(var)};
}

/// letbox(M, N)(Ψ, (s, s')) = N(Ψ, (s, M(Ψ, (s, s')), s')), validated
/// against B{⟨id, M⟩}.
inline Term letbox(const LetboxFrame& fr, const DepTy& b, const Term& m, const Term& n) {
  auto want_n = fr.n_type(b);
  if (auto w = depty_mismatch(n.ty(), want_n)) {
    throw Error(ErrorKind::structural, "letbox: N must have type B{<q(p,Γ), v>} over □(Δ.A);Γ{p}: " + *w);
  }
  auto ty = fr.result_type(b, m);
  auto theta = fr.plug(m);
  const auto& x = fr.gamma.ctx();
  std::vector<Value> vals(x.elem_object_count());
  for (std::size_t k = 0; k < vals.size(); ++k) {
    auto lab = x.elem_label(static_cast<int>(k));
    vals[k] = n.value(lab.obj, theta.at(lab.obj, lab.elem));
  }
  return Term::from_values(std::move(ty), vals);
}

inline Term letbox(const Presheaf& delta, const DepTy& a, const Telescope& g, const DepTy& b, const Term& m,
                   const Term& n, const std::string& t) {
  return letbox(letbox_frame(delta, a, g, t), b, m, n);
}

// ---------------------------------------------------------------------------
// Structural equations, as witnesses (nullopt when they hold).

inline std::optional<std::string> box_idempotence_witness(const Presheaf& g, const std::string& t) {
  auto once = box_presheaf(g, t);
  if (!(box_presheaf(once, t) == once)) return std::string("□□Γ differs from □Γ");
  return std::nullopt;
}

inline std::optional<std::string> box_comprehension_witness(const DepTy& a, const std::string& t) {
  auto lhs = comprehension(box_presheaf(a.ctx(), t), box_ty(a, t));
  auto rhs = box_presheaf(a.comprehension(), t);
  if (!(lhs == rhs)) return std::string("□Γ.□A differs from □(Γ.A)");
  return std::nullopt;
}

/// On a constant Γ the counit is the identity.
inline std::optional<std::string> counit_identity_witness(const Presheaf& g, const std::string& t) {
  if (!(box_presheaf(g, t) == g)) return std::nullopt;
  auto e = counit(g, t);
  if (auto w = nat_mismatch(e, nat_id(g))) return "counit on a constant presheaf: " + *w;
  return std::nullopt;
}

}  // namespace cwflab
