#pragma once

// Dependent products in presheaves.
//
// An element of Π(A,B) at (Ψ, s) is a table f indexed by triples
// (Φ, δ : Φ -> Ψ, a ∈ A(Φ, Γ(δ)s)) with f(Φ, δ, a) ∈ B(Φ, (Γ(δ)s, a)),
// subject to coherence: for every δ' : Φ' -> Φ,
//   f(Φ', δ ∘ δ', A(δ')a) = B(δ')(f(Φ, δ, a)).
// Quantifying over all δ into Ψ is what makes the construction contravariant
// in Ψ. Reading f only at Ψ itself (a ∈ A(Ψ, s) ↦ B(Ψ, (s, a))) gives fibers
// that cannot be made functorial in general: on the walking arrow with
// A(b) = ∅ every choice of action loses terms. The tests keep that
// construction as a negative example.
//
// A table is stored as a Value: the tuple of entries (Φ, δ, a, f(Φ,δ,a)),
// sorted, so equal functions are equal values.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cwflab/csp.hpp"
#include "cwflab/cwf.hpp"
#include "cwflab/error.hpp"
#include "cwflab/presheaf.hpp"
#include "cwflab/value.hpp"

namespace cwflab {

inline constexpr std::size_t kDefaultPiFiberBudget = 10000;

/// Index sets and coherence constraints of Π(A, B), independent of its fibers.
class PiIndex {
 public:
  struct Key {
    ObjIndex phi;
    MorIndex delta;  ///< Φ -> Ψ
    int a;           ///< index in A's fiber at (Φ, Γ(δ)s)
    int x;           ///< index of (Γ(δ)s, a) in (Γ.A)(Φ)
    int kb;          ///< B's fiber index set, a (Γ.A) element object
    Value label;     ///< (Φ, δ, a)
  };
  struct Link {
    int from;  ///< key positions
    int to;
    int e;     ///< (Γ.A) element morphism whose B action relates them
    MorIndex delta_prime;
  };
  struct Anchor {
    std::vector<Key> keys;
    std::vector<int> first;  ///< by morphism: position of (δ, a = 0), or -1
    std::vector<Link> links;
  };

  PiIndex(DepTy a, DepTy b) : a_(std::move(a)), b_(std::move(b)) {
    if (!(b_.ctx() == a_.comprehension())) {
      throw Error(ErrorKind::structural, "pi: B is not a type over the comprehension of A");
    }
    const auto& gamma = a_.ctx();
    const auto& c = gamma.base();
    const auto& ga = b_.ctx();
    anchors_.resize(gamma.elem_object_count());
    for (std::size_t k = 0; k < anchors_.size(); ++k) {
      auto lab = gamma.elem_label(static_cast<int>(k));
      auto& an = anchors_[k];
      for (int delta : c.morphisms_into(lab.obj)) {
        ObjIndex phi = c.morphism(delta).dom;
        int s1 = gamma.act(delta, lab.elem);
        int ka = gamma.elem_object(phi, s1);
        for (std::size_t ai = 0; ai < a_.fiber_size(ka); ++ai) {
          const auto& av = a_.element(ka, static_cast<int>(ai));
          int x = ga.index(phi, Value::pair(gamma.element(phi, s1), av));
          an.keys.push_back({phi, delta, static_cast<int>(ai), x, ga.elem_object(phi, x),
                             Value::tuple({atom(c.object_name(phi)), atom(c.morphism(delta).id), av})});
        }
      }
      std::sort(an.keys.begin(), an.keys.end(),
                [](const Key& l, const Key& r) { return l.label < r.label; });
      an.first.assign(c.morphism_count(), -1);
      for (std::size_t j = 0; j < an.keys.size(); ++j) {
        auto& f = an.first[an.keys[j].delta];
        if (f < 0) f = static_cast<int>(j);
      }
      for (std::size_t j = 0; j < an.keys.size(); ++j) {
        const auto& key = an.keys[j];
        int s1 = gamma.act(key.delta, lab.elem);
        for (int dp : c.morphisms_into(key.phi)) {
          if (c.is_identity(dp)) continue;
          int a2 = a_.act(gamma.elem_morphism(dp, s1), key.a);
          int to = an.first[c.compose(key.delta, dp)] + a2;
          an.links.push_back({static_cast<int>(j), to, ga.elem_morphism(dp, key.x), dp});
        }
      }
    }
  }

  const DepTy& dom() const noexcept { return a_; }
  const DepTy& cod() const noexcept { return b_; }
  const Presheaf& ctx() const noexcept { return a_.ctx(); }
  const Anchor& anchor(int k) const { return anchors_.at(k); }
  std::size_t anchor_count() const noexcept { return anchors_.size(); }

  /// The table with the given result indices, as a value.
  Value encode(int k, const std::vector<int>& results) const {
    const auto& keys = anchors_[k].keys;
    std::vector<Value> entries;
    entries.reserve(keys.size());
    for (std::size_t j = 0; j < keys.size(); ++j) {
      const auto& l = keys[j].label;
      entries.push_back(Value::tuple({l[0], l[1], l[2], b_.element(keys[j].kb, results[j])}));
    }
    return Value::tuple(std::move(entries));
  }

  /// Result indices of a table value; throws listing missing or unexpected keys.
  std::vector<int> decode(int k, const Value& f) const {
    const auto& keys = anchors_[k].keys;
    std::string missing;
    std::vector<int> out(keys.size(), -1);
    if (f.is_atom()) throw Error(ErrorKind::structural, "pi element is not a table");
    std::size_t j = 0;
    for (const auto& entry : f.items()) {
      if (entry.is_atom() || entry.size() != 4) {
        throw Error(ErrorKind::structural, "pi entry " + entry.to_string() + " is not (obj,mor,arg,result)");
      }
      auto label = Value::tuple({entry[0], entry[1], entry[2]});
      while (j < keys.size() && keys[j].label < label) missing += " " + keys[j++].label.to_string();
      if (j == keys.size() || !(keys[j].label == label)) {
        throw Error(ErrorKind::structural, "pi table has unexpected key " + label.to_string());
      }
      auto r = b_.index_of(keys[j].kb, entry[3]);
      if (!r) {
        throw Error(ErrorKind::structural, "pi table value " + entry[3].to_string() + " at " +
                                               label.to_string() + " is outside B");
      }
      out[j++] = *r;
    }
    while (j < keys.size()) missing += " " + keys[j++].label.to_string();
    if (!missing.empty()) throw Error(ErrorKind::structural, "pi table is partial; missing" + missing);
    return out;
  }

  /// First coherence failure of a decoded table, as (Φ', δ') with its source key.
  std::optional<std::string> incoherence(int k, const std::vector<int>& r) const {
    const auto& an = anchors_[k];
    const auto& c = ctx().base();
    for (const auto& l : an.links) {
      if (b_.act(l.e, r[l.from]) != r[l.to]) {
        return "(" + c.object_name(c.morphism(l.delta_prime).dom) + "," + c.morphism(l.delta_prime).id +
               ") from " + an.keys[l.from].label.to_string();
      }
    }
    return std::nullopt;
  }

 private:
  DepTy a_;
  DepTy b_;
  std::vector<Anchor> anchors_;
};

/// Coherence of a single table anchored at (Ψ, s): nullopt when it holds,
/// otherwise a witness. Partial tables are a structural error.
inline std::optional<std::string> check_P(const DepTy& a, const DepTy& b, ObjIndex psi, const Value& s,
                                          const Value& f) {
  PiIndex idx(a, b);
  int k = a.ctx().elem_object(psi, a.ctx().index(psi, s));
  return idx.incoherence(k, idx.decode(k, f));
}

class PiType {
 public:
  const DepTy& dom() const noexcept { return data_->index.dom(); }
  const DepTy& cod() const noexcept { return data_->index.cod(); }
  const DepTy& ty() const noexcept { return data_->ty; }
  const PiIndex& index() const noexcept { return data_->index; }

  /// Result indices of fiber element i at anchor k.
  const std::vector<int>& table(int k, int i) const { return data_->tables.at(k).at(i); }

  friend PiType pi_ty(const DepTy& a, const DepTy& b, std::size_t budget);

 private:
  friend struct mutate::Access;

  struct Data {
    PiIndex index;
    DepTy ty;
    std::vector<std::vector<std::vector<int>>> tables;  // [anchor][fiber index]
  };

  explicit PiType(std::shared_ptr<const Data> d) : data_(std::move(d)) {}

  std::shared_ptr<const Data> data_;
};

/// Π(A, B) over Γ, each fiber enumerated up to `budget` tables.
inline PiType pi_ty(const DepTy& a, const DepTy& b, std::size_t budget = kDefaultPiFiberBudget) {
  PiIndex idx(a, b);
  const auto& gamma = a.ctx();
  const auto& c = gamma.base();
  const std::size_t n = idx.anchor_count();
  std::vector<std::vector<Value>> fibers(n);
  std::vector<std::vector<std::vector<int>>> tables(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& an = idx.anchor(static_cast<int>(k));
    std::vector<int> sizes;
    for (const auto& key : an.keys) sizes.push_back(static_cast<int>(b.fiber_size(key.kb)));
    FunctionalCsp csp(std::move(sizes));
    for (const auto& l : an.links) csp.link(l.from, l.to, &b.action_table(l.e));
    auto lab = gamma.elem_label(static_cast<int>(k));
    auto sols = csp.all(budget, "pi fiber at " + elem_object_name(gamma, lab.obj, lab.elem) +
                                    " exceeds the budget");
    std::vector<std::pair<Value, std::vector<int>>> items;
    items.reserve(sols.size());
    for (auto& r : sols) items.emplace_back(idx.encode(static_cast<int>(k), r), std::move(r));
    std::sort(items.begin(), items.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    for (auto& [v, r] : items) {
      fibers[k].push_back(std::move(v));
      tables[k].push_back(std::move(r));
    }
  }
  // Along (m, s) : (Ψ', Γ(m)s) -> (Ψ, s), f ↦ (Φ, δ', a) ↦ f(Φ, m ∘ δ', a).
  std::vector<std::vector<int>> act(gamma.elem_morphism_count());
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    int mi = static_cast<int>(m);
    const auto& mor = c.morphism(mi);
    for (std::size_t s = 0; s < gamma.size(mor.cod); ++s) {
      int k = gamma.elem_object(mor.cod, static_cast<int>(s));
      int k2 = gamma.elem_object(mor.dom, gamma.act(mi, static_cast<int>(s)));
      const auto& src = idx.anchor(k);
      const auto& dst = idx.anchor(k2);
      std::unordered_map<Value, int, ValueHash> where;
      for (std::size_t i = 0; i < fibers[k2].size(); ++i) where.emplace(fibers[k2][i], static_cast<int>(i));
      auto& row = act[gamma.elem_morphism(mi, static_cast<int>(s))];
      for (const auto& f : tables[k]) {
        std::vector<int> g(dst.keys.size());
        for (std::size_t j = 0; j < dst.keys.size(); ++j) {
          const auto& key = dst.keys[j];
          g[j] = f[src.first[c.compose(mi, key.delta)] + key.a];
        }
        auto it = where.find(idx.encode(k2, g));
        if (it == where.end()) {
          throw Error(ErrorKind::validation, "pi action leaves the fiber at " +
                                                 elem_morphism_name(gamma, mi, static_cast<int>(s)));
        }
        row.push_back(it->second);
      }
    }
  }
  auto ty = DepTy::from_tables(gamma, fibers, std::move(act));
  // from_tables keeps sorted fibers in place, so tables stay aligned.
  return PiType(std::make_shared<const PiType::Data>(PiType::Data{std::move(idx), std::move(ty), std::move(tables)}));
}

/// Λ(M)(Ψ, s)(Φ, δ, a) = M(Φ, (Γ(δ)s, a)).
inline Term lambda(const PiType& pi, const Term& m) {
  if (auto w = depty_mismatch(m.ty(), pi.cod())) {
    throw Error(ErrorKind::structural, "lambda: term is not of type B (" + *w + ")");
  }
  const auto& idx = pi.index();
  std::vector<int> assign(idx.anchor_count());
  for (std::size_t k = 0; k < assign.size(); ++k) {
    const auto& an = idx.anchor(static_cast<int>(k));
    std::vector<int> r(an.keys.size());
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = m.at(an.keys[j].kb);
    assign[k] = pi.ty().index(static_cast<int>(k), idx.encode(static_cast<int>(k), r));
  }
  return Term::make(pi.ty(), std::move(assign));
}

/// Λ⁻¹(M')(Ψ, (s, a)) = M'(Ψ, s)(Ψ, id, a).
inline Term lambda_inv(const PiType& pi, const Term& m2) {
  if (auto w = depty_mismatch(m2.ty(), pi.ty())) {
    throw Error(ErrorKind::structural, "lambda_inv: term is not of the pi type (" + *w + ")");
  }
  const auto& gamma = pi.dom().ctx();
  const auto& ga = pi.cod().ctx();
  const auto& c = gamma.base();
  std::vector<int> assign(ga.elem_object_count());
  for (std::size_t kb = 0; kb < assign.size(); ++kb) {
    auto lab = ga.elem_label(static_cast<int>(kb));
    const auto& pair = ga.element(lab.obj, lab.elem);
    int k = gamma.elem_object(lab.obj, gamma.index(lab.obj, pair[0]));
    int a = pi.dom().index(k, pair[1]);
    int pos = pi.index().anchor(k).first[c.identity(lab.obj)] + a;
    assign[kb] = pi.table(k, m2.at(k))[pos];
  }
  return Term::make(pi.cod(), std::move(assign));
}

/// App(M, N) = Λ⁻¹(M){⟨id, N⟩}.
inline Term app(const PiType& pi, const Term& m, const Term& n) {
  const auto& gamma = pi.dom().ctx();
  return tm_subst(lambda_inv(pi, m), ext(nat_id(gamma), pi.dom(), n));
}

// ---------------------------------------------------------------------------
// Law suite.

struct PiOps {
  std::function<PiType(const DepTy&, const DepTy&)> pi_ty = [](const DepTy& a, const DepTy& b) {
    return cwflab::pi_ty(a, b);
  };
  std::function<Term(const PiType&, const Term&)> lambda = [](const PiType& p, const Term& m) {
    return cwflab::lambda(p, m);
  };
  std::function<Term(const PiType&, const Term&)> lambda_inv = [](const PiType& p, const Term& m) {
    return cwflab::lambda_inv(p, m);
  };
};

struct PiInstance {
  NatTrans sigma;               ///< Δ ⇒ Γ
  DepTy a;                      ///< over Γ
  DepTy b;                      ///< over Γ.A
  std::vector<Term> ms;         ///< Tm(Γ.A, B)
  std::vector<Term> ns;         ///< Tm(Γ, A)
  std::vector<Term> ns_delta;   ///< Tm(Δ, A{σ})
  std::vector<Term> pis;        ///< Tm(Γ, Π(A,B))
};

/// Substitution laws of Π, Λ and App, the generalized App lemma, and β.
inline LawReport law_suite_pi(const std::vector<PiInstance>& instances, const PiOps& ops = {}) {
  LawCheck l1("pi-subst"), l2("lambda-subst"), l3("app-subst"), l3g("app-subst-general"), l4("beta");
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& in = instances[i];
    auto where = "instance " + std::to_string(i);
    const auto& gamma = in.a.ctx();
    const auto& delta = in.sigma.src();
    std::optional<PiType> pi, pi_s;
    std::optional<NatTrans> q;
    auto setup = [&] {
      if (!pi) pi = ops.pi_ty(in.a, in.b);
      if (!q) q = q_morphism(in.sigma, in.a);
      if (!pi_s) pi_s = ops.pi_ty(ty_subst(in.a, in.sigma), ty_subst(in.b, *q));
    };
    auto app_with = [&](const PiType& p, const Term& m, const Term& n) {
      return tm_subst(ops.lambda_inv(p, m), ext(nat_id(p.dom().ctx()), p.dom(), n));
    };
    check_instance(l1, where, [&]() -> std::optional<std::string> {
      setup();
      return depty_mismatch(ty_subst(pi->ty(), in.sigma), pi_s->ty());
    });
    for (std::size_t j = 0; j < in.ms.size(); ++j) {
      const auto& m = in.ms[j];
      check_instance(l2, where + ", M#" + std::to_string(j), [&]() -> std::optional<std::string> {
        setup();
        return term_mismatch(tm_subst(ops.lambda(*pi, m), in.sigma), ops.lambda(*pi_s, tm_subst(m, *q)));
      });
      for (std::size_t k = 0; k < in.ns.size(); ++k) {
        const auto& n = in.ns[k];
        check_instance(l4, where + ", M#" + std::to_string(j) + ", N#" + std::to_string(k),
                       [&]() -> std::optional<std::string> {
                         setup();
                         return term_mismatch(app_with(*pi, ops.lambda(*pi, m), n),
                                              tm_subst(m, ext(nat_id(gamma), in.a, n)));
                       });
      }
    }
    for (std::size_t j = 0; j < in.pis.size(); ++j) {
      const auto& mp = in.pis[j];
      for (std::size_t k = 0; k < in.ns.size(); ++k) {
        const auto& n = in.ns[k];
        check_instance(l3, where + ", M'#" + std::to_string(j) + ", N#" + std::to_string(k),
                       [&]() -> std::optional<std::string> {
                         setup();
                         return term_mismatch(tm_subst(app_with(*pi, mp, n), in.sigma),
                                              app_with(*pi_s, tm_subst(mp, in.sigma), tm_subst(n, in.sigma)));
                       });
      }
      for (std::size_t k = 0; k < in.ns_delta.size(); ++k) {
        const auto& n2 = in.ns_delta[k];
        check_instance(l3g, where + ", M'#" + std::to_string(j) + ", N'#" + std::to_string(k),
                       [&]() -> std::optional<std::string> {
                         setup();
                         auto lhs = tm_subst(ops.lambda_inv(*pi, mp), ext(in.sigma, in.a, n2));
                         auto rhs = tm_subst(ops.lambda_inv(*pi_s, tm_subst(mp, in.sigma)),
                                             ext(nat_id(delta), pi_s->dom(), n2));
                         return term_mismatch(lhs, rhs);
                       });
      }
    }
  }
  return {l1, l2, l3, l3g, l4};
}

}  // namespace cwflab
