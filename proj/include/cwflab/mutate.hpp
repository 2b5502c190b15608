#pragma once

// Deliberately broken data and operations, for checking that validators and
// law suites detect what they claim to detect. Nothing outside tests and the
// sensitivity suites should include this header.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cwflab/base_cwf.hpp"
#include "cwflab/cwf.hpp"
#include "cwflab/fincat.hpp"
#include "cwflab/pi.hpp"
#include "cwflab/presheaf.hpp"

namespace cwflab::mutate {

struct Access {
  static DepTy depty(Presheaf ctx, Presheaf family) { return DepTy(std::move(ctx), std::move(family)); }
  static Term term(DepTy ty, std::vector<int> assign) { return Term(std::move(ty), std::move(assign)); }
  static PiType pi(const PiType& base, DepTy ty) {
    return PiType(std::make_shared<const PiType::Data>(
        PiType::Data{base.data_->index, std::move(ty), base.data_->tables}));
  }
};

/// The same category with one composition entry g ∘ f replaced.
inline FinCat remap_compose(const FinCat& c, const std::string& g, const std::string& f,
                            const std::string& result) {
  std::vector<MorphismSpec> mors;
  std::map<std::string, std::string> ids;
  std::vector<CompositionSpec> comp;
  for (const auto& m : c.morphisms()) mors.push_back({m.id, c.object_name(m.dom), c.object_name(m.cod)});
  for (std::size_t d = 0; d < c.object_count(); ++d) {
    ids[c.object_name(static_cast<int>(d))] = c.morphism(c.identity(static_cast<int>(d))).id;
  }
  for (std::size_t gi = 0; gi < c.morphism_count(); ++gi) {
    for (int fi : c.morphisms_into(c.morphism(static_cast<int>(gi)).dom)) {
      const auto& gid = c.morphism(static_cast<int>(gi)).id;
      const auto& fid = c.morphism(fi).id;
      auto r = (gid == g && fid == f) ? result : c.morphism(c.compose(static_cast<int>(gi), fi)).id;
      comp.push_back({gid, fid, r});
    }
  }
  return FinCat::make(c.object_names(), mors, ids, comp);
}

/// The same presheaf with action(mor, arg) replaced; laws are not checked.
inline Presheaf remap_action(const Presheaf& g, const std::string& mor, const Value& arg, const Value& result) {
  const auto& c = g.base();
  int m = c.morphism_index(mor);
  std::vector<std::vector<Value>> car(c.object_count());
  std::vector<std::vector<int>> act(c.morphism_count());
  for (std::size_t d = 0; d < car.size(); ++d) {
    auto span = g.carrier(static_cast<int>(d));
    car[d].assign(span.begin(), span.end());
  }
  for (std::size_t k = 0; k < act.size(); ++k) act[k] = g.action_table(static_cast<int>(k));
  act[m][g.index(c.morphism(m).cod, arg)] = g.index(c.morphism(m).dom, result);
  return Presheaf::from_tables(c, std::move(car), std::move(act));
}

/// The same dependent type with one action entry along element morphism e replaced.
inline DepTy remap_depty_action(const DepTy& a, int e, int arg, int result) {
  return Access::depty(a.ctx(), remap_action(a.family(), a.family().base().morphism(e).id,
                                             a.family().element(a.family().base().morphism(e).cod, arg),
                                             a.family().element(a.family().base().morphism(e).dom, result)));
}

/// A natural transformation with one component entry moved to the next
/// element of its target fiber, at the first place where that is possible.
inline NatTrans bump(const NatTrans& s) {
  auto comp = s.components();
  for (std::size_t d = 0; d < comp.size(); ++d) {
    auto n = static_cast<int>(s.dst().size(static_cast<int>(d)));
    if (n >= 2 && !comp[d].empty()) {
      comp[d][0] = (comp[d][0] + 1) % n;
      break;
    }
  }
  return NatTrans::from_tables(s.src(), s.dst(), std::move(comp));
}

/// A term with one value moved to the next element of its fiber.
inline Term bump(const Term& m) {
  auto assign = m.assign();
  for (std::size_t k = 0; k < assign.size(); ++k) {
    auto n = static_cast<int>(m.ty().fiber_size(static_cast<int>(k)));
    if (n >= 2) {
      assign[k] = (assign[k] + 1) % n;
      break;
    }
  }
  return Access::term(m.ty(), std::move(assign));
}

/// ext with one component corrupted.
inline CwfOps corrupt_ext() {
  CwfOps ops;
  ops.ext = [](const NatTrans& s, const DepTy& a, const Term& m) { return bump(cwflab::ext(s, a, m)); };
  return ops;
}

/// Π with the action along its first non-identity element morphism whose
/// target fiber has two or more elements shifted by one.
inline PiOps corrupt_pi_action() {
  PiOps ops;
  ops.pi_ty = [](const DepTy& a, const DepTy& b) {
    auto pi = cwflab::pi_ty(a, b);
    const auto& ty = pi.ty();
    const auto& el = ty.family().base();
    for (std::size_t e = 0; e < el.morphism_count(); ++e) {
      int ei = static_cast<int>(e);
      if (el.is_identity(ei)) continue;
      const auto& table = ty.action_table(ei);
      auto n = static_cast<int>(ty.fiber_size(el.morphism(ei).dom));
      if (n >= 2 && !table.empty()) {
        return Access::pi(pi, remap_depty_action(ty, ei, 0, (table[0] + 1) % n));
      }
    }
    return pi;
  };
  return ops;
}

inline PiOps corrupt_lambda() {
  PiOps ops;
  ops.lambda = [](const PiType& p, const Term& m) { return bump(cwflab::lambda(p, m)); };
  return ops;
}

inline PiOps corrupt_lambda_inv() {
  PiOps ops;
  ops.lambda_inv = [](const PiType& p, const Term& m) { return bump(cwflab::lambda_inv(p, m)); };
  return ops;
}

/// The base CwF with its first redirectable extension entry sent to another
/// morphism with the same domain and codomain; nullopt if every listed
/// extension lands in a singleton hom-set.
inline std::optional<BaseCwF> corrupt_base_ext(const BaseCwF& b) {
  for (const auto& [k, r] : b.ext) {
    auto hom = hom_set(b.cat, b.dom(r), b.cod(r));
    for (const auto& other : hom) {
      if (other != r) {
        BaseCwF out = b;
        out.ext[k] = other;
        return out;
      }
    }
  }
  return std::nullopt;
}

}  // namespace cwflab::mutate
