#pragma once

// Suite orchestration: each suite runs its checks over the manifest's named
// fixtures and over families generated on the manifest's small categories.
// Generated families are exhaustive when small and seeded samples otherwise;
// their checks are aggregated per category under the fixture id
// "generated-<category>".

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cwflab/base_cwf.hpp"
#include "cwflab/cwf.hpp"
#include "cwflab/enumerate.hpp"
#include "cwflab/error.hpp"
#include "cwflab/fincat.hpp"
#include "cwflab/internal.hpp"
#include "cwflab/manifest.hpp"
#include "cwflab/modality.hpp"
#include "cwflab/mutate.hpp"
#include "cwflab/pi.hpp"
#include "cwflab/presheaf.hpp"
#include "cwflab/report.hpp"

namespace cwflab {

struct SuiteConfig {
  FixtureBounds bounds;
  std::size_t pi_fiber_budget = kDefaultPiFiberBudget;
  int fuel = kDefaultFuel;
  std::optional<std::string> terminal;  ///< overrides terminal detection for modality
};

inline SuiteConfig config_from(const Manifest& m, unsigned seed) {
  SuiteConfig c;
  c.bounds = m.budgets.bounds;
  c.bounds.seed = seed;
  c.pi_fiber_budget = m.budgets.pi_fiber_budget;
  c.fuel = m.budgets.fuel;
  return c;
}

namespace suite {

/// Per-family sizes derived from the bounds' cap.
struct Caps {
  std::size_t contexts;      ///< generated contexts per category
  std::size_t types;         ///< generated types per context
  std::size_t sigmas = 4;    ///< substitutions per (Δ, Γ)
  std::size_t terms = 4;     ///< terms per type
  std::size_t sigma_primes = 8;
  std::size_t exhaustive;    ///< largest space enumerated before sampling
};

inline Caps caps(const FixtureBounds& b) {
  Caps c{};
  c.contexts = std::max<std::size_t>(2, b.cap / 8);
  c.types = std::max<std::size_t>(2, b.cap / 16);
  c.exhaustive = std::max<std::size_t>(64, 4 * b.cap);
  return c;
}

inline unsigned mix(unsigned seed, std::size_t i) { return seed * 2654435761u + static_cast<unsigned>(i) * 40503u + 1u; }

/// Folds `r` into `into` law by law; the first witness wins and is prefixed.
inline void merge(LawReport& into, const LawReport& r, const std::string& where) {
  for (const auto& c : r) {
    auto it = std::find_if(into.begin(), into.end(), [&](const LawCheck& x) { return x.law == c.law; });
    if (it == into.end()) {
      into.push_back(LawCheck(c.law));
      it = into.end() - 1;
    }
    it->instances += c.instances;
    if (c.failures > 0 && it->failures == 0) it->witness = where + ": " + c.witness;
    it->failures += c.failures;
  }
}

inline LawCheck single(const std::string& law, std::size_t instances, std::optional<std::string> witness) {
  LawCheck c(law);
  c.instances = instances;
  if (witness) {
    c.failures = 1;
    c.witness = *witness;
  }
  return c;
}

inline LawCheck from_violations(const std::string& law, std::size_t instances, const ValidationReport& r) {
  LawCheck c(law);
  c.instances = instances;
  c.failures = r.size();
  if (!r.empty()) c.witness = r.front().law + ": " + r.front().witness;
  return c;
}

inline bool is_capacity(const Error& e) { return e.kind() == ErrorKind::capacity; }

struct Pair {
  std::string fixture;
  DepTy a;
};

/// Categories small enough for generation, by name.
inline std::vector<std::pair<std::string, FinCat>> small_categories(const Manifest& m, const SuiteConfig& cfg) {
  std::vector<std::pair<std::string, FinCat>> out;
  for (const auto& [name, c] : m.docs.categories) {
    if (static_cast<int>(c.object_count()) <= cfg.bounds.max_objects) out.emplace_back(name, c);
  }
  return out;
}

inline std::vector<Presheaf> contexts(const FinCat& c, const SuiteConfig& cfg, std::size_t salt, int max_card = -1) {
  auto k = caps(cfg.bounds);
  return presheaf_family(c, max_card < 0 ? cfg.bounds.max_card : max_card, k.contexts, mix(cfg.bounds.seed, salt),
                         k.exhaustive);
}

/// Generated (Γ, A) with Γ over `c`.
inline std::vector<DepTy> generated_types(const FinCat& c, const SuiteConfig& cfg, std::size_t salt,
                                          int max_card = -1) {
  auto k = caps(cfg.bounds);
  int card = max_card < 0 ? cfg.bounds.max_card : max_card;
  std::vector<DepTy> out;
  auto ctxs = contexts(c, cfg, salt, card);
  for (std::size_t i = 0; i < ctxs.size(); ++i) {
    for (auto& a : depty_family(ctxs[i], card, k.types, mix(cfg.bounds.seed, salt * 131 + i), k.exhaustive)) {
      out.push_back(std::move(a));
    }
  }
  return out;
}

/// Sources Δ for substitutions into Γ: ⊤̂, Γ itself and a couple of small generated presheaves.
inline std::vector<Presheaf> deltas(const Presheaf& gamma, const SuiteConfig& cfg) {
  std::vector<Presheaf> out{terminal_presheaf(gamma.base()), gamma};
  for (auto& p : presheaf_family(gamma.base(), std::min(2, cfg.bounds.max_card), 2, mix(cfg.bounds.seed, 7), 64)) {
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// fincat

inline SuiteResult fincat(const Manifest& m, const SuiteConfig&) {
  SuiteResult s{"fincat", {}};
  for (const auto& [name, c] : m.docs.categories) {
    s.add(name, from_violations("category-laws", c.morphism_count(), validate_category(c)));
    if (auto t = c.terminal_object()) {
      std::optional<std::string> w;
      for (std::size_t d = 0; d < c.object_count() && !w; ++d) {
        if (c.hom(static_cast<int>(d), *t).size() != 1) w = "object " + c.object_name(static_cast<int>(d));
      }
      s.add(name, single("terminal-object", c.object_count(), w));
    }
  }
  LawCheck ch("chain-builder");
  for (int n = 0; n <= kDefaultChainFuel; ++n) {
    auto c = chain(n);
    auto r = validate_category(c);
    ++ch.instances;
    // chain(n) has (n+1)(n+2)/2 morphisms: one for each i <= j.
    if (!r.empty() || c.morphism_count() != static_cast<std::size_t>((n + 1) * (n + 2) / 2)) {
      if (ch.failures++ == 0) ch.witness = "chain(" + std::to_string(n) + ")";
    }
  }
  ++ch.instances;
  try {
    chain(kDefaultChainFuel + 1);
    if (ch.failures++ == 0) ch.witness = "chain beyond fuel was built";
  } catch (const Error& e) {
    if (!is_capacity(e) && ch.failures++ == 0) ch.witness = e.what();
  }
  s.add("builders", ch);
  return s;
}

// ---------------------------------------------------------------------------
// presheaf

inline LawReport presheaf_checks(const Presheaf& g) {
  return {from_violations("presheaf-laws", g.base().morphism_count(), validate_presheaf(g)),
          from_violations("elements-category", g.elem_morphism_count(), validate_category(g.elements().cat))};
}

inline SuiteResult presheaf(const Manifest& m, const SuiteConfig& cfg) {
  SuiteResult s{"presheaf", {}};
  for (const auto& [name, g] : m.docs.presheaves) s.add(name, presheaf_checks(g));
  for (const auto& [name, n] : m.docs.nats) s.add(name, from_violations("naturality", 1, validate_nat(n)));
  for (const auto& [name, c] : m.docs.categories) {
    auto t = terminal_presheaf(c);
    std::optional<std::string> w;
    if (!validate_presheaf(t).empty()) w = "not a presheaf";
    for (std::size_t d = 0; d < c.object_count() && !w; ++d) {
      if (t.size(static_cast<int>(d)) != 1) w = "carrier at " + c.object_name(static_cast<int>(d)) + " is not a singleton";
    }
    s.add(name, single("terminal-presheaf", c.object_count(), w));
  }
  for (const auto& [name, c] : small_categories(m, cfg)) {
    auto fix = "generated-" + name;
    try {
      LawReport agg;
      auto ctxs = contexts(c, cfg, 1);
      for (std::size_t i = 0; i < ctxs.size(); ++i) {
        merge(agg, presheaf_checks(ctxs[i]), "context " + std::to_string(i));
        // nat_id, and composites of endo-transformations, are natural.
        auto ends = sample(enumerate_nats(ctxs[i], ctxs[i], caps(cfg.bounds).exhaustive), 4, cfg.bounds.seed);
        LawCheck nat("naturality");
        nat.instances = 1;
        if (!validate_nat(nat_id(ctxs[i])).empty()) {
          nat.failures = 1;
          nat.witness = "nat_id";
        }
        for (const auto& f : ends) {
          for (const auto& g2 : ends) {
            ++nat.instances;
            if (!validate_nat(nat_compose(g2, f)).empty() && nat.failures++ == 0) nat.witness = "composite";
          }
        }
        merge(agg, {nat}, "context " + std::to_string(i));
      }
      s.add(fix, agg);
    } catch (const Error& e) {
      if (!is_capacity(e)) throw;
      s.skip(fix, "presheaf-laws", e.what());
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// cwf

inline LawReport cwf_laws(const DepTy& a, const SuiteConfig& cfg, const CwfOps& ops = {}) {
  auto k = caps(cfg.bounds);
  const auto& gamma = a.ctx();
  std::vector<std::pair<NatTrans, Term>> sm;
  std::vector<NatTrans> sp;
  LawCheck qn("q-natural");
  auto ds = deltas(gamma, cfg);
  for (std::size_t di = 0; di < ds.size(); ++di) {
    const auto& delta = ds[di];
    auto sigmas = sample(enumerate_nats(delta, gamma, k.exhaustive * 16), k.sigmas, mix(cfg.bounds.seed, di));
    for (const auto& sigma : sigmas) {
      ++qn.instances;
      if (!validate_nat(q_morphism(sigma, a)).empty() && qn.failures++ == 0) qn.witness = "q(σ, A) not natural";
      auto ms = sample(enumerate_terms(ty_subst(a, sigma), k.exhaustive * 16), k.terms, mix(cfg.bounds.seed, di + 1));
      for (auto& mm : ms) sm.emplace_back(sigma, std::move(mm));
    }
    for (auto& x : sample(enumerate_nats(delta, a.comprehension(), k.exhaustive * 16), k.sigma_primes,
                          mix(cfg.bounds.seed, di + 2))) {
      sp.push_back(std::move(x));
    }
  }
  auto r = law_suite_cwf(a, sm, sp, ops);
  r.push_back(qn);
  return r;
}

inline std::vector<Pair> named_pairs(const Manifest& m) {
  std::vector<Pair> out;
  for (const auto& [name, a] : m.docs.deptys) out.push_back({name, a});
  return out;
}

/// Runs `per_type` on every named type and on every generated family.
inline void over_types(SuiteResult& s, const Manifest& m, const SuiteConfig& cfg, std::size_t salt,
                       const std::string& skip_law, const std::function<LawReport(const DepTy&)>& per_type,
                       int max_card = -1) {
  for (const auto& p : named_pairs(m)) {
    try {
      s.add(p.fixture, per_type(p.a));
    } catch (const Error& e) {
      if (!is_capacity(e)) throw;
      s.skip(p.fixture, skip_law, e.what());
    }
  }
  for (const auto& [name, c] : small_categories(m, cfg)) {
    auto fix = "generated-" + name;
    try {
      LawReport agg;
      auto types = generated_types(c, cfg, salt, max_card);
      for (std::size_t i = 0; i < types.size(); ++i) merge(agg, per_type(types[i]), "type " + std::to_string(i));
      s.add(fix, agg);
    } catch (const Error& e) {
      if (!is_capacity(e)) throw;
      s.skip(fix, skip_law, e.what());
    }
  }
}

inline SuiteResult cwf(const Manifest& m, const SuiteConfig& cfg) {
  SuiteResult s{"cwf", {}};
  over_types(s, m, cfg, 2, "p-after-ext", [&](const DepTy& a) { return cwf_laws(a, cfg); });
  return s;
}

// ---------------------------------------------------------------------------
// terms

/// Every assign vector in the product of the fibers, kept when it meets the
/// term coherence condition; compared as a set with enumerate_terms.
inline LawReport term_oracle(const DepTy& a, std::size_t limit) {
  const auto& g = a.ctx();
  const std::size_t n = g.elem_object_count();
  std::size_t product = 1;
  for (std::size_t k = 0; k < n; ++k) {
    auto f = a.fiber_size(static_cast<int>(k));
    if (f == 0) {
      product = 0;
      break;
    }
    if (product > limit / f) throw Error(ErrorKind::capacity, "assign space exceeds " + std::to_string(limit));
    product *= f;
  }
  std::set<std::vector<int>> brute;
  if (product > 0) {
    std::vector<int> cur(n, 0);
    while (true) {
      if (check_term(a, cur).empty()) brute.insert(cur);
      std::size_t k = 0;
      while (k < n && ++cur[k] == static_cast<int>(a.fiber_size(static_cast<int>(k)))) cur[k++] = 0;
      if (k == n) break;
    }
  }
  auto terms = enumerate_terms(a, limit);
  std::set<std::vector<int>> solved;
  LawCheck coh("term-coherence");
  for (const auto& t : terms) {
    solved.insert(t.assign());
    ++coh.instances;
    if (auto r = check_term(a, t.assign()); !r.empty() && coh.failures++ == 0) coh.witness = r.front().witness;
  }
  std::optional<std::string> w;
  if (brute != solved || terms.size() != solved.size()) {
    w = "brute force finds " + std::to_string(brute.size()) + " terms, enumeration " + std::to_string(terms.size());
  }
  return {single("term-oracle", product, w), coh};
}

inline SuiteResult terms(const Manifest& m, const SuiteConfig& cfg) {
  SuiteResult s{"terms", {}};
  over_types(s, m, cfg, 3, "term-oracle", [&](const DepTy& a) { return term_oracle(a, cfg.bounds.limit); });
  return s;
}

// ---------------------------------------------------------------------------
// pi

/// The coherence predicate read straight off its definition, on a table
/// given as a map from (Φ, δ, a) to results.
inline std::optional<std::string> naive_P(const DepTy& a, const DepTy& b, ObjIndex psi, int s,
                                          const std::map<Value, Value>& table) {
  const auto& gamma = a.ctx();
  const auto& ga = b.ctx();
  const auto& c = gamma.base();
  auto label = [&](ObjIndex phi, MorIndex delta, const Value& av) {
    return Value::tuple({atom(c.object_name(phi)), atom(c.morphism(delta).id), av});
  };
  for (int delta : c.morphisms_into(psi)) {
    ObjIndex phi = c.morphism(delta).dom;
    int s1 = gamma.act(delta, s);
    int ka = gamma.elem_object(phi, s1);
    for (std::size_t ai = 0; ai < a.fiber_size(ka); ++ai) {
      const auto& av = a.element(ka, static_cast<int>(ai));
      int x = ga.index(phi, Value::pair(gamma.element(phi, s1), av));
      const auto& r = table.at(label(phi, delta, av));
      int kb = ga.elem_object(phi, x);
      int ri = b.index(kb, r);
      for (int dp : c.morphisms_into(phi)) {
        ObjIndex phi2 = c.morphism(dp).dom;
        const auto& av2 = a.element(gamma.elem_object(phi2, gamma.act(dp, s1)),
                                    a.act(gamma.elem_morphism(dp, s1), static_cast<int>(ai)));
        int x2 = ga.act(dp, x);
        const auto& lhs = table.at(label(phi2, c.compose(delta, dp), av2));
        const auto& rhs = b.element(ga.elem_object(phi2, x2), b.act(ga.elem_morphism(dp, x), ri));
        if (!(lhs == rhs)) return "at " + label(phi, delta, av).to_string() + " along " + c.morphism(dp).id;
      }
    }
  }
  return std::nullopt;
}

/// All total tables at each anchor filtered by naive_P, against the Π fiber;
/// one instance per anchor.
inline LawCheck pi_fiber_oracle(const PiType& pi, std::size_t limit) {
  LawCheck out("pi-fiber-oracle");
  const auto& a = pi.dom();
  const auto& b = pi.cod();
  const auto& gamma = a.ctx();
  const auto& ga = b.ctx();
  const auto& c = gamma.base();
  for (std::size_t k = 0; k < gamma.elem_object_count(); ++k) {
    auto lab = gamma.elem_label(static_cast<int>(k));
    struct Slot {
      Value label;
      int kb;
    };
    std::vector<Slot> slots;
    for (int delta : c.morphisms_into(lab.obj)) {
      ObjIndex phi = c.morphism(delta).dom;
      int s1 = gamma.act(delta, lab.elem);
      int ka = gamma.elem_object(phi, s1);
      for (const auto& av : a.fiber(ka)) {
        int x = ga.index(phi, Value::pair(gamma.element(phi, s1), av));
        slots.push_back({Value::tuple({atom(c.object_name(phi)), atom(c.morphism(delta).id), av}),
                         ga.elem_object(phi, x)});
      }
    }
    std::size_t product = 1;
    bool empty = false;
    for (const auto& sl : slots) {
      auto f = b.fiber_size(sl.kb);
      if (f == 0) {
        empty = true;
        break;
      }
      if (product > limit / f) throw Error(ErrorKind::capacity, "pi oracle table space exceeds " + std::to_string(limit));
      product *= f;
    }
    std::set<Value> brute;
    if (!empty) {
      std::vector<int> cur(slots.size(), 0);
      while (true) {
        std::map<Value, Value> table;
        std::vector<Value> entries;
        for (std::size_t j = 0; j < slots.size(); ++j) {
          const auto& r = b.element(slots[j].kb, cur[j]);
          table.emplace(slots[j].label, r);
          const auto& l = slots[j].label;
          entries.push_back(Value::tuple({l[0], l[1], l[2], r}));
        }
        if (!naive_P(a, b, lab.obj, lab.elem, table)) {
          std::sort(entries.begin(), entries.end());
          brute.insert(Value::tuple(std::move(entries)));
        }
        std::size_t j = 0;
        while (j < slots.size() && ++cur[j] == static_cast<int>(b.fiber_size(slots[j].kb))) cur[j++] = 0;
        if (j == slots.size()) break;
      }
    }
    ++out.instances;
    auto fib = pi.ty().fiber(static_cast<int>(k));
    std::set<Value> got(fib.begin(), fib.end());
    if (got != brute && out.failures++ == 0) {
      out.witness = "anchor " + elem_object_name(gamma, lab.obj, lab.elem) + ": fiber has " +
                    std::to_string(got.size()) + " tables, brute force " + std::to_string(brute.size());
    }
  }
  return out;
}

/// Λ against Λ⁻¹: counts, element-wise round trips, and image of Λ.
inline LawReport pi_iso(const PiType& pi, std::size_t limit) {
  auto ms = enumerate_terms(pi.cod(), limit);
  auto ns = enumerate_terms(pi.ty(), limit);
  std::optional<std::string> count;
  if (ms.size() != ns.size()) {
    count = "|Tm(Γ.A,B)| = " + std::to_string(ms.size()) + ", |Tm(Γ,Π)| = " + std::to_string(ns.size());
  }
  LawCheck rt("pi-iso-roundtrip");
  std::set<std::vector<int>> image;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    check_instance(rt, "Tm(Γ.A,B) #" + std::to_string(i), [&]() -> std::optional<std::string> {
      auto l = lambda(pi, ms[i]);
      image.insert(l.assign());
      return term_mismatch(lambda_inv(pi, l), ms[i]);
    });
  }
  for (std::size_t i = 0; i < ns.size(); ++i) {
    check_instance(rt, "Tm(Γ,Π) #" + std::to_string(i),
                   [&] { return term_mismatch(lambda(pi, lambda_inv(pi, ns[i])), ns[i]); });
  }
  std::set<std::vector<int>> all;
  for (const auto& n : ns) all.insert(n.assign());
  std::optional<std::string> img;
  if (image != all) img = "image of Λ differs from Tm(Γ,Π)";
  return {single("pi-iso-count", ms.size() + ns.size(), count), rt, single("pi-lambda-image", ms.size(), img)};
}

/// Law-suite instances for (A, B): substitutions from the usual Δs, and
/// sampled terms of each kind.
inline std::vector<PiInstance> pi_instances(const DepTy& a, const DepTy& b, const SuiteConfig& cfg,
                                            std::size_t budget) {
  auto k = caps(cfg.bounds);
  auto lim = k.exhaustive * 16;
  const auto& gamma = a.ctx();
  auto pi = pi_ty(a, b, budget);
  auto ms = sample(enumerate_terms(b, lim), k.terms, cfg.bounds.seed);
  auto ns = sample(enumerate_terms(a, lim), k.terms, mix(cfg.bounds.seed, 1));
  auto pis = sample(enumerate_terms(pi.ty(), lim), k.terms, mix(cfg.bounds.seed, 2));
  std::vector<PiInstance> out;
  auto ds = deltas(gamma, cfg);
  for (std::size_t di = 0; di < ds.size(); ++di) {
    for (auto& sigma : sample(enumerate_nats(ds[di], gamma, lim), 2, mix(cfg.bounds.seed, 3 + di))) {
      auto nd = sample(enumerate_terms(ty_subst(a, sigma), lim), k.terms, mix(cfg.bounds.seed, 9 + di));
      out.push_back({std::move(sigma), a, b, ms, ns, std::move(nd), pis});
    }
  }
  return out;
}

/// Codomain families B over Γ.A: A weakened by itself, and generated ones.
inline std::vector<DepTy> pi_codomains(const DepTy& a, const SuiteConfig& cfg, std::size_t salt) {
  std::vector<DepTy> out{ty_subst(a, proj_p(a.ctx(), a))};
  auto k = caps(cfg.bounds);
  for (auto& b : depty_family(a.comprehension(), std::min(2, cfg.bounds.max_card), 2, mix(cfg.bounds.seed, salt),
                              k.exhaustive)) {
    out.push_back(std::move(b));
  }
  return out;
}

inline LawReport pi_checks(const DepTy& a, const SuiteConfig& cfg, std::size_t salt) {
  LawReport agg;
  auto bs = pi_codomains(a, cfg, salt);
  for (std::size_t i = 0; i < bs.size(); ++i) {
    auto where = "B #" + std::to_string(i);
    auto pi = pi_ty(a, bs[i], cfg.pi_fiber_budget);
    merge(agg, {pi_fiber_oracle(pi, 10 * cfg.pi_fiber_budget)}, where);
    merge(agg, pi_iso(pi, cfg.bounds.limit), where);
    merge(agg, law_suite_pi(pi_instances(a, bs[i], cfg, cfg.pi_fiber_budget)), where);
  }
  return agg;
}

inline SuiteResult pi(const Manifest& m, const SuiteConfig& cfg) {
  SuiteResult s{"pi", {}};
  std::size_t salt = 100;
  over_types(s, m, cfg, 4, "pi-iso-roundtrip", [&](const DepTy& a) { return pi_checks(a, cfg, ++salt); },
             std::min(2, cfg.bounds.max_card));
  return s;
}

// ---------------------------------------------------------------------------
// pi-mutation: each corrupted operation must be caught by some law.

inline SuiteResult pi_mutation(const Manifest& m, const SuiteConfig& cfg) {
  SuiteResult s{"pi-mutation", {}};
  std::vector<PiInstance> inst;
  std::vector<DepTy> types;
  for (const auto& p : named_pairs(m)) types.push_back(p.a);
  for (const auto& [name, c] : small_categories(m, cfg)) {
    for (auto& a : generated_types(c, cfg, 5, std::min(2, cfg.bounds.max_card))) types.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < types.size(); ++i) {
    try {
      for (const auto& b : pi_codomains(types[i], cfg, 500 + i)) {
        for (auto& x : pi_instances(types[i], b, cfg, cfg.pi_fiber_budget)) inst.push_back(std::move(x));
      }
    } catch (const Error& e) {
      if (!is_capacity(e)) throw;
    }
  }
  const std::vector<std::pair<std::string, PiOps>> muts = {{"pi-action", mutate::corrupt_pi_action()},
                                                           {"lambda", mutate::corrupt_lambda()},
                                                           {"lambda-inv", mutate::corrupt_lambda_inv()}};
  std::map<std::string, std::pair<std::size_t, std::string>> detected;  // law -> (failures, mutations)
  for (const auto& law : {"pi-subst", "lambda-subst", "app-subst", "app-subst-general", "beta"}) detected[law];
  for (const auto& [mname, ops] : muts) {
    for (const auto& c : law_suite_pi(inst, ops)) {
      auto& d = detected[c.law];
      if (c.failures > 0) {
        d.first += c.failures;
        d.second += (d.second.empty() ? "detected by " : ", ") + mname;
      }
    }
  }
  for (const auto& [law, d] : detected) {
    LawCheck c("pi-mutation-detected");
    c.instances = inst.size();
    if (d.first == 0) {
      c.failures = 1;
      c.witness = "no mutation violates " + law;
    }
    s.add(law, c);
  }
  // The same sensitivity check for the CwF laws under a corrupted ext.
  std::map<std::string, std::size_t> cwf_hits{{"p-after-ext", 0}, {"v-under-ext", 0}, {"ext-eta", 0}};
  std::size_t n = 0;
  for (const auto& a : types) {
    for (const auto& c : cwf_laws(a, cfg, mutate::corrupt_ext())) {
      if (cwf_hits.contains(c.law)) cwf_hits[c.law] += c.failures;
    }
    ++n;
  }
  for (const auto& [law, hits] : cwf_hits) {
    LawCheck c("ext-mutation-detected");
    c.instances = n;
    if (hits == 0) {
      c.failures = 1;
      c.witness = "corrupted ext passes " + law;
    }
    s.add(law, c);
  }
  for (const auto& [name, b] : m.docs.base_cwfs) {
    auto bad = mutate::corrupt_base_ext(b);
    if (!bad) {
      s.skip(name, "base-mutation-detected", "every listed extension lands in a singleton hom-set");
      continue;
    }
    LawCheck c("base-mutation-detected");
    c.instances = 1;
    if (validate_base_cwf(*bad).empty()) {
      c.failures = 1;
      c.witness = "redirected ext entry not detected";
    }
    s.add(name, c);
  }
  return s;
}

// ---------------------------------------------------------------------------
// internal

/// One instance per element round-tripped on either side, plus the
/// cardinality comparison itself (which is all there is when both are empty).
inline LawCheck iso_check(const std::string& law, const IsoReport& r) {
  LawCheck c(law);
  c.instances = r.terms + r.functions + 1;
  c.failures = r.failures;
  c.witness = r.witness;
  if (r.terms != r.functions) {
    ++c.failures;
    if (c.witness.empty()) {
      c.witness = "|Tm| = " + std::to_string(r.terms) + " but the function space has " + std::to_string(r.functions);
    }
  }
  return c;
}

inline LawReport internal_checks(const BaseCwF& b) {
  LawReport out{from_violations("base-cwf-valid", 1, validate_base_cwf(b))};
  if (!out.front().witness.empty()) return out;
  out.push_back(iso_check("ctx-iso", ctx_iso(b)));
  out.push_back(iso_check("hom-iso", hom_iso(b)));
  out.push_back(iso_check("vty-iso", vty_iso(b)));
  out.push_back(iso_check("vtm-iso", vtm_iso(b)));
  auto cl = closed_iso(b);
  auto cc = iso_check("closed-vty-iso", cl.closed);
  auto at = iso_check("closed-vty-iso", cl.at_terminal);
  cc.instances += at.instances + 1;
  if (at.failures > 0 && cc.failures == 0) cc.witness = "at terminal: " + at.witness;
  cc.failures += at.failures + cl.cross_failures;
  if (cl.cross_failures > 0 && cc.witness.empty()) cc.witness = cl.cross_witness;
  out.push_back(cc);
  std::optional<std::string> w;
  try {
    closed_vtm(b);
  } catch (const Error& e) {
    w = e.what();
  }
  out.push_back(single("closed-vtm-valid", 1, w));
  for (auto& c : internal_faithfulness(b, internal_terms(b))) out.push_back(std::move(c));
  return out;
}

inline SuiteResult internal(const Manifest& m, const SuiteConfig&) {
  SuiteResult s{"internal", {}};
  for (const auto& [name, b] : m.docs.base_cwfs) {
    try {
      s.add(name, internal_checks(b));
    } catch (const Error& e) {
      if (!is_capacity(e)) throw;
      s.skip(name, "base-cwf-valid", e.what());
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// modality

inline LawReport box_checks(const Presheaf& g, const std::string& t) {
  return {single("box-idempotent", 1, box_idempotence_witness(g, t)),
          from_violations("counit-naturality", g.base().morphism_count(), validate_nat(counit(g, t))),
          single("counit-identity", 1, counit_identity_witness(box_presheaf(g, t), t))};
}

inline LawReport box_type_checks(const DepTy& a, const std::string& t, const SuiteConfig& cfg) {
  LawCheck tm("box-tm-valid");
  for (const auto& m : sample(enumerate_terms(a, caps(cfg.bounds).exhaustive * 16), 4, cfg.bounds.seed)) {
    check_instance(tm, "", [&]() -> std::optional<std::string> {
      auto bm = box_tm(m, t);
      if (auto r = check_term(bm.ty(), bm.assign()); !r.empty()) return r.front().witness;
      // A second application changes nothing.
      return term_mismatch(box_tm(bm, t), bm);
    });
  }
  return {single("box-comprehension", 1, box_comprehension_witness(a, t)), tm};
}

/// (s, a, b) ↦ (σ(s), a, b), checked against q(σ, Γ) element-wise.
inline std::optional<std::string> tele_subst_witness(const NatTrans& sigma, const Telescope& g) {
  auto ts = tele_subst(sigma, g);
  if (auto r = validate_nat(ts.q); !r.empty()) return "q(σ, Γ) is not natural";
  const auto& src = ts.tele.ctx();
  const auto& dst = g.ctx();
  const std::size_t k = g.size();
  for (std::size_t d = 0; d < src.base().object_count(); ++d) {
    int di = static_cast<int>(d);
    for (std::size_t i = 0; i < src.size(di); ++i) {
      auto [root, parts] = LetboxFrame::split(src.element(di, static_cast<int>(i)), k);
      auto expect = renest(sigma.dst().element(di, sigma.at(di, sigma.src().index(di, root))), parts);
      if (!(dst.element(di, ts.q.at(di, static_cast<int>(i))) == expect)) {
        return "at " + src.element(di, static_cast<int>(i)).to_string();
      }
    }
  }
  return std::nullopt;
}

/// Up to `n` types over `gamma` that have at least one term, drawn from a
/// larger seeded family.
inline std::vector<DepTy> inhabited_types(const Presheaf& gamma, std::size_t n, unsigned seed, const Caps& k) {
  std::vector<DepTy> out;
  for (auto& a : depty_family(gamma, 2, 8 * n, seed, k.exhaustive)) {
    if (out.size() == n) break;
    if (!enumerate_terms(a, k.exhaustive * 16).empty()) out.push_back(std::move(a));
  }
  return out;
}

/// letbox on every (M, N) sampled for telescopes of length 0..2 over □Δ.
inline LawReport letbox_checks(const Presheaf& delta, const std::string& t, const SuiteConfig& cfg, std::size_t salt) {
  LawCheck valid("letbox-valid"), reindex("letbox-reindex"), intro("box-intro"), tsub("tele-subst");
  auto k = caps(cfg.bounds);
  auto lim = k.exhaustive * 16;
  auto bd = box_presheaf(delta, t);
  auto as = inhabited_types(bd, 2, mix(cfg.bounds.seed, salt), k);
  for (std::size_t ai = 0; ai < as.size(); ++ai) {
    const auto& a = as[ai];
    Telescope tel(bd);
    for (int len = 0; len <= 2; ++len) {
      if (len > 0) {
        auto next = inhabited_types(tel.ctx(), 1, mix(cfg.bounds.seed, salt * 7 + ai * 3 + len), k);
        if (next.empty()) break;
        tel = tel.extend(next.front());
      }
      auto where = "A #" + std::to_string(ai) + ", |Γ| = " + std::to_string(len);
      auto fr = letbox_frame(delta, a, tel, t);
      check_instance(tsub, where, [&] { return tele_subst_witness(fr.p, tel); });
      for (const auto& m0 : sample(enumerate_terms(a, lim), 2, cfg.bounds.seed)) {
        check_instance(intro, where, [&]() -> std::optional<std::string> {
          auto bi = box_intro(m0, tel, t);
          if (auto w = depty_mismatch(bi.ty(), fr.box_a_k)) return "box(M) type: " + *w;
          if (auto r = check_term(bi.ty(), bi.assign()); !r.empty()) return r.front().witness;
          return std::nullopt;
        });
      }
      auto bs = inhabited_types(fr.box_a_k.comprehension(), 2, mix(cfg.bounds.seed, salt * 11 + ai + len), k);
      for (const auto& b : bs) {
        auto ms = sample(enumerate_terms(fr.box_a_k, lim), k.terms, cfg.bounds.seed);
        auto ns = sample(enumerate_terms(fr.n_type(b), lim), k.terms, mix(cfg.bounds.seed, 1));
        for (const auto& m : ms) {
          for (const auto& n : ns) {
            std::optional<Term> out;
            check_instance(valid, where, [&]() -> std::optional<std::string> {
              out = letbox(fr, b, m, n);
              return std::nullopt;
            });
            if (out) {
              check_instance(reindex, where, [&] { return term_mismatch(*out, tm_subst(n, fr.plug(m))); });
            }
          }
        }
      }
    }
  }
  return {valid, reindex, intro, tsub};
}

inline std::optional<std::string> terminal_of(const FinCat& c, const SuiteConfig& cfg) {
  if (cfg.terminal) {
    if (auto d = c.find_object(*cfg.terminal); d && c.is_terminal(*d)) return cfg.terminal;
    return std::nullopt;
  }
  if (auto t = c.terminal_object()) return c.object_name(*t);
  return std::nullopt;
}

inline SuiteResult modality(const Manifest& m, const SuiteConfig& cfg) {
  SuiteResult s{"modality", {}};
  std::size_t salt = 300;
  for (const auto& [name, g] : m.docs.presheaves) {
    auto t = terminal_of(g.base(), cfg);
    if (!t) continue;
    auto r = box_checks(g, *t);
    for (auto& c : letbox_checks(g, *t, cfg, ++salt)) r.push_back(std::move(c));
    s.add(name, r);
  }
  for (const auto& [name, a] : m.docs.deptys) {
    if (auto t = terminal_of(a.ctx().base(), cfg)) s.add(name, box_type_checks(a, *t, cfg));
  }
  for (const auto& [name, c] : small_categories(m, cfg)) {
    auto t = terminal_of(c, cfg);
    if (!t) continue;
    LawReport agg;
    auto ctxs = contexts(c, cfg, 6);
    for (std::size_t i = 0; i < ctxs.size(); ++i) merge(agg, box_checks(ctxs[i], *t), "context " + std::to_string(i));
    auto types = generated_types(c, cfg, 6);
    for (std::size_t i = 0; i < types.size(); ++i) {
      merge(agg, box_type_checks(types[i], *t, cfg), "type " + std::to_string(i));
    }
    auto small = contexts(c, cfg, 8, std::min(2, cfg.bounds.max_card));
    for (std::size_t i = 0; i < small.size() && i < 3; ++i) {
      merge(agg, letbox_checks(small[i], *t, cfg, ++salt), "context " + std::to_string(i));
    }
    s.add("generated-" + name, agg);
  }
  return s;
}

}  // namespace suite

inline SuiteResult run_suite(const std::string& name, const Manifest& m, const SuiteConfig& cfg) {
  static const std::map<std::string, std::function<SuiteResult(const Manifest&, const SuiteConfig&)>> table = {
      {"fincat", suite::fincat},     {"presheaf", suite::presheaf}, {"cwf", suite::cwf},
      {"terms", suite::terms},       {"pi", suite::pi},             {"pi-mutation", suite::pi_mutation},
      {"internal", suite::internal}, {"modality", suite::modality}};
  auto it = table.find(name);
  if (it == table.end()) throw Error(ErrorKind::lookup, "unknown suite '" + name + "'");
  return it->second(m, cfg);
}

/// Runs the manifest's suites, or `only` when given ("all" for every suite).
inline Report run_suites(const Manifest& m, const SuiteConfig& cfg, const std::vector<std::string>& only = {}) {
  std::vector<std::string> names;
  if (only.empty()) {
    for (const auto& r : m.suites) names.push_back(r.name);
  } else {
    for (const auto& n : only) {
      if (n == "all") {
        for (const auto& k : known_suites()) names.push_back(k);
      } else {
        names.push_back(n);
      }
    }
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  Report r;
  for (const auto& n : names) r.suites.push_back(run_suite(n, m, cfg));
  r.sort();
  return r;
}

}  // namespace cwflab
