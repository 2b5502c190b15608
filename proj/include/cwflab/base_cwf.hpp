#pragma once

// Finitely presented CwF structure on a finite category, the input to
// internalization. All tables are keyed by caller-supplied identifiers.
//
// Key conventions:
//   ty_subst  (S, σ)          S ∈ Ty(cod σ)        -> S{σ} ∈ Ty(dom σ)
//   tm_subst  (S, t, σ)       t ∈ Tm(cod σ, S)     -> t{σ} ∈ Tm(dom σ, S{σ})
//   compr/p/v (Ψ, S)
//   ext       (σ, S, t)       σ : Φ -> Ψ, t ∈ Tm(Φ, S{σ}) -> ⟨σ,t⟩ : Φ -> Ψ.S
//   pi        (Ψ, S, T)       T ∈ Ty(Ψ.S)
//   lam       (Ψ, S, T, t)    t ∈ Tm(Ψ.S, T)
//   app       (Ψ, S, T, t, s) t ∈ Tm(Ψ, Π(S,T)), s ∈ Tm(Ψ, S)
//
// Term identifiers are scoped by (object, type), which is why tm_subst is
// keyed by the type as well. ty_subst and tm_subst must be total; the
// remaining tables may be partial, and laws are checked wherever every entry
// they mention is present. The one exception is the surjective-pairing law,
// which needs ext at every σ' into a listed comprehension.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cwflab/error.hpp"
#include "cwflab/fincat.hpp"

namespace cwflab {

struct BasePi {
  std::map<std::tuple<std::string, std::string, std::string>, std::string> pi;
  std::map<std::tuple<std::string, std::string, std::string, std::string>, std::string> lam;
  std::map<std::tuple<std::string, std::string, std::string, std::string, std::string>, std::string> app;
};

struct BaseCwF {
  FinCat cat = terminal_category();
  std::string terminal;
  std::map<std::string, std::string> bang;
  std::map<std::string, std::vector<std::string>> ty;
  std::map<std::pair<std::string, std::string>, std::string> ty_subst;
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> tm;
  std::map<std::tuple<std::string, std::string, std::string>, std::string> tm_subst;
  std::map<std::pair<std::string, std::string>, std::string> compr;
  std::map<std::pair<std::string, std::string>, std::string> p;
  std::map<std::pair<std::string, std::string>, std::string> v;
  std::map<std::tuple<std::string, std::string, std::string>, std::string> ext;
  std::optional<BasePi> pi;

  // Lookups; missing entries are lookup errors.
  const std::vector<std::string>& types(const std::string& obj) const { return get(ty, obj, "ty"); }
  const std::vector<std::string>& terms(const std::string& obj, const std::string& s) const {
    return get(tm, {obj, s}, "tm");
  }
  const std::string& sub_ty(const std::string& s, const std::string& sigma) const {
    return get(ty_subst, {s, sigma}, "ty_subst");
  }
  const std::string& sub_tm(const std::string& s, const std::string& t, const std::string& sigma) const {
    return get(tm_subst, {s, t, sigma}, "tm_subst");
  }
  const std::string& dom(const std::string& mor) const { return cat.object_name(cat.morphism(cat.morphism_index(mor)).dom); }
  const std::string& cod(const std::string& mor) const { return cat.object_name(cat.morphism(cat.morphism_index(mor)).cod); }
  const std::string& id(const std::string& obj) const { return cat.morphism(cat.identity(cat.object_index(obj))).id; }
  std::string comp(const std::string& g, const std::string& f) const { return compose(cat, g, f); }

  bool has_type(const std::string& obj, const std::string& s) const {
    auto it = ty.find(obj);
    return it != ty.end() && std::find(it->second.begin(), it->second.end(), s) != it->second.end();
  }
  bool has_term(const std::string& obj, const std::string& s, const std::string& t) const {
    auto it = tm.find({obj, s});
    return it != tm.end() && std::find(it->second.begin(), it->second.end(), t) != it->second.end();
  }

  /// q(σ, S) = ⟨σ ∘ p, v⟩ : Φ.S{σ} -> Ψ.S, when every entry it needs is listed.
  std::optional<std::string> q(const std::string& sigma, const std::string& s) const {
    const auto& phi = dom(sigma);
    auto ss = ty_subst.find({s, sigma});
    if (ss == ty_subst.end()) return std::nullopt;
    auto pp = p.find({phi, ss->second});
    auto vv = v.find({phi, ss->second});
    if (pp == p.end() || vv == v.end()) return std::nullopt;
    auto e = ext.find({comp(sigma, pp->second), s, vv->second});
    if (e == ext.end()) return std::nullopt;
    return e->second;
  }

 private:
  template <class M>
  static const typename M::mapped_type& get(const M& m, const typename M::key_type& k, const char* table) {
    auto it = m.find(k);
    if (it == m.end()) throw Error(ErrorKind::lookup, std::string(table) + " entry missing");
    return it->second;
  }
};

namespace detail {

inline std::string key(std::initializer_list<std::string> parts) {
  std::string out = "(";
  bool first = true;
  for (const auto& p : parts) {
    if (!first) out += ",";
    first = false;
    out += p;
  }
  return out + ")";
}

}  // namespace detail

/// Every violated CwF law of a base CwF. Dangling identifiers are structural errors.
inline ValidationReport validate_base_cwf(const BaseCwF& b) {
  using detail::key;
  const auto& c = b.cat;
  ValidationReport r = validate_category(c);
  auto obj = [&](const std::string& o) { c.object_index(o); };
  auto mor = [&](const std::string& m) { c.morphism_index(m); };
  auto dangling = [](const std::string& what) { throw Error(ErrorKind::structural, "dangling reference: " + what); };
  auto guard = [&](auto&& f, const std::string& what) {
    try {
      f();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::lookup) dangling(what);
      throw;
    }
  };

  guard([&] { obj(b.terminal); }, "terminal " + b.terminal);
  for (std::size_t d = 0; d < c.object_count(); ++d) {
    const auto& o = c.object_name(static_cast<int>(d));
    auto it = b.bang.find(o);
    const auto& h = c.hom(static_cast<int>(d), c.object_index(b.terminal));
    if (it == b.bang.end() || h.size() != 1 || c.morphism(h.front()).id != it->second) {
      r.push_back({"terminal", o});
    }
    if (!b.ty.contains(o)) throw Error(ErrorKind::structural, "ty missing for object " + o);
  }
  for (const auto& [o, types] : b.ty) {
    guard([&] { obj(o); }, "ty object " + o);
    for (const auto& s : types) {
      if (!b.tm.contains({o, s})) throw Error(ErrorKind::structural, "tm missing for " + key({o, s}));
    }
  }
  for (const auto& [k, _] : b.tm) {
    if (!b.has_type(k.first, k.second)) dangling("tm " + key({k.first, k.second}));
  }
  for (const auto& [k, res] : b.ty_subst) guard([&] { mor(k.second); }, "ty_subst " + key({k.first, k.second}));
  for (const auto& [k, res] : b.tm_subst) guard([&] { mor(std::get<2>(k)); }, "tm_subst morphism");

  // Substitution: totality, typing, identity and composition.
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    const auto& sm = c.morphism(static_cast<int>(m));
    const auto& psi = c.object_name(sm.cod);
    const auto& phi = c.object_name(sm.dom);
    for (const auto& s : b.types(psi)) {
      auto it = b.ty_subst.find({s, sm.id});
      if (it == b.ty_subst.end()) {
        r.push_back({"ty-subst-total", key({s, sm.id})});
        continue;
      }
      if (!b.has_type(phi, it->second)) {
        r.push_back({"ty-subst-type", key({s, sm.id})});
        continue;
      }
      if (c.is_identity(static_cast<int>(m)) && it->second != s) r.push_back({"ty-subst-identity", key({s, sm.id})});
      for (const auto& t : b.terms(psi, s)) {
        auto jt = b.tm_subst.find({s, t, sm.id});
        if (jt == b.tm_subst.end()) {
          r.push_back({"tm-subst-total", key({s, t, sm.id})});
          continue;
        }
        if (!b.has_term(phi, it->second, jt->second)) {
          r.push_back({"tm-subst-type", key({s, t, sm.id})});
          continue;
        }
        if (c.is_identity(static_cast<int>(m)) && jt->second != t) {
          r.push_back({"tm-subst-identity", key({s, t, sm.id})});
        }
      }
    }
  }
  if (!r.empty()) return r;  // composition laws assume total, well-typed tables
  for (std::size_t g = 0; g < c.morphism_count(); ++g) {
    const auto& sg = c.morphism(static_cast<int>(g));
    for (int f : c.morphisms_into(sg.dom)) {
      const auto& sf = c.morphism(f);
      auto gf = c.morphism(c.compose(static_cast<int>(g), f)).id;
      for (const auto& s : b.types(c.object_name(sg.cod))) {
        const auto& sg1 = b.sub_ty(s, sg.id);
        if (b.sub_ty(s, gf) != b.sub_ty(sg1, sf.id)) r.push_back({"ty-subst-composition", key({s, sg.id, sf.id})});
        else {
          for (const auto& t : b.terms(c.object_name(sg.cod), s)) {
            if (b.sub_tm(s, t, gf) != b.sub_tm(sg1, b.sub_tm(s, t, sg.id), sf.id)) {
              r.push_back({"tm-subst-composition", key({s, t, sg.id, sf.id})});
            }
          }
        }
      }
    }
  }

  // Comprehension, projection, variable.
  for (const auto& [k, x] : b.compr) {
    const auto& [psi, s] = k;
    if (!b.has_type(psi, s)) dangling("compr " + key({psi, s}));
    guard([&] { obj(x); }, "compr result " + x);
    auto pp = b.p.find(k);
    auto vv = b.v.find(k);
    if (pp == b.p.end() || vv == b.v.end()) throw Error(ErrorKind::structural, "p or v missing for " + key({psi, s}));
    guard([&] { mor(pp->second); }, "p " + pp->second);
    if (b.dom(pp->second) != x || b.cod(pp->second) != psi) {
      r.push_back({"p-type", key({psi, s})});
      continue;
    }
    if (!b.has_term(x, b.sub_ty(s, pp->second), vv->second)) r.push_back({"v-type", key({psi, s})});
  }
  for (const auto& [k, _] : b.p) {
    if (!b.compr.contains(k)) dangling("p without compr " + key({k.first, k.second}));
  }
  for (const auto& [k, _] : b.v) {
    if (!b.compr.contains(k)) dangling("v without compr " + key({k.first, k.second}));
  }

  // Extension: typing, p ∘ ⟨σ,t⟩ = σ, v{⟨σ,t⟩} = t.
  for (const auto& [k, e] : b.ext) {
    const auto& [sigma, s, t] = k;
    guard([&] { mor(sigma); mor(e); }, "ext " + key({sigma, s, t}));
    const auto& psi = b.cod(sigma);
    const auto& phi = b.dom(sigma);
    auto x = b.compr.find({psi, s});
    if (x == b.compr.end()) dangling("ext into unlisted comprehension " + key({psi, s}));
    if (!b.has_term(phi, b.sub_ty(s, sigma), t)) dangling("ext term " + key({sigma, s, t}));
    if (b.dom(e) != phi || b.cod(e) != x->second) {
      r.push_back({"ext-type", key({sigma, s, t})});
      continue;
    }
    const auto& p = b.p.at({psi, s});
    const auto& v = b.v.at({psi, s});
    if (b.comp(p, e) != sigma) r.push_back({"p-after-ext", key({sigma, s, t})});
    if (b.sub_tm(b.sub_ty(s, p), v, e) != t) r.push_back({"v-under-ext", key({sigma, s, t})});
  }
  // ⟨p ∘ σ', v{σ'}⟩ = σ' for every σ' into a listed comprehension.
  for (const auto& [k, x] : b.compr) {
    const auto& [psi, s] = k;
    const auto& p = b.p.at(k);
    const auto& v = b.v.at(k);
    const auto& sp = b.sub_ty(s, p);
    for (int m : c.morphisms_into(c.object_index(x))) {
      const auto& sig = c.morphism(m).id;
      auto e = b.ext.find({b.comp(p, sig), s, b.sub_tm(sp, v, sig)});
      if (e == b.ext.end()) r.push_back({"ext-eta", key({psi, s, sig}) + " missing"});
      else if (e->second != sig) r.push_back({"ext-eta", key({psi, s, sig})});
    }
  }

  if (!b.pi) return r;
  const auto& pi = *b.pi;
  auto x_of = [&](const std::string& psi, const std::string& s) -> std::optional<std::string> {
    auto it = b.compr.find({psi, s});
    if (it == b.compr.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& [k, res] : pi.pi) {
    const auto& [psi, s, t] = k;
    auto x = x_of(psi, s);
    if (!b.has_type(psi, s) || !x || !b.has_type(*x, t)) dangling("pi " + key({psi, s, t}));
    if (!b.has_type(psi, res)) r.push_back({"pi-type", key({psi, s, t})});
  }
  for (const auto& [k, res] : pi.lam) {
    const auto& [psi, s, t, body] = k;
    auto pt = pi.pi.find({psi, s, t});
    if (pt == pi.pi.end()) dangling("lam " + key({psi, s, t, body}));
    if (!b.has_term(*x_of(psi, s), t, body)) dangling("lam body " + key({psi, s, t, body}));
    if (!b.has_term(psi, pt->second, res)) r.push_back({"lam-type", key({psi, s, t, body})});
  }
  for (const auto& [k, res] : pi.app) {
    const auto& [psi, s, t, fn, arg] = k;
    auto pt = pi.pi.find({psi, s, t});
    if (pt == pi.pi.end() || !b.has_term(psi, pt->second, fn) || !b.has_term(psi, s, arg)) {
      dangling("app " + key({psi, s, t, fn, arg}));
    }
    auto e = b.ext.find({b.id(psi), s, arg});
    if (e == b.ext.end()) {
      r.push_back({"app-type", key({psi, s, t, fn, arg}) + " needs ext(id, S, s)"});
      continue;
    }
    if (!b.has_term(psi, b.sub_ty(t, e->second), res)) r.push_back({"app-type", key({psi, s, t, fn, arg})});
  }
  if (!r.empty()) return r;

  // Π{σ} = Π(S{σ}, T{q}); Λ(t){σ} = Λ(t{q}); App(t,s){σ} = App(t{σ}, s{σ}); β.
  for (const auto& [k, res] : pi.pi) {
    const auto& [psi, s, t] = k;
    for (int m : c.morphisms_into(c.object_index(psi))) {
      const auto& sig = c.morphism(m).id;
      const auto& phi = b.dom(sig);
      auto q = b.q(sig, s);
      if (!q) continue;
      const auto& s_sig = b.sub_ty(s, sig);
      const auto& t_q = b.sub_ty(t, *q);
      auto rhs = pi.pi.find({phi, s_sig, t_q});
      if (rhs == pi.pi.end()) continue;
      if (b.sub_ty(res, sig) != rhs->second) r.push_back({"pi-subst", key({psi, s, t, sig})});
      for (const auto& [lk, lres] : pi.lam) {
        if (std::get<0>(lk) != psi || std::get<1>(lk) != s || std::get<2>(lk) != t) continue;
        const auto& body = std::get<3>(lk);
        auto l2 = pi.lam.find({phi, s_sig, t_q, b.sub_tm(t, body, *q)});
        if (l2 == pi.lam.end()) continue;
        if (b.sub_tm(res, lres, sig) != l2->second) r.push_back({"lambda-subst", key({psi, s, t, body, sig})});
      }
      for (const auto& [ak, ares] : pi.app) {
        if (std::get<0>(ak) != psi || std::get<1>(ak) != s || std::get<2>(ak) != t) continue;
        const auto& fn = std::get<3>(ak);
        const auto& arg = std::get<4>(ak);
        auto a2 = pi.app.find({phi, s_sig, t_q, b.sub_tm(res, fn, sig), b.sub_tm(s, arg, sig)});
        if (a2 == pi.app.end()) continue;
        const auto& e = b.ext.at({b.id(psi), s, arg});
        if (b.sub_tm(b.sub_ty(t, e), ares, sig) != a2->second) {
          r.push_back({"app-subst", key({psi, s, t, fn, arg, sig})});
        }
      }
    }
  }
  for (const auto& [lk, lres] : pi.lam) {
    const auto& [psi, s, t, body] = lk;
    for (const auto& arg : b.terms(psi, s)) {
      auto a = pi.app.find({psi, s, t, lres, arg});
      auto e = b.ext.find({b.id(psi), s, arg});
      if (a == pi.app.end() || e == b.ext.end()) continue;
      if (a->second != b.sub_tm(t, body, e->second)) r.push_back({"beta", key({psi, s, t, body, arg})});
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Fixtures.

namespace fixtures {

/// The unit CwF on the terminal category: Ty(o) = types, every Tm a singleton.
inline BaseCwF d1(std::vector<std::string> types = {"T", "U"}) {
  BaseCwF b;
  b.cat = terminal_category();
  b.terminal = "o";
  b.bang["o"] = "id_o";
  b.ty["o"] = types;
  for (const auto& s : types) {
    b.ty_subst[{s, "id_o"}] = s;
    b.tm[{"o", s}] = {"*"};
    b.tm_subst[{s, "*", "id_o"}] = "*";
    b.compr[{"o", s}] = "o";
    b.p[{"o", s}] = "id_o";
    b.v[{"o", s}] = "*";
    b.ext[{"id_o", s, "*"}] = "id_o";
  }
  return b;
}

/// D1 with Ty(o) closed under a formal Π up to `depth`: Π(S,T) is listed for
/// S, T of depth < depth and named "Pi[S;T]".
inline BaseCwF d1_pi(int depth = 2) {
  std::vector<std::string> level = {"T", "U"};
  std::vector<std::string> all = level;
  std::vector<std::pair<std::string, std::string>> listed;
  for (int d = 1; d <= depth; ++d) {
    std::vector<std::string> below = all;
    std::set<std::string> seen(all.begin(), all.end());
    listed.clear();
    for (const auto& s : below) {
      for (const auto& t : below) {
        auto n = "Pi[" + s + ";" + t + "]";
        listed.emplace_back(s, t);
        if (seen.insert(n).second) all.push_back(n);
      }
    }
  }
  auto b = d1(all);
  BasePi pi;
  for (const auto& [s, t] : listed) {
    auto n = "Pi[" + s + ";" + t + "]";
    pi.pi[{"o", s, t}] = n;
    pi.lam[{"o", s, t, "*"}] = "*";
    pi.app[{"o", s, t, "*", "*"}] = "*";
  }
  b.pi = std::move(pi);
  return b;
}

/// Renaming CwF: contexts are words over {X, Y} of length <= max_len,
/// a morphism Δ -> Γ sends each position of Γ to a position of Δ of the same
/// type, types are constant and terms are typed positions.
inline BaseCwF dvar(int max_len = 2) {
  const std::vector<std::string> base = {"X", "Y"};
  std::vector<std::string> ctxs = {""};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const auto& w : ctxs) {
      if (static_cast<int>(w.size()) == len - 1) {
        for (const auto& x : base) next.push_back(w + x);
      }
    }
    ctxs.insert(ctxs.end(), next.begin(), next.end());
  }
  auto name = [](const std::string& w) { return w.empty() ? std::string("e") : w; };
  auto mor_id = [&](const std::string& d, const std::string& g, const std::vector<int>& map) {
    std::string s = name(d) + "->" + name(g) + ":";
    for (int i : map) s += std::to_string(i);
    return s;
  };
  // All position maps Γ -> Δ respecting types.
  auto maps = [](const std::string& d, const std::string& g) {
    std::vector<std::vector<int>> out = {{}};
    for (char x : g) {
      std::vector<std::vector<int>> next;
      for (const auto& m : out) {
        for (std::size_t j = 0; j < d.size(); ++j) {
          if (d[j] != x) continue;
          auto m2 = m;
          m2.push_back(static_cast<int>(j));
          next.push_back(std::move(m2));
        }
      }
      out = std::move(next);
    }
    return out;
  };
  std::vector<std::string> objects;
  std::vector<MorphismSpec> mors;
  std::map<std::string, std::string> ids;
  for (const auto& w : ctxs) objects.push_back(name(w));
  for (const auto& d : ctxs) {
    for (const auto& g : ctxs) {
      for (const auto& m : maps(d, g)) mors.push_back({mor_id(d, g, m), name(d), name(g)});
    }
  }
  for (const auto& w : ctxs) {
    std::vector<int> idm;
    for (std::size_t i = 0; i < w.size(); ++i) idm.push_back(static_cast<int>(i));
    ids[name(w)] = mor_id(w, w, idm);
  }
  std::vector<CompositionSpec> comp;
  for (const auto& th : ctxs) {
    for (const auto& d : ctxs) {
      for (const auto& g : ctxs) {
        for (const auto& tau : maps(th, d)) {
          for (const auto& sig : maps(d, g)) {
            std::vector<int> r;
            for (int i : sig) r.push_back(tau[i]);
            comp.push_back({mor_id(d, g, sig), mor_id(th, d, tau), mor_id(th, g, r)});
          }
        }
      }
    }
  }
  BaseCwF b;
  b.cat = FinCat::make(objects, mors, ids, comp);
  b.terminal = "e";
  for (const auto& w : ctxs) b.bang[name(w)] = mor_id(w, "", {});
  for (const auto& w : ctxs) {
    b.ty[name(w)] = base;
    for (const auto& s : base) {
      std::vector<std::string> pos;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (std::string(1, w[i]) == s) pos.push_back(std::to_string(i));
      }
      b.tm[{name(w), s}] = pos;
    }
  }
  for (const auto& d : ctxs) {
    for (const auto& g : ctxs) {
      for (const auto& sig : maps(d, g)) {
        auto id = mor_id(d, g, sig);
        for (const auto& s : base) {
          b.ty_subst[{s, id}] = s;
          for (std::size_t i = 0; i < g.size(); ++i) {
            if (std::string(1, g[i]) == s) b.tm_subst[{s, std::to_string(i), id}] = std::to_string(sig[i]);
          }
        }
      }
    }
  }
  for (const auto& g : ctxs) {
    if (static_cast<int>(g.size()) >= max_len) continue;
    for (const auto& s : base) {
      auto gs = g + s;
      std::vector<int> weak;
      for (std::size_t i = 0; i < g.size(); ++i) weak.push_back(static_cast<int>(i));
      b.compr[{name(g), s}] = name(gs);
      b.p[{name(g), s}] = mor_id(gs, g, weak);
      b.v[{name(g), s}] = std::to_string(g.size());
      for (const auto& d : ctxs) {
        for (const auto& sig : maps(d, g)) {
          for (std::size_t j = 0; j < d.size(); ++j) {
            if (std::string(1, d[j]) != s) continue;
            auto e = sig;
            e.push_back(static_cast<int>(j));
            b.ext[{mor_id(d, g, sig), s, std::to_string(j)}] = mor_id(d, gs, e);
          }
        }
      }
    }
  }
  return b;
}

}  // namespace fixtures

}  // namespace cwflab
