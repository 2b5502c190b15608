#pragma once

// JSON documents for every table type. Elements are written in Value syntax
// ("x", "(0,p)"); dependent-type fibers are keyed "d|s".
//
// References to other documents are either a name, resolved through a
// Registry, or an inline document.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cwflab/base_cwf.hpp"
#include "cwflab/cwf.hpp"
#include "cwflab/error.hpp"
#include "cwflab/fincat.hpp"
#include "cwflab/fixtures.hpp"
#include "cwflab/pi.hpp"
#include "cwflab/presheaf.hpp"
#include "cwflab/value.hpp"

namespace cwflab {

using Json = nlohmann::json;

namespace jio {

[[noreturn]] inline void fail(const std::string& where, const std::string& msg) {
  throw Error(ErrorKind::parse, where + ": " + msg);
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

inline std::string str(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

inline std::string str_field(const Json& j, const char* key, const std::string& where) {
  return str(field(j, key, where), where + "." + key);
}

inline int int_field(const Json& j, const char* key, const std::string& where, int fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

inline Value val(const Json& j, const std::string& where) {
  try {
    return Value::parse(str(j, where));
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

inline std::vector<Value> vals(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  std::vector<Value> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(val(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<std::string> strs(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(str(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline const Json& array_field(const Json& j, const char* key, const std::string& where) {
  const auto& a = field(j, key, where);
  if (!a.is_array()) fail(where + "." + key, "expected an array");
  return a;
}

/// Splits a "d|s" key.
inline std::pair<std::string, Value> elem_key(const std::string& key, const std::string& where) {
  auto bar = key.find('|');
  if (bar == std::string::npos) fail(where, "key '" + key + "' is not of the form obj|elem");
  try {
    return {key.substr(0, bar), Value::parse(key.substr(bar + 1))};
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

/// Converts non-parse errors raised while building a document into errors
/// that carry the document location.
template <class F>
auto at(const std::string& where, F&& build) {
  try {
    return build();
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse) throw;
    throw Error(e.kind(), where + ": " + e.message());
  }
}

}  // namespace jio

// ---------------------------------------------------------------------------
// Registry of named documents.

struct Registry {
  std::map<std::string, FinCat> categories;
  std::map<std::string, Presheaf> presheaves;
  std::map<std::string, NatTrans> nats;
  std::map<std::string, DepTy> deptys;
  std::map<std::string, Term> terms;
  std::map<std::string, BaseCwF> base_cwfs;

  template <class T>
  static const T& lookup(const std::map<std::string, T>& m, const std::string& name, const char* kind,
                         const std::string& where) {
    auto it = m.find(name);
    if (it == m.end()) throw Error(ErrorKind::lookup, where + ": unknown " + kind + " '" + name + "'");
    return it->second;
  }
};

inline FinCat fincat_from_json(const Json& j, const std::string& where = "category");
inline Presheaf presheaf_from_json(const Json& j, const Registry& r, const std::string& where = "presheaf");
inline DepTy depty_from_json(const Json& j, const Registry& r, const std::string& where = "depty");

inline FinCat resolve_cat(const Json& ref, const Registry& r, const std::string& where) {
  if (ref.is_string()) return Registry::lookup(r.categories, ref.get<std::string>(), "category", where);
  return fincat_from_json(ref, where);
}

inline Presheaf resolve_presheaf(const Json& ref, const Registry& r, const std::string& where) {
  if (ref.is_string()) return Registry::lookup(r.presheaves, ref.get<std::string>(), "presheaf", where);
  return presheaf_from_json(ref, r, where);
}

inline DepTy resolve_depty(const Json& ref, const Registry& r, const std::string& where) {
  if (ref.is_string()) return Registry::lookup(r.deptys, ref.get<std::string>(), "depty", where);
  return depty_from_json(ref, r, where);
}

// ---------------------------------------------------------------------------
// FinCat.

/// Either {"objects", "morphisms", "identity", "compose"} or a builder
/// {"builtin": "terminal" | "walking_arrow" | "chain", "n": k, "fuel": f}.
inline FinCat fincat_from_json(const Json& j, const std::string& where) {
  if (j.is_object() && j.contains("builtin")) {
    auto b = jio::str_field(j, "builtin", where);
    return jio::at(where, [&] {
      if (b == "terminal") return terminal_category();
      if (b == "walking_arrow") return walking_arrow();
      if (b == "chain") {
        return chain(jio::int_field(j, "n", where, 1), jio::int_field(j, "fuel", where, kDefaultChainFuel));
      }
      throw Error(ErrorKind::lookup, "unknown category builder '" + b + "'");
    });
  }
  auto objects = jio::strs(jio::field(j, "objects", where), where + ".objects");
  std::vector<MorphismSpec> mors;
  const auto& ms = jio::array_field(j, "morphisms", where);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    auto w = where + ".morphisms[" + std::to_string(i) + "]";
    mors.push_back({jio::str_field(ms[i], "id", w), jio::str_field(ms[i], "dom", w), jio::str_field(ms[i], "cod", w)});
  }
  std::map<std::string, std::string> ids;
  const auto& idj = jio::field(j, "identity", where);
  if (!idj.is_object()) jio::fail(where + ".identity", "expected an object");
  for (const auto& [k, v] : idj.items()) ids[k] = jio::str(v, where + ".identity." + k);
  std::vector<CompositionSpec> comp;
  const auto& cs = jio::array_field(j, "compose", where);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    auto w = where + ".compose[" + std::to_string(i) + "]";
    comp.push_back({jio::str_field(cs[i], "g", w), jio::str_field(cs[i], "f", w), jio::str_field(cs[i], "result", w)});
  }
  return jio::at(where, [&] { return FinCat::make(std::move(objects), mors, ids, comp); });
}

inline Json to_json(const FinCat& c) {
  Json j;
  j["objects"] = c.object_names();
  j["morphisms"] = Json::array();
  for (const auto& m : c.morphisms()) {
    j["morphisms"].push_back({{"id", m.id}, {"dom", c.object_name(m.dom)}, {"cod", c.object_name(m.cod)}});
  }
  j["identity"] = Json::object();
  for (std::size_t d = 0; d < c.object_count(); ++d) {
    j["identity"][c.object_name(static_cast<int>(d))] = c.morphism(c.identity(static_cast<int>(d))).id;
  }
  j["compose"] = Json::array();
  for (std::size_t g = 0; g < c.morphism_count(); ++g) {
    int gi = static_cast<int>(g);
    for (int f : c.morphisms_into(c.morphism(gi).dom)) {
      j["compose"].push_back(
          {{"g", c.morphism(gi).id}, {"f", c.morphism(f).id}, {"result", c.morphism(c.compose(gi, f)).id}});
    }
  }
  return j;
}

// ---------------------------------------------------------------------------
// Presheaf and NatTrans.

/// {"base", "carrier": {obj: [elems]}, "action": [{"mor", "arg", "result"}]};
/// identity entries may be omitted. {"builtin": "terminal", "base"} gives ⊤̂.
inline Presheaf presheaf_from_json(const Json& j, const Registry& r, const std::string& where) {
  auto base = resolve_cat(jio::field(j, "base", where), r, where + ".base");
  if (j.contains("builtin")) {
    auto b = jio::str_field(j, "builtin", where);
    if (b != "terminal") jio::fail(where, "unknown presheaf builder '" + b + "'");
    return terminal_presheaf(base);
  }
  std::map<std::string, std::vector<Value>> carrier;
  const auto& cj = jio::field(j, "carrier", where);
  if (!cj.is_object()) jio::fail(where + ".carrier", "expected an object");
  for (const auto& [k, v] : cj.items()) carrier[k] = jio::vals(v, where + ".carrier." + k);
  std::vector<ActionSpec> act;
  if (j.contains("action")) {
    const auto& aj = jio::array_field(j, "action", where);
    for (std::size_t i = 0; i < aj.size(); ++i) {
      auto w = where + ".action[" + std::to_string(i) + "]";
      act.push_back({jio::str_field(aj[i], "mor", w), jio::val(jio::field(aj[i], "arg", w), w + ".arg"),
                     jio::val(jio::field(aj[i], "result", w), w + ".result")});
    }
  }
  return jio::at(where, [&] {
    for (const auto& [k, v] : carrier) {
      if (!base.find_object(k)) throw Error(ErrorKind::lookup, "carrier names unknown object '" + k + "'");
    }
    return Presheaf::make(base, carrier, act);
  });
}

inline Json to_json(const Presheaf& g, const std::string& base_ref = {}) {
  const auto& c = g.base();
  Json j;
  j["base"] = base_ref.empty() ? to_json(c) : Json(base_ref);
  j["carrier"] = Json::object();
  for (std::size_t d = 0; d < c.object_count(); ++d) {
    auto& arr = j["carrier"][c.object_name(static_cast<int>(d))] = Json::array();
    for (const auto& v : g.carrier(static_cast<int>(d))) arr.push_back(v.to_string());
  }
  j["action"] = Json::array();
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    int mi = static_cast<int>(m);
    if (c.is_identity(mi)) continue;
    const auto& mor = c.morphism(mi);
    for (std::size_t i = 0; i < g.size(mor.cod); ++i) {
      j["action"].push_back({{"mor", mor.id},
                             {"arg", g.element(mor.cod, static_cast<int>(i)).to_string()},
                             {"result", g.element(mor.dom, g.act(mi, static_cast<int>(i))).to_string()}});
    }
  }
  return j;
}

/// {"src", "dst", "components": {obj: {elem: elem}}}.
inline NatTrans nat_from_json(const Json& j, const Registry& r, const std::string& where = "nat") {
  auto src = resolve_presheaf(jio::field(j, "src", where), r, where + ".src");
  auto dst = resolve_presheaf(jio::field(j, "dst", where), r, where + ".dst");
  std::map<std::string, std::map<Value, Value>> comp;
  const auto& cj = jio::field(j, "components", where);
  if (!cj.is_object()) jio::fail(where + ".components", "expected an object");
  for (const auto& [obj, m] : cj.items()) {
    if (!m.is_object()) jio::fail(where + ".components." + obj, "expected an object");
    for (const auto& [k, v] : m.items()) {
      auto w = where + ".components." + obj + "." + k;
      try {
        comp[obj][Value::parse(k)] = jio::val(v, w);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::parse) jio::fail(w, e.what());
        throw;
      }
    }
  }
  return jio::at(where, [&] { return NatTrans::make(src, dst, comp); });
}

inline Json to_json(const NatTrans& s) {
  const auto& c = s.src().base();
  Json j;
  j["src"] = to_json(s.src());
  j["dst"] = to_json(s.dst());
  j["components"] = Json::object();
  for (std::size_t d = 0; d < c.object_count(); ++d) {
    int di = static_cast<int>(d);
    auto& m = j["components"][c.object_name(di)] = Json::object();
    for (std::size_t i = 0; i < s.src().size(di); ++i) {
      m[s.src().element(di, static_cast<int>(i)).to_string()] = s.dst().element(di, s.at(di, static_cast<int>(i))).to_string();
    }
  }
  return j;
}

// ---------------------------------------------------------------------------
// DepTy and Term.

/// {"ctx", "fiber": {"d|s": [elems]}, "action": [{"mor", "src_s"?, "dst_s",
/// "arg", "result"}]}: along m : d -> d2 at dst_s ∈ Γ(d2), the fiber element
/// arg over (d2, dst_s) goes to result over (d, Γ(m) dst_s). src_s, when
/// given, must equal Γ(m) dst_s.
inline DepTy depty_from_json(const Json& j, const Registry& r, const std::string& where) {
  auto ctx = resolve_presheaf(jio::field(j, "ctx", where), r, where + ".ctx");
  fixtures::DepTyTables t;
  const auto& fj = jio::field(j, "fiber", where);
  if (!fj.is_object()) jio::fail(where + ".fiber", "expected an object");
  for (const auto& [k, v] : fj.items()) {
    t.fiber[jio::elem_key(k, where + ".fiber")] = jio::vals(v, where + ".fiber." + k);
  }
  if (j.contains("action")) {
    const auto& aj = jio::array_field(j, "action", where);
    for (std::size_t i = 0; i < aj.size(); ++i) {
      auto w = where + ".action[" + std::to_string(i) + "]";
      auto mor = jio::str_field(aj[i], "mor", w);
      auto s2 = jio::val(jio::field(aj[i], "dst_s", w), w + ".dst_s");
      if (aj[i].contains("src_s")) {
        auto s1 = jio::val(aj[i]["src_s"], w + ".src_s");
        jio::at(w, [&] {
          int m = ctx.base().morphism_index(mor);
          const auto& md = ctx.base().morphism(m);
          if (!(ctx.element(md.dom, ctx.act(m, ctx.index(md.cod, s2))) == s1)) {
            throw Error(ErrorKind::structural, "src_s " + s1.to_string() + " is not the context's action on dst_s");
          }
          return 0;
        });
      }
      t.action.push_back({mor, s2, jio::val(jio::field(aj[i], "arg", w), w + ".arg"),
                          jio::val(jio::field(aj[i], "result", w), w + ".result")});
    }
  }
  for (const auto& [k, v] : t.fiber) {
    auto d = ctx.base().find_object(k.first);
    if (!d || !ctx.index_of(*d, k.second)) {
      throw Error(ErrorKind::lookup, where + ".fiber: " + k.first + "|" + k.second.to_string() + " is not a context element");
    }
  }
  return jio::at(where, [&] { return fixtures::depty_from(ctx, t); });
}

inline Json to_json(const DepTy& a) {
  const auto& g = a.ctx();
  const auto& c = g.base();
  Json j;
  j["ctx"] = to_json(g);
  j["fiber"] = Json::object();
  for (std::size_t k = 0; k < g.elem_object_count(); ++k) {
    auto lab = g.elem_label(static_cast<int>(k));
    auto& arr = j["fiber"][c.object_name(lab.obj) + "|" + g.element(lab.obj, lab.elem).to_string()] = Json::array();
    for (const auto& v : a.fiber(static_cast<int>(k))) arr.push_back(v.to_string());
  }
  j["action"] = Json::array();
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    int mi = static_cast<int>(m);
    if (c.is_identity(mi)) continue;
    const auto& mor = c.morphism(mi);
    for (std::size_t s2 = 0; s2 < g.size(mor.cod); ++s2) {
      int s2i = static_cast<int>(s2);
      int e = g.elem_morphism(mi, s2i);
      int k2 = g.elem_object(mor.cod, s2i);
      int s1 = g.act(mi, s2i);
      int k1 = g.elem_object(mor.dom, s1);
      for (std::size_t i = 0; i < a.fiber_size(k2); ++i) {
        j["action"].push_back({{"mor", mor.id},
                               {"src_s", g.element(mor.dom, s1).to_string()},
                               {"dst_s", g.element(mor.cod, s2i).to_string()},
                               {"arg", a.element(k2, static_cast<int>(i)).to_string()},
                               {"result", a.element(k1, a.act(e, static_cast<int>(i))).to_string()}});
      }
    }
  }
  return j;
}

/// {"ctx"?, "ty", "assign": {"d|s": elem}}; ctx, when given, must be ty's context.
inline Term term_from_json(const Json& j, const Registry& r, const std::string& where = "term") {
  auto ty = resolve_depty(jio::field(j, "ty", where), r, where + ".ty");
  if (j.contains("ctx")) {
    auto ctx = resolve_presheaf(j["ctx"], r, where + ".ctx");
    if (!(ctx == ty.ctx())) throw Error(ErrorKind::structural, where + ": ctx is not the context of ty");
  }
  const auto& g = ty.ctx();
  const auto& aj = jio::field(j, "assign", where);
  if (!aj.is_object()) jio::fail(where + ".assign", "expected an object");
  std::vector<Value> values(g.elem_object_count());
  std::vector<bool> seen(values.size(), false);
  for (const auto& [k, v] : aj.items()) {
    auto [obj, s] = jio::elem_key(k, where + ".assign");
    auto d = g.base().find_object(obj);
    auto si = d ? g.index_of(*d, s) : std::nullopt;
    if (!si) throw Error(ErrorKind::lookup, where + ".assign: " + k + " is not a context element");
    int e = g.elem_object(*d, *si);
    values[e] = jio::val(v, where + ".assign." + k);
    seen[e] = true;
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) {
      auto lab = g.elem_label(static_cast<int>(k));
      throw Error(ErrorKind::structural, where + ".assign: missing " + g.base().object_name(lab.obj) + "|" +
                                             g.element(lab.obj, lab.elem).to_string());
    }
  }
  return jio::at(where, [&] { return Term::from_values(ty, values); });
}

inline Json to_json(const Term& m) {
  const auto& g = m.ctx();
  Json j;
  j["ty"] = to_json(m.ty());
  j["assign"] = Json::object();
  for (std::size_t k = 0; k < g.elem_object_count(); ++k) {
    auto lab = g.elem_label(static_cast<int>(k));
    j["assign"][g.base().object_name(lab.obj) + "|" + g.element(lab.obj, lab.elem).to_string()] =
        m.value(static_cast<int>(k)).to_string();
  }
  return j;
}

// ---------------------------------------------------------------------------
// Π fiber elements.

/// {"anchor": {"obj", "elem"}, "table": [{"obj", "mor", "arg", "result"}]}.
inline Json pi_element_json(const PiType& pi, int k, int i) {
  const auto& g = pi.dom().ctx();
  auto lab = g.elem_label(k);
  Json j;
  j["anchor"] = {{"obj", g.base().object_name(lab.obj)}, {"elem", g.element(lab.obj, lab.elem).to_string()}};
  j["table"] = Json::array();
  for (const auto& e : pi.ty().element(k, i).items()) {
    j["table"].push_back({{"obj", e[0].to_string()}, {"mor", e[1].to_string()}, {"arg", e[2].to_string()},
                          {"result", e[3].to_string()}});
  }
  return j;
}

/// The table value of a PiElement document.
inline Value pi_element_value(const Json& j, const std::string& where = "pi element") {
  const auto& t = jio::array_field(j, "table", where);
  std::vector<Value> entries;
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto w = where + ".table[" + std::to_string(i) + "]";
    entries.push_back(Value::tuple({jio::val(jio::field(t[i], "obj", w), w), jio::val(jio::field(t[i], "mor", w), w),
                                    jio::val(jio::field(t[i], "arg", w), w),
                                    jio::val(jio::field(t[i], "result", w), w)}));
  }
  std::sort(entries.begin(), entries.end());
  return Value::tuple(std::move(entries));
}

// ---------------------------------------------------------------------------
// BaseCwF.

/// {"cat", "terminal", "bang": {obj: mor}, "ty": {obj: [S]},
///  "ty_subst": [{"ty", "mor", "result"}], "tm": [{"obj", "ty", "terms"}],
///  "tm_subst": [{"ty", "tm", "mor", "result"}],
///  "compr" | "p" | "v": [{"obj", "ty", "result"}],
///  "ext": [{"mor", "ty", "tm", "result"}],
///  "pi": {"pi": [{"obj", "dom", "cod", "result"}],
///         "lam": [{"obj", "dom", "cod", "body", "result"}],
///         "app": [{"obj", "dom", "cod", "fn", "arg", "result"}]}}
/// or {"builtin": "d1" | "d1_pi" | "dvar", ...parameters}.
inline BaseCwF base_cwf_from_json(const Json& j, const Registry& r, const std::string& where = "base_cwf") {
  if (j.is_object() && j.contains("builtin")) {
    auto b = jio::str_field(j, "builtin", where);
    if (b == "d1") {
      if (j.contains("types")) return fixtures::d1(jio::strs(j["types"], where + ".types"));
      return fixtures::d1();
    }
    if (b == "d1_pi") return fixtures::d1_pi(jio::int_field(j, "depth", where, 2));
    if (b == "dvar") return fixtures::dvar(jio::int_field(j, "max_len", where, 2));
    throw Error(ErrorKind::lookup, where + ": unknown base CwF builder '" + b + "'");
  }
  BaseCwF out;
  out.cat = resolve_cat(jio::field(j, "cat", where), r, where + ".cat");
  out.terminal = jio::str_field(j, "terminal", where);
  for (const auto& [k, v] : jio::field(j, "bang", where).items()) out.bang[k] = jio::str(v, where + ".bang." + k);
  for (const auto& [k, v] : jio::field(j, "ty", where).items()) out.ty[k] = jio::strs(v, where + ".ty." + k);
  auto rows = [&](const char* key, auto&& each) {
    if (!j.contains(key)) return;
    const auto& a = jio::array_field(j, key, where);
    for (std::size_t i = 0; i < a.size(); ++i) each(a[i], where + "." + key + "[" + std::to_string(i) + "]");
  };
  auto s = [](const Json& row, const char* k, const std::string& w) { return jio::str_field(row, k, w); };
  rows("ty_subst", [&](const Json& x, const std::string& w) { out.ty_subst[{s(x, "ty", w), s(x, "mor", w)}] = s(x, "result", w); });
  rows("tm", [&](const Json& x, const std::string& w) {
    out.tm[{s(x, "obj", w), s(x, "ty", w)}] = jio::strs(jio::field(x, "terms", w), w + ".terms");
  });
  rows("tm_subst", [&](const Json& x, const std::string& w) {
    out.tm_subst[{s(x, "ty", w), s(x, "tm", w), s(x, "mor", w)}] = s(x, "result", w);
  });
  rows("compr", [&](const Json& x, const std::string& w) { out.compr[{s(x, "obj", w), s(x, "ty", w)}] = s(x, "result", w); });
  rows("p", [&](const Json& x, const std::string& w) { out.p[{s(x, "obj", w), s(x, "ty", w)}] = s(x, "result", w); });
  rows("v", [&](const Json& x, const std::string& w) { out.v[{s(x, "obj", w), s(x, "ty", w)}] = s(x, "result", w); });
  rows("ext", [&](const Json& x, const std::string& w) {
    out.ext[{s(x, "mor", w), s(x, "ty", w), s(x, "tm", w)}] = s(x, "result", w);
  });
  if (j.contains("pi")) {
    const auto& pj = j["pi"];
    BasePi pi;
    auto prow = [&](const char* key, auto&& each) {
      if (!pj.contains(key)) return;
      const auto& a = jio::array_field(pj, key, where + ".pi");
      for (std::size_t i = 0; i < a.size(); ++i) each(a[i], where + ".pi." + key + "[" + std::to_string(i) + "]");
    };
    prow("pi", [&](const Json& x, const std::string& w) {
      pi.pi[{s(x, "obj", w), s(x, "dom", w), s(x, "cod", w)}] = s(x, "result", w);
    });
    prow("lam", [&](const Json& x, const std::string& w) {
      pi.lam[{s(x, "obj", w), s(x, "dom", w), s(x, "cod", w), s(x, "body", w)}] = s(x, "result", w);
    });
    prow("app", [&](const Json& x, const std::string& w) {
      pi.app[{s(x, "obj", w), s(x, "dom", w), s(x, "cod", w), s(x, "fn", w), s(x, "arg", w)}] = s(x, "result", w);
    });
    out.pi = std::move(pi);
  }
  return out;
}

inline Json to_json(const BaseCwF& b) {
  Json j;
  j["cat"] = to_json(b.cat);
  j["terminal"] = b.terminal;
  j["bang"] = b.bang;
  j["ty"] = b.ty;
  j["ty_subst"] = Json::array();
  for (const auto& [k, v] : b.ty_subst) j["ty_subst"].push_back({{"ty", k.first}, {"mor", k.second}, {"result", v}});
  j["tm"] = Json::array();
  for (const auto& [k, v] : b.tm) j["tm"].push_back({{"obj", k.first}, {"ty", k.second}, {"terms", v}});
  j["tm_subst"] = Json::array();
  for (const auto& [k, v] : b.tm_subst) {
    j["tm_subst"].push_back({{"ty", std::get<0>(k)}, {"tm", std::get<1>(k)}, {"mor", std::get<2>(k)}, {"result", v}});
  }
  for (auto [key, table] : {std::pair{"compr", &b.compr}, std::pair{"p", &b.p}, std::pair{"v", &b.v}}) {
    j[key] = Json::array();
    for (const auto& [k, v] : *table) j[key].push_back({{"obj", k.first}, {"ty", k.second}, {"result", v}});
  }
  j["ext"] = Json::array();
  for (const auto& [k, v] : b.ext) {
    j["ext"].push_back({{"mor", std::get<0>(k)}, {"ty", std::get<1>(k)}, {"tm", std::get<2>(k)}, {"result", v}});
  }
  if (b.pi) {
    Json p;
    p["pi"] = Json::array();
    for (const auto& [k, v] : b.pi->pi) {
      p["pi"].push_back({{"obj", std::get<0>(k)}, {"dom", std::get<1>(k)}, {"cod", std::get<2>(k)}, {"result", v}});
    }
    p["lam"] = Json::array();
    for (const auto& [k, v] : b.pi->lam) {
      p["lam"].push_back({{"obj", std::get<0>(k)}, {"dom", std::get<1>(k)}, {"cod", std::get<2>(k)},
                          {"body", std::get<3>(k)}, {"result", v}});
    }
    p["app"] = Json::array();
    for (const auto& [k, v] : b.pi->app) {
      p["app"].push_back({{"obj", std::get<0>(k)}, {"dom", std::get<1>(k)}, {"cod", std::get<2>(k)},
                          {"fn", std::get<3>(k)}, {"arg", std::get<4>(k)}, {"result", v}});
    }
    j["pi"] = std::move(p);
  }
  return j;
}

}  // namespace cwflab
