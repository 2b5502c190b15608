#pragma once

// Tabulated presheaves on a FinCat, natural transformations between them,
// the terminal presheaf, and the category of elements.
//
// For a stored morphism m : d -> d2, the action of a presheaf maps
// carrier(d2) -> carrier(d). Elements are indexed per object; an index is
// meaningless outside its own fiber.

#include <algorithm>
#include <cstddef>
#include <map>
#include <mutex>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cwflab/error.hpp"
#include "cwflab/fincat.hpp"
#include "cwflab/value.hpp"

namespace cwflab {

struct ActionSpec {
  std::string mor;
  Value arg;
  Value result;
};

/// Position of an object of the category of elements: the pair (d, s).
struct ElemLabel {
  ObjIndex obj;
  int elem;
};

/// The category of elements as a standalone FinCat, with labels back to
/// (d, s) and the embedding of its morphisms into the base.
struct ElemCat {
  FinCat cat;
  std::vector<ElemLabel> labels;   ///< by element-category object
  std::vector<MorIndex> embed;     ///< by element-category morphism
  std::vector<int> target_elem;    ///< s2 of each morphism (m, s2)
};

class Presheaf {
 public:
  /// Builds from per-object carriers and explicit actions. Actions along
  /// identity morphisms default to the identity when omitted; every other
  /// action entry must be present.
  static Presheaf make(FinCat base, const std::map<std::string, std::vector<Value>>& carrier,
                       const std::vector<ActionSpec>& action) {
    std::vector<std::vector<Value>> car(base.object_count());
    for (const auto& [obj, elems] : carrier) car[base.object_index(obj)] = elems;
    for (std::size_t d = 0; d < car.size(); ++d) {
      if (!carrier.contains(base.object_name(static_cast<int>(d)))) {
        throw Error(ErrorKind::structural,
                    "carrier missing for object '" + base.object_name(static_cast<int>(d)) + "'");
      }
    }
    auto sorted = car;
    for (auto& c : sorted) std::sort(c.begin(), c.end());
    auto find = [&](ObjIndex d, const Value& v) -> int {
      auto it = std::lower_bound(sorted[d].begin(), sorted[d].end(), v);
      if (it == sorted[d].end() || !(*it == v)) return -1;
      return static_cast<int>(it - sorted[d].begin());
    };
    std::vector<std::vector<int>> act(base.morphism_count());
    for (std::size_t m = 0; m < act.size(); ++m) {
      act[m].assign(sorted[base.morphism(static_cast<int>(m)).cod].size(), -1);
    }
    for (const auto& e : action) {
      int m = base.morphism_index(e.mor);
      const auto& mor = base.morphism(m);
      int arg = find(mor.cod, e.arg);
      int res = find(mor.dom, e.result);
      if (arg < 0 || res < 0) {
        throw Error(ErrorKind::structural, "action entry " + e.mor + "(" + e.arg.to_string() +
                                               ") = " + e.result.to_string() +
                                               " leaves the carriers");
      }
      if (act[m][arg] >= 0) {
        throw Error(ErrorKind::structural,
                    "duplicate action entry " + e.mor + "(" + e.arg.to_string() + ")");
      }
      act[m][arg] = res;
    }
    for (std::size_t m = 0; m < act.size(); ++m) {
      for (std::size_t i = 0; i < act[m].size(); ++i) {
        if (act[m][i] >= 0) continue;
        if (base.is_identity(static_cast<int>(m))) {
          act[m][i] = static_cast<int>(i);
        } else {
          throw Error(ErrorKind::structural,
                      "action of " + base.morphism(static_cast<int>(m)).id + " undefined at " +
                          sorted[base.morphism(static_cast<int>(m)).cod][i].to_string());
        }
      }
    }
    return from_sorted(std::move(base), std::move(sorted), std::move(act));
  }

  /// Index-level constructor. Carriers are canonicalized (sorted) and the
  /// action tables remapped accordingly. action[m][i] is the index in
  /// carrier(dom m) of the image of carrier(cod m)[i].
  static Presheaf from_tables(FinCat base, std::vector<std::vector<Value>> carrier,
                              std::vector<std::vector<int>> action) {
    if (carrier.size() != base.object_count() || action.size() != base.morphism_count()) {
      throw Error(ErrorKind::structural, "presheaf tables do not match the base category");
    }
    std::vector<std::vector<int>> rank(carrier.size());
    for (std::size_t d = 0; d < carrier.size(); ++d) {
      auto& c = carrier[d];
      std::vector<int> order(c.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int x, int y) { return c[x] < c[y]; });
      rank[d].assign(c.size(), 0);
      std::vector<Value> sorted;
      sorted.reserve(c.size());
      for (std::size_t k = 0; k < order.size(); ++k) {
        rank[d][order[k]] = static_cast<int>(k);
        sorted.push_back(c[order[k]]);
      }
      for (std::size_t k = 1; k < sorted.size(); ++k) {
        if (sorted[k] == sorted[k - 1]) {
          throw Error(ErrorKind::structural, "duplicate element " + sorted[k].to_string() +
                                                 " in carrier of " +
                                                 base.object_name(static_cast<int>(d)));
        }
      }
      c = std::move(sorted);
    }
    std::vector<std::vector<int>> act(action.size());
    for (std::size_t m = 0; m < action.size(); ++m) {
      const auto& mor = base.morphism(static_cast<int>(m));
      if (action[m].size() != carrier[mor.cod].size()) {
        throw Error(ErrorKind::structural, "action of " + mor.id + " has the wrong arity");
      }
      act[m].assign(action[m].size(), -1);
      for (std::size_t i = 0; i < action[m].size(); ++i) {
        int r = action[m][i];
        if (r < 0 || r >= static_cast<int>(carrier[mor.dom].size())) {
          throw Error(ErrorKind::structural, "action of " + mor.id + " leaves the carrier");
        }
        act[m][rank[mor.cod][i]] = rank[mor.dom][r];
      }
    }
    return from_sorted(std::move(base), std::move(carrier), std::move(act));
  }

  const FinCat& base() const noexcept { return data_->base; }

  std::span<const Value> carrier(ObjIndex d) const { return data_->carrier.at(d); }
  std::size_t size(ObjIndex d) const { return data_->carrier.at(d).size(); }

  std::optional<int> index_of(ObjIndex d, const Value& v) const {
    const auto& idx = data_->index.at(d);
    auto it = idx.find(v);
    if (it == idx.end()) return std::nullopt;
    return it->second;
  }

  int index(ObjIndex d, const Value& v) const {
    auto i = index_of(d, v);
    if (!i) {
      throw Error(ErrorKind::lookup, "element " + v.to_string() + " is not in the carrier of " +
                                         base().object_name(d));
    }
    return *i;
  }

  const Value& element(ObjIndex d, int i) const { return data_->carrier.at(d).at(i); }

  /// Image of carrier(cod m)[i] under the action of m.
  int act(MorIndex m, int i) const { return data_->action[m][i]; }
  const std::vector<int>& action_table(MorIndex m) const { return data_->action.at(m); }

  Value act_value(MorIndex m, const Value& v) const {
    const auto& mor = base().morphism(m);
    return element(mor.dom, act(m, index(mor.cod, v)));
  }

  // Flat indexing of the category of elements. Objects (d, s) and morphisms
  // (m, s2) : (dom m, act(m, s2)) -> (cod m, s2) are numbered contiguously.
  std::size_t elem_object_count() const noexcept { return data_->labels.size(); }
  int elem_object(ObjIndex d, int s) const { return data_->obj_offset[d] + s; }
  ElemLabel elem_label(int k) const { return data_->labels.at(k); }
  std::size_t elem_morphism_count() const noexcept { return data_->elem_mor_count; }
  int elem_morphism(MorIndex m, int s2) const { return data_->mor_offset[m] + s2; }

  /// The category of elements, built on first use and shared by copies.
  /// Its object and morphism indices coincide with elem_object/elem_morphism.
  const ElemCat& elements() const;

  /// Equality of carriers and actions, ignoring the base (callers that
  /// already know the bases agree skip comparing them).
  bool same_tables(const Presheaf& other) const {
    if (data_ == other.data_) return true;
    return data_->hash == other.data_->hash && data_->carrier == other.data_->carrier &&
           data_->action == other.data_->action;
  }

  std::size_t structural_hash() const noexcept { return data_->hash; }
  bool same_as(const Presheaf& other) const noexcept { return data_ == other.data_; }

  friend bool operator==(const Presheaf& a, const Presheaf& b) {
    if (a.data_ == b.data_) return true;
    if (a.data_->hash != b.data_->hash) return false;
    return a.data_->base == b.data_->base && a.data_->carrier == b.data_->carrier &&
           a.data_->action == b.data_->action;
  }

 private:
  struct Data {
    Data(FinCat b, std::vector<std::vector<Value>> c, std::vector<std::vector<int>> a)
        : base(std::move(b)), carrier(std::move(c)), action(std::move(a)) {}
    FinCat base;
    std::vector<std::vector<Value>> carrier;
    std::vector<std::unordered_map<Value, int, ValueHash>> index;
    std::vector<std::vector<int>> action;
    std::vector<int> obj_offset;
    std::vector<int> mor_offset;
    std::vector<ElemLabel> labels;
    std::size_t elem_mor_count = 0;
    std::size_t hash = 0;
    mutable std::once_flag elements_once;
    mutable std::unique_ptr<ElemCat> elements;
  };

  static Presheaf from_sorted(FinCat base, std::vector<std::vector<Value>> carrier,
                              std::vector<std::vector<int>> action) {
    auto data = std::make_shared<Data>(std::move(base), std::move(carrier), std::move(action));
    std::size_t h = 0x84222325ULL;
    data->index.resize(data->carrier.size());
    for (std::size_t d = 0; d < data->carrier.size(); ++d) {
      data->obj_offset.push_back(static_cast<int>(data->labels.size()));
      for (std::size_t i = 0; i < data->carrier[d].size(); ++i) {
        data->index[d].emplace(data->carrier[d][i], static_cast<int>(i));
        data->labels.push_back({static_cast<int>(d), static_cast<int>(i)});
        h = (h ^ data->carrier[d][i].hash()) * 0x100000001b3ULL;
      }
      h = (h ^ 0xff) * 0x100000001b3ULL;
    }
    int off = 0;
    for (std::size_t m = 0; m < data->action.size(); ++m) {
      data->mor_offset.push_back(off);
      off += static_cast<int>(data->action[m].size());
      for (int r : data->action[m]) h = (h ^ static_cast<std::size_t>(r + 7)) * 0x100000001b3ULL;
    }
    data->elem_mor_count = static_cast<std::size_t>(off);
    data->hash = h;
    return Presheaf(std::move(data));
  }

  explicit Presheaf(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

inline bool presheaf_equal(const Presheaf& a, const Presheaf& b) { return a == b; }

/// Every violated functor law of a presheaf.
inline ValidationReport validate_presheaf(const Presheaf& g) {
  ValidationReport report;
  const auto& c = g.base();
  for (std::size_t d = 0; d < c.object_count(); ++d) {
    int id = c.identity(static_cast<int>(d));
    for (std::size_t i = 0; i < g.size(static_cast<int>(d)); ++i) {
      if (g.act(id, static_cast<int>(i)) != static_cast<int>(i)) {
        report.push_back({"presheaf-identity", "(" + c.morphism(id).id + "," +
                                                   g.element(static_cast<int>(d), static_cast<int>(i)).to_string() + ")"});
      }
    }
  }
  const auto& mors = c.morphisms();
  for (std::size_t gi = 0; gi < mors.size(); ++gi) {
    for (int f : c.morphisms_into(mors[gi].dom)) {
      int gf = c.compose(static_cast<int>(gi), f);
      for (std::size_t s = 0; s < g.size(mors[gi].cod); ++s) {
        int lhs = g.act(f, g.act(static_cast<int>(gi), static_cast<int>(s)));
        int rhs = g.act(gf, static_cast<int>(s));
        if (lhs != rhs) {
          report.push_back({"presheaf-composition",
                            "(" + mors[gi].id + "," + c.morphism(f).id + "," +
                                g.element(mors[gi].cod, static_cast<int>(s)).to_string() + ")"});
        }
      }
    }
  }
  return report;
}

/// Every object sent to {*}.
inline Presheaf terminal_presheaf(const FinCat& c) {
  std::vector<std::vector<Value>> car(c.object_count(), std::vector<Value>{star()});
  std::vector<std::vector<int>> act(c.morphism_count(), std::vector<int>{0});
  return Presheaf::from_tables(c, std::move(car), std::move(act));
}

class NatTrans {
 public:
  /// components[d][i] is the index in dst.carrier(d) of the image of src.carrier(d)[i].
  static NatTrans from_tables(Presheaf src, Presheaf dst, std::vector<std::vector<int>> components) {
    if (!(src.base() == dst.base())) {
      throw Error(ErrorKind::structural, "natural transformation between different bases");
    }
    const auto& c = src.base();
    if (components.size() != c.object_count()) {
      throw Error(ErrorKind::structural, "natural transformation has the wrong number of components");
    }
    for (std::size_t d = 0; d < components.size(); ++d) {
      int di = static_cast<int>(d);
      if (components[d].size() != src.size(di)) {
        throw Error(ErrorKind::structural, "component at " + c.object_name(di) + " is not total");
      }
      for (int r : components[d]) {
        if (r < 0 || r >= static_cast<int>(dst.size(di))) {
          throw Error(ErrorKind::structural, "component at " + c.object_name(di) + " leaves the target");
        }
      }
    }
    return NatTrans(std::make_shared<Data>(Data{std::move(src), std::move(dst), std::move(components)}));
  }

  static NatTrans make(Presheaf src, Presheaf dst,
                       const std::map<std::string, std::map<Value, Value>>& components) {
    const auto& c = src.base();
    std::vector<std::vector<int>> comp(c.object_count());
    for (std::size_t d = 0; d < c.object_count(); ++d) {
      int di = static_cast<int>(d);
      auto it = components.find(c.object_name(di));
      if (it == components.end()) {
        throw Error(ErrorKind::structural, "component missing for object '" + c.object_name(di) + "'");
      }
      comp[d].assign(src.size(di), -1);
      for (const auto& [from, to] : it->second) {
        auto fi = src.index_of(di, from);
        auto ti = dst.index_of(di, to);
        if (!fi || !ti) {
          throw Error(ErrorKind::structural, "component entry " + from.to_string() + " -> " +
                                                 to.to_string() + " at " + c.object_name(di) +
                                                 " leaves the carriers");
        }
        comp[d][*fi] = *ti;
      }
      for (std::size_t i = 0; i < comp[d].size(); ++i) {
        if (comp[d][i] < 0) {
          throw Error(ErrorKind::structural, "component at " + c.object_name(di) + " undefined on " +
                                                 src.element(di, static_cast<int>(i)).to_string());
        }
      }
    }
    return from_tables(std::move(src), std::move(dst), std::move(comp));
  }

  const Presheaf& src() const noexcept { return data_->src; }
  const Presheaf& dst() const noexcept { return data_->dst; }
  const FinCat& base() const noexcept { return data_->src.base(); }

  int at(ObjIndex d, int i) const { return data_->components[d][i]; }
  const std::vector<int>& component(ObjIndex d) const { return data_->components.at(d); }
  const std::vector<std::vector<int>>& components() const noexcept { return data_->components; }

  Value at_value(ObjIndex d, const Value& v) const {
    return data_->dst.element(d, at(d, data_->src.index(d, v)));
  }

  friend bool operator==(const NatTrans& a, const NatTrans& b) {
    if (a.data_ == b.data_) return true;
    return a.data_->components == b.data_->components && a.data_->src == b.data_->src &&
           a.data_->dst == b.data_->dst;
  }

 private:
  struct Data {
    Presheaf src;
    Presheaf dst;
    std::vector<std::vector<int>> components;
  };

  explicit NatTrans(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

inline bool nat_equal(const NatTrans& a, const NatTrans& b) { return a == b; }

/// Every naturality square that fails to commute, as (m, s).
inline ValidationReport validate_nat(const NatTrans& sigma) {
  ValidationReport report;
  const auto& src = sigma.src();
  const auto& dst = sigma.dst();
  const auto& c = sigma.base();
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    const auto& mor = c.morphism(static_cast<int>(m));
    for (std::size_t s = 0; s < src.size(mor.cod); ++s) {
      int lhs = dst.act(static_cast<int>(m), sigma.at(mor.cod, static_cast<int>(s)));
      int rhs = sigma.at(mor.dom, src.act(static_cast<int>(m), static_cast<int>(s)));
      if (lhs != rhs) {
        report.push_back({"naturality", "(" + mor.id + "," +
                                            src.element(mor.cod, static_cast<int>(s)).to_string() + ")"});
      }
    }
  }
  return report;
}

inline NatTrans nat_id(const Presheaf& g) {
  std::vector<std::vector<int>> comp(g.base().object_count());
  for (std::size_t d = 0; d < comp.size(); ++d) {
    comp[d].resize(g.size(static_cast<int>(d)));
    std::iota(comp[d].begin(), comp[d].end(), 0);
  }
  return NatTrans::from_tables(g, g, std::move(comp));
}

/// second o first.
inline NatTrans nat_compose(const NatTrans& second, const NatTrans& first) {
  if (!(first.dst() == second.src())) {
    throw Error(ErrorKind::structural, "nat_compose: endpoints do not match");
  }
  std::vector<std::vector<int>> comp(first.base().object_count());
  for (std::size_t d = 0; d < comp.size(); ++d) {
    const auto& f = first.component(static_cast<int>(d));
    comp[d].reserve(f.size());
    for (int x : f) comp[d].push_back(second.at(static_cast<int>(d), x));
  }
  return NatTrans::from_tables(first.src(), second.dst(), std::move(comp));
}

/// The unique transformation into the terminal presheaf.
inline NatTrans bang(const Presheaf& g) {
  auto top = terminal_presheaf(g.base());
  std::vector<std::vector<int>> comp(g.base().object_count());
  for (std::size_t d = 0; d < comp.size(); ++d) comp[d].assign(g.size(static_cast<int>(d)), 0);
  return NatTrans::from_tables(g, std::move(top), std::move(comp));
}


inline std::string elem_object_name(const Presheaf& g, ObjIndex d, int s) {
  return Value::pair(atom(g.base().object_name(d)), g.element(d, s)).to_string();
}

inline std::string elem_morphism_name(const Presheaf& g, MorIndex m, int s2) {
  const auto& mor = g.base().morphism(m);
  return Value::pair(atom(mor.id), g.element(mor.cod, s2)).to_string();
}

inline ElemCat category_of_elements(const Presheaf& g) {
  const auto& c = g.base();
  std::vector<std::string> objects;
  std::map<std::string, std::string> identity;
  std::vector<MorphismSpec> mors;
  ElemCat out{FinCat::make({}, {}, {}, {}), {}, {}, {}};
  for (std::size_t k = 0; k < g.elem_object_count(); ++k) {
    auto lab = g.elem_label(static_cast<int>(k));
    objects.push_back(elem_object_name(g, lab.obj, lab.elem));
    identity[objects.back()] = elem_morphism_name(g, c.identity(lab.obj), lab.elem);
    out.labels.push_back(lab);
  }
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    const auto& mor = c.morphism(static_cast<int>(m));
    for (std::size_t s2 = 0; s2 < g.size(mor.cod); ++s2) {
      int s = g.act(static_cast<int>(m), static_cast<int>(s2));
      mors.push_back({elem_morphism_name(g, static_cast<int>(m), static_cast<int>(s2)),
                      elem_object_name(g, mor.dom, s),
                      elem_object_name(g, mor.cod, static_cast<int>(s2))});
      out.embed.push_back(static_cast<int>(m));
      out.target_elem.push_back(static_cast<int>(s2));
    }
  }
  std::vector<CompositionSpec> comp;
  for (std::size_t gi = 0; gi < c.morphism_count(); ++gi) {
    const auto& mg = c.morphism(static_cast<int>(gi));
    for (int f : c.morphisms_into(mg.dom)) {
      int gf = c.compose(static_cast<int>(gi), f);
      for (std::size_t s3 = 0; s3 < g.size(mg.cod); ++s3) {
        int s2 = g.act(static_cast<int>(gi), static_cast<int>(s3));
        comp.push_back({elem_morphism_name(g, static_cast<int>(gi), static_cast<int>(s3)),
                        elem_morphism_name(g, f, s2),
                        elem_morphism_name(g, gf, static_cast<int>(s3))});
      }
    }
  }
  out.cat = FinCat::make(std::move(objects), mors, identity, comp, IdPolicy::label);
  return out;
}

inline const ElemCat& Presheaf::elements() const {
  std::call_once(data_->elements_once,
                 [this] { data_->elements = std::make_unique<ElemCat>(category_of_elements(*this)); });
  return *data_->elements;
}

/// The morphism (d, act(m, s2)) -> (d2, s2) of the category of elements,
/// as an index into category_of_elements(g).cat.
inline MorIndex extend_to_elements(const Presheaf& g, MorIndex m, const Value& s2) {
  const auto& mor = g.base().morphism(m);
  auto i = g.index_of(mor.cod, s2);
  if (!i) {
    throw Error(ErrorKind::lookup, "element " + s2.to_string() + " is not in the carrier of " +
                                       g.base().object_name(mor.cod));
  }
  return g.elem_morphism(m, *i);
}

}  // namespace cwflab
