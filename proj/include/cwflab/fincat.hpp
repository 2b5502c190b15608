#pragma once

// Finite categories as validated tables.
//
// Morphisms are always stored in base direction (dom -> cod). An arrow
// written in the opposite category, delta : op(d, d'), is the stored
// morphism d' -> d; every consumer of op-direction arrows flips explicitly.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cwflab/error.hpp"

namespace cwflab {

using ObjIndex = int;
using MorIndex = int;

struct MorphismSpec {
  std::string id;
  std::string dom;
  std::string cod;
};

struct CompositionSpec {
  std::string g;  ///< applied second
  std::string f;  ///< applied first
  std::string result;
};

struct Morphism {
  std::string id;
  ObjIndex dom;
  ObjIndex cod;
};

/// Identifiers must be usable as atoms in element values and in "d|s" keys.
/// Derived categories (category of elements) use rendered tuples as labels
/// and are built with IdPolicy::label, which only forbids empty ids.
enum class IdPolicy { atom, label };

inline bool valid_identifier(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (c == '(' || c == ')' || c == ',' || c == '|' || c == ' ' || c == '\t' || c == '\n') {
      return false;
    }
  }
  return true;
}

class FinCat {
 public:
  /// Builds the tables. Only structural problems (dangling ids, duplicate ids,
  /// missing or extra composition entries) are rejected here; categorical
  /// laws are checked by validate_category.
  static FinCat make(std::vector<std::string> objects, const std::vector<MorphismSpec>& morphisms,
                     const std::map<std::string, std::string>& identity,
                     const std::vector<CompositionSpec>& compose,
                     IdPolicy policy = IdPolicy::atom) {
    auto ok = [policy](const std::string& name) {
      return policy == IdPolicy::label ? !name.empty() : valid_identifier(name);
    };
    auto data = std::make_shared<Data>();
    data->objects = std::move(objects);
    for (std::size_t i = 0; i < data->objects.size(); ++i) {
      const auto& name = data->objects[i];
      if (!ok(name)) {
        throw Error(ErrorKind::structural, "invalid object id '" + name + "'");
      }
      if (!data->object_index.emplace(name, static_cast<int>(i)).second) {
        throw Error(ErrorKind::structural, "duplicate object id '" + name + "'");
      }
    }
    for (const auto& m : morphisms) {
      auto dom = data->object_index.find(m.dom);
      auto cod = data->object_index.find(m.cod);
      if (dom == data->object_index.end() || cod == data->object_index.end()) {
        throw Error(ErrorKind::structural, "morphism '" + m.id + "' names an unknown object");
      }
      int idx = static_cast<int>(data->morphisms.size());
      if (!ok(m.id) || !data->morphism_index.emplace(m.id, idx).second) {
        throw Error(ErrorKind::structural, "invalid or duplicate morphism id '" + m.id + "'");
      }
      data->morphisms.push_back({m.id, dom->second, cod->second});
    }
    data->identity.assign(data->objects.size(), -1);
    for (const auto& [obj, mor] : identity) {
      auto o = data->object_index.find(obj);
      auto m = data->morphism_index.find(mor);
      if (o == data->object_index.end() || m == data->morphism_index.end()) {
        throw Error(ErrorKind::structural, "identity entry " + obj + " -> " + mor + " is dangling");
      }
      data->identity[o->second] = m->second;
    }
    for (std::size_t i = 0; i < data->identity.size(); ++i) {
      if (data->identity[i] < 0) {
        throw Error(ErrorKind::structural, "object '" + data->objects[i] + "' has no identity");
      }
    }
    const std::size_t n = data->morphisms.size();
    data->into.assign(data->objects.size(), {});
    data->into_pos.assign(n, -1);
    for (std::size_t m = 0; m < n; ++m) {
      auto& into = data->into[data->morphisms[m].cod];
      data->into_pos[m] = static_cast<int>(into.size());
      into.push_back(static_cast<int>(m));
    }
    data->compose.resize(n);
    for (std::size_t g = 0; g < n; ++g) {
      data->compose[g].assign(data->into[data->morphisms[g].dom].size(), -1);
    }
    for (const auto& c : compose) {
      auto g = data->morphism_index.find(c.g);
      auto f = data->morphism_index.find(c.f);
      auto r = data->morphism_index.find(c.result);
      if (g == data->morphism_index.end() || f == data->morphism_index.end() ||
          r == data->morphism_index.end()) {
        throw Error(ErrorKind::structural,
                    "composition entry " + c.g + " o " + c.f + " = " + c.result + " is dangling");
      }
      if (data->morphisms[f->second].cod != data->morphisms[g->second].dom) {
        throw Error(ErrorKind::structural,
                    "composition entry for non-composable pair " + c.g + " o " + c.f);
      }
      auto& slot = data->compose[g->second][data->into_pos[f->second]];
      if (slot >= 0) {
        throw Error(ErrorKind::structural, "duplicate composition entry " + c.g + " o " + c.f);
      }
      slot = r->second;
    }
    for (std::size_t g = 0; g < n; ++g) {
      const auto& row = data->compose[g];
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k] < 0) {
          throw Error(ErrorKind::structural,
                      "composition table is partial: missing " + data->morphisms[g].id + " o " +
                          data->morphisms[data->into[data->morphisms[g].dom][k]].id);
        }
      }
    }
    data->hom.assign(data->objects.size() * data->objects.size(), {});
    for (std::size_t m = 0; m < n; ++m) {
      const auto& mor = data->morphisms[m];
      data->hom[mor.dom * data->objects.size() + mor.cod].push_back(static_cast<int>(m));
    }
    return FinCat(std::move(data));
  }

  std::size_t object_count() const noexcept { return data_->objects.size(); }
  std::size_t morphism_count() const noexcept { return data_->morphisms.size(); }

  const std::string& object_name(ObjIndex d) const { return data_->objects.at(d); }
  const std::vector<std::string>& object_names() const noexcept { return data_->objects; }

  ObjIndex object_index(std::string_view name) const {
    auto it = data_->object_index.find(std::string(name));
    if (it == data_->object_index.end()) {
      throw Error(ErrorKind::lookup, "unknown object '" + std::string(name) + "'");
    }
    return it->second;
  }

  std::optional<ObjIndex> find_object(std::string_view name) const {
    auto it = data_->object_index.find(std::string(name));
    if (it == data_->object_index.end()) return std::nullopt;
    return it->second;
  }

  const Morphism& morphism(MorIndex m) const { return data_->morphisms.at(m); }
  const std::vector<Morphism>& morphisms() const noexcept { return data_->morphisms; }

  MorIndex morphism_index(std::string_view name) const {
    auto it = data_->morphism_index.find(std::string(name));
    if (it == data_->morphism_index.end()) {
      throw Error(ErrorKind::lookup, "unknown morphism '" + std::string(name) + "'");
    }
    return it->second;
  }

  std::optional<MorIndex> find_morphism(std::string_view name) const {
    auto it = data_->morphism_index.find(std::string(name));
    if (it == data_->morphism_index.end()) return std::nullopt;
    return it->second;
  }

  MorIndex identity(ObjIndex d) const { return data_->identity.at(d); }

  bool is_identity(MorIndex m) const {
    return data_->identity[data_->morphisms[m].dom] == m;
  }

  /// g o f; requires cod(f) = dom(g).
  MorIndex compose(MorIndex g, MorIndex f) const {
    const auto& mg = data_->morphisms.at(g);
    const auto& mf = data_->morphisms.at(f);
    if (mf.cod != mg.dom) {
      throw Error(ErrorKind::domain_mismatch,
                  "cannot compose " + mg.id + " after " + mf.id + ": cod(" + mf.id +
                      ") = " + object_name(mf.cod) + " but dom(" + mg.id +
                      ") = " + object_name(mg.dom));
    }
    return data_->compose[g][data_->into_pos[f]];
  }

  /// Morphisms d -> d2.
  const std::vector<MorIndex>& hom(ObjIndex d, ObjIndex d2) const {
    return data_->hom.at(static_cast<std::size_t>(d) * object_count() + d2);
  }

  /// All morphisms with codomain d.
  const std::vector<MorIndex>& morphisms_into(ObjIndex d) const { return data_->into.at(d); }

  /// An object every object has exactly one morphism into, if any.
  std::optional<ObjIndex> terminal_object() const {
    for (std::size_t t = 0; t < object_count(); ++t) {
      if (is_terminal(static_cast<ObjIndex>(t))) return static_cast<ObjIndex>(t);
    }
    return std::nullopt;
  }

  bool is_terminal(ObjIndex t) const {
    for (std::size_t d = 0; d < object_count(); ++d) {
      if (hom(static_cast<ObjIndex>(d), t).size() != 1) return false;
    }
    return true;
  }

  /// The unique morphism d -> t; t must be terminal.
  MorIndex bang(ObjIndex d, ObjIndex t) const {
    const auto& h = hom(d, t);
    if (h.size() != 1) {
      throw Error(ErrorKind::precondition, "object '" + object_name(t) + "' is not terminal");
    }
    return h.front();
  }

  bool same_as(const FinCat& other) const noexcept { return data_ == other.data_; }

  friend bool operator==(const FinCat& a, const FinCat& b) {
    if (a.data_ == b.data_) return true;
    return a.data_->objects == b.data_->objects &&
           a.data_->morphisms.size() == b.data_->morphisms.size() &&
           std::equal(a.data_->morphisms.begin(), a.data_->morphisms.end(),
                      b.data_->morphisms.begin(),
                      [](const Morphism& x, const Morphism& y) {
                        return x.id == y.id && x.dom == y.dom && x.cod == y.cod;
                      }) &&
           a.data_->identity == b.data_->identity && a.data_->compose == b.data_->compose;
  }

 private:
  struct Data {
    std::vector<std::string> objects;
    std::unordered_map<std::string, int> object_index;
    std::vector<Morphism> morphisms;
    std::unordered_map<std::string, int> morphism_index;
    std::vector<int> identity;
    std::vector<std::vector<int>> into;   // morphisms by codomain
    std::vector<int> into_pos;            // position of each morphism within into[cod]
    std::vector<std::vector<int>> compose;  // [g][into_pos[f]]
    std::vector<std::vector<int>> hom;
  };

  explicit FinCat(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

/// Every violated category law, with witnessing morphisms.
inline ValidationReport validate_category(const FinCat& c) {
  ValidationReport report;
  const auto& mors = c.morphisms();
  for (std::size_t d = 0; d < c.object_count(); ++d) {
    const auto& id = c.morphism(c.identity(static_cast<int>(d)));
    if (id.dom != static_cast<int>(d) || id.cod != static_cast<int>(d)) {
      report.push_back({"identity-endpoints", c.object_name(static_cast<int>(d)) + ": " + id.id});
    }
  }
  for (std::size_t f = 0; f < mors.size(); ++f) {
    for (std::size_t g = 0; g < mors.size(); ++g) {
      if (mors[f].cod != mors[g].dom) continue;
      int r = c.compose(static_cast<int>(g), static_cast<int>(f));
      if (mors[r].dom != mors[f].dom || mors[r].cod != mors[g].cod) {
        report.push_back({"composition-endpoints",
                          mors[g].id + " o " + mors[f].id + " = " + mors[r].id});
      }
    }
  }
  for (std::size_t f = 0; f < mors.size(); ++f) {
    int fi = static_cast<int>(f);
    if (c.compose(c.identity(mors[f].cod), fi) != fi) {
      report.push_back({"left-identity", mors[f].id});
    }
    if (c.compose(fi, c.identity(mors[f].dom)) != fi) {
      report.push_back({"right-identity", mors[f].id});
    }
  }
  for (std::size_t f = 0; f < mors.size(); ++f) {
    for (std::size_t g = 0; g < mors.size(); ++g) {
      if (mors[f].cod != mors[g].dom) continue;
      int gf = c.compose(static_cast<int>(g), static_cast<int>(f));
      for (std::size_t h = 0; h < mors.size(); ++h) {
        if (mors[g].cod != mors[h].dom) continue;
        int hg = c.compose(static_cast<int>(h), static_cast<int>(g));
        if (mors[gf].cod != mors[h].dom || mors[f].cod != mors[hg].dom) continue;
        if (c.compose(static_cast<int>(h), gf) != c.compose(hg, static_cast<int>(f))) {
          report.push_back({"associativity", mors[h].id + ", " + mors[g].id + ", " + mors[f].id});
        }
      }
    }
  }
  return report;
}

/// g o f by identifier.
inline std::string compose(const FinCat& c, std::string_view g, std::string_view f) {
  return c.morphism(c.compose(c.morphism_index(g), c.morphism_index(f))).id;
}

/// Identifiers of the morphisms d -> d2.
inline std::vector<std::string> hom_set(const FinCat& c, std::string_view d, std::string_view d2) {
  std::vector<std::string> out;
  for (int m : c.hom(c.object_index(d), c.object_index(d2))) out.push_back(c.morphism(m).id);
  return out;
}

inline FinCat terminal_category() {
  return FinCat::make({"o"}, {{"id_o", "o", "o"}}, {{"o", "id_o"}}, {{"id_o", "id_o", "id_o"}});
}

/// a --f--> b.
inline FinCat walking_arrow() {
  return FinCat::make({"a", "b"}, {{"id_a", "a", "a"}, {"id_b", "b", "b"}, {"f", "a", "b"}},
                      {{"a", "id_a"}, {"b", "id_b"}},
                      {{"id_a", "id_a", "id_a"},
                       {"id_b", "id_b", "id_b"},
                       {"f", "id_a", "f"},
                       {"id_b", "f", "f"}});
}

inline constexpr int kDefaultChainFuel = 8;

/// The poset 0 -> 1 -> ... -> n, with morphisms "i<j" and identities "id_i".
inline FinCat chain(int n, int fuel = kDefaultChainFuel) {
  if (n < 0) throw Error(ErrorKind::precondition, "chain length must be non-negative");
  if (n > fuel) {
    throw Error(ErrorKind::capacity,
                "chain(" + std::to_string(n) + ") exceeds fuel " + std::to_string(fuel));
  }
  auto name = [](int i, int j) {
    return i == j ? "id_" + std::to_string(i) : std::to_string(i) + "<" + std::to_string(j);
  };
  std::vector<std::string> objects;
  std::vector<MorphismSpec> mors;
  std::map<std::string, std::string> ids;
  std::vector<CompositionSpec> comp;
  for (int i = 0; i <= n; ++i) {
    objects.push_back(std::to_string(i));
    ids[std::to_string(i)] = name(i, i);
  }
  for (int i = 0; i <= n; ++i) {
    for (int j = i; j <= n; ++j) mors.push_back({name(i, j), std::to_string(i), std::to_string(j)});
  }
  for (int i = 0; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      for (int k = j; k <= n; ++k) comp.push_back({name(j, k), name(i, j), name(i, k)});
    }
  }
  return FinCat::make(std::move(objects), mors, ids, comp);
}

}  // namespace cwflab
