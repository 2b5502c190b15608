#pragma once

// Exhaustive enumeration of small presheaves and dependent types, with
// seeded sampling once a space exceeds its cap.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cwflab/cwf.hpp"
#include "cwflab/error.hpp"
#include "cwflab/fincat.hpp"
#include "cwflab/presheaf.hpp"
#include "cwflab/value.hpp"

namespace cwflab {

struct FixtureBounds {
  int max_objects = 3;
  int max_card = 3;            ///< elements per fiber
  std::size_t cap = 64;        ///< instances kept per family before sampling
  std::size_t limit = kDefaultEnumerationLimit;
  unsigned seed = 0;
};

/// Keeps all of `items` when there are at most `cap`, otherwise a seeded
/// uniform sample of `cap` of them in their original relative order.
template <class T>
std::vector<T> sample(std::vector<T> items, std::size_t cap, unsigned seed) {
  if (items.size() <= cap) return items;
  std::vector<std::size_t> idx(items.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());
  std::vector<T> out;
  out.reserve(cap);
  for (auto i : idx) out.push_back(items[i]);
  return out;
}

namespace detail {

inline constexpr std::size_t kDefaultSearchNodes = 1u << 20;

/// Visits every coherent action table for fixed carrier sizes, each free
/// morphism's table tried in a fixed or (with rng) shuffled order. `visit`
/// returns false to stop; the result is false when stopped early. Each table
/// placement spends one of `nodes`; running out is a capacity error.
inline bool search_actions(const FinCat& c, const std::vector<int>& card, std::mt19937* rng,
                           const std::function<bool(const std::vector<std::vector<int>>&)>& visit,
                           std::size_t& nodes) {
  std::vector<MorIndex> free;  // non-identity morphisms, assigned in order
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    if (!c.is_identity(static_cast<int>(m))) free.push_back(static_cast<int>(m));
  }
  std::vector<int> pos(c.morphism_count(), -1);
  for (std::size_t i = 0; i < free.size(); ++i) pos[free[i]] = static_cast<int>(i);

  std::vector<std::vector<int>> act(c.morphism_count());
  for (std::size_t m = 0; m < c.morphism_count(); ++m) {
    int mi = static_cast<int>(m);
    if (c.is_identity(mi)) {
      act[m].resize(card[c.morphism(mi).cod]);
      for (std::size_t i = 0; i < act[m].size(); ++i) act[m][i] = static_cast<int>(i);
    }
  }
  auto assigned = [&](int m, std::size_t upto) { return c.is_identity(m) || pos[m] < static_cast<int>(upto); };
  // A morphism's table is checked against every composite whose factors
  // are both assigned (or identities) once it is placed.
  auto coherent = [&](std::size_t upto) {
    int last = free[upto - 1];
    for (std::size_t g = 0; g < c.morphism_count(); ++g) {
      int gi = static_cast<int>(g);
      if (!assigned(gi, upto)) continue;
      for (int f : c.morphisms_into(c.morphism(gi).dom)) {
        int gf = c.compose(gi, f);
        if (gi != last && f != last && gf != last) continue;
        if (!assigned(f, upto) || !assigned(gf, upto)) continue;
        for (int s = 0; s < card[c.morphism(gi).cod]; ++s) {
          if (act[f][act[gi][s]] != act[gf][s]) return false;
        }
      }
    }
    return true;
  };
  std::function<bool(std::size_t)> place = [&](std::size_t i) {
    if (i == free.size()) return visit(act);
    const auto& mor = c.morphism(free[i]);
    int n_src = card[mor.cod];
    int n_dst = card[mor.dom];
    if (n_src > 0 && n_dst == 0) return true;
    std::vector<std::vector<int>> tables;
    std::vector<int> t(n_src, 0);
    while (true) {
      tables.push_back(t);
      int k = 0;
      while (k < n_src && ++t[k] == n_dst) t[k++] = 0;
      if (k == n_src) break;
    }
    if (rng) std::shuffle(tables.begin(), tables.end(), *rng);
    for (auto& tab : tables) {
      if (nodes-- == 0) throw Error(ErrorKind::capacity, "action search: node budget exhausted");
      act[free[i]] = std::move(tab);
      if (coherent(i + 1) && !place(i + 1)) return false;
    }
    return true;
  };
  return place(0);
}

inline std::vector<std::vector<Value>> atom_carriers(const std::vector<int>& card) {
  std::vector<std::vector<Value>> car(card.size());
  for (std::size_t d = 0; d < card.size(); ++d) {
    for (int k = 0; k < card[d]; ++k) car[d].push_back(atom(std::to_string(k)));
  }
  return car;
}

}  // namespace detail

/// Every presheaf on `c` whose carriers are {0, ..., n_d - 1} with
/// n_d <= max_card, in a fixed order. Carrier elements are atoms.
inline std::vector<Presheaf> enumerate_presheaves(const FinCat& c, int max_card,
                                                  std::size_t limit = kDefaultEnumerationLimit,
                                                  std::size_t nodes = detail::kDefaultSearchNodes) {
  const std::size_t n_obj = c.object_count();
  std::vector<int> card(n_obj, 0);
  std::vector<Presheaf> out;
  std::function<void(std::size_t)> sizes = [&](std::size_t d) {
    if (d == n_obj) {
      detail::search_actions(c, card, nullptr, [&](const std::vector<std::vector<int>>& act) {
        if (out.size() >= limit) {
          throw Error(ErrorKind::capacity, "presheaf enumeration: more than " + std::to_string(limit));
        }
        out.push_back(Presheaf::from_tables(c, detail::atom_carriers(card), act));
        return true;
      }, nodes);
      return;
    }
    for (int k = 0; k <= max_card; ++k) {
      card[d] = k;
      sizes(d + 1);
    }
  };
  sizes(0);
  return out;
}

inline constexpr std::size_t kRandomSearchNodes = 4096;

/// One presheaf with random carrier sizes in [0, max_card] and a random
/// coherent action, or nothing if `attempts` size draws all admit none.
inline std::optional<Presheaf> random_presheaf(const FinCat& c, int max_card, std::mt19937& rng, int attempts = 32) {
  std::uniform_int_distribution<int> size(0, max_card);
  for (int a = 0; a < attempts; ++a) {
    std::vector<int> card(c.object_count());
    for (auto& n : card) n = size(rng);
    std::optional<Presheaf> found;
    std::size_t nodes = kRandomSearchNodes;
    try {
      detail::search_actions(c, card, &rng, [&](const std::vector<std::vector<int>>& act) {
        found = Presheaf::from_tables(c, detail::atom_carriers(card), act);
        return false;
      }, nodes);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::capacity) throw;
    }
    if (found) return found;
  }
  return std::nullopt;
}

/// Exhaustive enumeration when the space has at most `exhaustive` members,
/// then sampled down to `cap`; otherwise `cap` random draws (duplicates
/// removed). Deterministic in `seed`.
inline std::vector<Presheaf> presheaf_family(const FinCat& c, int max_card, std::size_t cap, unsigned seed,
                                             std::size_t exhaustive) {
  try {
    return sample(enumerate_presheaves(c, max_card, exhaustive, 64 * exhaustive), cap, seed);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::capacity) throw;
  }
  std::mt19937 rng(seed);
  std::vector<Presheaf> out;
  for (std::size_t tries = 0; out.size() < cap && tries < 4 * cap; ++tries) {
    auto p = random_presheaf(c, max_card, rng);
    if (!p) continue;
    bool dup = false;
    for (const auto& q : out) dup = dup || q == *p;
    if (!dup) out.push_back(std::move(*p));
  }
  return out;
}

/// Every DepTy over Γ with fibers of size <= max_card.
inline std::vector<DepTy> enumerate_deptys(const Presheaf& gamma, int max_card,
                                           std::size_t limit = kDefaultEnumerationLimit) {
  std::vector<DepTy> out;
  for (auto& fam : enumerate_presheaves(gamma.elements().cat, max_card, limit)) {
    out.push_back(DepTy::make(gamma, std::move(fam)));
  }
  return out;
}

/// As presheaf_family, over the category of elements of Γ.
inline std::vector<DepTy> depty_family(const Presheaf& gamma, int max_card, std::size_t cap, unsigned seed,
                                       std::size_t exhaustive) {
  std::vector<DepTy> out;
  for (auto& fam : presheaf_family(gamma.elements().cat, max_card, cap, seed, exhaustive)) {
    out.push_back(DepTy::make(gamma, std::move(fam)));
  }
  return out;
}

}  // namespace cwflab
