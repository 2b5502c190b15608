#pragma once

// A small solver for "functional" constraint problems: finitely many
// variables with finite domains, linked by constraints x_to = map[x_from].
// Terms, natural transformations and coherent function tables are all
// solutions of such a problem, one variable per element.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "cwflab/error.hpp"

namespace cwflab {

class FunctionalCsp {
 public:
  explicit FunctionalCsp(std::vector<int> domain_sizes)
      : domain_(std::move(domain_sizes)), out_(domain_.size()), in_(domain_.size()) {}

  std::size_t variable_count() const noexcept { return domain_.size(); }

  /// Requires value(to) == map[value(from)]; a -1 entry forbids that value of `from`.
  void link(int from, int to, const std::vector<int>* map) {
    int id = static_cast<int>(links_.size());
    links_.push_back({from, to, map});
    out_[from].push_back(id);
    in_[to].push_back(id);
  }

  /// Calls `visit` on every solution in a fixed order; stops early when it
  /// returns false. Throws a capacity error once more than `limit` solutions
  /// have been produced. Returns the number of solutions visited.
  std::size_t solve(const std::function<bool(const std::vector<int>&)>& visit, std::size_t limit,
                    const std::string& what) const {
    for (int d : domain_) {
      if (d == 0) return 0;
    }
    order_variables();
    std::vector<int> value(domain_.size(), -1);
    std::size_t count = 0;
    bool stop = false;
    search(0, value, count, stop, visit, limit, what);
    return count;
  }

  std::vector<std::vector<int>> all(std::size_t limit, const std::string& what) const {
    std::vector<std::vector<int>> out;
    solve([&](const std::vector<int>& v) {
      out.push_back(v);
      return true;
    }, limit, what);
    return out;
  }

 private:
  struct Link {
    int from;
    int to;
    const std::vector<int>* map;
  };

  // Breadth-first over the undirected constraint graph so that most
  // variables are forced by an already-assigned neighbour.
  void order_variables() const {
    if (!order_.empty() || domain_.empty()) return;
    std::vector<char> seen(domain_.size(), 0);
    for (std::size_t root = 0; root < domain_.size(); ++root) {
      if (seen[root]) continue;
      seen[root] = 1;
      std::size_t head = order_.size();
      order_.push_back(static_cast<int>(root));
      while (head < order_.size()) {
        int x = order_[head++];
        auto visit = [&](int y) {
          if (!seen[y]) {
            seen[y] = 1;
            order_.push_back(y);
          }
        };
        for (int l : out_[x]) visit(links_[l].to);
        for (int l : in_[x]) visit(links_[l].from);
      }
    }
  }

  bool consistent(int x, const std::vector<int>& value) const {
    for (int l : out_[x]) {
      const auto& k = links_[l];
      int y = value[k.to];
      if (y >= 0 && (*k.map)[value[x]] != y) return false;
      if ((*k.map)[value[x]] < 0) return false;
    }
    for (int l : in_[x]) {
      const auto& k = links_[l];
      int y = value[k.from];
      if (y >= 0 && (*k.map)[y] != value[x]) return false;
    }
    return true;
  }

  void search(std::size_t depth, std::vector<int>& value, std::size_t& count, bool& stop,
              const std::function<bool(const std::vector<int>&)>& visit, std::size_t limit,
              const std::string& what) const {
    if (stop) return;
    if (depth == order_.size()) {
      if (++count > limit) {
        throw Error(ErrorKind::capacity,
                    what + ": more than " + std::to_string(limit) + " solutions");
      }
      if (!visit(value)) stop = true;
      return;
    }
    int x = order_[depth];
    int forced = -1;
    for (int l : in_[x]) {
      const auto& k = links_[l];
      if (value[k.from] >= 0) {
        forced = (*k.map)[value[k.from]];
        if (forced < 0) return;
        break;
      }
    }
    int lo = forced >= 0 ? forced : 0;
    int hi = forced >= 0 ? forced + 1 : domain_[x];
    for (int c = lo; c < hi && !stop; ++c) {
      value[x] = c;
      if (consistent(x, value)) search(depth + 1, value, count, stop, visit, limit, what);
    }
    value[x] = -1;
  }

  std::vector<int> domain_;
  std::vector<Link> links_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  mutable std::vector<int> order_;
};

}  // namespace cwflab
