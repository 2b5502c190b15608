#pragma once

// Structural element values. Every element of every carrier and fiber is a
// Value: either an atom (an opaque identifier) or a tuple of Values. Tuples
// give comprehension pairs (s, a) and function tables their structural
// equality; the textual form "(a,(b,c))" is used in reports and file keys.

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cwflab/error.hpp"

namespace cwflab {

class Value {
 public:
  /// The empty tuple.
  Value() : node_(empty_node()) {}

  static Value atom(std::string name) {
    auto node = std::make_shared<Node>();
    node->is_atom = true;
    node->hash = std::hash<std::string>{}(name) * 0x9e3779b97f4a7c15ULL + 1;
    node->name = std::move(name);
    return Value(std::move(node));
  }

  static Value tuple(std::vector<Value> items) {
    auto node = std::make_shared<Node>();
    node->is_atom = false;
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& item : items) h = (h ^ item.hash()) * 0x100000001b3ULL;
    node->hash = h;
    node->items = std::move(items);
    return Value(std::move(node));
  }

  static Value pair(Value first, Value second) {
    return tuple({std::move(first), std::move(second)});
  }

  bool is_atom() const noexcept { return node_->is_atom; }
  const std::string& name() const noexcept { return node_->name; }
  std::span<const Value> items() const noexcept { return node_->items; }
  std::size_t size() const noexcept { return node_->items.size(); }
  const Value& operator[](std::size_t i) const { return node_->items.at(i); }
  std::size_t hash() const noexcept { return node_->hash; }

  friend bool operator==(const Value& a, const Value& b) noexcept {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash || a.node_->is_atom != b.node_->is_atom) return false;
    if (a.node_->is_atom) return a.node_->name == b.node_->name;
    const auto& x = a.node_->items;
    const auto& y = b.node_->items;
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(x[i] == y[i])) return false;
    }
    return true;
  }

  // Atoms sort before tuples; atoms by name, tuples lexicographically.
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) noexcept {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (a.node_->is_atom != b.node_->is_atom) {
      return a.node_->is_atom ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (a.node_->is_atom) {
      int c = a.node_->name.compare(b.node_->name);
      return c < 0 ? std::strong_ordering::less
                   : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    const auto& x = a.node_->items;
    const auto& y = b.node_->items;
    std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
      auto c = x[i] <=> y[i];
      if (c != std::strong_ordering::equal) return c;
    }
    return x.size() <=> y.size();
  }

  std::string to_string() const {
    std::string out;
    append_to(out);
    return out;
  }

  static Value parse(std::string_view text) {
    std::size_t pos = 0;
    Value v = parse_at(text, pos);
    if (pos != text.size()) {
      throw Error(ErrorKind::parse, "trailing characters in value '" + std::string(text) + "'");
    }
    return v;
  }

  static bool valid_atom_name(std::string_view name) {
    if (name.empty()) return false;
    for (char c : name) {
      if (c == '(' || c == ')' || c == ',' || c == ' ' || c == '\t' || c == '\n') return false;
    }
    return true;
  }

 private:
  struct Node {
    bool is_atom = false;
    std::size_t hash = 0;
    std::string name;
    std::vector<Value> items;
  };

  explicit Value(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static const std::shared_ptr<const Node>& empty_node() {
    static const std::shared_ptr<const Node> node = [] {
      auto n = std::make_shared<Node>();
      n->hash = 0xcbf29ce484222325ULL;
      return n;
    }();
    return node;
  }

  void append_to(std::string& out) const {
    if (is_atom()) {
      out += name();
      return;
    }
    out += '(';
    bool first = true;
    for (const auto& item : items()) {
      if (!first) out += ',';
      first = false;
      item.append_to(out);
    }
    out += ')';
  }

  static Value parse_at(std::string_view text, std::size_t& pos) {
    if (pos >= text.size()) throw Error(ErrorKind::parse, "unexpected end of value");
    if (text[pos] == '(') {
      ++pos;
      std::vector<Value> items;
      if (pos < text.size() && text[pos] == ')') {
        ++pos;
        return tuple(std::move(items));
      }
      while (true) {
        items.push_back(parse_at(text, pos));
        if (pos >= text.size()) throw Error(ErrorKind::parse, "unterminated tuple");
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        if (text[pos] == ')') {
          ++pos;
          return tuple(std::move(items));
        }
        throw Error(ErrorKind::parse, "unexpected character in tuple");
      }
    }
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != ',' && text[pos] != ')' && text[pos] != '(') ++pos;
    std::string_view name = text.substr(start, pos - start);
    if (!valid_atom_name(name)) {
      throw Error(ErrorKind::parse, "invalid atom '" + std::string(name) + "'");
    }
    return atom(std::string(name));
  }

  std::shared_ptr<const Node> node_;
};

struct ValueHash {
  std::size_t operator()(const Value& v) const noexcept { return v.hash(); }
};

inline Value atom(std::string name) { return Value::atom(std::move(name)); }

inline const Value& star() {
  static const Value s = Value::atom("*");
  return s;
}

/// Splits an iterated comprehension element (((*, x1), x2), ..., xn) into
/// [x1, ..., xn]. `depth` is the number of comprehension steps.
inline std::vector<Value> unnest(const Value& element, std::size_t depth) {
  std::vector<Value> parts(depth);
  Value cur = element;
  for (std::size_t i = depth; i-- > 0;) {
    if (cur.is_atom() || cur.size() != 2) {
      throw Error(ErrorKind::structural, "element " + element.to_string() +
                                             " is not an iterated pair of depth " +
                                             std::to_string(depth));
    }
    parts[i] = cur[1];
    cur = cur[0];
  }
  return parts;
}

/// Inverse of unnest: folds components onto a root element.
inline Value renest(Value root, std::span<const Value> parts) {
  for (const auto& p : parts) root = Value::pair(std::move(root), p);
  return root;
}

}  // namespace cwflab

template <>
struct std::hash<cwflab::Value> {
  std::size_t operator()(const cwflab::Value& v) const noexcept { return v.hash(); }
};
