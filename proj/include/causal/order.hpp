#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace causal {

/// Strict partial order over a small set of named elements (at most 32).
class PartialOrder {
 public:
  PartialOrder() = default;
  /// The empty relation: every pair incomparable.
  explicit PartialOrder(std::vector<std::string> elements);

  /// Transitively closes `pairs` (a < b for each (a, b)) and throws if the
  /// result is not irreflexive and antisymmetric.
  static PartialOrder from_pairs(std::vector<std::string> elements,
                                 const std::vector<std::pair<std::string, std::string>>& pairs);
  /// elements[0] < elements[1] < ...
  static PartialOrder total(std::vector<std::string> elements);
  /// Builds directly from successor bitmasks; throws unless strict.
  static PartialOrder from_masks(std::vector<std::string> elements, std::vector<std::uint32_t> successors);

  const std::vector<std::string>& elements() const { return elements_; }
  int size() const { return static_cast<int>(elements_.size()); }
  int index_of(const std::string& name) const;

  bool less(int i, int j) const { return (succ_[i] >> j) & 1U; }
  bool less(const std::string& a, const std::string& b) const { return less(index_of(a), index_of(b)); }
  bool comparable(int i, int j) const { return less(i, j) || less(j, i); }

  std::uint32_t successors(int i) const { return succ_[i]; }
  std::uint32_t predecessors(int i) const;
  int relation_count() const;
  std::vector<std::pair<std::string, std::string>> pairs() const;
  bool is_total() const;

  PartialOrder reversed() const;
  /// Restriction to `subset` (kept in this order's element order).
  PartialOrder restricted(const std::vector<std::string>& subset) const;

  /// Same element set and same relation, regardless of element listing order.
  bool operator==(const PartialOrder& other) const;

  /// "A<B, A<C" style; "(no relations)" when empty.
  std::string to_string() const;

 private:
  std::vector<std::string> elements_;
  std::vector<std::uint32_t> succ_;  // bit j of succ_[i] set iff element i < element j
};

bool is_strict_partial_order(const std::vector<std::uint32_t>& successors);

/// Every labeled strict partial order on `elements`, each exactly once.
/// Built by inserting one element at a time with a compatible down-set and
/// up-set. Throws for more than 5 elements.
std::vector<PartialOrder> enumerate_posets(const std::vector<std::string>& elements);
/// Same, with elements named "0".."n-1".
std::vector<PartialOrder> enumerate_posets(int n);

/// The class {O, reverse(O)}: an order with no preferred direction.
class BiOrder {
 public:
  explicit BiOrder(PartialOrder representative);

  const PartialOrder& representative() const { return rep_; }
  bool contains(const PartialOrder& order) const { return order == rep_ || order == rep_.reversed(); }
  bool operator==(const BiOrder& other) const { return contains(other.rep_); }
  bool is_total() const { return rep_.is_total(); }
  std::string to_string() const;

 private:
  PartialOrder rep_;
};

/// Directed graph on named nodes (at most 32), stored as successor masks.
class DiGraph {
 public:
  DiGraph() = default;
  explicit DiGraph(std::vector<std::string> nodes);

  const std::vector<std::string>& nodes() const { return nodes_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int index_of(const std::string& name) const;

  void add_edge(int from, int to) { succ_[from] |= 1U << to; }
  bool has_edge(int from, int to) const { return (succ_[from] >> to) & 1U; }
  bool has_edge(const std::string& from, const std::string& to) const {
    return has_edge(index_of(from), index_of(to));
  }
  std::uint32_t successors(int i) const { return succ_[i]; }
  int edge_count() const;
  std::vector<std::pair<std::string, std::string>> edges() const;
  bool empty() const { return edge_count() == 0; }

  /// Every edge flipped.
  DiGraph reversed() const;
  /// True when some directed cycle exists (self-loops count).
  bool has_cycle() const;

  /// Same node set and the same named edges.
  bool operator==(const DiGraph& other) const;
  std::string to_string() const;

 private:
  std::vector<std::string> nodes_;
  std::vector<std::uint32_t> succ_;
};

}  // namespace causal
