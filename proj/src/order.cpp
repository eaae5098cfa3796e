#include "causal/order.hpp"

#include "causal/tensor.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace causal {
namespace {

std::vector<std::uint32_t> closure(std::vector<std::uint32_t> succ) {
  const int n = static_cast<int>(succ.size());
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if ((succ[i] >> k) & 1U) succ[i] |= succ[k];
    }
  }
  return succ;
}

}  // namespace

bool is_strict_partial_order(const std::vector<std::uint32_t>& succ) {
  const int n = static_cast<int>(succ.size());
  for (int i = 0; i < n; ++i) {
    if ((succ[i] >> i) & 1U) return false;
    for (int j = 0; j < n; ++j) {
      if (!((succ[i] >> j) & 1U)) continue;
      if ((succ[j] >> i) & 1U) return false;
      if ((succ[j] & ~succ[i]) != 0U) return false;  // i<j<k must give i<k
    }
  }
  return true;
}

PartialOrder::PartialOrder(std::vector<std::string> elements)
    : elements_(std::move(elements)), succ_(elements_.size(), 0U) {
  if (elements_.size() > 32) throw Error("partial orders support at most 32 elements");
  std::set<std::string> seen(elements_.begin(), elements_.end());
  if (seen.size() != elements_.size()) throw Error("partial order elements must be distinct");
}

PartialOrder PartialOrder::from_masks(std::vector<std::string> elements, std::vector<std::uint32_t> successors) {
  PartialOrder o(std::move(elements));
  if (successors.size() != o.elements_.size()) throw Error("successor mask count mismatch");
  if (!is_strict_partial_order(successors)) throw Error("relation is not a strict partial order");
  o.succ_ = std::move(successors);
  return o;
}

PartialOrder PartialOrder::from_pairs(std::vector<std::string> elements,
                                      const std::vector<std::pair<std::string, std::string>>& pairs) {
  PartialOrder o(std::move(elements));
  for (const auto& [a, b] : pairs) {
    const int i = o.index_of(a);
    const int j = o.index_of(b);
    o.succ_[i] |= 1U << j;
  }
  o.succ_ = closure(o.succ_);
  if (!is_strict_partial_order(o.succ_)) throw Error("relation is not a strict partial order (cycle)");
  return o;
}

PartialOrder PartialOrder::total(std::vector<std::string> elements) {
  PartialOrder o(std::move(elements));
  const int n = o.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) o.succ_[i] |= 1U << j;
  }
  return o;
}

int PartialOrder::index_of(const std::string& name) const {
  const auto it = std::find(elements_.begin(), elements_.end(), name);
  if (it == elements_.end()) throw Error("'" + name + "' is not an element of the order");
  return static_cast<int>(it - elements_.begin());
}

std::uint32_t PartialOrder::predecessors(int i) const {
  std::uint32_t p = 0;
  for (int j = 0; j < size(); ++j) {
    if (less(j, i)) p |= 1U << j;
  }
  return p;
}

int PartialOrder::relation_count() const {
  int c = 0;
  for (auto s : succ_) c += std::popcount(s);
  return c;
}

std::vector<std::pair<std::string, std::string>> PartialOrder::pairs() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (less(i, j)) out.emplace_back(elements_[i], elements_[j]);
    }
  }
  return out;
}

bool PartialOrder::is_total() const {
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) {
      if (!comparable(i, j)) return false;
    }
  }
  return true;
}

PartialOrder PartialOrder::reversed() const {
  PartialOrder o(elements_);
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (less(i, j)) o.succ_[j] |= 1U << i;
    }
  }
  return o;
}

PartialOrder PartialOrder::restricted(const std::vector<std::string>& subset) const {
  std::vector<std::string> kept;
  std::vector<int> idx;
  for (int i = 0; i < size(); ++i) {
    if (std::find(subset.begin(), subset.end(), elements_[i]) != subset.end()) {
      kept.push_back(elements_[i]);
      idx.push_back(i);
    }
  }
  if (kept.size() != subset.size()) throw Error("restriction subset contains unknown elements");
  PartialOrder o(kept);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b < idx.size(); ++b) {
      if (less(idx[a], idx[b])) o.succ_[a] |= 1U << b;
    }
  }
  return o;
}

bool PartialOrder::operator==(const PartialOrder& other) const {
  if (size() != other.size()) return false;
  std::set<std::string> mine(elements_.begin(), elements_.end());
  std::set<std::string> theirs(other.elements_.begin(), other.elements_.end());
  if (mine != theirs) return false;
  auto a = pairs();
  auto b = other.pairs();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::string PartialOrder::to_string() const {
  const auto p = pairs();
  if (p.empty()) return "(no relations)";
  std::string s;
  for (const auto& [a, b] : p) {
    if (!s.empty()) s += ", ";
    s += a + "<" + b;
  }
  return s;
}

std::vector<PartialOrder> enumerate_posets(const std::vector<std::string>& elements) {
  const int n = static_cast<int>(elements.size());
  if (n > 5) throw Error("enumerate_posets: at most 5 elements are supported");
  // Each entry is a successor-mask vector over the first k elements.
  std::vector<std::vector<std::uint32_t>> layer{{}};
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<std::uint32_t>> next;
    const std::uint32_t full = (1U << k) - 1U;
    for (const auto& succ : layer) {
      // down: elements below the new one; up: elements above it.
      for (std::uint32_t down = 0; down <= full; ++down) {
        bool down_closed = true;
        for (int i = 0; i < k && down_closed; ++i) {
          if (!((down >> i) & 1U)) continue;
          for (int j = 0; j < k; ++j) {
            if (((succ[j] >> i) & 1U) && !((down >> j) & 1U)) {
              down_closed = false;
              break;
            }
          }
        }
        if (!down_closed) continue;
        for (std::uint32_t up = 0; up <= full; ++up) {
          if ((up & down) != 0U) continue;
          bool ok = true;
          for (int i = 0; i < k && ok; ++i) {
            if ((up >> i) & 1U) {
              if ((succ[i] & ~up) != 0U) ok = false;  // up-closed
            }
            if ((down >> i) & 1U) {
              if ((up & ~succ[i]) != 0U) ok = false;  // every lower < every upper
            }
          }
          if (!ok) continue;
          auto ext = succ;
          for (int i = 0; i < k; ++i) {
            if ((down >> i) & 1U) ext[i] |= 1U << k;
          }
          ext.push_back(up);
          next.push_back(std::move(ext));
        }
      }
    }
    layer = std::move(next);
  }
  std::vector<PartialOrder> out;
  out.reserve(layer.size());
  for (auto& succ : layer) out.push_back(PartialOrder::from_masks(elements, std::move(succ)));
  std::stable_sort(out.begin(), out.end(), [](const PartialOrder& a, const PartialOrder& b) {
    return a.relation_count() < b.relation_count();
  });
  return out;
}

std::vector<PartialOrder> enumerate_posets(int n) {
  if (n < 0) throw Error("enumerate_posets: negative size");
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return enumerate_posets(names);
}

BiOrder::BiOrder(PartialOrder representative) : rep_(std::move(representative)) {}

std::string BiOrder::to_string() const { return "{" + rep_.to_string() + " ~ " + rep_.reversed().to_string() + "}"; }

DiGraph::DiGraph(std::vector<std::string> nodes) : nodes_(std::move(nodes)), succ_(nodes_.size(), 0U) {
  if (nodes_.size() > 32) throw Error("graphs support at most 32 nodes");
}

int DiGraph::index_of(const std::string& name) const {
  const auto it = std::find(nodes_.begin(), nodes_.end(), name);
  if (it == nodes_.end()) throw Error("'" + name + "' is not a node of the graph");
  return static_cast<int>(it - nodes_.begin());
}

int DiGraph::edge_count() const {
  int c = 0;
  for (auto s : succ_) c += std::popcount(s);
  return c;
}

std::vector<std::pair<std::string, std::string>> DiGraph::edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (has_edge(i, j)) out.emplace_back(nodes_[i], nodes_[j]);
    }
  }
  return out;
}

DiGraph DiGraph::reversed() const {
  DiGraph g(nodes_);
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (has_edge(i, j)) g.add_edge(j, i);
    }
  }
  return g;
}

bool DiGraph::has_cycle() const {
  // A cycle exists iff some node reaches itself in the transitive closure.
  const auto reach = closure(succ_);
  for (int i = 0; i < size(); ++i) {
    if ((reach[i] >> i) & 1U) return true;
  }
  return false;
}

bool DiGraph::operator==(const DiGraph& other) const {
  std::set<std::string> mine(nodes_.begin(), nodes_.end());
  std::set<std::string> theirs(other.nodes_.begin(), other.nodes_.end());
  if (mine != theirs || nodes_.size() != other.nodes_.size()) return false;
  auto a = edges();
  auto b = other.edges();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::string DiGraph::to_string() const {
  const auto e = edges();
  if (e.empty()) return "(no edges)";
  std::string s;
  for (const auto& [a, b] : e) {
    if (!s.empty()) s += ", ";
    s += a + "->" + b;
  }
  return s;
}

}  // namespace causal
