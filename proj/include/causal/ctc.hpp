#pragma once

// Classical process functions on one-bit labs. Lab k reads bit k of the
// input word and writes bit k of the output word; the environment w maps
// the joint output word back to the joint input word.

#include "causal/order.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace causal {

/// Local one-bit operations, in enumeration order.
enum class BitOp : std::uint8_t { zero = 0, one = 1, identity = 2, flip = 3 };

std::string to_string(BitOp op);
int apply(BitOp op, int bit);

class ProcessFunction {
 public:
  ProcessFunction() = default;
  /// table[o] is the input word produced from output word o; 2^n entries,
  /// each below 2^n.
  ProcessFunction(int n_labs, std::vector<std::uint32_t> table);

  static ProcessFunction constant(int n_labs, std::uint32_t value);
  static ProcessFunction identity(int n_labs);

  int n_labs() const { return n_; }
  const std::vector<std::uint32_t>& table() const { return table_; }
  std::uint32_t operator()(std::uint32_t outputs) const { return table_[outputs]; }

  bool operator==(const ProcessFunction&) const = default;
  /// Truth table as "w(00)=01 w(01)=11 ..." with lab 0 as the leftmost bit.
  std::string to_string() const;

 private:
  int n_ = 0;
  std::vector<std::uint32_t> table_;
};

using LocalOperationSet = std::vector<BitOp>;

/// Input words x with w(f(x)) = x.
int count_fixed_points(const ProcessFunction& w, const LocalOperationSet& ops);

struct ConsistencyReport {
  bool valid = false;
  /// First operation set (enumeration order) without a unique fixed point.
  std::optional<LocalOperationSet> counterexample;
  int fixed_points = 1;
};

/// Every one of the 4^n local operation sets must leave exactly one fixed
/// point. At most 4 labs.
ConsistencyReport check_consistency(const ProcessFunction& w);

/// All valid process functions on n labs in increasing truth-table order,
/// by exhaustive search with early exit. At most 3 labs.
std::vector<ProcessFunction> enumerate_valid(int n);

/// Edge j -> i iff bit i of w changes with output bit j somewhere.
DiGraph signalling_structure(const ProcessFunction& w);

/// Reducible to a fixed order: some strict partial order makes every lab's
/// input depend only on strictly earlier labs. Equivalent to an acyclic
/// signalling structure (a self-dependence counts as a cycle).
bool is_trivial(const ProcessFunction& w);

/// Lab names "0", "1", ... used in signalling_structure.
std::vector<std::string> ctc_lab_names(int n);

}  // namespace causal
