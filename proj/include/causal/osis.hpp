#pragma once

// Observational (OS) and interventionist (IS) descriptions of classical
// deterministic processes, their reversal, and the restricted reversal check
// for invertible layered wirings.
//
// An IS description is a list of deterministic operations over named finite
// variables. Variables no operation produces are free: the initial state and
// the settings chosen by the labs. Each lab optionally owns one free setting
// variable and one outcome variable.

#include "causal/order.hpp"
#include "causal/structure.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causal {

struct ISVariable {
  std::string name;
  int cardinality = 2;

  bool operator==(const ISVariable&) const = default;
};

/// table[i] is the output tuple produced from input tuple i; tuples are
/// mixed radix with the first variable most significant.
struct ISOperation {
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::uint32_t> table;

  bool operator==(const ISOperation&) const = default;
};

struct ISLab {
  std::string name;
  std::optional<std::string> setting;
  std::optional<std::string> outcome;

  bool operator==(const ISLab&) const = default;
};

struct ISDescription {
  std::vector<ISVariable> variables;
  /// In wiring order: every input is free or produced by an earlier operation.
  std::vector<ISOperation> operations;
  std::vector<ISLab> labs;

  int variable_index(const std::string& name) const;
  /// Variables no operation produces, in declaration order.
  std::vector<std::string> free_variables() const;
  /// Throws unless the wiring is acyclic, every variable is produced at most
  /// once, tables have the right shape and lab settings are free.
  void check() const;

  bool operator==(const ISDescription&) const = default;
};

/// Per free variable distribution; missing entries are uniform.
using InputDistribution = std::map<std::string, std::vector<double>>;

/// Joint table over all variables, mixed radix in declaration order.
struct OSDistribution {
  std::vector<ISVariable> variables;
  std::vector<double> table;

  double p(const std::map<std::string, int>& assignment) const;
  /// Marginal over the named variables, mixed radix in the given order.
  std::vector<double> marginal(const std::vector<std::string>& names) const;
};

/// Pushforward of the input distribution through the wiring.
OSDistribution os_from_is(const ISDescription& d, const InputDistribution& inputs = {});

/// Behavior p(outcomes | settings) of the labs; non-setting free variables
/// are averaged over `inputs`.
Behavior is_behavior(const ISDescription& d, const InputDistribution& inputs = {});

/// Operations inverted in reverse order, each lab's setting and outcome
/// swapped. An inverted operation's name toggles a "^-1" suffix. Throws if
/// an operation is not a bijection.
ISDescription reverse_is(const ISDescription& d);

/// Restricted reversal check for invertible layered descriptions: the OS
/// tables of d and reverse_is(d) under uniform inputs agree within tol, and
/// the reversed description satisfies the signal requirement under the
/// reversal of the fewest-relation order d satisfies. Throws if d has a
/// non-invertible operation, a variable consumed twice, or is biased
/// (uniform inputs not giving uniform final variables).
bool causal_reversibility_check(const ISDescription& d, double tol = 1e-9);

/// Bi-order of the first (fewest-relation) compatible order of a verdict
/// that exhibits causal order. Throws otherwise.
BiOrder biorder_of(const CausalOrderVerdict& verdict);

/// Chain of one-bit labs k = 0..n-1 with lab operation
/// (in_k, s_k) -> (o_k = alpha_k(in_k), out_k = beta_k(s_k)) and wires
/// in_{k+1} = gamma_k(out_k); alpha, beta, gamma are random bit bijections.
ISDescription random_bit_chain(std::uint64_t seed, int n_labs = 4);

/// Sequence of unitaries applied in list order.
struct UnitaryChain {
  std::vector<std::string> names;
  std::vector<Matrix> gates;
};

/// Adjoints in reverse order; names toggle the "^-1" suffix.
UnitaryChain reverse(const UnitaryChain& c);
/// Product gates.back() * ... * gates.front().
Matrix chain_unitary(const UnitaryChain& c);
/// p(i, j) = |<j|U|i>|^2 / d for a computational-basis preparation i under
/// maximally mixed input and a computational-basis measurement j. Entry
/// i * d + j.
std::vector<double> unitary_chain_os(const UnitaryChain& c);

}  // namespace causal
