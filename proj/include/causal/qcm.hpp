#pragma once

// Quantum causal models: nodes with an incoming and an outgoing space, a
// DAG over them, and one channel per node from its parents' outputs to its
// own input. The process operator is the product of those channels, each
// padded with identities; it coincides with the process matrix of the same
// labs (tensor.hpp and process.hpp conventions).

#include "causal/order.hpp"
#include "causal/process.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace causal {

using QuantumNode = Lab;

struct QuantumCausalModel {
  std::vector<QuantumNode> nodes;
  /// Over the node names.
  DiGraph dag;
  /// channels[i]: Choi operator on out(Pa(i)) (x) in(i), factors in any
  /// order. A root's channel is a state on in(i).
  std::vector<DenseOperator> channels;

  int node_index(const std::string& name) const;
  /// Node indices of the parents of node i, in node order.
  std::vector<int> parents(int i) const;
  /// out(Pa(i)) followed by in(i).
  std::vector<SpaceLabel> channel_spaces(int i) const;
  /// Empty when well formed; otherwise a description of the first defect.
  /// Checks DAG shape, channel spaces, CPTP within tol and pairwise
  /// commutation of the padded channels within comm_tol.
  std::string problem(double tol = 1e-9, double comm_tol = 1e-8) const;
};

/// Product of the padded channels over process_spaces(nodes). Throws if the
/// model is malformed or two channels fail to commute.
ProcessMatrix build_process_operator(const QuantumCausalModel& m, double comm_tol = 1e-8);

/// True iff the model is well formed, its spaces match sigma's and sigma
/// equals the product of its channels within tol (max-norm).
bool verify_markov(const ProcessMatrix& sigma, const QuantumCausalModel& m, double tol = 1e-7,
                   double comm_tol = 1e-8);

/// Influence graph of a unitary channel whose Choi operator has factors
/// (inputs..., outputs...), the first n_inputs being inputs. Edge a -> b
/// unless the marginal channel to output b has Choi operator I_a (x) K.
/// Throws on non-unitary channels.
DiGraph influence_graph(const DenseOperator& u_choi, int n_inputs, double tol = 1e-8);
DiGraph influence_graph(const Matrix& u, const std::vector<SpaceLabel>& inputs, const std::vector<SpaceLabel>& outputs,
                        double tol = 1e-8);

/// Candidate channel per node: the marginal of sigma on out(Pa(i)) (x) in(i),
/// rescaled to trace dim out(Pa(i)). Returns the model if verify_markov
/// accepts it, otherwise nothing.
std::optional<QuantumCausalModel> markov_discover(const ProcessMatrix& sigma, const DiGraph& dag, double tol = 1e-7,
                                                  double comm_tol = 1e-8);

/// Random model on nodes "A", "B", ... with input and output dimension dim.
/// Edges i -> j (i < j) appear with probability edge_probability; channels
/// are random CPTP maps, and parent outputs feeding several children are
/// dephased in the computational basis so that all channels commute.
QuantumCausalModel random_markov_model(std::uint64_t seed, int n_nodes = 3, int dim = 2,
                                       double edge_probability = 0.5);

}  // namespace causal
