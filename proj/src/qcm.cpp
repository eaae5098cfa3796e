#include "causal/qcm.hpp"

#include "causal/random.hpp"

#include <algorithm>
#include <cmath>

namespace causal {
namespace {

int dim_of(const std::vector<SpaceLabel>& spaces) {
  int d = 1;
  for (const auto& s : spaces) d *= s.dim;
  return d;
}

std::vector<std::string> names_of(const std::vector<SpaceLabel>& spaces) {
  std::vector<std::string> out;
  for (const auto& s : spaces) out.push_back(s.name);
  return out;
}

bool same_space_set(const std::vector<SpaceLabel>& a, const std::vector<SpaceLabel>& b) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.begin(), a.end(), [&b](const SpaceLabel& s) { return std::find(b.begin(), b.end(), s) != b.end(); });
}

// Channel rearranged onto (joint parent output, node input) so the CPTP test
// applies.
DenseOperator as_two_factor(const DenseOperator& channel, const std::vector<SpaceLabel>& spaces) {
  const auto ordered = permute(channel, names_of(spaces));
  const SpaceLabel in = spaces.back();
  const SpaceLabel pa{"parents", dim_of(std::vector<SpaceLabel>(spaces.begin(), spaces.end() - 1))};
  return DenseOperator({pa, in}, ordered.matrix());
}

std::vector<DenseOperator> padded_channels(const QuantumCausalModel& m) {
  const auto full = process_spaces(m.nodes);
  std::vector<DenseOperator> out;
  for (const auto& c : m.channels) out.push_back(embed(c, full));
  return out;
}

// Choi operator of the dephasing-then-channel map: sum_k P_k J P_k on `space`.
DenseOperator dephase(const DenseOperator& j, const SpaceLabel& space) {
  Matrix acc = Matrix::Zero(j.dim(), j.dim());
  for (int k = 0; k < space.dim; ++k) {
    Matrix p = Matrix::Zero(space.dim, space.dim);
    p(k, k) = 1.0;
    const Matrix pk = embed(DenseOperator({space}, p), j.factors()).matrix();
    acc += pk * j.matrix() * pk;
  }
  return {j.factors(), acc};
}

bool has_node(const DiGraph& g, const std::string& name) {
  return std::find(g.nodes().begin(), g.nodes().end(), name) != g.nodes().end();
}

}  // namespace

int QuantumCausalModel::node_index(const std::string& name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<int> QuantumCausalModel::parents(int i) const {
  std::vector<int> out;
  const int me = dag.index_of(nodes[i].name);
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    if (dag.has_edge(dag.index_of(nodes[p].name), me)) out.push_back(static_cast<int>(p));
  }
  return out;
}

std::vector<SpaceLabel> QuantumCausalModel::channel_spaces(int i) const {
  std::vector<SpaceLabel> out;
  for (int p : parents(i)) out.push_back(nodes[p].out);
  out.push_back(nodes[i].in);
  return out;
}

std::string QuantumCausalModel::problem(double tol, double comm_tol) const {
  if (static_cast<int>(nodes.size()) != dag.size()) return "DAG and node list differ in size";
  for (const auto& n : nodes) {
    if (!has_node(dag, n.name)) return "node '" + n.name + "' is missing from the DAG";
  }
  if (dag.has_cycle()) return "graph is not acyclic";
  if (channels.size() != nodes.size()) return "one channel per node is required";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto spaces = channel_spaces(static_cast<int>(i));
    if (!same_space_set(channels[i].factors(), spaces)) {
      return "channel of '" + nodes[i].name + "' does not act on its parents' outputs and its input";
    }
    if (!is_cptp(as_two_factor(channels[i], spaces), tol)) return "channel of '" + nodes[i].name + "' is not CPTP";
  }
  const auto padded = padded_channels(*this);
  for (std::size_t i = 0; i < padded.size(); ++i) {
    for (std::size_t j = i + 1; j < padded.size(); ++j) {
      const Matrix& a = padded[i].matrix();
      const Matrix& b = padded[j].matrix();
      if (max_abs(a * b - b * a) > comm_tol) {
        return "channels of '" + nodes[i].name + "' and '" + nodes[j].name + "' do not commute";
      }
    }
  }
  return {};
}

ProcessMatrix build_process_operator(const QuantumCausalModel& m, double comm_tol) {
  if (const auto why = m.problem(1e-9, comm_tol); !why.empty()) throw Error("invalid causal model: " + why);
  const auto full = process_spaces(m.nodes);
  const int d = dim_of(full);
  Matrix prod = Matrix::Identity(d, d);
  for (const auto& c : padded_channels(m)) prod = prod * c.matrix();
  return {m.nodes, DenseOperator(full, 0.5 * (prod + prod.adjoint()))};
}

bool verify_markov(const ProcessMatrix& sigma, const QuantumCausalModel& m, double tol, double comm_tol) {
  if (sigma.labs() != m.nodes) return false;
  if (!m.problem(1e-9, comm_tol).empty()) return false;
  const auto built = build_process_operator(m, comm_tol);
  return max_abs(sigma.w().matrix() - built.w().matrix()) <= tol;
}

DiGraph influence_graph(const DenseOperator& u_choi, int n_inputs, double tol) {
  const auto& f = u_choi.factors();
  if (n_inputs < 1 || n_inputs >= static_cast<int>(f.size())) throw Error("influence_graph: bad input/output split");
  const std::vector<SpaceLabel> ins(f.begin(), f.begin() + n_inputs);
  const std::vector<SpaceLabel> outs(f.begin() + n_inputs, f.end());
  const DenseOperator flat({{"inputs", dim_of(ins)}, {"outputs", dim_of(outs)}}, u_choi.matrix());
  if (dim_of(ins) != dim_of(outs) || !is_cptp(flat, 1e-8) || kraus_of_choi(flat, 1e-10).size() != 1) {
    throw Error("influence_graph needs a unitary channel");
  }
  std::vector<std::string> nodes = names_of(ins);
  for (const auto& o : outs) nodes.push_back(o.name);
  DiGraph g(nodes);
  for (std::size_t b = 0; b < outs.size(); ++b) {
    auto keep = names_of(ins);
    keep.push_back(outs[b].name);
    const auto marginal = partial_trace(u_choi, keep);
    for (std::size_t a = 0; a < ins.size(); ++a) {
      const std::vector<std::string> traced{ins[a].name};
      if (max_abs(marginal.matrix() - trace_replace(marginal, traced).matrix()) > tol) {
        g.add_edge(static_cast<int>(a), n_inputs + static_cast<int>(b));
      }
    }
  }
  return g;
}

DiGraph influence_graph(const Matrix& u, const std::vector<SpaceLabel>& inputs, const std::vector<SpaceLabel>& outputs,
                        double tol) {
  const int d_in = dim_of(inputs);
  if (u.rows() != dim_of(outputs) || u.cols() != d_in) throw Error("influence_graph: unitary does not fit the spaces");
  if (!is_unitary(u, 1e-8)) throw Error("influence_graph needs a unitary channel");
  auto factors = inputs;
  factors.insert(factors.end(), outputs.begin(), outputs.end());
  const auto j = choi_of_unitary(u, {"inputs", d_in}, {"outputs", static_cast<int>(u.rows())}, 1e-8);
  return influence_graph(DenseOperator(factors, j.matrix()), static_cast<int>(inputs.size()), tol);
}

std::optional<QuantumCausalModel> markov_discover(const ProcessMatrix& sigma, const DiGraph& dag, double tol,
                                                  double comm_tol) {
  QuantumCausalModel m{sigma.labs(), dag, {}};
  if (dag.size() != static_cast<int>(m.nodes.size())) return std::nullopt;
  for (const auto& n : m.nodes) {
    if (!has_node(dag, n.name)) return std::nullopt;
  }
  if (dag.has_cycle()) return std::nullopt;
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    const auto spaces = m.channel_spaces(static_cast<int>(i));
    const auto marginal = permute(partial_trace(sigma.w(), names_of(spaces)), names_of(spaces));
    const double tr = marginal.trace().real();
    if (std::abs(tr) < 1e-12) return std::nullopt;
    const double target = dim_of(std::vector<SpaceLabel>(spaces.begin(), spaces.end() - 1));
    m.channels.push_back(Complex(target / tr) * marginal);
  }
  if (!verify_markov(sigma, m, tol, comm_tol)) return std::nullopt;
  return m;
}

QuantumCausalModel random_markov_model(std::uint64_t seed, int n_nodes, int dim, double edge_probability) {
  if (n_nodes < 1 || n_nodes > 26) throw Error("random_markov_model supports 1 to 26 nodes");
  Rng rng(seed);
  QuantumCausalModel m;
  std::vector<std::string> names;
  for (int i = 0; i < n_nodes; ++i) {
    names.push_back(std::string(1, static_cast<char>('A' + i)));
    m.nodes.push_back(make_lab(names.back(), dim, dim));
  }
  m.dag = DiGraph(names);
  std::bernoulli_distribution edge(edge_probability);
  for (int i = 0; i < n_nodes; ++i) {
    for (int j = i + 1; j < n_nodes; ++j) {
      if (edge(rng)) m.dag.add_edge(i, j);
    }
  }
  std::vector<int> children(n_nodes, 0);
  for (int i = 0; i < n_nodes; ++i) {
    for (int p : m.parents(i)) ++children[p];
  }
  for (int i = 0; i < n_nodes; ++i) {
    const auto spaces = m.channel_spaces(i);
    const SpaceLabel pa{"parents", dim_of(std::vector<SpaceLabel>(spaces.begin(), spaces.end() - 1))};
    Matrix sum = Matrix::Zero(pa.dim * dim, pa.dim * dim);
    for (const auto& c : random_instrument(pa, m.nodes[i].in, 3, rng)) sum += c.matrix();
    DenseOperator j(spaces, sum);
    for (int p : m.parents(i)) {
      if (children[p] > 1) j = dephase(j, m.nodes[p].out);
    }
    m.channels.push_back(j);
  }
  return m;
}

}  // namespace causal
