#pragma once

// Laboratories, instruments and process matrices.
//
// A process matrix W lives on in_1 (x) out_1 (x) in_2 (x) out_2 (x) ... in lab
// order. Outcome probabilities follow
//
//     p(k_1, ..., k_n) = Tr[ W (J_1 (x) ... (x) J_n)^T ]
//
// with J_i the Choi operator (see tensor.hpp) of the CP map lab i realizes.
// Under this convention a valid W has trace equal to the product of the
// output dimensions, a single lab fed the state rho has W = rho (x) I_out,
// and a channel C from one lab's output to another lab's input enters W as
// its plain Choi operator J(C).

#include "causal/order.hpp"
#include "causal/random.hpp"
#include "causal/tensor.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace causal {

struct Lab {
  std::string name;
  SpaceLabel in;
  SpaceLabel out;

  bool operator==(const Lab&) const = default;
};

/// Convenience: lab `name` with spaces "<name>_in" and "<name>_out".
Lab make_lab(const std::string& name, int in_dim, int out_dim);

/// One CP map (Choi operator on lab.in (x) lab.out) per outcome.
struct Instrument {
  std::string lab;
  std::vector<DenseOperator> cp_maps;

  int outcomes() const { return static_cast<int>(cp_maps.size()); }
  DenseOperator total() const;
};

/// Checks each CP map is PSD and the sum is trace preserving, within tol.
bool is_valid_instrument(const Instrument& inst, const Lab& lab, double tol = 1e-9);

class ProcessMatrix {
 public:
  ProcessMatrix() = default;
  /// Checks that W's factors are exactly (in, out) of every lab, in lab order.
  ProcessMatrix(std::vector<Lab> labs, DenseOperator w);

  const std::vector<Lab>& labs() const { return labs_; }
  const DenseOperator& w() const { return w_; }
  int lab_index(const std::string& name) const;
  /// Product of output dimensions: the trace of a valid W.
  double expected_trace() const;

 private:
  std::vector<Lab> labs_;
  DenseOperator w_;
};

std::vector<SpaceLabel> process_spaces(std::span<const Lab> labs);

struct ValidityReport {
  bool psd_ok = false;
  bool trace_ok = false;
  bool normalization_ok = false;
  double min_eigenvalue = 0.0;
  double trace = 0.0;
  double max_normalization_deviation = 0.0;
  /// Most negative / largest individual outcome probability seen.
  double min_probability = 0.0;
  double max_probability = 0.0;

  bool valid() const { return psd_ok && trace_ok && normalization_ok; }
};

/// Tr[W (x)_i choice_i^T]: one CP map per lab, in lab order.
double born_probability(const ProcessMatrix& p, std::span<const DenseOperator> choice);

/// Full joint outcome table for one instrument per lab (lab order). Entry
/// index is mixed radix over outcomes with the first lab most significant.
std::vector<double> outcome_distribution(const ProcessMatrix& p, std::span<const Instrument> instruments);

/// PSD, trace and normalization checks. Normalization is tested on every
/// product of the spanning trace-preserving family (spanning_channels) and
/// on `n_random` tuples of random two-outcome instruments drawn from `seed`.
ValidityReport validate_process(const ProcessMatrix& p, int n_random = 32, double tol = 1e-9, std::uint64_t seed = 7);

/// CPTP Choi operators whose affine hull is every trace-preserving map of
/// the lab: I/d_out (x) I plus perturbations eps H (x) K with H a Hermitian
/// basis of the input and K a traceless Hermitian basis of the output.
std::vector<DenseOperator> spanning_channels(const Lab& lab);

/// Informationally complete family of two-outcome instruments for a lab:
/// one per spanning channel (split evenly) followed by one tomographic
/// measure-and-reprepare instrument per spanning projector of in (x) out.
/// Across all settings the CP maps span every operator on in (x) out, and
/// the per-setting totals span the trace-preserving maps.
std::vector<Instrument> ic_instruments(const Lab& lab);

/// Process matrix of the fixed-order circuit: `state` enters the first lab,
/// channels[i] carries out(i) to in(i+1), and the last output is discarded.
/// Channel Choi operators may carry any labels; only dimensions must match.
ProcessMatrix w_from_chain(const Matrix& state, std::span<const DenseOperator> channels, std::vector<Lab> labs,
                           double tol = 1e-9);

/// W = J(N) for a network N from all lab outputs to all lab inputs given
/// by its Stinespring isometry: `isometry(k)` returns V|k> for the basis
/// vector k of out_1 (x) out_2 ..., as a vector over in_1 (x) in_2 ... (x) G
/// where G (the environment) has dimension `environment_dim`.
ProcessMatrix process_from_network(std::vector<Lab> labs, int environment_dim,
                                   const std::function<Vector(int)>& isometry);

/// Random process respecting `order` (over the lab names): each lab's
/// output is scrambled by a Haar unitary with ancillas into one share per
/// later lab; each lab's input is a Haar-random mix of the shares it
/// receives and fresh ancillas. Bit-identical for a fixed seed.
ProcessMatrix random_causal_process(std::uint64_t seed, const PartialOrder& order, std::vector<Lab> labs);

/// Contracts one lab away with a fixed CP map, leaving the process on the
/// other labs.
ProcessMatrix reduce_lab(const ProcessMatrix& p, const std::string& lab, const DenseOperator& cp_map);

}  // namespace causal
