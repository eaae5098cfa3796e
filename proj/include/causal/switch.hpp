#pragma once

// The quantum SWITCH: two gate slots applied in an order controlled by a
// qubit. Control |0> applies slot A first, so unitary slots U (A) and V (B)
// map |0>|psi> to |0> V U |psi> and |1>|psi> to |1> U V |psi>.

#include "causal/process.hpp"

namespace causal {

struct SwitchInstance {
  int target_dim = 2;
  /// Control qubit density operator.
  Matrix control;
  /// CPTP Choi operators on target -> target (labels are ignored).
  DenseOperator slot_a;
  DenseOperator slot_b;

  /// Throws unless the control is a density operator and the slots are CPTP.
  void check(double tol = 1e-9) const;
};

SwitchInstance make_switch(const Matrix& control, const Matrix& u, const Matrix& v);

/// Choi operator of the induced channel on control (x) target, with factors
/// ("c_in", 2 d) and ("c_out", 2 d), control most significant in each.
/// Kraus operators |0><0| (x) B_j A_i + |1><1| (x) A_i B_j. The control
/// state of the instance is not used.
DenseOperator switch_supermap(const SwitchInstance& s);

/// Output of the SWITCH on s.control (x) target.
Matrix switch_output(const SwitchInstance& s, const Matrix& target);

struct Discrimination {
  /// Probability of the + outcome when the control |+> is measured in the
  /// X basis, averaged over a maximally mixed target.
  double p_plus = 0.0;
  /// Set when U and V neither commute nor anticommute (within tol): the
  /// outcome is then not a deterministic discrimination.
  bool warning = false;
};

Discrimination switch_discriminate(const Matrix& u, const Matrix& v, double tol = 1e-9);

enum class FineGraining {
  /// One region system per gate shared by both branches (the SWITCH).
  correlated,
  /// Separate gate copies and region systems per branch.
  uncorrelated,
};

/// Four time slots on control, target and region "visited" flags: branch 0
/// visits (t1, A) then (t2, B); branch 1 visits (t3, B) then (t4, A). Each
/// visit applies the gate to the target and flips the region's flag. The
/// flags are traced out at the end.
Matrix fine_grained_output(const SwitchInstance& s, const Matrix& target, FineGraining mode);

/// Largest trace distance between fine_grained_output and switch_output
/// over the spanning projectors of the target. Slots must be unitary.
double fine_grained_equivalence(const SwitchInstance& s, FineGraining mode = FineGraining::correlated);

/// SWITCH process matrix on labs A, B (target_dim in and out) and a global
/// future F (input control (x) target, trivial output):
///     |w> = a |psi>_Ain |Phi>_{Aout Bin} |Phi>_{Bout Ft} |0>_Fc
///         + b |psi>_Bin |Phi>_{Bout Ain} |Phi>_{Aout Ft} |1>_Fc
/// with |Phi> the unnormalized identity vector and control a|0> + b|1>.
ProcessMatrix switch_w_matrix(const Vector& target_state, const Vector& control);
/// Target |0> of a qubit and control |+>.
ProcessMatrix switch_w_matrix();

}  // namespace causal
