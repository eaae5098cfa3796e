#include "causal/switch.hpp"

#include <cmath>

namespace causal {
namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix projector(int d, int k) {
  Matrix p = Matrix::Zero(d, d);
  p(k, k) = 1.0;
  return p;
}

Matrix flip() {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

// Unitary slot recovered from a rank-one CPTP Choi operator.
Matrix slot_unitary(const DenseOperator& slot) {
  const auto k = kraus_of_choi(slot);
  if (k.size() != 1 || !is_unitary(k[0])) throw Error("fine-grained simulation needs unitary slots");
  return k[0];
}

// Visit of one region during one time slot: conditioned on the control
// being `branch`, apply `u` to the target and flip the region flag `flag`.
// Factor order: control, target, flags...
Matrix visit(int d, int n_flags, int branch, const Matrix& u, int flag) {
  Matrix op = Matrix::Identity(1, 1);
  op = kron(op, u);
  for (int f = 0; f < n_flags; ++f) op = kron(op, f == flag ? flip() : Matrix(Matrix::Identity(2, 2)));
  const int rest = d << n_flags;
  return kron(projector(2, branch), op) + kron(projector(2, 1 - branch), Matrix::Identity(rest, rest));
}

Matrix trace_flags(const Matrix& rho, int system_dim, int flag_dim) {
  Matrix out = Matrix::Zero(system_dim, system_dim);
  for (int i = 0; i < system_dim; ++i)
    for (int j = 0; j < system_dim; ++j)
      for (int f = 0; f < flag_dim; ++f) out(i, j) += rho(i * flag_dim + f, j * flag_dim + f);
  return out;
}

}  // namespace

void SwitchInstance::check(double tol) const {
  if (target_dim < 1) throw Error("SWITCH target dimension must be positive");
  if (control.rows() != 2 || control.cols() != 2) throw Error("SWITCH control must be a qubit");
  if (!hermitian_spectrum(control, tol).is_psd(tol) || std::abs(control.trace() - 1.0) > tol) {
    throw Error("SWITCH control is not a density operator");
  }
  for (const auto* slot : {&slot_a, &slot_b}) {
    if (slot->factors().size() != 2 || slot->factors()[0].dim != target_dim || slot->factors()[1].dim != target_dim) {
      throw Error("SWITCH slot does not act on the target");
    }
    if (!is_cptp(*slot, tol)) throw Error("SWITCH slot is not CPTP");
  }
}

SwitchInstance make_switch(const Matrix& control, const Matrix& u, const Matrix& v) {
  const int d = static_cast<int>(u.rows());
  SwitchInstance s{d, control, choi_of_unitary(u, {"t_in", d}, {"t_out", d}),
                   choi_of_unitary(v, {"t_in", d}, {"t_out", d})};
  s.check();
  return s;
}

DenseOperator switch_supermap(const SwitchInstance& s) {
  s.check();
  const int d = s.target_dim;
  const auto ka = kraus_of_choi(s.slot_a.relabeled({{"t_in", d}, {"t_out", d}}));
  const auto kb = kraus_of_choi(s.slot_b.relabeled({{"t_in", d}, {"t_out", d}}));
  std::vector<Matrix> kraus;
  for (const auto& a : ka) {
    for (const auto& b : kb) kraus.push_back(kron(projector(2, 0), b * a) + kron(projector(2, 1), a * b));
  }
  return choi_of_kraus(kraus, {"c_in", 2 * d}, {"c_out", 2 * d});
}

Matrix switch_output(const SwitchInstance& s, const Matrix& target) {
  return apply_choi(switch_supermap(s), kron(s.control, target));
}

Discrimination switch_discriminate(const Matrix& u, const Matrix& v, double tol) {
  const int d = static_cast<int>(u.rows());
  Matrix plus = Matrix::Constant(2, 2, 0.5);
  const auto s = make_switch(plus, u, v);
  const Matrix out = switch_output(s, Matrix::Identity(d, d) / static_cast<double>(d));
  const Matrix effect = kron(plus, Matrix::Identity(d, d));
  Discrimination r;
  r.p_plus = (effect * out).trace().real();
  const Matrix uv = u * v;
  const Matrix vu = v * u;
  r.warning = max_abs(uv - vu) > tol && max_abs(uv + vu) > tol;
  return r;
}

Matrix fine_grained_output(const SwitchInstance& s, const Matrix& target, FineGraining mode) {
  s.check();
  const int d = s.target_dim;
  const Matrix u = slot_unitary(s.slot_a);
  const Matrix v = slot_unitary(s.slot_b);
  // Correlated: flags (A, B) shared by both branches. Uncorrelated: branch 0
  // uses (A0, B0), branch 1 uses (A1, B1).
  const bool shared = mode == FineGraining::correlated;
  const int n_flags = shared ? 2 : 4;
  const int a1 = shared ? 0 : 2;
  const int b1 = shared ? 1 : 3;
  const Matrix t1 = visit(d, n_flags, 0, u, 0);
  const Matrix t2 = visit(d, n_flags, 0, v, 1);
  const Matrix t3 = visit(d, n_flags, 1, v, b1);
  const Matrix t4 = visit(d, n_flags, 1, u, a1);
  const Matrix circuit = t4 * t3 * t2 * t1;
  const int flag_dim = 1 << n_flags;
  const Matrix rho = kron(kron(s.control, target), projector(flag_dim, 0));
  return trace_flags(circuit * rho * circuit.adjoint(), 2 * d, flag_dim);
}

double fine_grained_equivalence(const SwitchInstance& s, FineGraining mode) {
  double worst = 0.0;
  for (const auto& p : spanning_projectors(s.target_dim)) {
    worst = std::max(worst, trace_distance(fine_grained_output(s, p, mode), switch_output(s, p)));
  }
  return worst;
}

ProcessMatrix switch_w_matrix(const Vector& target_state, const Vector& control) {
  const int d = static_cast<int>(target_state.size());
  if (control.size() != 2) throw Error("SWITCH control must be a qubit");
  if (std::abs(target_state.norm() - 1.0) > 1e-9 || std::abs(control.norm() - 1.0) > 1e-9) {
    throw Error("SWITCH states must be normalized");
  }
  const std::vector<Lab> labs{make_lab("A", d, d), make_lab("B", d, d), make_lab("F", 2 * d, 1)};
  // Index over A_in, A_out, B_in, B_out, F_in = (c, t).
  auto at = [d](int ai, int ao, int bi, int bo, int c, int t) {
    return ((((static_cast<Eigen::Index>(ai) * d + ao) * d + bi) * d + bo) * 2 + c) * d + t;
  };
  Vector w = Vector::Zero(static_cast<Eigen::Index>(d) * d * d * d * 2 * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        // A first: psi -> A_in, A_out -> B_in, B_out -> F_t.
        w(at(i, j, j, k, 0, k)) += control(0) * target_state(i);
        // B first: psi -> B_in, B_out -> A_in, A_out -> F_t.
        w(at(j, k, i, j, 1, k)) += control(1) * target_state(i);
      }
    }
  }
  return {labs, DenseOperator(process_spaces(labs), w * w.adjoint())};
}

ProcessMatrix switch_w_matrix() {
  Vector zero = Vector::Zero(2);
  zero(0) = 1.0;
  Vector plus = Vector::Constant(2, 1.0 / std::sqrt(2.0));
  return switch_w_matrix(zero, plus);
}

}  // namespace causal
