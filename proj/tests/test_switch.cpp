#include "causal/games.hpp"
#include "causal/structure.hpp"
#include "causal/switch.hpp"
#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

using namespace causal;

namespace {

Matrix pauli_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

Matrix pauli_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

Matrix ket0() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  return m;
}

Matrix plus_state() { return Matrix::Constant(2, 2, 0.5); }

// State-vector oracle: a|0> V U |psi> + b|1> U V |psi>.
Vector switch_vector(const Vector& control, const Matrix& u, const Matrix& v, const Vector& psi) {
  const Vector first = v * u * psi;
  const Vector second = u * v * psi;
  Vector out(2 * psi.size());
  out << control(0) * first, control(1) * second;
  return out;
}

Vector random_ket(int d, Rng& rng) {
  Vector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

}  // namespace

TEST_CASE("classical control reduces to a fixed-order circuit") {
  Rng rng(1);
  for (int t = 0; t < 5; ++t) {
    const auto a = random_instrument({"t_in", 2}, {"t_out", 2}, 1, rng)[0];
    const auto b = random_instrument({"t_in", 2}, {"t_out", 2}, 1, rng)[0];
    SwitchInstance s0{2, ket0(), a, b};
    SwitchInstance s1{2, pauli_x() * ket0() * pauli_x(), a, b};
    const DenseOperator ab = compose_choi(a, b.relabeled({{"t_out", 2}, {"t_fin", 2}}));
    const DenseOperator ba = compose_choi(b, a.relabeled({{"t_out", 2}, {"t_fin", 2}}));
    for (const auto& rho : spanning_projectors(2)) {
      CHECK(max_abs(switch_output(s0, rho) - oracle::kron(s0.control, apply_choi(ab, rho))) <= 1e-12);
      CHECK(max_abs(switch_output(s1, rho) - oracle::kron(s1.control, apply_choi(ba, rho))) <= 1e-12);
    }
  }
}

TEST_CASE("unitary slots match the state-vector oracle") {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const Matrix u = haar_unitary(3, rng);
    const Matrix v = haar_unitary(3, rng);
    const Vector c = random_ket(2, rng);
    const Vector psi = random_ket(3, rng);
    const auto s = make_switch(c * c.adjoint(), u, v);
    const Vector out = switch_vector(c, u, v, psi);
    CHECK(max_abs(switch_output(s, psi * psi.adjoint()) - out * out.adjoint()) <= 1e-12);
  }
}

TEST_CASE("the SWITCH channel is trace preserving") {
  Rng rng(3);
  const auto a = random_instrument({"i", 2}, {"o", 2}, 1, rng)[0];
  const auto b = random_instrument({"i", 2}, {"o", 2}, 1, rng)[0];
  const SwitchInstance s{2, plus_state(), a, b};
  const auto j = switch_supermap(s);
  CHECK(is_cptp(j));
  for (const auto& rho : spanning_projectors(4)) {
    CHECK(std::abs(apply_choi(j, rho).trace() - rho.trace()) <= 1e-10);
  }
  CHECK_THROWS_AS(switch_supermap({2, plus_state(), Complex(2.0) * a, b}), Error);
  CHECK_THROWS_AS(switch_supermap({2, Matrix::Identity(2, 2), a, b}), Error);
}

TEST_CASE("Z then X on |0> leaves the control in |->") {
  const auto s = make_switch(plus_state(), pauli_z(), pauli_x());
  const Matrix out = switch_output(s, ket0());
  const Matrix minus = pauli_z() * plus_state() * pauli_z();
  CHECK(std::abs((oracle::kron(minus, Matrix::Identity(2, 2)) * out).trace() - 1.0) <= 1e-12);
}

TEST_CASE("switch discrimination") {
  const Matrix id = Matrix::Identity(2, 2);
  CHECK(std::abs(switch_discriminate(id, id).p_plus - 1.0) <= 1e-9);
  CHECK(std::abs(switch_discriminate(pauli_x(), pauli_z()).p_plus) <= 1e-9);
  CHECK(std::abs(switch_discriminate(pauli_x(), pauli_x()).p_plus - 1.0) <= 1e-9);
  CHECK_FALSE(switch_discriminate(pauli_x(), pauli_z()).warning);

  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    // Diagonal unitaries commute; conjugating X by one of them gives a
    // partner that anticommutes with Z.
    Matrix d1 = Matrix::Zero(2, 2);
    Matrix d2 = Matrix::Zero(2, 2);
    std::uniform_real_distribution<double> phase(0.0, 6.283);
    for (int k = 0; k < 2; ++k) {
      d1(k, k) = std::polar(1.0, phase(rng));
      d2(k, k) = std::polar(1.0, phase(rng));
    }
    const Matrix w = haar_unitary(2, rng);
    CHECK(std::abs(switch_discriminate(w * d1 * w.adjoint(), w * d2 * w.adjoint()).p_plus - 1.0) <= 1e-9);
    const Matrix x_like = d1 * pauli_x() * d1.adjoint();
    CHECK(std::abs(switch_discriminate(w * x_like * w.adjoint(), w * pauli_z() * w.adjoint()).p_plus) <= 1e-9);

    const Matrix u = haar_unitary(2, rng);
    const Matrix v = haar_unitary(2, rng);
    const auto generic = switch_discriminate(u, v);
    CHECK(generic.warning);
    const double expected = 0.5 + 0.5 * ((v * u).adjoint() * u * v).trace().real() / 2.0;
    CHECK(generic.p_plus == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("fine-grained correlated paths reproduce the SWITCH") {
  Rng rng(5);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Vector c = random_ket(2, rng);
    const auto s = make_switch(c * c.adjoint(), haar_unitary(2, rng), haar_unitary(2, rng));
    worst = std::max(worst, fine_grained_equivalence(s));
  }
  CHECK(worst <= 1e-9);

  const auto xz = make_switch(plus_state(), pauli_x(), pauli_z());
  CHECK(fine_grained_equivalence(xz, FineGraining::uncorrelated) > 0.1);
  CHECK(trace_distance(fine_grained_output(xz, ket0(), FineGraining::uncorrelated), switch_output(xz, ket0())) ==
        doctest::Approx(0.5).epsilon(1e-12));

  const auto classical = make_switch(ket0(), haar_unitary(2, rng), haar_unitary(2, rng));
  CHECK(fine_grained_equivalence(classical) <= 1e-12);
  CHECK(fine_grained_equivalence(classical, FineGraining::uncorrelated) <= 1e-12);
}

TEST_CASE("SWITCH process matrix") {
  const auto p = switch_w_matrix();
  CHECK(validate_process(p).valid());
  CHECK_FALSE(is_causally_ordered(p).has_value());

  // Born probabilities from W agree with the supermap for unitary slots.
  Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    const Matrix u = haar_unitary(2, rng);
    const Matrix v = haar_unitary(2, rng);
    const auto s = make_switch(plus_state(), u, v);
    const Matrix out = switch_output(s, ket0());
    const Matrix basis = haar_unitary(4, rng);
    for (int k = 0; k < 4; ++k) {
      const Matrix effect = basis.col(k) * basis.col(k).adjoint();
      const std::vector<DenseOperator> choice{choi_of_unitary(u, {"i", 2}, {"o", 2}),
                                              choi_of_unitary(v, {"i", 2}, {"o", 2}),
                                              DenseOperator({{"f", 4}, {"n", 1}}, effect.transpose())};
      CHECK(born_probability(p, choice) == doctest::Approx((effect * out).trace().real()).epsilon(1e-12));
    }
  }

  const auto sep = is_causally_separable_2lab(p, 1e-7, 300);
  CHECK_FALSE(sep.separable);
}

TEST_CASE("SWITCH without its global future is a causal mixture") {
  const auto p = switch_w_matrix();
  const auto ab = reduce_lab(p, "F", DenseOperator({{"f", 4}, {"n", 1}}, Matrix::Identity(4, 4)));
  const auto sep = is_causally_separable_2lab(ab);
  CHECK(sep.separable);
  CHECK(sep.weight_first == doctest::Approx(0.5).epsilon(1e-6));

  auto sets = ocb_instruments();
  const auto beh = behavior_of(ab, sets);
  CHECK(game_value(beh, ocb_game()) <= causal_bound(ocb_game()) + 1e-9);
  CHECK(causal_membership(beh).causal);

  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    std::vector<std::vector<Instrument>> gy(2);
    for (int k = 0; k < 2; ++k)
      for (int s = 0; s < 2; ++s) gy[k].push_back({ab.labs()[k].name, random_instrument(ab.labs()[k].in, ab.labs()[k].out, 2, rng)});
    CHECK(game_value(behavior_of(ab, gy), gyni_game()) <= causal_bound(gyni_game()) + 1e-9);
  }
}
