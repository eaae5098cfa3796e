#include "causal/process.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace causal;

namespace {

Matrix ket_bra(int d, int i, int j) {
  Matrix m = Matrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

// Choi of "measure effect E on the input, prepare tau on the output":
// J = E^T (x) tau.
DenseOperator measure_prepare(const Lab& lab, const Matrix& effect, const Matrix& tau) {
  return {{lab.in, lab.out}, oracle::kron(effect.transpose(), tau)};
}

DenseOperator identity_channel(int d) { return choi_of_unitary(Matrix::Identity(d, d), {"x", d}, {"y", d}); }

}  // namespace

TEST_CASE("single-lab Born rule matches Tr[rho Pi]") {
  Rng rng(1);
  const Lab a = make_lab("A", 3, 1);
  const Matrix rho = random_density(3, rng);
  const auto p = w_from_chain(rho, {}, {a});
  // With a trivial output W is rho itself.
  CHECK(max_abs(p.w().matrix() - rho) <= 1e-15);
  const Matrix u = haar_unitary(3, rng);
  const Matrix pi = u.col(0) * u.col(0).adjoint();
  const std::vector<DenseOperator> choice{measure_prepare(a, pi, Matrix::Identity(1, 1))};
  CHECK(born_probability(p, choice) == doctest::Approx((rho * pi).trace().real()).epsilon(1e-12));
}

TEST_CASE("single-lab W with a reprepared output") {
  Rng rng(2);
  const Lab a = make_lab("A", 2, 2);
  const Matrix rho = random_density(2, rng);
  const auto p = w_from_chain(rho, {}, {a});
  CHECK(max_abs(p.w().matrix() - oracle::kron(rho, Matrix::Identity(2, 2))) <= 1e-15);
  const Matrix pi = ket_bra(2, 1, 1);
  const std::vector<DenseOperator> choice{measure_prepare(a, pi, random_density(2, rng))};
  CHECK(born_probability(p, choice) == doctest::Approx(rho(1, 1).real()).epsilon(1e-12));
}

TEST_CASE("identity channel: Alice prepares |0>, Bob measures") {
  Rng rng(3);
  const Lab a = make_lab("A", 2, 2);
  const Lab b = make_lab("B", 2, 2);
  const std::vector<DenseOperator> ch{identity_channel(2)};
  const auto p = w_from_chain(random_density(2, rng), ch, {a, b});
  const DenseOperator prep0 = measure_prepare(a, Matrix::Identity(2, 2), ket_bra(2, 0, 0));
  const Matrix tau = Matrix::Identity(2, 2) / 2.0;
  for (int outcome = 0; outcome < 2; ++outcome) {
    const std::vector<DenseOperator> choice{prep0, measure_prepare(b, ket_bra(2, outcome, outcome), tau)};
    // State-vector oracle: |0> through an identity wire is found in |0>.
    CHECK(born_probability(p, choice) == doctest::Approx(outcome == 0 ? 1.0 : 0.0));
  }
}

TEST_CASE("full trace-preserving operations give probability one") {
  Rng rng(4);
  const std::vector<Lab> labs{make_lab("A", 2, 2), make_lab("B", 2, 3), make_lab("C", 3, 2)};
  const auto p = random_causal_process(99, PartialOrder::total({"A", "B", "C"}), labs);
  for (int t = 0; t < 5; ++t) {
    std::vector<DenseOperator> choice;
    for (const auto& l : labs) choice.push_back(random_instrument(l.in, l.out, 1, rng)[0]);
    CHECK(born_probability(p, choice) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("Born probability is linear in each lab's CP map") {
  Rng rng(5);
  const std::vector<Lab> labs{make_lab("A", 2, 2), make_lab("B", 2, 2)};
  const auto p = random_causal_process(7, PartialOrder::total({"A", "B"}), labs);
  const auto i1 = random_instrument(labs[0].in, labs[0].out, 2, rng);
  const auto i2 = random_instrument(labs[0].in, labs[0].out, 2, rng);
  const auto jb = random_instrument(labs[1].in, labs[1].out, 2, rng)[0];
  const Complex x = 0.3;
  const Complex y = 1.7;
  const DenseOperator mix = x * i1[0] + y * i2[1];
  const std::vector<DenseOperator> c_mix{mix, jb};
  const std::vector<DenseOperator> c1{i1[0], jb};
  const std::vector<DenseOperator> c2{i2[1], jb};
  CHECK(born_probability(p, c_mix) ==
        doctest::Approx(0.3 * born_probability(p, c1) + 1.7 * born_probability(p, c2)).epsilon(1e-12));
}

TEST_CASE("validate_process verdicts") {
  Rng rng(6);
  const Lab a = make_lab("A", 2, 2);
  const Lab b = make_lab("B", 2, 2);
  const std::vector<DenseOperator> ch{identity_channel(2)};
  const auto chain = w_from_chain(random_density(2, rng), ch, {a, b});
  const auto ok = validate_process(chain);
  CHECK(ok.valid());
  CHECK(ok.max_normalization_deviation <= 1e-12);

  const ProcessMatrix scaled({a, b}, DenseOperator(chain.w().factors(), Matrix::Identity(16, 16) / 2.0));
  const auto bad_trace = validate_process(scaled);
  CHECK(bad_trace.psd_ok);
  CHECK_FALSE(bad_trace.trace_ok);
  CHECK_FALSE(bad_trace.valid());

  // A lab's output wired straight back into its own input.
  const auto loop_j = choi_of_unitary(Matrix::Identity(2, 2), a.out, a.in);
  const std::vector<std::string> order{a.in.name, a.out.name};
  const ProcessMatrix loop({a}, permute(loop_j, order));
  const auto loop_report = validate_process(loop);
  CHECK(loop_report.psd_ok);
  CHECK(loop_report.trace_ok);
  CHECK_FALSE(loop_report.normalization_ok);
  // The bit flip is the witness: it has no consistent outcome at all.
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  const std::vector<DenseOperator> flip{choi_of_unitary(x, a.in, a.out)};
  CHECK(std::abs(born_probability(loop, flip)) <= 1e-15);
}

TEST_CASE("w_from_chain rejects mismatched dimensions and non-channels") {
  Rng rng(8);
  const Lab a = make_lab("A", 2, 2);
  const Lab b = make_lab("B", 3, 2);
  const std::vector<DenseOperator> ch{identity_channel(2)};
  CHECK_THROWS_AS(w_from_chain(random_density(2, rng), ch, {a, b}), Error);
  const std::vector<DenseOperator> not_tp{Complex(2.0) * identity_channel(2)};
  CHECK_THROWS_AS(w_from_chain(random_density(2, rng), not_tp, {a, make_lab("B", 2, 2)}), Error);
}

TEST_CASE("fully depolarizing wire carries no signal") {
  Rng rng(9);
  const Lab a = make_lab("A", 2, 2);
  const Lab b = make_lab("B", 2, 2);
  const std::vector<DenseOperator> ch{DenseOperator({{"x", 2}, {"y", 2}}, Matrix::Identity(4, 4) / 2.0)};
  const auto p = w_from_chain(random_density(2, rng), ch, {a, b});
  CHECK(validate_process(p).valid());
  const Instrument bob{"B", {measure_prepare(b, ket_bra(2, 0, 0), ket_bra(2, 0, 0)),
                             measure_prepare(b, ket_bra(2, 1, 1), ket_bra(2, 0, 0))}};
  for (int prep = 0; prep < 2; ++prep) {
    const Instrument alice{"A", {measure_prepare(a, Matrix::Identity(2, 2), ket_bra(2, prep, prep))}};
    const std::vector<Instrument> inst{alice, bob};
    const auto dist = outcome_distribution(p, inst);
    CHECK(dist[0] == doctest::Approx(0.5));
    CHECK(dist[1] == doctest::Approx(0.5));
  }
}

TEST_CASE("random causal processes are valid, deterministic, and respect the order") {
  const std::vector<Lab> labs{make_lab("A", 2, 2), make_lab("B", 2, 2), make_lab("C", 2, 2)};
  const auto order = PartialOrder::from_pairs({"A", "B", "C"}, {{"A", "C"}, {"B", "C"}});
  const auto p1 = random_causal_process(42, order, labs);
  const auto p2 = random_causal_process(42, order, labs);
  CHECK(p1.w().matrix() == p2.w().matrix());
  const auto r = validate_process(p1, 8);
  CHECK(r.valid());
  CHECK(r.min_probability >= -1e-9);
  CHECK(r.max_probability <= 1.0 + 1e-9);

  // A and B are incomparable: A's outcome statistics ignore B's instrument
  // and vice versa, whatever C does.
  Rng rng(10);
  const Instrument ia{"A", random_instrument(labs[0].in, labs[0].out, 2, rng)};
  const Instrument ic{"C", random_instrument(labs[2].in, labs[2].out, 2, rng)};
  std::vector<double> a_marginals;
  for (int t = 0; t < 3; ++t) {
    const Instrument ib{"B", random_instrument(labs[1].in, labs[1].out, 2, rng)};
    const std::vector<Instrument> inst{ia, ib, ic};
    const auto dist = outcome_distribution(p1, inst);
    double a0 = 0.0;
    for (int k = 0; k < 4; ++k) a0 += dist[k];
    a_marginals.push_back(a0);
  }
  CHECK(a_marginals[0] == doctest::Approx(a_marginals[1]).epsilon(1e-10));
  CHECK(a_marginals[0] == doctest::Approx(a_marginals[2]).epsilon(1e-10));
}

TEST_CASE("spanning channels and IC instruments are valid") {
  const Lab l = make_lab("L", 2, 3);
  const auto chans = spanning_channels(l);
  CHECK(chans.size() == 1 + 4 * 8);
  for (const auto& c : chans) CHECK(is_valid_instrument({"L", {c}}, l));
  for (const auto& inst : ic_instruments(l)) CHECK(is_valid_instrument(inst, l));
}

TEST_CASE("reduce_lab contracts a lab away") {
  Rng rng(12);
  const std::vector<Lab> labs{make_lab("A", 2, 2), make_lab("B", 2, 2)};
  const auto p = random_causal_process(5, PartialOrder::total({"A", "B"}), labs);
  const auto ta = random_instrument(labs[0].in, labs[0].out, 1, rng)[0];
  const auto reduced = reduce_lab(p, "A", ta);
  REQUIRE(reduced.labs().size() == 1);
  CHECK(validate_process(reduced).valid());
  const auto mb = random_instrument(labs[1].in, labs[1].out, 2, rng)[0];
  const std::vector<DenseOperator> both{ta, mb};
  const std::vector<DenseOperator> only_b{mb};
  CHECK(born_probability(reduced, only_b) == doctest::Approx(born_probability(p, both)).epsilon(1e-12));
}
