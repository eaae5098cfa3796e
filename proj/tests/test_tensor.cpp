#include "causal/random.hpp"
#include "causal/tensor.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace causal;

namespace {

DenseOperator op(const std::string& name, const Matrix& m) { return {{{name, static_cast<int>(m.rows())}}, m}; }

Matrix diag(std::initializer_list<double> v) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("tensor of identities and projectors") {
  const auto i4 = tensor(op("a", Matrix::Identity(2, 2)), op("b", Matrix::Identity(2, 2)));
  CHECK(max_abs(i4.matrix() - Matrix::Identity(4, 4)) == 0.0);
  CHECK(i4.labels() == std::vector<std::string>{"a", "b"});

  const auto p = tensor(op("a", diag({1, 0})), op("b", diag({0, 1})));
  CHECK(max_abs(p.matrix() - diag({0, 1, 0, 0})) == 0.0);
}

TEST_CASE("tensor rejects duplicate labels") {
  CHECK_THROWS_AS(tensor(op("a", Matrix::Identity(2, 2)), op("a", Matrix::Identity(2, 2))), Error);
}

TEST_CASE("tensor matches the quadruple-loop oracle") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = ginibre(2, 2, rng);
    const Matrix b = ginibre(3, 3, rng);
    const auto ab = tensor(op("a", a), op("b", b));
    CHECK(max_abs(ab.matrix() - oracle::kron(a, b)) <= 1e-12);
  }
}

TEST_CASE("partial trace of product and entangled states") {
  Rng rng(3);
  const Matrix rho = random_density(2, rng);
  const Matrix sigma = 2.5 * random_density(3, rng);
  const auto joint = tensor(op("r", rho), op("s", sigma));
  const std::vector<std::string> first{"r"};
  CHECK(max_abs(partial_trace(joint, first).matrix() - rho * sigma.trace()) <= 1e-12);

  Vector phi = Vector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const DenseOperator bell({{"x", 2}, {"y", 2}}, phi * phi.adjoint());
  const std::vector<std::string> keep_x{"x"};
  CHECK(max_abs(partial_trace(bell, keep_x).matrix() - Matrix::Identity(2, 2) / 2.0) <= 1e-15);

  const auto full = partial_trace(joint, std::vector<std::string>{});
  CHECK(full.dim() == 1);
  CHECK(std::abs(full.matrix()(0, 0) - joint.trace()) <= 1e-12);
  CHECK_THROWS_AS(partial_trace(joint, std::vector<std::string>{"nope"}), Error);
}

TEST_CASE("partial trace matches index-summation oracle") {
  Rng rng(5);
  const std::vector<int> dims{2, 3, 2};
  for (int t = 0; t < 10; ++t) {
    const Matrix h = random_hermitian(12, rng);
    const DenseOperator x({{"a", 2}, {"b", 3}, {"c", 2}}, h);
    const std::vector<std::string> keep{"a", "c"};
    CHECK(max_abs(partial_trace(x, keep).matrix() - oracle::partial_trace(h, dims, {true, false, true})) <= 1e-12);
    const std::vector<std::string> keep_b{"b"};
    CHECK(max_abs(partial_trace(x, keep_b).matrix() - oracle::partial_trace(h, dims, {false, true, false})) <= 1e-12);
  }
}

TEST_CASE("partial_trace(tensor(a, b), labels(a)) = a * tr(b)") {
  Rng rng(17);
  for (int t = 0; t < 10; ++t) {
    const Matrix a = ginibre(3, 3, rng);
    const Matrix b = ginibre(2, 2, rng);
    const auto ab = tensor(op("a", a), op("b", b));
    const std::vector<std::string> keep{"a"};
    CHECK(max_abs(partial_trace(ab, keep).matrix() - a * b.trace()) <= 1e-12);
  }
}

TEST_CASE("permute and embed") {
  Rng rng(2);
  const Matrix a = ginibre(2, 2, rng);
  const Matrix b = ginibre(3, 3, rng);
  const auto ab = tensor(op("a", a), op("b", b));
  const std::vector<std::string> ba_order{"b", "a"};
  CHECK(max_abs(permute(ab, ba_order).matrix() - oracle::kron(b, a)) <= 1e-14);

  const std::vector<SpaceLabel> full{{"c", 2}, {"a", 2}};
  const auto e = embed(op("a", a), full);
  CHECK(max_abs(e.matrix() - oracle::kron(Matrix::Identity(2, 2), a)) <= 1e-14);
}

TEST_CASE("hermitian spectrum") {
  const auto s = hermitian_spectrum(Matrix(Matrix::Identity(4, 4)));
  CHECK(s.eigenvalues == std::vector<double>{1, 1, 1, 1});

  const auto d = hermitian_spectrum(diag({3, -1}));
  CHECK(d.eigenvalues[0] == doctest::Approx(3.0));
  CHECK(d.eigenvalues[1] == doctest::Approx(-1.0));
  CHECK_FALSE(d.is_psd());

  Matrix nonherm = Matrix::Zero(2, 2);
  nonherm(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_spectrum(nonherm), Error);
}

TEST_CASE("hermitian spectrum reconstructs the operator and sums to the trace") {
  Rng rng(23);
  for (int t = 0; t < 10; ++t) {
    const Matrix h = random_hermitian(6, rng);
    const auto s = hermitian_spectrum(h);
    CHECK(std::abs(s.sum() - h.trace().real()) <= 1e-10);
    for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) CHECK(s.eigenvalues[i - 1] >= s.eigenvalues[i]);
    // Reconstruction oracle: sum lambda_i v_i v_i^dagger.
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Matrix rebuilt = Matrix::Zero(6, 6);
    for (int i = 0; i < 6; ++i) rebuilt += es.eigenvalues()(i) * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    CHECK(max_abs(rebuilt - h) <= 1e-10);
  }
}

TEST_CASE("Choi operator of unitaries") {
  const SpaceLabel in{"i", 2};
  const SpaceLabel out{"o", 2};
  const auto ji = choi_of_unitary(Matrix::Identity(2, 2), in, out);
  Vector phi = Vector::Zero(4);
  phi(0) = phi(3) = 1.0;
  CHECK(max_abs(ji.matrix() - phi * phi.adjoint()) == 0.0);
  CHECK(ji.trace().real() == doctest::Approx(2.0));

  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  const auto jx = choi_of_unitary(x, in, out);
  // Support on span{|01>, |10>} only.
  for (int r : {0, 3})
    for (int c = 0; c < 4; ++c) CHECK(std::abs(jx.matrix()(r, c)) == 0.0);
  CHECK(std::abs(jx.matrix()(1, 2) - 1.0) == 0.0);

  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(choi_of_unitary(bad, in, out), Error);
}

TEST_CASE("Choi contraction reproduces direct conjugation") {
  Rng rng(29);
  for (int t = 0; t < 10; ++t) {
    const Matrix u = haar_unitary(3, rng);
    const Matrix rho = random_density(3, rng);
    const auto j = choi_of_unitary(u, {"i", 3}, {"o", 3});
    CHECK(max_abs(apply_choi(j, rho) - u * rho * u.adjoint()) <= 1e-10);
    const auto s = hermitian_spectrum(j);
    CHECK(s.eigenvalues[0] == doctest::Approx(3.0));
    CHECK(std::abs(s.eigenvalues[1]) <= 1e-10);
    CHECK(j.trace().real() == doctest::Approx(3.0));
  }
}

TEST_CASE("Kraus extraction and composition agree with the channel") {
  Rng rng(31);
  const Matrix u = haar_unitary(2, rng);
  const Matrix v = haar_unitary(2, rng);
  const auto ju = choi_of_unitary(u, {"i", 2}, {"m", 2});
  const auto jv = choi_of_unitary(v, {"m", 2}, {"o", 2});
  const auto jvu = compose_choi(ju, jv);
  const Matrix rho = random_density(2, rng);
  CHECK(max_abs(apply_choi(jvu, rho) - v * u * rho * u.adjoint() * v.adjoint()) <= 1e-12);

  const auto k = kraus_of_choi(ju);
  REQUIRE(k.size() == 1);
  CHECK(max_abs(k[0] * rho * k[0].adjoint() - u * rho * u.adjoint()) <= 1e-12);
}

TEST_CASE("spanning projectors and Gell-Mann basis span the Hermitian matrices") {
  for (int d : {2, 3, 4}) {
    auto rank_of = [&](const std::vector<Matrix>& ms) {
      Eigen::MatrixXcd stacked(d * d, static_cast<Eigen::Index>(ms.size()));
      for (std::size_t i = 0; i < ms.size(); ++i) stacked.col(static_cast<Eigen::Index>(i)) = ms[i].reshaped();
      return Eigen::FullPivLU<Eigen::MatrixXcd>(stacked).rank();
    };
    const auto p = spanning_projectors(d);
    CHECK(p.size() == static_cast<std::size_t>(d * d));
    CHECK(rank_of(p) == d * d);
    auto g = gell_mann_basis(d);
    CHECK(g.size() == static_cast<std::size_t>(d * d - 1));
    for (const auto& m : g) CHECK(std::abs(m.trace()) <= 1e-14);
    g.push_back(Matrix::Identity(d, d));
    CHECK(rank_of(g) == d * d);
  }
}

TEST_CASE("apply_local acts on the chosen factors") {
  Rng rng(37);
  const Matrix u = haar_unitary(2, rng);
  Vector psi = ginibre(8, 1, rng).col(0);
  const std::vector<int> dims{2, 2, 2};
  const std::vector<int> target{1};
  const Matrix full = oracle::kron(oracle::kron(Matrix::Identity(2, 2), u), Matrix::Identity(2, 2));
  CHECK((apply_local(psi, dims, u, target) - full * psi).cwiseAbs().maxCoeff() <= 1e-14);
}
