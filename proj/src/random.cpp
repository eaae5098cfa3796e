#include "causal/random.hpp"

#include <Eigen/QR>

namespace causal {

Matrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

Matrix haar_unitary(int d, Rng& rng) {
  const Matrix z = ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0.0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

Matrix random_density(int d, Rng& rng) {
  const Matrix g = ginibre(d, d, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return 0.5 * (rho + rho.adjoint());
}

Matrix random_hermitian(int d, Rng& rng) {
  const Matrix g = ginibre(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

std::vector<DenseOperator> random_instrument(const SpaceLabel& in, const SpaceLabel& out, int outcomes, Rng& rng) {
  // Enough Kraus operators per outcome that S below is invertible.
  const int per_outcome = (in.dim + outcomes * out.dim - 1) / (outcomes * out.dim);
  std::vector<std::vector<Matrix>> g(outcomes);
  Matrix s = Matrix::Zero(in.dim, in.dim);
  for (auto& group : g) {
    for (int r = 0; r < per_outcome; ++r) {
      group.push_back(ginibre(out.dim, in.dim, rng));
      s += group.back().adjoint() * group.back();
    }
  }
  // K = G S^{-1/2} so that the Kraus operators of all outcomes sum to I.
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (s + s.adjoint()));
  const Matrix inv_sqrt =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  std::vector<DenseOperator> maps;
  for (const auto& group : g) {
    std::vector<Matrix> kraus;
    for (const auto& gk : group) kraus.push_back(gk * inv_sqrt);
    maps.push_back(choi_of_kraus(kraus, in, out));
  }
  return maps;
}

}  // namespace causal
