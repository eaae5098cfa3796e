#pragma once

// Dense complex linear algebra over labeled tensor-product spaces.
//
// Every operator carries the ordered list of spaces it acts on. Index
// arithmetic is row-major with the first factor most significant, so for
// factors (a, b) the basis vector |i>|k> sits at index i * dim(b) + k.
//
// Choi convention (used throughout the library): for a map M from space
// `in` to space `out`,
//
//     J(M) = sum_ij |i><j|_in (x) M(|i><j|)_out
//
// unnormalized, input factor first. A trace-preserving map therefore has
// Tr_out J = I_in and Tr J = dim(in).

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpaceLabel {
  std::string name;
  int dim = 1;

  bool operator==(const SpaceLabel&) const = default;
};

class DenseOperator {
 public:
  DenseOperator() = default;
  DenseOperator(std::vector<SpaceLabel> factors, Matrix entries);

  static DenseOperator identity(std::vector<SpaceLabel> factors);
  static DenseOperator scalar(Complex value);

  const std::vector<SpaceLabel>& factors() const { return factors_; }
  const Matrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  /// Index of the factor called `name`, or -1.
  int factor_index(std::string_view name) const;
  bool has_factor(std::string_view name) const { return factor_index(name) >= 0; }
  std::vector<std::string> labels() const;

  Complex trace() const { return m_.trace(); }
  DenseOperator adjoint() const { return {factors_, m_.adjoint()}; }
  DenseOperator transpose() const { return {factors_, m_.transpose()}; }

  /// Same entries with factors renamed positionally. Dimensions must match.
  DenseOperator relabeled(std::vector<SpaceLabel> factors) const;

 private:
  std::vector<SpaceLabel> factors_;
  Matrix m_;
};

DenseOperator operator*(Complex s, const DenseOperator& op);
DenseOperator operator+(const DenseOperator& a, const DenseOperator& b);
DenseOperator operator-(const DenseOperator& a, const DenseOperator& b);

/// Kronecker product; factors are concatenated. Throws on duplicate labels.
DenseOperator tensor(const DenseOperator& a, const DenseOperator& b);

/// Trace over every factor not named in `keep`. Kept factors stay in their
/// original relative order. An empty `keep` yields a 1x1 operator.
DenseOperator partial_trace(const DenseOperator& op, std::span<const std::string> keep);

/// Reorders factors to `order`, which must be a permutation of op's labels.
DenseOperator permute(const DenseOperator& op, std::span<const std::string> order);

/// op (x) I on the factors of `full` that op lacks, arranged in full's order.
DenseOperator embed(const DenseOperator& op, std::span<const SpaceLabel> full);

/// Tr_S(op) (x) I_S / d_S with the factors in S restored in place.
DenseOperator trace_replace(const DenseOperator& op, std::span<const std::string> traced);

/// Tr_L[ W (C^T (x) I) ] where L are the factors of `local`: contracts the
/// factors of `local` out of `w`, leaving an operator on the rest.
DenseOperator contract(const DenseOperator& w, const DenseOperator& local);

struct Spectrum {
  std::vector<double> eigenvalues;  // descending

  double min() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
  double max() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }
  double sum() const;
  bool is_psd(double tol = 1e-9) const { return min() >= -tol; }
};

double hermiticity_defect(const Matrix& m);

/// Real spectrum of a Hermitian operator via Householder tridiagonalization
/// and implicit QL (Eigen's SelfAdjointEigenSolver). Throws if op deviates
/// from op^dagger by more than tol in max-norm.
Spectrum hermitian_spectrum(const DenseOperator& op, double tol = 1e-9);
Spectrum hermitian_spectrum(const Matrix& m, double tol = 1e-9);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
Matrix psd_projection(const Matrix& hermitian);

/// Principal square root of a PSD matrix.
Matrix psd_sqrt(const Matrix& psd);

bool is_unitary(const Matrix& u, double tol = 1e-9);

DenseOperator choi_of_unitary(const Matrix& u, SpaceLabel in, SpaceLabel out, double tol = 1e-9);
DenseOperator choi_of_kraus(std::span<const Matrix> kraus, SpaceLabel in, SpaceLabel out);

/// PSD Choi operator on (in, out) whose partial trace over out is I_in.
bool is_cptp(const DenseOperator& choi, double tol = 1e-9);

/// Kraus operators recovered from a PSD Choi operator with factors (in, out).
std::vector<Matrix> kraus_of_choi(const DenseOperator& choi, double tol = 1e-12);

/// M(rho) = Tr_in[(rho^T (x) I) J].
Matrix apply_choi(const DenseOperator& choi, const Matrix& rho);

/// Sequential composition: the map `second` after `first`.
DenseOperator compose_choi(const DenseOperator& first, const DenseOperator& second);

double trace_distance(const Matrix& a, const Matrix& b);

/// Max |m_ij|.
double max_abs(const Matrix& m);

/// Rank-one projectors |j>, (|j>+|k>)/sqrt2, (|j>+i|k>)/sqrt2 for j < k: a
/// basis of the d x d Hermitian matrices (d^2 elements).
std::vector<Matrix> spanning_projectors(int d);

/// Generalized Gell-Mann matrices: traceless Hermitian basis, d^2 - 1 elements.
std::vector<Matrix> gell_mann_basis(int d);

/// Applies `u` to the factors at `targets` of a state vector over `dims`.
Vector apply_local(const Vector& psi, std::span<const int> dims, const Matrix& u,
                   std::span<const int> targets);

}  // namespace causal
