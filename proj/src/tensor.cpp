#include "causal/tensor.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace causal {
namespace {

int product_of_dims(std::span<const SpaceLabel> factors) {
  int d = 1;
  for (const auto& f : factors) d *= f.dim;
  return d;
}

// Offset contributed by each multi-index over `which` factors, enumerated in
// row-major order over those factors, inside the full row-major index space.
std::vector<int> offsets_for(std::span<const int> dims, std::span<const int> which) {
  std::vector<int> strides(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) strides[i] = strides[i + 1] * dims[i + 1];

  int count = 1;
  for (int w : which) count *= dims[w];
  std::vector<int> out(count, 0);
  for (int idx = 0; idx < count; ++idx) {
    int rem = idx;
    int off = 0;
    for (int k = static_cast<int>(which.size()) - 1; k >= 0; --k) {
      const int d = dims[which[k]];
      off += (rem % d) * strides[which[k]];
      rem /= d;
    }
    out[idx] = off;
  }
  return out;
}

std::vector<int> dims_of(const std::vector<SpaceLabel>& factors) {
  std::vector<int> d;
  d.reserve(factors.size());
  for (const auto& f : factors) d.push_back(f.dim);
  return d;
}

void check_unique(const std::vector<SpaceLabel>& factors) {
  std::set<std::string> seen;
  for (const auto& f : factors) {
    if (f.dim < 1) throw Error("space '" + f.name + "' has non-positive dimension");
    if (!seen.insert(f.name).second) throw Error("duplicate space label '" + f.name + "'");
  }
}

}  // namespace

DenseOperator::DenseOperator(std::vector<SpaceLabel> factors, Matrix entries)
    : factors_(std::move(factors)), m_(std::move(entries)) {
  check_unique(factors_);
  const int d = product_of_dims(factors_);
  if (m_.rows() != d || m_.cols() != d) {
    throw Error("operator entries are " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                " but the factors require " + std::to_string(d) + "x" + std::to_string(d));
  }
}

DenseOperator DenseOperator::identity(std::vector<SpaceLabel> factors) {
  const int d = product_of_dims(factors);
  return {std::move(factors), Matrix::Identity(d, d)};
}

DenseOperator DenseOperator::scalar(Complex value) {
  Matrix m(1, 1);
  m(0, 0) = value;
  return {{}, m};
}

int DenseOperator::factor_index(std::string_view name) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> DenseOperator::labels() const {
  std::vector<std::string> out;
  for (const auto& f : factors_) out.push_back(f.name);
  return out;
}

DenseOperator DenseOperator::relabeled(std::vector<SpaceLabel> factors) const {
  if (factors.size() != factors_.size()) throw Error("relabel: factor count mismatch");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].dim != factors_[i].dim) {
      throw Error("relabel: dimension mismatch for '" + factors[i].name + "'");
    }
  }
  return {std::move(factors), m_};
}

DenseOperator operator*(Complex s, const DenseOperator& op) { return {op.factors(), s * op.matrix()}; }

DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
  if (a.factors() != b.factors()) throw Error("operator sum over different spaces");
  return {a.factors(), a.matrix() + b.matrix()};
}

DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
  if (a.factors() != b.factors()) throw Error("operator difference over different spaces");
  return {a.factors(), a.matrix() - b.matrix()};
}

DenseOperator tensor(const DenseOperator& a, const DenseOperator& b) {
  std::vector<SpaceLabel> f = a.factors();
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  const auto& am = a.matrix();
  const auto& bm = b.matrix();
  const Eigen::Index db = bm.rows();
  Matrix out(am.rows() * db, am.cols() * db);
  for (Eigen::Index i = 0; i < am.rows(); ++i) {
    for (Eigen::Index j = 0; j < am.cols(); ++j) {
      out.block(i * db, j * db, db, db) = am(i, j) * bm;
    }
  }
  return {std::move(f), std::move(out)};
}

DenseOperator partial_trace(const DenseOperator& op, std::span<const std::string> keep) {
  std::vector<int> kept;
  std::vector<int> traced;
  for (const auto& k : keep) {
    if (op.factor_index(k) < 0) throw Error("partial_trace: unknown space label '" + k + "'");
  }
  for (int i = 0; i < static_cast<int>(op.factors().size()); ++i) {
    const bool is_kept = std::find(keep.begin(), keep.end(), op.factors()[i].name) != keep.end();
    (is_kept ? kept : traced).push_back(i);
  }
  const auto dims = dims_of(op.factors());
  const auto ko = offsets_for(dims, kept);
  const auto to = offsets_for(dims, traced);
  const auto& m = op.matrix();
  const int dk = static_cast<int>(ko.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (int r = 0; r < dk; ++r) {
    for (int c = 0; c < dk; ++c) {
      Complex s = 0.0;
      for (int t : to) s += m(ko[r] + t, ko[c] + t);
      out(r, c) = s;
    }
  }
  std::vector<SpaceLabel> f;
  for (int i : kept) f.push_back(op.factors()[i]);
  return {std::move(f), std::move(out)};
}

DenseOperator permute(const DenseOperator& op, std::span<const std::string> order) {
  if (order.size() != op.factors().size()) throw Error("permute: order must list every factor once");
  std::vector<int> which;
  std::vector<SpaceLabel> f;
  for (const auto& name : order) {
    const int i = op.factor_index(name);
    if (i < 0) throw Error("permute: unknown space label '" + name + "'");
    which.push_back(i);
    f.push_back(op.factors()[i]);
  }
  check_unique(f);
  const auto idx = offsets_for(dims_of(op.factors()), which);
  const int d = op.dim();
  Matrix out(d, d);
  const auto& m = op.matrix();
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) out(r, c) = m(idx[r], idx[c]);
  }
  return {std::move(f), std::move(out)};
}

DenseOperator embed(const DenseOperator& op, std::span<const SpaceLabel> full) {
  std::vector<SpaceLabel> missing;
  for (const auto& f : full) {
    const int i = op.factor_index(f.name);
    if (i < 0) {
      missing.push_back(f);
    } else if (op.factors()[i].dim != f.dim) {
      throw Error("embed: dimension mismatch for '" + f.name + "'");
    }
  }
  if (missing.size() + op.factors().size() != full.size()) {
    throw Error("embed: operator acts on spaces outside the target space");
  }
  const DenseOperator padded = missing.empty() ? op : tensor(op, DenseOperator::identity(missing));
  std::vector<std::string> order;
  for (const auto& f : full) order.push_back(f.name);
  return permute(padded, order);
}

DenseOperator trace_replace(const DenseOperator& op, std::span<const std::string> traced) {
  if (traced.empty()) return op;
  std::vector<std::string> keep;
  std::vector<SpaceLabel> gone;
  for (const auto& f : op.factors()) {
    if (std::find(traced.begin(), traced.end(), f.name) == traced.end()) {
      keep.push_back(f.name);
    } else {
      gone.push_back(f);
    }
  }
  if (gone.size() != traced.size()) throw Error("trace_replace: unknown space label");
  const DenseOperator reduced = partial_trace(op, keep);
  const double d = product_of_dims(gone);
  return embed(Complex(1.0 / d) * reduced, op.factors());
}

DenseOperator contract(const DenseOperator& w, const DenseOperator& local) {
  std::vector<int> lab;
  for (const auto& f : local.factors()) {
    const int i = w.factor_index(f.name);
    if (i < 0) throw Error("contract: space '" + f.name + "' is not part of the process");
    if (w.factors()[i].dim != f.dim) throw Error("contract: dimension mismatch for '" + f.name + "'");
    lab.push_back(i);
  }
  std::vector<int> rest;
  std::vector<SpaceLabel> rest_f;
  for (int i = 0; i < static_cast<int>(w.factors().size()); ++i) {
    if (std::find(lab.begin(), lab.end(), i) == lab.end()) {
      rest.push_back(i);
      rest_f.push_back(w.factors()[i]);
    }
  }
  const auto dims = dims_of(w.factors());
  const auto lo = offsets_for(dims, lab);
  const auto ro = offsets_for(dims, rest);
  const auto& wm = w.matrix();
  const auto& cm = local.matrix();
  const int dl = static_cast<int>(lo.size());
  const int dr = static_cast<int>(ro.size());
  Matrix out = Matrix::Zero(dr, dr);
  for (int a = 0; a < dl; ++a) {
    for (int b = 0; b < dl; ++b) {
      const Complex c = cm(a, b);
      if (c == Complex(0.0)) continue;
      for (int r = 0; r < dr; ++r) {
        for (int s = 0; s < dr; ++s) out(r, s) += c * wm(lo[a] + ro[r], lo[b] + ro[s]);
      }
    }
  }
  return {std::move(rest_f), std::move(out)};
}

double Spectrum::sum() const { return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0); }

double hermiticity_defect(const Matrix& m) { return max_abs(m - m.adjoint()); }

Spectrum hermitian_spectrum(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw Error("hermitian_spectrum: matrix is not square");
  const double defect = hermiticity_defect(m);
  if (defect > tol) {
    throw Error("hermitian_spectrum: operator is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  Spectrum s;
  for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) s.eigenvalues.push_back(es.eigenvalues()(i));
  return s;
}

Spectrum hermitian_spectrum(const DenseOperator& op, double tol) { return hermitian_spectrum(op.matrix(), tol); }

Matrix psd_projection(const Matrix& hermitian) {
  const Matrix h = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix psd_sqrt(const Matrix& psd) {
  const Matrix h = 0.5 * (psd + psd.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) <= tol;
}

DenseOperator choi_of_kraus(std::span<const Matrix> kraus, SpaceLabel in, SpaceLabel out) {
  const int di = in.dim;
  const int dout = out.dim;
  Matrix j = Matrix::Zero(di * dout, di * dout);
  for (const auto& k : kraus) {
    if (k.rows() != dout || k.cols() != di) throw Error("choi_of_kraus: Kraus operator has wrong shape");
    // |K>> = sum_i |i> (x) K|i>
    Vector v(di * dout);
    for (int i = 0; i < di; ++i) v.segment(i * dout, dout) = k.col(i);
    j += v * v.adjoint();
  }
  return {{std::move(in), std::move(out)}, std::move(j)};
}

DenseOperator choi_of_unitary(const Matrix& u, SpaceLabel in, SpaceLabel out, double tol) {
  if (!is_unitary(u, tol)) throw Error("choi_of_unitary: operator is not unitary");
  if (u.rows() != in.dim || out.dim != in.dim) throw Error("choi_of_unitary: space dimensions do not match");
  const std::vector<Matrix> k{u};
  return choi_of_kraus(k, std::move(in), std::move(out));
}

std::vector<Matrix> kraus_of_choi(const DenseOperator& choi, double tol) {
  if (choi.factors().size() != 2) throw Error("kraus_of_choi: expected a Choi operator on (in, out)");
  const int di = choi.factors()[0].dim;
  const int dout = choi.factors()[1].dim;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi.matrix() + choi.matrix().adjoint()));
  std::vector<Matrix> out;
  for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e) {
    const double lambda = es.eigenvalues()(e);
    if (lambda < -std::max(tol, 1e-9)) throw Error("kraus_of_choi: Choi operator is not PSD");
    if (lambda <= tol) continue;
    const Vector v = std::sqrt(lambda) * es.eigenvectors().col(e);
    Matrix k(dout, di);
    for (int i = 0; i < di; ++i) k.col(i) = v.segment(i * dout, dout);
    out.push_back(std::move(k));
  }
  return out;
}

Matrix apply_choi(const DenseOperator& choi, const Matrix& rho) {
  if (choi.factors().size() != 2) throw Error("apply_choi: expected a Choi operator on (in, out)");
  const int di = choi.factors()[0].dim;
  const int dout = choi.factors()[1].dim;
  if (rho.rows() != di || rho.cols() != di) throw Error("apply_choi: input has wrong dimension");
  Matrix out = Matrix::Zero(dout, dout);
  // M(rho) = sum_ij rho_ij M(|i><j|) and M(|i><j|) is block (i, j) of J.
  for (int i = 0; i < di; ++i) {
    for (int j = 0; j < di; ++j) out += rho(i, j) * choi.matrix().block(i * dout, j * dout, dout, dout);
  }
  return out;
}

DenseOperator compose_choi(const DenseOperator& first, const DenseOperator& second) {
  if (first.factors().size() != 2 || second.factors().size() != 2) throw Error("compose_choi: expected Choi operators");
  const int di = first.factors()[0].dim;
  const int dm = first.factors()[1].dim;
  if (second.factors()[0].dim != dm) throw Error("compose_choi: intermediate dimensions differ");
  const int dout = second.factors()[1].dim;
  Matrix j = Matrix::Zero(di * dout, di * dout);
  for (int i = 0; i < di; ++i) {
    for (int k = 0; k < di; ++k) {
      const Matrix mid = first.matrix().block(i * dm, k * dm, dm, dm);
      j.block(i * dout, k * dout, dout, dout) = apply_choi(second, mid);
    }
  }
  return {{first.factors()[0], second.factors()[1]}, std::move(j)};
}

double trace_distance(const Matrix& a, const Matrix& b) {
  const Matrix d = a - b;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::vector<Matrix> spanning_projectors(int d) {
  std::vector<Matrix> out;
  for (int j = 0; j < d; ++j) {
    Vector v = Vector::Zero(d);
    v(j) = 1.0;
    out.push_back(v * v.adjoint());
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Vector v = Vector::Zero(d);
      v(j) = s;
      v(k) = s;
      out.push_back(v * v.adjoint());
      v(k) = Complex(0.0, s);
      out.push_back(v * v.adjoint());
    }
  }
  return out;
}

std::vector<Matrix> gell_mann_basis(int d) {
  std::vector<Matrix> out;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Matrix sym = Matrix::Zero(d, d);
      sym(j, k) = sym(k, j) = 1.0;
      out.push_back(sym);
      Matrix anti = Matrix::Zero(d, d);
      anti(j, k) = Complex(0.0, -1.0);
      anti(k, j) = Complex(0.0, 1.0);
      out.push_back(anti);
    }
  }
  for (int l = 1; l < d; ++l) {
    Matrix diag = Matrix::Zero(d, d);
    const double norm = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) diag(j, j) = norm;
    diag(l, l) = -l * norm;
    out.push_back(diag);
  }
  return out;
}

Vector apply_local(const Vector& psi, std::span<const int> dims, const Matrix& u, std::span<const int> targets) {
  const auto to = offsets_for(dims, targets);
  std::vector<int> rest;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
    if (std::find(targets.begin(), targets.end(), i) == targets.end()) rest.push_back(i);
  }
  const auto ro = offsets_for(dims, rest);
  const int dt = static_cast<int>(to.size());
  if (u.rows() != dt || u.cols() != dt) throw Error("apply_local: operator does not match target dimensions");
  if (psi.size() != static_cast<Eigen::Index>(to.size() * ro.size())) throw Error("apply_local: state has wrong size");
  Vector out = Vector::Zero(psi.size());
  Vector local(dt);
  for (int r : ro) {
    for (int a = 0; a < dt; ++a) local(a) = psi(r + to[a]);
    const Vector mapped = u * local;
    for (int a = 0; a < dt; ++a) out(r + to[a]) = mapped(a);
  }
  return out;
}

bool is_cptp(const DenseOperator& choi, double tol) {
  if (choi.factors().size() != 2) return false;
  if (hermiticity_defect(choi.matrix()) > tol) return false;
  if (!hermitian_spectrum(choi, tol).is_psd(tol)) return false;
  const std::vector<std::string> keep{choi.factors()[0].name};
  const int d = choi.factors()[0].dim;
  return max_abs(partial_trace(choi, keep).matrix() - Matrix::Identity(d, d)) <= tol;
}

}  // namespace causal
