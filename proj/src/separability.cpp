#include "causal/structure.hpp"

#include <cmath>

namespace causal {
namespace {

// Orthogonal projector onto the span of process matrices ordered as
// chain[0] < chain[1] < ... . Built from the commuting trace-and-replace
// maps: the last output is replaced, and for every earlier lab k the part
// of W seen by labs up to k must not depend on k's output.
class OrderProjector {
 public:
  explicit OrderProjector(std::vector<Lab> chain) : chain_(std::move(chain)) {}

  DenseOperator operator()(DenseOperator x) const {
    const std::size_t n = chain_.size();
    const std::vector<std::string> last{chain_[n - 1].out.name};
    x = trace_replace(x, last);
    for (std::size_t k = n - 1; k-- > 0;) {
      std::vector<std::string> later;
      for (std::size_t t = k + 1; t < n; ++t) {
        later.push_back(chain_[t].in.name);
        later.push_back(chain_[t].out.name);
      }
      const std::vector<std::string> out_k{chain_[k].out.name};
      const DenseOperator diff = x - trace_replace(x, out_k);
      x = x - trace_replace(diff, later);
    }
    return x;
  }

 private:
  std::vector<Lab> chain_;
};

double negativity(const DenseOperator& x) {
  const Matrix h = (x.matrix() + x.matrix().adjoint()) / 2.0;
  return std::max(0.0, -hermitian_spectrum(h, 1e300).min());
}

DenseOperator psd_part(const DenseOperator& x) {
  const Matrix h = (x.matrix() + x.matrix().adjoint()) / 2.0;
  return {x.factors(), psd_projection(h)};
}

}  // namespace

SeparabilityVerdict is_causally_separable_2lab(const ProcessMatrix& p, double tol, int max_iter) {
  const auto& labs = p.labs();
  const bool with_future = labs.size() == 3 && labs[2].out.dim == 1;
  if (labs.size() != 2 && !with_future) {
    throw Error("is_causally_separable_2lab needs two labs (plus optionally a final lab with trivial output)");
  }
  std::vector<Lab> first_chain{labs[0], labs[1]};
  std::vector<Lab> second_chain{labs[1], labs[0]};
  if (with_future) {
    first_chain.push_back(labs[2]);
    second_chain.push_back(labs[2]);
  }
  const OrderProjector p1(first_chain);
  const OrderProjector p2(second_chain);
  const DenseOperator& w = p.w();
  const double tr = w.trace().real();

  SeparabilityVerdict v;
  auto accept = [&](DenseOperator a, DenseOperator b, double residual, int it) {
    v.separable = true;
    v.weight_first = a.trace().real() / tr;
    v.w_first = std::move(a);
    v.w_second = std::move(b);
    v.residual = residual;
    v.iterations = it;
    return v;
  };
  const DenseOperator zero = Complex(0.0) * w;

  // W must lie in the sum of the two subspaces at all.
  const DenseOperator outside = w - p1(w) - p2(w) + p1(p2(w));
  const double outside_norm = outside.matrix().norm();
  if (outside_norm > tol) {
    v.residual = outside_norm;
    return v;
  }
  if ((w - p1(w)).matrix().norm() <= tol && negativity(w) <= tol) return accept(w, zero, negativity(w), 0);
  if ((w - p2(w)).matrix().norm() <= tol && negativity(w) <= tol) return accept(zero, w, negativity(w), 0);

  // Exact projection onto {(X1, X2) : X1 in L1, X2 in L2, X1 + X2 = W}.
  const DenseOperator fixed = p1(w) - p1(p2(w));
  auto affine = [&](const DenseOperator& y1, const DenseOperator& y2) {
    const DenseOperator z = Complex(0.5) * (y1 + w - y2);
    DenseOperator x1 = p1(p2(z)) + fixed;
    DenseOperator x2 = w - x1;
    return std::make_pair(std::move(x1), std::move(x2));
  };

  DenseOperator y1 = Complex(0.5) * w;
  DenseOperator y2 = Complex(0.5) * w;
  DenseOperator q1 = zero;
  DenseOperator q2 = zero;
  double gap = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    auto [x1, x2] = affine(y1, y2);
    const DenseOperator t1 = x1 + q1;
    const DenseOperator t2 = x2 + q2;
    y1 = psd_part(t1);
    y2 = psd_part(t2);
    q1 = t1 - y1;
    q2 = t2 - y2;
    gap = std::sqrt((x1 - y1).matrix().squaredNorm() + (x2 - y2).matrix().squaredNorm());
    if (it % 10 == 0 || it == max_iter) {
      const double neg = std::max(negativity(x1), negativity(x2));
      if (neg <= tol) return accept(std::move(x1), std::move(x2), neg, it);
    }
  }
  v.residual = gap;
  v.iterations = max_iter;
  return v;
}

}  // namespace causal
