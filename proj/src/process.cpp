#include "causal/process.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace causal {
namespace {

DenseOperator on_lab(const DenseOperator& cp_map, const Lab& lab) {
  if (cp_map.factors().size() != 2 || cp_map.factors()[0].dim != lab.in.dim ||
      cp_map.factors()[1].dim != lab.out.dim) {
    throw Error("CP map does not act on lab '" + lab.name + "' (" + std::to_string(lab.in.dim) + " -> " +
                std::to_string(lab.out.dim) + ")");
  }
  return cp_map.relabeled({lab.in, lab.out});
}

// Tr[W M^T] for W and M on the same two factors in the same order.
double final_contraction(const DenseOperator& w, const DenseOperator& m) {
  return (w.matrix().array() * m.matrix().array()).sum().real();
}

void distribution_recurse(const DenseOperator& w, std::span<const Lab> labs, std::span<const Instrument> instruments,
                          std::size_t k, std::size_t base, std::vector<double>& out) {
  const auto& inst = instruments[k];
  const std::size_t outcomes = inst.cp_maps.size();
  for (std::size_t j = 0; j < outcomes; ++j) {
    const DenseOperator m = on_lab(inst.cp_maps[j], labs[k]);
    const std::size_t idx = base * outcomes + j;
    if (k + 1 == labs.size()) {
      out[idx] = final_contraction(w, m);
    } else {
      distribution_recurse(contract(w, m), labs, instruments, k + 1, idx, out);
    }
  }
}

// Vector permutation: brings the factors listed in `front` to the front in
// the given order, remaining factors keep their relative order.
Vector bring_to_front(const Vector& psi, const std::vector<int>& dims, const std::vector<int>& front) {
  std::vector<int> order = front;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
    if (std::find(front.begin(), front.end(), i) == front.end()) order.push_back(i);
  }
  std::vector<int> strides(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) strides[i] = strides[i + 1] * dims[i + 1];
  Vector out(psi.size());
  for (Eigen::Index idx = 0; idx < psi.size(); ++idx) {
    Eigen::Index rem = idx;
    Eigen::Index old = 0;
    for (int k = static_cast<int>(order.size()) - 1; k >= 0; --k) {
      const int d = dims[order[k]];
      old += (rem % d) * strides[order[k]];
      rem /= d;
    }
    out(idx) = psi(old);
  }
  return out;
}

}  // namespace

Lab make_lab(const std::string& name, int in_dim, int out_dim) {
  return {name, {name + "_in", in_dim}, {name + "_out", out_dim}};
}

DenseOperator Instrument::total() const {
  if (cp_maps.empty()) throw Error("instrument for lab '" + lab + "' has no outcomes");
  DenseOperator sum = cp_maps.front();
  for (std::size_t i = 1; i < cp_maps.size(); ++i) sum = sum + cp_maps[i];
  return sum;
}

bool is_valid_instrument(const Instrument& inst, const Lab& lab, double tol) {
  if (inst.cp_maps.empty()) return false;
  for (const auto& m : inst.cp_maps) {
    if (m.factors().size() != 2 || m.factors()[0].dim != lab.in.dim || m.factors()[1].dim != lab.out.dim) return false;
    if (hermiticity_defect(m.matrix()) > tol) return false;
    if (!hermitian_spectrum(m, tol).is_psd(tol)) return false;
  }
  const DenseOperator t = on_lab(inst.total(), lab);
  const std::vector<std::string> keep{lab.in.name};
  const Matrix reduced = partial_trace(t, keep).matrix();
  return max_abs(reduced - Matrix::Identity(lab.in.dim, lab.in.dim)) <= tol;
}

std::vector<SpaceLabel> process_spaces(std::span<const Lab> labs) {
  std::vector<SpaceLabel> f;
  for (const auto& l : labs) {
    f.push_back(l.in);
    f.push_back(l.out);
  }
  return f;
}

ProcessMatrix::ProcessMatrix(std::vector<Lab> labs, DenseOperator w) : labs_(std::move(labs)), w_(std::move(w)) {
  std::set<std::string> names;
  for (const auto& l : labs_) {
    if (!names.insert(l.name).second) throw Error("duplicate lab name '" + l.name + "'");
    if (l.in.name == l.out.name) throw Error("lab '" + l.name + "' uses the same space for input and output");
  }
  if (w_.factors() != process_spaces(labs_)) {
    throw Error("process matrix factors must be (in, out) of each lab in lab order");
  }
}

int ProcessMatrix::lab_index(const std::string& name) const {
  for (std::size_t i = 0; i < labs_.size(); ++i) {
    if (labs_[i].name == name) return static_cast<int>(i);
  }
  throw Error("unknown lab '" + name + "'");
}

double ProcessMatrix::expected_trace() const {
  double t = 1.0;
  for (const auto& l : labs_) t *= l.out.dim;
  return t;
}

double born_probability(const ProcessMatrix& p, std::span<const DenseOperator> choice) {
  if (choice.size() != p.labs().size()) throw Error("born_probability: need one CP map per lab");
  DenseOperator w = p.w();
  for (std::size_t k = 0; k < choice.size(); ++k) w = contract(w, on_lab(choice[k], p.labs()[k]));
  return w.matrix()(0, 0).real();
}

std::vector<double> outcome_distribution(const ProcessMatrix& p, std::span<const Instrument> instruments) {
  if (instruments.size() != p.labs().size()) throw Error("outcome_distribution: need one instrument per lab");
  std::size_t total = 1;
  for (const auto& inst : instruments) {
    if (inst.cp_maps.empty()) throw Error("instrument without outcomes");
    total *= inst.cp_maps.size();
  }
  std::vector<double> out(total, 0.0);
  if (p.labs().empty()) {
    out.assign(1, p.w().matrix()(0, 0).real());
    return out;
  }
  distribution_recurse(p.w(), p.labs(), instruments, 0, 0, out);
  return out;
}

std::vector<DenseOperator> spanning_channels(const Lab& lab) {
  const int di = lab.in.dim;
  const int dout = lab.out.dim;
  const std::vector<SpaceLabel> f{lab.in, lab.out};
  const Matrix base = Matrix::Identity(di * dout, di * dout) / static_cast<double>(dout);
  std::vector<DenseOperator> out{{f, base}};
  const auto hs = spanning_projectors(di);
  for (const auto& k : gell_mann_basis(dout)) {
    const double knorm = std::max(std::abs(hermitian_spectrum(k).max()), std::abs(hermitian_spectrum(k).min()));
    const double eps = 1.0 / (2.0 * dout * std::max(1.0, knorm));
    for (const auto& h : hs) {
      Matrix hk(di * dout, di * dout);
      for (int a = 0; a < di; ++a) {
        for (int b = 0; b < di; ++b) hk.block(a * dout, b * dout, dout, dout) = h(a, b) * k;
      }
      out.emplace_back(f, base + eps * hk);
    }
  }
  return out;
}

std::vector<Instrument> ic_instruments(const Lab& lab) {
  const int dout = lab.out.dim;
  const int d = lab.in.dim * dout;
  const std::vector<SpaceLabel> f{lab.in, lab.out};
  std::vector<Instrument> out;
  for (const auto& c : spanning_channels(lab)) {
    const DenseOperator half = Complex(0.5) * c;
    out.push_back({lab.name, {half, half}});
  }
  const Matrix base = Matrix::Identity(d, d) / static_cast<double>(dout);
  for (const auto& proj : spanning_projectors(d)) {
    const Matrix m0 = proj / (2.0 * dout);
    out.push_back({lab.name, {DenseOperator(f, m0), DenseOperator(f, base - m0)}});
  }
  return out;
}

ValidityReport validate_process(const ProcessMatrix& p, int n_random, double tol, std::uint64_t seed) {
  ValidityReport r;
  if (hermiticity_defect(p.w().matrix()) <= tol) {
    const auto spectrum = hermitian_spectrum(p.w(), tol);
    r.min_eigenvalue = spectrum.min();
    r.psd_ok = spectrum.is_psd(tol);
  }
  r.trace = p.w().trace().real();
  const double expected = p.expected_trace();
  r.trace_ok = std::abs(r.trace - expected) <= tol * std::max(1.0, expected);

  double worst = 0.0;
  double pmin = 0.0;
  double pmax = 0.0;
  const auto& labs = p.labs();

  // Deterministic spanning family: every product of spanning channels.
  std::vector<std::vector<DenseOperator>> families;
  for (const auto& l : labs) {
    families.push_back({});
    for (const auto& c : spanning_channels(l)) families.back().push_back(c.relabeled({l.in, l.out}));
  }
  std::function<void(const DenseOperator&, std::size_t)> scan = [&](const DenseOperator& w, std::size_t k) {
    if (k == labs.size()) {
      worst = std::max(worst, std::abs(w.matrix()(0, 0) - 1.0));
      return;
    }
    for (const auto& c : families[k]) scan(contract(w, c), k + 1);
  };
  scan(p.w(), 0);

  Rng rng(seed);
  for (int t = 0; t < n_random; ++t) {
    std::vector<Instrument> inst;
    for (const auto& l : labs) inst.push_back({l.name, random_instrument(l.in, l.out, 2, rng)});
    const auto dist = outcome_distribution(p, inst);
    double s = 0.0;
    for (double v : dist) {
      s += v;
      pmin = std::min(pmin, v);
      pmax = std::max(pmax, v);
    }
    worst = std::max(worst, std::abs(s - 1.0));
  }
  r.max_normalization_deviation = worst;
  r.min_probability = pmin;
  r.max_probability = pmax;
  r.normalization_ok = worst <= tol;
  return r;
}

ProcessMatrix w_from_chain(const Matrix& state, std::span<const DenseOperator> channels, std::vector<Lab> labs,
                           double tol) {
  if (labs.empty()) throw Error("w_from_chain: at least one lab is required");
  if (channels.size() + 1 != labs.size()) throw Error("w_from_chain: need exactly one channel between consecutive labs");
  if (state.rows() != labs.front().in.dim || state.cols() != labs.front().in.dim) {
    throw Error("w_from_chain: state dimension does not match the first lab's input");
  }
  const auto spectrum = hermitian_spectrum(state, tol);
  if (!spectrum.is_psd(tol) || std::abs(state.trace() - 1.0) > tol) throw Error("w_from_chain: state is not a density matrix");

  DenseOperator w({labs.front().in}, state);
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const Lab& from = labs[i];
    const Lab& to = labs[i + 1];
    const auto& c = channels[i];
    if (c.factors().size() != 2 || c.factors()[0].dim != from.out.dim || c.factors()[1].dim != to.in.dim) {
      throw Error("w_from_chain: channel " + std::to_string(i) + " does not map " + from.out.name + " to " +
                  to.in.name);
    }
    const DenseOperator j = c.relabeled({from.out, to.in});
    if (!is_cptp(j, tol)) {
      throw Error("w_from_chain: channel " + std::to_string(i) + " is not CPTP");
    }
    w = tensor(w, j);
  }
  w = tensor(w, DenseOperator::identity({labs.back().out}));
  return {std::move(labs), std::move(w)};
}

ProcessMatrix process_from_network(std::vector<Lab> labs, int environment_dim,
                                   const std::function<Vector(int)>& isometry) {
  int d_out = 1;
  int d_in = 1;
  for (const auto& l : labs) {
    d_out *= l.out.dim;
    d_in *= l.in.dim;
  }
  const int g = environment_dim;
  // Row (k * d_in + i) holds <i, e| V |k> over environment index e.
  Matrix rows(static_cast<Eigen::Index>(d_out) * d_in, g);
  for (int k = 0; k < d_out; ++k) {
    const Vector v = isometry(k);
    if (v.size() != static_cast<Eigen::Index>(d_in) * g) throw Error("process_from_network: isometry output has wrong size");
    for (int i = 0; i < d_in; ++i) rows.row(static_cast<Eigen::Index>(k) * d_in + i) = v.segment(i * g, g).transpose();
  }
  const Matrix j = rows * rows.adjoint();

  std::vector<SpaceLabel> f;
  for (const auto& l : labs) f.push_back(l.out);
  for (const auto& l : labs) f.push_back(l.in);
  const DenseOperator jn(f, j);
  std::vector<std::string> order;
  for (const auto& l : labs) {
    order.push_back(l.in.name);
    order.push_back(l.out.name);
  }
  return {labs, permute(jn, order)};
}

ProcessMatrix random_causal_process(std::uint64_t seed, const PartialOrder& order, std::vector<Lab> labs) {
  const int n = static_cast<int>(labs.size());
  if (order.size() != n) throw Error("random_causal_process: order must cover exactly the labs");
  std::vector<int> oi(n);
  for (int i = 0; i < n; ++i) oi[i] = order.index_of(labs[i].name);
  auto less = [&](int a, int b) { return order.less(oi[a], oi[b]); };

  struct Step {
    Matrix u;
    std::vector<int> targets;
  };
  Rng rng(seed);
  std::vector<int> dims;
  for (const auto& l : labs) dims.push_back(l.out.dim);
  std::vector<Step> plan;
  // share[j][i]: register position carrying lab j's share for later lab i.
  std::vector<std::vector<int>> share(n, std::vector<int>(n, -1));
  for (int j = 0; j < n; ++j) {
    std::vector<int> later;
    for (int i = 0; i < n; ++i) {
      if (less(j, i)) later.push_back(i);
    }
    if (later.empty()) continue;
    std::vector<int> targets{j};
    for (std::size_t s = 1; s < later.size(); ++s) {
      targets.push_back(static_cast<int>(dims.size()));
      dims.push_back(labs[j].out.dim);
    }
    int d = 1;
    for (std::size_t s = 0; s < later.size(); ++s) d *= labs[j].out.dim;
    plan.push_back({haar_unitary(d, rng), targets});
    for (std::size_t s = 0; s < later.size(); ++s) share[j][later[s]] = targets[s];
  }
  std::vector<int> input_pos(n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> targets;
    int d = 1;
    for (int j = 0; j < n; ++j) {
      if (share[j][i] >= 0) {
        targets.push_back(share[j][i]);
        d *= dims[share[j][i]];
      }
    }
    input_pos[i] = static_cast<int>(dims.size());
    targets.push_back(input_pos[i]);
    dims.push_back(labs[i].in.dim);
    targets.push_back(static_cast<int>(dims.size()));
    dims.push_back(labs[i].in.dim);
    d *= labs[i].in.dim * labs[i].in.dim;
    plan.push_back({haar_unitary(d, rng), targets});
  }

  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  int d_in = 1;
  for (const auto& l : labs) d_in *= l.in.dim;
  const int env = static_cast<int>(total / d_in);
  Eigen::Index tail = 1;
  for (std::size_t i = n; i < dims.size(); ++i) tail *= dims[i];

  auto column = [&](int k) {
    Vector psi = Vector::Zero(total);
    psi(static_cast<Eigen::Index>(k) * tail) = 1.0;  // |k> on the outputs, ancillas in |0>
    for (const auto& step : plan) psi = apply_local(psi, dims, step.u, step.targets);
    return bring_to_front(psi, dims, input_pos);
  };
  return process_from_network(std::move(labs), env, column);
}

ProcessMatrix reduce_lab(const ProcessMatrix& p, const std::string& lab, const DenseOperator& cp_map) {
  const int idx = p.lab_index(lab);
  const Lab& l = p.labs()[idx];
  DenseOperator rest = contract(p.w(), on_lab(cp_map, l));
  std::vector<Lab> labs = p.labs();
  labs.erase(labs.begin() + idx);
  return {std::move(labs), std::move(rest)};
}

}  // namespace causal
