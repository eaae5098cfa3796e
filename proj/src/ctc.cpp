#include "causal/ctc.hpp"

#include "causal/tensor.hpp"

#include <algorithm>

namespace causal {
namespace {

// Output word produced by the local operations from input word x.
std::uint32_t act(const LocalOperationSet& ops, std::uint32_t x) {
  std::uint32_t out = 0;
  for (std::size_t k = 0; k < ops.size(); ++k) out |= static_cast<std::uint32_t>(apply(ops[k], (x >> k) & 1U)) << k;
  return out;
}

std::vector<LocalOperationSet> all_operation_sets(int n) {
  std::vector<LocalOperationSet> out;
  const int total = 1 << (2 * n);
  for (int code = 0; code < total; ++code) {
    LocalOperationSet ops(n);
    for (int k = 0; k < n; ++k) ops[k] = static_cast<BitOp>((code >> (2 * k)) & 3);
    out.push_back(ops);
  }
  return out;
}

}  // namespace

std::string to_string(BitOp op) {
  switch (op) {
    case BitOp::zero:
      return "zero";
    case BitOp::one:
      return "one";
    case BitOp::identity:
      return "identity";
    case BitOp::flip:
      return "flip";
  }
  return "?";
}

int apply(BitOp op, int bit) {
  switch (op) {
    case BitOp::zero:
      return 0;
    case BitOp::one:
      return 1;
    case BitOp::identity:
      return bit;
    case BitOp::flip:
      return 1 - bit;
  }
  return bit;
}

ProcessFunction::ProcessFunction(int n_labs, std::vector<std::uint32_t> table) : n_(n_labs), table_(std::move(table)) {
  if (n_ < 1 || n_ > 16) throw Error("process functions need between 1 and 16 labs");
  const std::size_t size = std::size_t{1} << n_;
  if (table_.size() != size) throw Error("process function table needs " + std::to_string(size) + " entries");
  for (auto v : table_) {
    if (v >= size) throw Error("process function value out of range");
  }
}

ProcessFunction ProcessFunction::constant(int n_labs, std::uint32_t value) {
  return {n_labs, std::vector<std::uint32_t>(std::size_t{1} << n_labs, value)};
}

ProcessFunction ProcessFunction::identity(int n_labs) {
  std::vector<std::uint32_t> t(std::size_t{1} << n_labs);
  for (std::uint32_t i = 0; i < t.size(); ++i) t[i] = i;
  return {n_labs, t};
}

std::string ProcessFunction::to_string() const {
  auto word = [this](std::uint32_t v) {
    std::string s;
    for (int k = 0; k < n_; ++k) s += ((v >> k) & 1U) ? '1' : '0';
    return s;
  };
  std::string s;
  for (std::uint32_t o = 0; o < table_.size(); ++o) {
    if (!s.empty()) s += ' ';
    s += "w(" + word(o) + ")=" + word(table_[o]);
  }
  return s;
}

int count_fixed_points(const ProcessFunction& w, const LocalOperationSet& ops) {
  if (static_cast<int>(ops.size()) != w.n_labs()) throw Error("one local operation per lab is required");
  int count = 0;
  for (std::uint32_t x = 0; x < w.table().size(); ++x) count += w(act(ops, x)) == x;
  return count;
}

ConsistencyReport check_consistency(const ProcessFunction& w) {
  if (w.n_labs() > 4) throw Error("check_consistency supports at most 4 labs");
  ConsistencyReport r;
  for (const auto& ops : all_operation_sets(w.n_labs())) {
    const int c = count_fixed_points(w, ops);
    if (c != 1) {
      r.counterexample = ops;
      r.fixed_points = c;
      return r;
    }
  }
  r.valid = true;
  return r;
}

std::vector<ProcessFunction> enumerate_valid(int n) {
  if (n < 1 || n > 3) throw Error("enumerate_valid supports 1 to 3 labs");
  const std::uint32_t points = 1U << n;
  // f(x) for every operation set, so a candidate check is a table lookup.
  std::vector<std::vector<std::uint32_t>> f_maps;
  for (const auto& ops : all_operation_sets(n)) {
    std::vector<std::uint32_t> m(points);
    for (std::uint32_t x = 0; x < points; ++x) m[x] = act(ops, x);
    f_maps.push_back(std::move(m));
  }
  // The all-identity set goes first: it rejects every w without exactly
  // one fixed point.
  std::stable_partition(f_maps.begin(), f_maps.end(), [points](const std::vector<std::uint32_t>& m) {
    for (std::uint32_t x = 0; x < points; ++x) {
      if (m[x] != x) return false;
    }
    return true;
  });

  std::vector<ProcessFunction> valid;
  std::vector<std::uint32_t> table(points, 0);
  std::uint64_t total = 1;
  for (std::uint32_t k = 0; k < points; ++k) total *= points;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::uint32_t k = points; k-- > 0;) {
      table[k] = static_cast<std::uint32_t>(c % points);
      c /= points;
    }
    bool ok = true;
    for (const auto& m : f_maps) {
      int fixed = 0;
      for (std::uint32_t x = 0; x < points && fixed < 2; ++x) fixed += table[m[x]] == x;
      if (fixed != 1) {
        ok = false;
        break;
      }
    }
    if (ok) valid.emplace_back(n, table);
  }
  return valid;
}

std::vector<std::string> ctc_lab_names(int n) {
  std::vector<std::string> names;
  for (int k = 0; k < n; ++k) names.push_back(std::to_string(k));
  return names;
}

DiGraph signalling_structure(const ProcessFunction& w) {
  const int n = w.n_labs();
  DiGraph g(ctc_lab_names(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      for (std::uint32_t o = 0; o < w.table().size(); ++o) {
        if (((w(o) ^ w(o ^ (1U << j))) >> i) & 1U) {
          g.add_edge(j, i);
          break;
        }
      }
    }
  }
  return g;
}

bool is_trivial(const ProcessFunction& w) { return !signalling_structure(w).has_cycle(); }

}  // namespace causal
