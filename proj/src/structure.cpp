#include "causal/structure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>

namespace causal {
namespace {

int product(const std::vector<int>& v) {
  int p = 1;
  for (int x : v) p *= x;
  return p;
}

std::vector<int> mixed_radix(int index, const std::vector<int>& radix) {
  std::vector<int> out(radix.size(), 0);
  for (int k = static_cast<int>(radix.size()) - 1; k >= 0; --k) {
    out[k] = index % radix[k];
    index /= radix[k];
  }
  return out;
}

// Setting indices that differ from `base` only in lab j's setting.
std::vector<int> vary_one(const Behavior& b, int base, int j) {
  auto s = b.setting_tuple(base);
  std::vector<int> out;
  for (int v = 0; v < b.settings()[j]; ++v) {
    s[j] = v;
    out.push_back(b.setting_index(s));
  }
  return out;
}

// True iff the marginal over `mask` never depends on lab j's setting.
bool independent_of(const Behavior& b, std::uint32_t mask, int j, double tol) {
  const int n_set = b.setting_count();
  for (int base = 0; base < n_set; ++base) {
    if (b.setting_tuple(base)[j] != 0) continue;
    const auto group = vary_one(b, base, j);
    const auto ref = b.marginal(mask, group[0]);
    for (std::size_t k = 1; k < group.size(); ++k) {
      if (total_variation(ref, b.marginal(mask, group[k])) > tol) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> restricted_masks(const PartialOrder& o, const std::vector<int>& idx) {
  std::vector<std::uint32_t> out(idx.size(), 0U);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t c = 0; c < idx.size(); ++c) {
      if (o.less(idx[a], idx[c])) out[a] |= 1U << c;
    }
  }
  return out;
}

void behavior_recurse(const DenseOperator& w, const std::vector<Lab>& labs,
                      const std::vector<std::vector<Instrument>>& sets, std::size_t k, int s_base, int o_base,
                      int outcome_count, std::vector<double>& table) {
  const auto& choices = sets[k];
  for (int s = 0; s < static_cast<int>(choices.size()); ++s) {
    const auto& inst = choices[s];
    for (int j = 0; j < inst.outcomes(); ++j) {
      const DenseOperator m = inst.cp_maps[j].relabeled({labs[k].in, labs[k].out});
      const int si = s_base * static_cast<int>(choices.size()) + s;
      const int oi = o_base * inst.outcomes() + j;
      if (k + 1 == labs.size()) {
        table[static_cast<std::size_t>(si) * outcome_count + oi] =
            (w.matrix().array() * m.matrix().array()).sum().real();
      } else {
        behavior_recurse(contract(w, m), labs, sets, k + 1, si, oi, outcome_count, table);
      }
    }
  }
}

}  // namespace

Behavior::Behavior(std::vector<std::string> labs, std::vector<int> settings, std::vector<int> outcomes,
                   std::vector<double> table, double tol)
    : labs_(std::move(labs)), settings_(std::move(settings)), outcomes_(std::move(outcomes)), table_(std::move(table)) {
  if (labs_.empty() || labs_.size() > 32) throw Error("behavior needs between 1 and 32 labs");
  if (settings_.size() != labs_.size() || outcomes_.size() != labs_.size()) {
    throw Error("behavior: settings/outcomes must list one size per lab");
  }
  for (std::size_t i = 0; i < labs_.size(); ++i) {
    if (settings_[i] < 1 || outcomes_[i] < 1) throw Error("behavior: sizes must be positive");
  }
  const std::size_t expected = static_cast<std::size_t>(setting_count()) * outcome_count();
  if (table_.size() != expected) {
    throw Error("behavior table has " + std::to_string(table_.size()) + " entries, expected " +
                std::to_string(expected));
  }
  const int no = outcome_count();
  for (int s = 0; s < setting_count(); ++s) {
    double sum = 0.0;
    for (int o = 0; o < no; ++o) {
      const double v = table_[static_cast<std::size_t>(s) * no + o];
      if (!(v >= -1e-12)) throw Error("behavior has a negative or NaN entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw Error("behavior: distribution for setting " + std::to_string(s) + " sums to " + std::to_string(sum));
    }
  }
}

int Behavior::lab_index(const std::string& name) const {
  const auto it = std::find(labs_.begin(), labs_.end(), name);
  if (it == labs_.end()) throw Error("behavior has no lab '" + name + "'");
  return static_cast<int>(it - labs_.begin());
}

int Behavior::setting_count() const { return product(settings_); }
int Behavior::outcome_count() const { return product(outcomes_); }
std::vector<int> Behavior::setting_tuple(int index) const { return mixed_radix(index, settings_); }
std::vector<int> Behavior::outcome_tuple(int index) const { return mixed_radix(index, outcomes_); }

int Behavior::setting_index(std::span<const int> s) const {
  int idx = 0;
  for (std::size_t k = 0; k < settings_.size(); ++k) idx = idx * settings_[k] + s[k];
  return idx;
}

int Behavior::outcome_index(std::span<const int> o) const {
  int idx = 0;
  for (std::size_t k = 0; k < outcomes_.size(); ++k) idx = idx * outcomes_[k] + o[k];
  return idx;
}

double Behavior::p(std::span<const int> outcomes, std::span<const int> settings) const {
  return table_[static_cast<std::size_t>(setting_index(settings)) * outcome_count() + outcome_index(outcomes)];
}

std::vector<double> Behavior::marginal(std::uint32_t mask, int setting_index) const {
  std::vector<int> radix;
  for (int k = 0; k < lab_count(); ++k) {
    if ((mask >> k) & 1U) radix.push_back(outcomes_[k]);
  }
  std::vector<double> out(static_cast<std::size_t>(product(radix)), 0.0);
  const int no = outcome_count();
  for (int o = 0; o < no; ++o) {
    const auto t = outcome_tuple(o);
    int idx = 0;
    for (int k = 0; k < lab_count(); ++k) {
      if ((mask >> k) & 1U) idx = idx * outcomes_[k] + t[k];
    }
    out[idx] += table_[static_cast<std::size_t>(setting_index) * no + o];
  }
  return out;
}

Behavior deterministic_behavior(std::vector<std::string> labs, std::vector<int> settings, std::vector<int> outcomes,
                                const std::function<std::vector<int>(std::span<const int>)>& response) {
  const int ns = product(settings);
  const int no = product(outcomes);
  std::vector<double> table(static_cast<std::size_t>(ns) * no, 0.0);
  for (int s = 0; s < ns; ++s) {
    const auto st = mixed_radix(s, settings);
    const auto o = response(st);
    if (o.size() != outcomes.size()) throw Error("deterministic response has the wrong arity");
    int oi = 0;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
      if (o[k] < 0 || o[k] >= outcomes[k]) throw Error("deterministic response out of range");
      oi = oi * outcomes[k] + o[k];
    }
    table[static_cast<std::size_t>(s) * no + oi] = 1.0;
  }
  return {std::move(labs), std::move(settings), std::move(outcomes), std::move(table)};
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error("total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

DiGraph signalling_graph(const Behavior& b, double tol) {
  DiGraph g(b.labs());
  for (int i = 0; i < b.lab_count(); ++i) {
    for (int j = 0; j < b.lab_count(); ++j) {
      if (i != j && !independent_of(b, 1U << i, j, tol)) g.add_edge(j, i);
    }
  }
  return g;
}

bool signal_requirement_check(const Behavior& b, const PartialOrder& order, double tol) {
  if (order.size() != b.lab_count()) throw Error("signal_requirement_check: order must cover every lab");
  // Map behavior lab index -> order element index.
  std::vector<int> pos(b.lab_count());
  for (int k = 0; k < b.lab_count(); ++k) pos[k] = order.index_of(b.labs()[k]);
  for (int i = 0; i < b.lab_count(); ++i) {
    std::uint32_t mask = 1U << i;
    for (int k = 0; k < b.lab_count(); ++k) {
      if (order.less(pos[k], pos[i])) mask |= 1U << k;
    }
    for (int j = 0; j < b.lab_count(); ++j) {
      if ((mask >> j) & 1U) continue;
      if (!independent_of(b, mask, j, tol)) return false;
    }
  }
  return true;
}

CausalOrderVerdict detect_causal_order(const Behavior& b, const std::vector<std::string>& subset, double tol) {
  if (b.lab_count() > 5) throw Error("detect_causal_order supports at most 5 labs");
  std::vector<int> sub_idx;
  std::vector<int> bg_idx;
  std::vector<std::string> bg_names;
  for (const auto& name : subset) {
    const int k = b.lab_index(name);
    if (std::find(sub_idx.begin(), sub_idx.end(), k) != sub_idx.end()) throw Error("duplicate lab in subset");
    sub_idx.push_back(k);
  }
  for (int k = 0; k < b.lab_count(); ++k) {
    if (std::find(sub_idx.begin(), sub_idx.end(), k) == sub_idx.end()) {
      bg_idx.push_back(k);
      bg_names.push_back(b.labs()[k]);
    }
  }
  const auto bgs = enumerate_posets(bg_names);
  const auto qs = enumerate_posets(subset);
  std::map<std::vector<std::uint32_t>, std::size_t> bg_key;
  std::map<std::vector<std::uint32_t>, std::size_t> q_key;
  for (std::size_t k = 0; k < bgs.size(); ++k) {
    std::vector<int> id(bg_idx.size());
    for (std::size_t t = 0; t < id.size(); ++t) id[t] = static_cast<int>(t);
    bg_key[restricted_masks(bgs[k], id)] = k;
  }
  for (std::size_t k = 0; k < qs.size(); ++k) {
    std::vector<int> id(sub_idx.size());
    for (std::size_t t = 0; t < id.size(); ++t) id[t] = static_cast<int>(t);
    q_key[restricted_masks(qs[k], id)] = k;
  }

  std::vector<std::vector<char>> compatible(bgs.size(), std::vector<char>(qs.size(), 0));
  for (const auto& r : enumerate_posets(b.labs())) {
    const std::size_t bi = bg_key.at(restricted_masks(r, bg_idx));
    const std::size_t qi = q_key.at(restricted_masks(r, sub_idx));
    if (compatible[bi][qi]) continue;
    if (signal_requirement_check(b, r, tol)) compatible[bi][qi] = 1;
  }

  CausalOrderVerdict v;
  auto fill = [&](std::size_t bi) {
    v.compatible_orders.clear();
    v.incompatible_orders.clear();
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
      (compatible[bi][qi] ? v.compatible_orders : v.incompatible_orders).push_back(qs[qi]);
    }
  };
  for (std::size_t bi = 0; bi < bgs.size(); ++bi) {
    fill(bi);
    if (!v.compatible_orders.empty() && !v.incompatible_orders.empty()) {
      v.exhibits = true;
      v.witnessing_background_order = bgs[bi];
      return v;
    }
  }
  fill(0);
  return v;
}

std::optional<BiOrder> biorder_of(const Behavior& b, double tol) {
  for (const auto& o : enumerate_posets(b.labs())) {
    if (signal_requirement_check(b, o, tol)) return BiOrder(o);
  }
  return std::nullopt;
}

Behavior behavior_of(const ProcessMatrix& p, const std::vector<std::vector<Instrument>>& instrument_sets) {
  const auto& labs = p.labs();
  if (instrument_sets.size() != labs.size()) throw Error("behavior_of: need one instrument list per lab");
  std::vector<std::string> names;
  std::vector<int> settings;
  std::vector<int> outcomes;
  for (std::size_t k = 0; k < labs.size(); ++k) {
    const auto& set = instrument_sets[k];
    if (set.empty()) throw Error("behavior_of: lab '" + labs[k].name + "' has no settings");
    for (const auto& inst : set) {
      if (inst.outcomes() != set[0].outcomes()) throw Error("behavior_of: outcome counts differ within a lab");
      for (const auto& m : inst.cp_maps) {
        const auto& f = m.factors();
        if (f.size() != 2 || f[0].dim != labs[k].in.dim || f[1].dim != labs[k].out.dim) {
          throw Error("behavior_of: CP map does not act on lab '" + labs[k].name + "'");
        }
      }
    }
    names.push_back(labs[k].name);
    settings.push_back(static_cast<int>(set.size()));
    outcomes.push_back(set[0].outcomes());
  }
  const int no = product(outcomes);
  std::vector<double> table(static_cast<std::size_t>(product(settings)) * no, 0.0);
  behavior_recurse(p.w(), labs, instrument_sets, 0, 0, 0, no, table);
  return {std::move(names), std::move(settings), std::move(outcomes), std::move(table)};
}

Behavior ic_behavior(const ProcessMatrix& p) {
  std::vector<std::vector<Instrument>> sets;
  for (const auto& lab : p.labs()) sets.push_back(ic_instruments(lab));
  return behavior_of(p, sets);
}

std::optional<PartialOrder> is_causally_ordered(const ProcessMatrix& p, double tol) {
  if (p.labs().size() > 4) throw Error("is_causally_ordered supports at most 4 labs");
  const Behavior b = ic_behavior(p);
  for (const auto& o : enumerate_posets(b.labs())) {
    if (signal_requirement_check(b, o, tol)) return o;
  }
  return std::nullopt;
}

Behavior tsirelson_behavior() {
  // Singlet measured along cos(t) Z + sin(t) X. Bob's angles are offset by
  // pi so that the correlators come out positive except for (1, 1).
  const double pi = std::numbers::pi;
  const double alice[2] = {0.0, pi / 2};
  const double bob[2] = {pi / 4 + pi, -pi / 4 + pi};
  Vector singlet = Vector::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);
  auto projector = [](double t, int outcome) {
    Matrix obs(2, 2);
    obs << std::cos(t), std::sin(t), std::sin(t), -std::cos(t);
    const double sign = outcome == 0 ? 1.0 : -1.0;
    return Matrix((Matrix::Identity(2, 2) + sign * obs) / 2.0);
  };
  std::vector<double> table;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const Matrix pa = projector(alice[x], a);
          const Matrix pb = projector(bob[y], b);
          Matrix ab(4, 4);
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) ab.block(2 * i, 2 * j, 2, 2) = pa(i, j) * pb;
          table.push_back((singlet.adjoint() * ab * singlet)(0, 0).real());
        }
      }
    }
  }
  return {{"A", "B"}, {2, 2}, {2, 2}, std::move(table)};
}

Behavior pr_box_behavior() {
  std::vector<double> table;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) table.push_back(((a ^ b) == (x & y)) ? 0.5 : 0.0);
  return {{"A", "B"}, {2, 2}, {2, 2}, std::move(table)};
}

double chsh_value(const Behavior& b) {
  if (b.lab_count() != 2 || b.settings() != std::vector<int>{2, 2} || b.outcomes() != std::vector<int>{2, 2}) {
    throw Error("chsh_value needs a two-lab, two-setting, two-outcome behavior");
  }
  double s = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      double e = 0.0;
      for (int a = 0; a < 2; ++a) {
        for (int c = 0; c < 2; ++c) {
          const int o[2] = {a, c};
          const int st[2] = {x, y};
          e += ((a ^ c) ? -1.0 : 1.0) * b.p(o, st);
        }
      }
      s += ((x & y) ? -1.0 : 1.0) * e;
    }
  }
  return s;
}

}  // namespace causal
