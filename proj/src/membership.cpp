#include "causal/structure.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace causal {
namespace {

struct Shape {
  int na, nb, oa, ob;

  std::size_t at(int x, int y, int a, int b) const {
    return (static_cast<std::size_t>(x * nb + y) * oa + a) * ob + b;
  }
  std::size_t size() const { return static_cast<std::size_t>(na) * nb * oa * ob; }
};

Shape shape_of(const Behavior& b) {
  if (b.lab_count() != 2) throw Error("causal_membership needs a two-lab behavior");
  return {b.settings()[0], b.settings()[1], b.outcomes()[0], b.outcomes()[1]};
}

double dot(const std::vector<double>& u, const std::vector<double>& v) {
  return std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
}

// Exact minimizer of <g, v> over deterministic strategies with a fixed
// order: the first lab picks its response per setting knowing the second
// lab will answer optimally for every (setting pair, first response).
std::pair<OrderedStrategy, double> best_ordered(const Shape& sh, const std::vector<double>& g, bool a_first) {
  const int n1 = a_first ? sh.na : sh.nb;
  const int n2 = a_first ? sh.nb : sh.na;
  const int o1 = a_first ? sh.oa : sh.ob;
  const int o2 = a_first ? sh.ob : sh.oa;
  auto cost = [&](int s1, int s2, int r1, int r2) {
    return a_first ? g[sh.at(s1, s2, r1, r2)] : g[sh.at(s2, s1, r2, r1)];
  };
  OrderedStrategy st{a_first, std::vector<int>(n1, 0), std::vector<int>(static_cast<std::size_t>(n1) * n2, 0)};
  double total = 0.0;
  for (int s1 = 0; s1 < n1; ++s1) {
    double best = std::numeric_limits<double>::infinity();
    for (int r1 = 0; r1 < o1; ++r1) {
      double c = 0.0;
      for (int s2 = 0; s2 < n2; ++s2) {
        double m = std::numeric_limits<double>::infinity();
        for (int r2 = 0; r2 < o2; ++r2) m = std::min(m, cost(s1, s2, r1, r2));
        c += m;
      }
      if (c < best) {
        best = c;
        st.first[s1] = r1;
      }
    }
    for (int s2 = 0; s2 < n2; ++s2) {
      int arg = 0;
      for (int r2 = 1; r2 < o2; ++r2) {
        if (cost(s1, s2, st.first[s1], r2) < cost(s1, s2, st.first[s1], arg)) arg = r2;
      }
      st.second[static_cast<std::size_t>(s1) * n2 + s2] = arg;
    }
    total += best;
  }
  return {st, total};
}

OrderedStrategy lmo(const Shape& sh, const std::vector<double>& g) {
  auto [a, ca] = best_ordered(sh, g, true);
  auto [b, cb] = best_ordered(sh, g, false);
  return cb < ca ? b : a;
}

struct Atom {
  OrderedStrategy strategy;
  std::vector<double> table;
  double weight;
};

}  // namespace

std::vector<double> strategy_table(const Behavior& shape, const OrderedStrategy& s) {
  const Shape sh = shape_of(shape);
  std::vector<double> t(sh.size(), 0.0);
  for (int x = 0; x < sh.na; ++x) {
    for (int y = 0; y < sh.nb; ++y) {
      int a = 0;
      int b = 0;
      if (s.a_first) {
        a = s.first[x];
        b = s.second[static_cast<std::size_t>(x) * sh.nb + y];
      } else {
        b = s.first[y];
        a = s.second[static_cast<std::size_t>(y) * sh.na + x];
      }
      t[sh.at(x, y, a, b)] = 1.0;
    }
  }
  return t;
}

MembershipVerdict causal_membership(const Behavior& b, double tol, int max_iter) {
  const Shape sh = shape_of(b);
  if (sh.na > 4 || sh.nb > 4 || sh.oa > 2 || sh.ob > 2) {
    throw Error("causal_membership supports at most 4 settings and 2 outcomes per lab");
  }
  const auto& target = b.table();
  std::vector<double> neg(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) neg[i] = -target[i];

  std::vector<Atom> active;
  const OrderedStrategy s0 = lmo(sh, neg);
  active.push_back({s0, strategy_table(b, s0), 1.0});
  std::vector<double> x = active[0].table;

  auto distance = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - target[i]) * (x[i] - target[i]);
    return std::sqrt(s);
  };

  MembershipVerdict v;
  v.history.push_back(distance());
  std::vector<double> grad(x.size());
  for (int it = 0; it < max_iter && v.history.back() > tol; ++it) {
    for (std::size_t i = 0; i < x.size(); ++i) grad[i] = x[i] - target[i];
    const double f = 0.5 * v.history.back() * v.history.back();

    const OrderedStrategy s = lmo(sh, grad);
    const auto s_table = strategy_table(b, s);
    std::vector<double> d_fw(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d_fw[i] = s_table[i] - x[i];
    const double gap_fw = -dot(grad, d_fw);
    // f* >= f - gap: once that lower bound clears tol the answer is settled.
    if (gap_fw <= 1e-15 || f - gap_fw > 0.5 * tol * tol) break;

    std::size_t away = 0;
    double away_val = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < active.size(); ++k) {
      const double val = dot(grad, active[k].table);
      if (val > away_val) {
        away_val = val;
        away = k;
      }
    }
    const double gap_away = away_val - dot(grad, x);

    std::vector<double> d(x.size());
    double gamma_max = 1.0;
    const bool fw_step = gap_fw >= gap_away || active.size() == 1;
    if (fw_step) {
      d = d_fw;
    } else {
      for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - active[away].table[i];
      const double wv = active[away].weight;
      gamma_max = wv / (1.0 - wv);
    }
    const double dd = dot(d, d);
    if (dd <= 0.0) break;
    const double gamma = std::clamp(-dot(grad, d) / dd, 0.0, gamma_max);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += gamma * d[i];

    if (fw_step) {
      for (auto& a : active) a.weight *= 1.0 - gamma;
      bool merged = false;
      for (auto& a : active) {
        if (a.table == s_table) {
          a.weight += gamma;
          merged = true;
          break;
        }
      }
      if (!merged) active.push_back({s, s_table, gamma});
    } else {
      for (auto& a : active) a.weight *= 1.0 + gamma;
      active[away].weight -= gamma;
    }
    std::erase_if(active, [](const Atom& a) { return a.weight <= 1e-15; });
    v.history.push_back(distance());
  }
  v.distance = v.history.back();
  v.causal = v.distance <= tol;
  for (const auto& a : active) v.weights.emplace_back(a.strategy, a.weight);
  return v;
}

}  // namespace causal
