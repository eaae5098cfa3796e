#include "causal/games.hpp"

#include <cmath>
#include <limits>

namespace causal {
namespace {

Matrix pauli(char c) {
  Matrix m = Matrix::Zero(2, 2);
  switch (c) {
    case 'I':
      m(0, 0) = m(1, 1) = 1.0;
      break;
    case 'X':
      m(0, 1) = m(1, 0) = 1.0;
      break;
    case 'Z':
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    default:
      throw Error("unknown Pauli");
  }
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron4(char a, char b, char c, char d) { return kron(kron(pauli(a), pauli(b)), kron(pauli(c), pauli(d))); }

// (I + sign * P) / 2.
Matrix eigenprojector(char p, int bit) { return (pauli('I') + (bit ? -1.0 : 1.0) * pauli(p)) / 2.0; }

// Measure-and-prepare CP map whose Choi operator is E^T (x) tau; the
// matrices used here are real symmetric, so E^T = E.
DenseOperator mp(const Lab& lab, const Matrix& effect, const Matrix& tau) {
  return {{lab.in, lab.out}, kron(effect.transpose(), tau)};
}

}  // namespace

void CausalGame::check() const {
  if (labs.size() != 2 || settings.size() != 2 || outcomes.size() != 2 || inputs.size() != 2) {
    throw Error("game '" + name + "' must describe exactly two labs");
  }
  for (int k = 0; k < 2; ++k) {
    if (settings[k] < 1 || outcomes[k] < 1) throw Error("game sizes must be positive");
    if (static_cast<int>(inputs[k].size()) != settings[k]) throw Error("input distribution size mismatch");
    double s = 0.0;
    for (double p : inputs[k]) {
      if (p < 0.0) throw Error("negative input probability");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-9) throw Error("input distribution does not sum to 1");
  }
  const std::size_t n = static_cast<std::size_t>(settings[0]) * settings[1] * outcomes[0] * outcomes[1];
  if (payoff.size() != n) throw Error("payoff table has the wrong size");
  for (int v : payoff) {
    if (v != 0 && v != 1) throw Error("payoff entries must be 0 or 1");
  }
}

int CausalGame::win(int x, int y, int a, int b) const {
  return payoff[(static_cast<std::size_t>(x * settings[1] + y) * outcomes[0] + a) * outcomes[1] + b];
}

double causal_bound(const CausalGame& g) {
  g.check();
  if (g.settings[0] > 4 || g.settings[1] > 4 || g.outcomes[0] > 4 || g.outcomes[1] > 4) {
    throw Error("causal_bound supports at most 4 settings and 4 outcomes per lab");
  }
  double best = 0.0;
  for (const bool a_first : {true, false}) {
    const int n1 = g.settings[a_first ? 0 : 1];
    const int n2 = g.settings[a_first ? 1 : 0];
    const int o1 = g.outcomes[a_first ? 0 : 1];
    const int o2 = g.outcomes[a_first ? 1 : 0];
    auto score = [&](int s1, int s2, int r1, int r2) {
      return a_first ? g.prior(s1, s2) * g.win(s1, s2, r1, r2) : g.prior(s2, s1) * g.win(s2, s1, r2, r1);
    };
    double total = 0.0;
    for (int s1 = 0; s1 < n1; ++s1) {
      double top = -std::numeric_limits<double>::infinity();
      for (int r1 = 0; r1 < o1; ++r1) {
        double c = 0.0;
        for (int s2 = 0; s2 < n2; ++s2) {
          double m = 0.0;
          for (int r2 = 0; r2 < o2; ++r2) m = std::max(m, score(s1, s2, r1, r2));
          c += m;
        }
        top = std::max(top, c);
      }
      total += top;
    }
    best = std::max(best, total);
  }
  return best;
}

double game_value(const Behavior& b, const CausalGame& g) {
  g.check();
  if (b.lab_count() != 2 || b.settings() != g.settings || b.outcomes() != g.outcomes) {
    throw Error("behavior shape does not match game '" + g.name + "'");
  }
  double v = 0.0;
  for (int x = 0; x < g.settings[0]; ++x) {
    for (int y = 0; y < g.settings[1]; ++y) {
      for (int a = 0; a < g.outcomes[0]; ++a) {
        for (int c = 0; c < g.outcomes[1]; ++c) {
          const int o[2] = {a, c};
          const int s[2] = {x, y};
          v += g.prior(x, y) * g.win(x, y, a, c) * b.p(o, s);
        }
      }
    }
  }
  return v;
}

GameResult play(const Behavior& b, const CausalGame& g, double tol) {
  GameResult r;
  r.value = game_value(b, g);
  r.bound = causal_bound(g);
  r.violates = r.value > r.bound + tol;
  return r;
}

CausalGame ocb_game() {
  CausalGame g;
  g.name = "OCB";
  g.source = "Oreshkov, Costa, Brukner, Nat. Commun. 3, 1092 (2012): B's bit b' selects who must guess the other's input";
  g.settings = {2, 4};
  g.outcomes = {2, 2};
  g.inputs = {{0.5, 0.5}, {0.25, 0.25, 0.25, 0.25}};
  for (int x = 0; x < 2; ++x) {
    for (int s = 0; s < 4; ++s) {
      const int y = s & 1;
      const int bprime = s >> 1;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) g.payoff.push_back(bprime == 0 ? (b == x) : (a == y));
      }
    }
  }
  return g;
}

CausalGame gyni_game() {
  CausalGame g;
  g.name = "GYNI";
  g.source = "Branciard, Araujo, Feix, Costa, Brukner, New J. Phys. 18, 013008 (2016): two-party GYNI, uniform independent bits";
  g.settings = {2, 2};
  g.outcomes = {2, 2};
  g.inputs = {{0.5, 0.5}, {0.5, 0.5}};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) g.payoff.push_back(a == y && b == x);
  return g;
}

ProcessMatrix ocb_process() {
  const std::vector<Lab> labs{make_lab("A", 2, 2), make_lab("B", 2, 2)};
  const Matrix w = (kron4('I', 'I', 'I', 'I') + (kron4('I', 'Z', 'Z', 'I') + kron4('Z', 'I', 'X', 'Z')) / std::sqrt(2.0)) / 4.0;
  return {labs, DenseOperator(process_spaces(labs), w)};
}

std::vector<std::vector<Instrument>> ocb_instruments() {
  const Lab a = make_lab("A", 2, 2);
  const Lab b = make_lab("B", 2, 2);
  std::vector<std::vector<Instrument>> sets(2);
  for (int x = 0; x < 2; ++x) {
    Instrument inst{"A", {}};
    for (int o = 0; o < 2; ++o) inst.cp_maps.push_back(mp(a, eigenprojector('Z', o), eigenprojector('Z', x)));
    sets[0].push_back(inst);
  }
  for (int s = 0; s < 4; ++s) {
    const int y = s & 1;
    const int bprime = s >> 1;
    Instrument inst{"B", {}};
    for (int o = 0; o < 2; ++o) {
      if (bprime == 0) {
        inst.cp_maps.push_back(mp(b, eigenprojector('Z', o), pauli('I') / 2.0));
      } else {
        inst.cp_maps.push_back(mp(b, eigenprojector('X', o), eigenprojector('Z', o ^ y)));
      }
    }
    sets[1].push_back(inst);
  }
  return sets;
}

Behavior ocb_behavior() { return behavior_of(ocb_process(), ocb_instruments()); }

}  // namespace causal
