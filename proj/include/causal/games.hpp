#pragma once

// Two-lab causal games: causal bounds by exhaustive optimization over
// deterministic ordered strategies, and the non-causal process that beats
// the bound of the canonical game.

#include "causal/process.hpp"
#include "causal/structure.hpp"

#include <string>
#include <vector>

namespace causal {

struct CausalGame {
  std::string name;
  std::string source;
  std::vector<std::string> labs{"A", "B"};
  std::vector<int> settings;
  std::vector<int> outcomes;
  /// Input distribution of each lab; the joint input law is their product.
  std::vector<std::vector<double>> inputs;
  /// 0/1 payoff, laid out like a Behavior table (settings-major).
  std::vector<int> payoff;

  /// Throws unless sizes, distributions and the payoff table agree.
  void check() const;
  double prior(int x, int y) const { return inputs[0][x] * inputs[1][y]; }
  int win(int x, int y, int a, int b) const;
};

struct GameResult {
  double value = 0.0;
  double bound = 0.0;
  bool violates = false;
};

/// Largest winning probability over causal strategies. Mixed strategies
/// and shared randomness are convex mixtures of deterministic ones, and
/// the score is linear, so the optimum sits on a deterministic ordered
/// strategy; for a fixed order the first lab's response per setting is
/// chosen against the second lab's best reply. At most 4 settings and
/// 4 outcomes per lab.
double causal_bound(const CausalGame& g);

/// Expected payoff of `b` under the game's input distribution.
double game_value(const Behavior& b, const CausalGame& g);

GameResult play(const Behavior& b, const CausalGame& g, double tol = 1e-9);

/// Alice guesses Bob's bit y, or Bob guesses Alice's bit x, as announced
/// by Bob's second input bit. Bob's setting index is y + 2 * b'.
CausalGame ocb_game();
/// Both labs must output the other's uniformly random input bit.
CausalGame gyni_game();

/// Two-qubit-lab process matrix
/// W = (I + (Z_Aout Z_Bin + Z_Ain X_Bin Z_Bout) / sqrt2) / 4.
ProcessMatrix ocb_process();
/// Instruments reaching (2 + sqrt2) / 4 on ocb_game with ocb_process: Alice
/// measures Z and prepares her input bit in Z; Bob measures Z when b' = 0
/// and otherwise measures X and prepares his outcome XOR y in Z.
std::vector<std::vector<Instrument>> ocb_instruments();
Behavior ocb_behavior();

}  // namespace causal
