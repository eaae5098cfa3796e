#pragma once

// Behaviors, signalling analysis, causal-order detection and the
// ordered / separable / causal classification tiers.

#include "causal/order.hpp"
#include "causal/process.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace causal {

/// Conditional distribution P(outcomes | settings) over a set of labs.
///
/// The table is settings-major: entry index is
/// setting_index(settings) * outcome_count() + outcome_index(outcomes),
/// each index mixed radix with the first lab most significant.
class Behavior {
 public:
  Behavior() = default;
  /// Throws unless every conditional distribution is normalized within
  /// `tol` and no entry is below -1e-12.
  Behavior(std::vector<std::string> labs, std::vector<int> settings, std::vector<int> outcomes,
           std::vector<double> table, double tol = 1e-9);

  const std::vector<std::string>& labs() const { return labs_; }
  const std::vector<int>& settings() const { return settings_; }
  const std::vector<int>& outcomes() const { return outcomes_; }
  const std::vector<double>& table() const { return table_; }
  int lab_count() const { return static_cast<int>(labs_.size()); }
  int lab_index(const std::string& name) const;

  int setting_count() const;
  int outcome_count() const;
  std::vector<int> setting_tuple(int index) const;
  std::vector<int> outcome_tuple(int index) const;
  int setting_index(std::span<const int> s) const;
  int outcome_index(std::span<const int> o) const;

  double p(std::span<const int> outcomes, std::span<const int> settings) const;

  /// Distribution of the outcomes of the labs in `mask` (mixed radix in lab
  /// order) for the joint setting `setting_index`.
  std::vector<double> marginal(std::uint32_t mask, int setting_index) const;

 private:
  std::vector<std::string> labs_;
  std::vector<int> settings_;
  std::vector<int> outcomes_;
  std::vector<double> table_;
};

/// Behavior whose outcomes are a deterministic function of the settings.
Behavior deterministic_behavior(std::vector<std::string> labs, std::vector<int> settings, std::vector<int> outcomes,
                                const std::function<std::vector<int>(std::span<const int>)>& response);

double total_variation(std::span<const double> p, std::span<const double> q);

/// Edge j -> i iff the outcome marginal of lab i moves by more than `tol` in
/// total variation when only lab j's setting changes.
DiGraph signalling_graph(const Behavior& b, double tol = 1e-7);

/// For every lab i and every lab j that is neither i nor below i in `order`,
/// the joint outcomes of i and its predecessors are independent of j's
/// setting within `tol`.
bool signal_requirement_check(const Behavior& b, const PartialOrder& order, double tol = 1e-7);

struct CausalOrderVerdict {
  bool exhibits = false;
  std::optional<PartialOrder> witnessing_background_order;
  /// Orders on the subset, relative to the witnessing background (or to the
  /// first background examined when nothing is exhibited).
  std::vector<PartialOrder> compatible_orders;
  std::vector<PartialOrder> incompatible_orders;
};

/// An order Q on `subset` is compatible relative to a background order O on
/// the remaining labs when some order on all labs restricts to Q and O and
/// passes the signal requirement. Causal order is exhibited when, for some
/// O, both a compatible and an incompatible Q exist. At most 5 labs.
CausalOrderVerdict detect_causal_order(const Behavior& b, const std::vector<std::string>& subset, double tol = 1e-7);

/// The compatible order on all labs with the fewest relations, wrapped as a
/// bi-order; nullopt when no order is compatible.
std::optional<BiOrder> biorder_of(const Behavior& b, double tol = 1e-7);

/// Born statistics of `instrument_sets[i][s]` (lab i, setting s). All
/// instruments of one lab must have the same outcome count.
Behavior behavior_of(const ProcessMatrix& p, const std::vector<std::vector<Instrument>>& instrument_sets);

/// Behavior under ic_instruments for every lab.
Behavior ic_behavior(const ProcessMatrix& p);

/// First order (fewest relations first) whose signal requirement holds on
/// the informationally complete behavior. At most 4 labs.
std::optional<PartialOrder> is_causally_ordered(const ProcessMatrix& p, double tol = 1e-7);

struct SeparabilityVerdict {
  bool separable = false;
  /// W = w_first + w_second with w_first ordered labs[0] before labs[1].
  DenseOperator w_first;
  DenseOperator w_second;
  /// Tr w_first / Tr W.
  double weight_first = 0.0;
  /// Separable: largest negative eigenvalue magnitude of the parts.
  /// Undecided: the final gap between the affine and conic iterates.
  double residual = 0.0;
  int iterations = 0;
};

/// Dykstra alternating projections for W = W_{A<B} + W_{B<A}, both PSD and
/// each in its no-backward-signalling subspace. Accepts two labs, or three
/// when the third has a trivial output (a global future placed last in
/// both orders). A failure to converge is reported, never certified.
SeparabilityVerdict is_causally_separable_2lab(const ProcessMatrix& p, double tol = 1e-7, int max_iter = 5000);

/// Deterministic 2-lab strategy: first lab's response depends on its own
/// setting only, the second lab's response on both settings.
struct OrderedStrategy {
  bool a_first = true;
  /// first[s] for the first lab's setting s.
  std::vector<int> first;
  /// second[s_first * n_second + s_second].
  std::vector<int> second;

  bool operator==(const OrderedStrategy&) const = default;
};

struct MembershipVerdict {
  bool causal = false;
  double distance = 0.0;
  std::vector<std::pair<OrderedStrategy, double>> weights;
  /// Distance after every iteration, starting from the initial vertex.
  std::vector<double> history;
};

/// Behavior table of a deterministic ordered strategy (labs as in `shape`).
std::vector<double> strategy_table(const Behavior& shape, const OrderedStrategy& s);

/// Away-step Frank-Wolfe projection of a 2-lab behavior onto the convex hull
/// of deterministic one-way strategies in either order. The linear
/// minimization over vertices is solved exactly per setting. At most 4
/// settings and 2 outcomes per lab.
MembershipVerdict causal_membership(const Behavior& b, double tol = 1e-6, int max_iter = 20000);

/// CHSH scenario boxes on labs A and B.
Behavior tsirelson_behavior();
Behavior pr_box_behavior();
/// sum_xy (-1)^{xy} E_xy with E_xy the outcome parity correlator.
double chsh_value(const Behavior& b);

}  // namespace causal
