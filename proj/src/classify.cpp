#include "causal/classify.hpp"

#include "causal/random.hpp"
#include "json.hpp"

#include <cstdio>
#include <sstream>

namespace causal {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void put(Report& r, const std::string& key, double value, const char* provenance = "computed") {
  r.evidence[key] = {value, provenance};
}

std::string names_of(const PartialOrder& o) { return o.relation_count() == 0 ? "no relations" : o.to_string(); }

struct ScanResult {
  bool tested = false;
  bool violated = false;
  std::string game;
  double value = 0.0;
  double bound = 0.0;
};

// Best value over the known optimal instruments (OCB on qubit labs) and
// seeded random instruments, for each built-in game.
ScanResult inequality_scan(const ProcessMatrix& p, const ClassifyOptions& o, Report& r) {
  ScanResult best;
  if (p.labs().size() != 2) return best;
  best.tested = true;
  Rng rng(o.seed);
  for (const auto& g : {ocb_game(), gyni_game()}) {
    const double bound = causal_bound(g);
    double value = 0.0;
    const bool qubits = std::all_of(p.labs().begin(), p.labs().end(),
                                    [](const Lab& l) { return l.in.dim == 2 && l.out.dim == 2; });
    if (g.name == "OCB" && qubits) value = game_value(behavior_of(p, ocb_instruments()), g);
    for (int t = 0; t < o.random_instruments; ++t) {
      std::vector<std::vector<Instrument>> sets(2);
      for (int k = 0; k < 2; ++k) {
        const Lab& lab = p.labs()[k];
        for (int s = 0; s < g.settings[k]; ++s) {
          sets[k].push_back({lab.name, random_instrument(lab.in, lab.out, g.outcomes[k], rng)});
        }
      }
      value = std::max(value, game_value(behavior_of(p, sets), g));
    }
    put(r, "game." + g.name + ".value", value);
    put(r, "game." + g.name + ".causal_bound", bound);
    if (value - bound > best.value - best.bound || best.game.empty()) {
      best.game = g.name;
      best.value = value;
      best.bound = bound;
    }
    if (value > bound + 1e-9) best.violated = true;
  }
  return best;
}

// Labs with a one-dimensional output are global futures: discard them.
ProcessMatrix drop_global_futures(const ProcessMatrix& p) {
  ProcessMatrix q = p;
  for (const auto& lab : p.labs()) {
    if (lab.out.dim == 1 && q.labs().size() > 2) {
      q = reduce_lab(q, lab.name, DenseOperator({lab.in, lab.out}, Matrix::Identity(lab.in.dim, lab.in.dim)));
    }
  }
  return q;
}

bool separability_supported(const ProcessMatrix& p) {
  if (p.labs().size() == 2) return true;
  return p.labs().size() == 3 && p.labs()[2].out.dim == 1;
}

void detection(const Behavior& b, const ClassifyOptions& o, Report& r) {
  if (b.lab_count() > 5) {
    r.verdicts["causal_order_detection"] = "not tested (more than 5 labs)";
    return;
  }
  const auto v = detect_causal_order(b, b.labs(), o.tol);
  std::string s = v.exhibits ? "exhibits causal order" : "no causal order";
  if (!v.compatible_orders.empty()) s += "; fewest-relation compatible order: " + names_of(v.compatible_orders.front());
  r.verdicts["causal_order_detection"] = s;
  put(r, "compatible_orders", static_cast<double>(v.compatible_orders.size()));
  put(r, "incompatible_orders", static_cast<double>(v.incompatible_orders.size()));
}

void signalling(const Behavior& b, const ClassifyOptions& o, Report& r) {
  r.verdicts["signalling"] = signalling_graph(b, o.tol).to_string();
}

Report classify_process(const ProcessMatrix& p, const ClassifyOptions& o, Report r) {
  const auto validity = validate_process(p, 32, 1e-9, o.seed);
  put(r, "validity.min_eigenvalue", validity.min_eigenvalue);
  put(r, "validity.trace", validity.trace);
  put(r, "validity.max_normalization_deviation", validity.max_normalization_deviation);
  if (!validity.valid()) {
    r.verdicts["valid"] = "no";
    r.placement = "invalid";
    r.summary = "not a valid process matrix";
    return r;
  }
  r.verdicts["valid"] = "yes";

  std::optional<PartialOrder> order;
  if (p.labs().size() <= 4) {
    order = is_causally_ordered(p, o.tol);
    r.verdicts["causally_ordered"] = order ? "yes (" + names_of(*order) + ")" : "no";
  } else {
    r.verdicts["causally_ordered"] = "not tested (more than 4 labs)";
  }

  bool separable = false;
  if (order) {
    separable = true;
    r.verdicts["causally_separable"] = "yes (implied by causal order)";
  } else if (separability_supported(p)) {
    const auto sep = is_causally_separable_2lab(p, o.tol, o.max_iter);
    put(r, "separability.iterations", sep.iterations);
    if (sep.separable) {
      separable = true;
      r.verdicts["causally_separable"] = "yes";
      put(r, "separability.weight_first", sep.weight_first);
    } else {
      r.verdicts["causally_separable"] = "undecided (heuristic)";
      put(r, "separability.gap", sep.residual);
    }
  } else {
    r.verdicts["causally_separable"] = "not tested (unsupported lab structure)";
  }

  ScanResult scan;
  if (separable) {
    r.verdicts["causal"] = "yes (implied by causal separability)";
  } else {
    scan = inequality_scan(drop_global_futures(p), o, r);
    if (!scan.tested) {
      r.verdicts["causal"] = "not tested (inequality scan needs two labs)";
    } else if (scan.violated) {
      r.verdicts["causal"] = "no (" + scan.game + " inequality violated)";
    } else {
      r.verdicts["causal"] = "no inequality violation found (heuristic)";
    }
  }

  const auto b = ic_behavior(p);
  signalling(b, o, r);
  detection(b, o, r);

  if (order) {
    r.placement = "causally ordered";
    r.summary = "causally ordered (" + names_of(*order) + ")";
  } else if (separable) {
    r.placement = "causally separable";
    r.summary = "causally separable, not causally ordered";
  } else if (scan.violated) {
    r.placement = "non-causal";
    r.summary = "non-causal (inequality violation " + fmt(scan.value) + " > " + fmt(scan.bound) + ")";
  } else {
    r.placement = "causal";
    r.summary = "causal, not causally ordered; separability search: undecided (heuristic)";
    if (!scan.tested) r.summary = "not causally ordered; separability and causality undecided";
  }
  return r;
}

Report classify_behavior(const Behavior& b, const ClassifyOptions& o, Report r) {
  r.verdicts["valid"] = "yes";
  signalling(b, o, r);
  std::optional<BiOrder> order;
  if (b.lab_count() <= 5) order = biorder_of(b, o.tol);
  if (order) {
    r.verdicts["causally_ordered"] = "yes (" + names_of(order->representative()) + ")";
    r.verdicts["causally_separable"] = "yes (implied by causal order)";
    r.verdicts["causal"] = "yes (implied by causal order)";
  } else {
    r.verdicts["causally_ordered"] = "no";
    r.verdicts["causally_separable"] = "not applicable to behaviors";
  }

  bool non_causal = false;
  if (!order) {
    const bool small = b.lab_count() == 2 && b.settings()[0] <= 4 && b.settings()[1] <= 4 && b.outcomes()[0] <= 2 &&
                       b.outcomes()[1] <= 2;
    if (small) {
      const auto m = causal_membership(b, 1e-6, 20 * o.max_iter);
      put(r, "membership.distance", m.distance);
      non_causal = !m.causal;
      r.verdicts["causal"] = m.causal ? "yes (inside the causal polytope)" : "no (outside the causal polytope)";
    } else {
      r.verdicts["causal"] = "not tested (membership needs two labs, at most 4 settings and 2 outcomes)";
    }
  }
  for (const auto& g : {ocb_game(), gyni_game()}) {
    if (b.lab_count() == 2 && b.settings() == g.settings && b.outcomes() == g.outcomes) {
      const auto res = play(b, g);
      put(r, "game." + g.name + ".value", res.value);
      put(r, "game." + g.name + ".causal_bound", res.bound);
    }
  }
  detection(b, o, r);

  if (order) {
    r.placement = "causally ordered";
    r.summary = "causally ordered (" + names_of(order->representative()) + ")";
  } else if (non_causal) {
    r.placement = "non-causal";
    r.summary = "non-causal (outside the causal polytope, distance " + fmt(r.evidence["membership.distance"].value) + ")";
  } else if (r.verdicts["causal"].rfind("yes", 0) == 0) {
    r.placement = "causal";
    r.summary = "causal, not causally ordered";
  } else {
    r.placement = "causal";
    r.summary = "not causally ordered; causality undecided";
  }
  return r;
}

}  // namespace

std::string Report::to_json() const {
  nlohmann::json j;
  j["subject"] = subject;
  j["kind"] = kind;
  j["placement"] = placement;
  j["summary"] = summary;
  j["verdicts"] = verdicts;
  nlohmann::json ev = nlohmann::json::object();
  for (const auto& [k, v] : evidence) ev[k] = {{"value", v.value}, {"provenance", v.provenance}};
  j["evidence"] = ev;
  return j.dump(2) + "\n";
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << subject << " (" << kind << "): " << summary << "\n";
  for (const auto& [k, v] : verdicts) out << "  " << k << ": " << v << "\n";
  for (const auto& [k, v] : evidence) out << "  " << k << " = " << fmt(v.value) << " [" << v.provenance << "]\n";
  return out.str();
}

Report classify(const ProcessFile& file, const ClassifyOptions& options) {
  Report r;
  r.subject = file.name.empty() ? "(unnamed)" : file.name;
  r.kind = to_string(file.kind);
  put(r, "tol", options.tol, "input");
  put(r, "seed", static_cast<double>(options.seed), "input");
  put(r, "max_iter", options.max_iter, "input");
  if (const auto* p = std::get_if<ProcessMatrix>(&file.payload)) return classify_process(*p, options, r);
  if (const auto* b = std::get_if<Behavior>(&file.payload)) return classify_behavior(*b, options, r);
  throw Error("classify supports process_matrix and behavior files, not " + r.kind);
}

}  // namespace causal
