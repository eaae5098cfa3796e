#include "cli.hpp"

#include "CLI11.hpp"
#include "causal/classify.hpp"
#include "causal/io.hpp"
#include "causal/switch.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace causal::cli {
namespace {

using json = nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  double tol = 1e-7;
  std::uint64_t seed = 7;
  int max_iter = 500;
  bool json = false;
  bool quiet = false;
};

// Collects one command's result as JSON plus human-readable lines.
struct Output {
  json data = json::object();
  std::vector<std::string> lines;

  void line(std::string s) { lines.push_back(std::move(s)); }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

template <typename T>
const T& expect(const ProcessFile& f, const char* command) {
  if (const auto* p = std::get_if<T>(&f.payload)) return *p;
  throw UsageError(std::string(command) + " does not accept " + to_string(f.kind) + " files");
}

Behavior behavior_for(const ProcessFile& f, const char* command) {
  if (const auto* b = std::get_if<Behavior>(&f.payload)) return *b;
  if (const auto* p = std::get_if<ProcessMatrix>(&f.payload)) return ic_behavior(*p);
  throw UsageError(std::string(command) + " needs a behavior or process_matrix file");
}

Matrix gate(const std::string& name) {
  Matrix m = Matrix::Zero(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "I") {
    m(0, 0) = m(1, 1) = 1.0;
  } else if (name == "X") {
    m(0, 1) = m(1, 0) = 1.0;
  } else if (name == "Y") {
    m(0, 1) = Complex(0, -1);
    m(1, 0) = Complex(0, 1);
  } else if (name == "Z") {
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
  } else if (name == "H") {
    m(0, 0) = m(0, 1) = m(1, 0) = r;
    m(1, 1) = -r;
  } else if (name == "S") {
    m(0, 0) = 1.0;
    m(1, 1) = Complex(0, 1);
  } else if (name == "T") {
    m(0, 0) = 1.0;
    m(1, 1) = std::polar(1.0, M_PI / 4);
  } else {
    throw UsageError("unknown gate '" + name + "' (use I, X, Y, Z, H, S or T)");
  }
  return m;
}

BitOp bit_op(const std::string& name) {
  for (auto op : {BitOp::zero, BitOp::one, BitOp::identity, BitOp::flip}) {
    if (to_string(op) == name) return op;
  }
  throw UsageError("unknown local operation '" + name + "' (use zero, one, identity or flip)");
}

std::string ops_text(const LocalOperationSet& ops) {
  std::string s;
  for (auto op : ops) s += (s.empty() ? "" : ",") + to_string(op);
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

int cmd_validate(const ProcessFile& f, const Options& o, Output& out) {
  bool ok = true;
  std::string detail;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ProcessMatrix>) {
          const auto r = validate_process(p, 32, 1e-9, o.seed);
          ok = r.valid();
          out.data["psd"] = r.psd_ok;
          out.data["trace_ok"] = r.trace_ok;
          out.data["normalization_ok"] = r.normalization_ok;
          out.data["min_eigenvalue"] = r.min_eigenvalue;
          out.data["trace"] = r.trace;
          out.data["max_normalization_deviation"] = r.max_normalization_deviation;
          detail = "min eigenvalue " + fmt(r.min_eigenvalue) + ", trace " + fmt(r.trace) +
                   ", max normalization deviation " + fmt(r.max_normalization_deviation);
        } else if constexpr (std::is_same_v<T, ProcessFunction>) {
          const auto r = check_consistency(p);
          ok = r.valid;
          if (r.counterexample) {
            detail = "operations " + ops_text(*r.counterexample) + " give " + std::to_string(r.fixed_points) + " fixed points";
          }
        } else if constexpr (std::is_same_v<T, QuantumCausalModel>) {
          detail = p.problem(1e-9, 1e-8);
          ok = detail.empty();
        } else if constexpr (std::is_same_v<T, ISDescription>) {
          p.check();
        } else if constexpr (std::is_same_v<T, CausalGame>) {
          p.check();
        }
      },
      f.payload);
  out.data["valid"] = ok;
  out.line(std::string(ok ? "valid" : "invalid") + (detail.empty() ? "" : ": " + detail));
  if (!detail.empty()) out.data["detail"] = detail;
  return ok ? kOk : kNegative;
}

int cmd_order_detect(const ProcessFile& f, const std::vector<std::string>& subset_arg, const Options& o, Output& out) {
  const auto b = behavior_for(f, "order-detect");
  const auto subset = subset_arg.empty() ? b.labs() : subset_arg;
  const auto v = detect_causal_order(b, subset, o.tol);
  out.data["exhibits"] = v.exhibits;
  std::vector<std::string> compatible, incompatible;
  for (const auto& q : v.compatible_orders) compatible.push_back(q.to_string());
  for (const auto& q : v.incompatible_orders) incompatible.push_back(q.to_string());
  out.data["compatible_orders"] = compatible;
  out.data["incompatible_orders"] = incompatible;
  if (v.witnessing_background_order) out.data["background_order"] = v.witnessing_background_order->to_string();
  out.line(v.exhibits ? "exhibits causal order" : "no causal order");
  out.line("compatible orders (" + std::to_string(compatible.size()) + "):");
  for (const auto& s : compatible) out.line("  " + s);
  out.line("incompatible orders: " + std::to_string(incompatible.size()));
  if (v.exhibits) {
    const auto bi = biorder_of(v);
    out.data["biorder"] = bi.to_string();
    out.line("bi-order: " + bi.to_string());
  }
  return v.exhibits ? kOk : kNegative;
}

int cmd_signalling(const ProcessFile& f, const Options& o, Output& out) {
  DiGraph g;
  if (const auto* w = std::get_if<ProcessFunction>(&f.payload)) {
    g = signalling_structure(*w);
    out.data["trivial"] = is_trivial(*w);
  } else {
    g = signalling_graph(behavior_for(f, "signalling"), o.tol);
  }
  json edges = json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
  out.data["edges"] = edges;
  out.data["cyclic"] = g.has_cycle();
  out.line(g.to_string());
  return kOk;
}

CausalGame game_named(const std::string& name) {
  if (name == "ocb" || name == "OCB") return ocb_game();
  if (name == "gyni" || name == "GYNI") return gyni_game();
  return expect<CausalGame>(load_process_file(name), "game --game");
}

int cmd_game(const ProcessFile& f, const std::string& game_name, int samples, const Options& o, Output& out) {
  const auto g = game_named(game_name);
  double value = 0.0;
  if (const auto* b = std::get_if<Behavior>(&f.payload)) {
    value = game_value(*b, g);
  } else if (const auto* p = std::get_if<ProcessMatrix>(&f.payload)) {
    if (p->labs().size() != 2) throw UsageError("game needs a two-lab process matrix");
    const bool qubits = std::all_of(p->labs().begin(), p->labs().end(),
                                    [](const Lab& l) { return l.in.dim == 2 && l.out.dim == 2; });
    if (g.name == "OCB" && qubits) value = game_value(behavior_of(*p, ocb_instruments()), g);
    Rng rng(o.seed);
    for (int t = 0; t < samples; ++t) {
      std::vector<std::vector<Instrument>> sets(2);
      for (int k = 0; k < 2; ++k) {
        const Lab& lab = p->labs()[k];
        for (int s = 0; s < g.settings[k]; ++s) sets[k].push_back({lab.name, random_instrument(lab.in, lab.out, g.outcomes[k], rng)});
      }
      value = std::max(value, game_value(behavior_of(*p, sets), g));
    }
  } else {
    throw UsageError("game needs a behavior or process_matrix file");
  }
  const double bound = causal_bound(g);
  const bool violates = value > bound + 1e-9;
  out.data["game"] = g.name;
  out.data["value"] = value;
  out.data["causal_bound"] = bound;
  out.data["violates"] = violates;
  out.line(g.name + ": value " + fmt(value) + ", causal bound " + fmt(bound) + (violates ? " (violated)" : ""));
  return kOk;
}

int cmd_switch(const std::vector<std::string>& discriminate, const Options& o, Output& out) {
  if (!discriminate.empty()) {
    if (discriminate.size() != 2) throw UsageError("--discriminate takes two gate names");
    const auto d = switch_discriminate(gate(discriminate[0]), gate(discriminate[1]));
    const double p = std::abs(d.p_plus) < 1e-12 ? 0.0 : d.p_plus;
    const std::string outcome = p > 1.0 - 1e-9 ? "+" : (p < 1e-9 ? "-" : "random");
    out.data["p_plus"] = p;
    out.data["outcome"] = outcome;
    out.data["warning"] = d.warning;
    char prob[32];
    std::snprintf(prob, sizeof prob, p == 0.0 || p == 1.0 ? "%.1f" : "%.6f", p);
    out.line("outcome " + outcome + ", probability " + prob);
    if (d.warning) out.line("warning: the gates neither commute nor anticommute; the outcome is not deterministic");
    return kOk;
  }
  const auto w = switch_w_matrix();
  const auto validity = validate_process(w, 32, 1e-9, o.seed);
  const bool ordered = is_causally_ordered(w, o.tol).has_value();
  const auto sep = is_causally_separable_2lab(w, o.tol, o.max_iter);
  const Lab& f = w.labs()[w.lab_index("F")];
  const auto ab = reduce_lab(w, "F", DenseOperator({f.in, f.out}, Matrix::Identity(f.in.dim, f.in.dim)));
  const auto sep_ab = is_causally_separable_2lab(ab, o.tol, o.max_iter);
  Rng rng(o.seed);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Vector c = ginibre(2, 1, rng).col(0).normalized();
    const Matrix u = haar_unitary(2, rng);
    const Matrix v = haar_unitary(2, rng);
    worst = std::max(worst, fine_grained_equivalence(make_switch(c * c.adjoint(), u, v)));
  }
  const auto xz = make_switch(Matrix::Constant(2, 2, 0.5), gate("X"), gate("Z"));
  const double uncorrelated = fine_grained_equivalence(xz, FineGraining::uncorrelated);
  out.data["valid"] = validity.valid();
  out.data["causally_ordered"] = ordered;
  out.data["separable_found"] = sep.separable;
  out.data["separability_gap"] = sep.residual;
  out.data["separable_without_future"] = sep_ab.separable;
  out.data["fine_grained_max_deviation"] = worst;
  out.data["uncorrelated_deviation"] = uncorrelated;
  out.line(std::string("SWITCH process matrix: ") + (validity.valid() ? "valid" : "INVALID"));
  out.line(std::string("causally ordered: ") + (ordered ? "yes" : "no"));
  out.line("separable decomposition with the global future: " +
           (sep.separable ? std::string("found") : "not found (gap " + fmt(sep.residual) + ")"));
  out.line(std::string("separable decomposition without the global future: ") + (sep_ab.separable ? "found" : "not found"));
  out.line("fine-grained correlated paths, max deviation over 100 random pairs: " + fmt(worst));
  out.line("uncorrelated copies, deviation for X/Z with control |+>: " + fmt(uncorrelated));
  return kOk;
}

int cmd_ctc_enumerate(int n, Output& out) {
  if (n < 1 || n > 3) throw UsageError("ctc enumerate supports 1 to 3 labs");
  const auto valid = enumerate_valid(n);
  json list = json::array();
  int nontrivial = 0;
  for (const auto& w : valid) {
    const bool trivial = is_trivial(w);
    nontrivial += !trivial;
    list.push_back({{"table", w.table()}, {"trivial", trivial}, {"signalling", signalling_structure(w).to_string()}});
    out.line(w.to_string() + (trivial ? "" : "  [non-trivial: " + signalling_structure(w).to_string() + "]"));
  }
  out.data["n_labs"] = n;
  out.data["count"] = valid.size();
  out.data["nontrivial"] = nontrivial;
  out.data["functions"] = list;
  out.line(std::to_string(valid.size()) + " valid process functions, " + std::to_string(nontrivial) + " non-trivial");
  return kOk;
}

int cmd_ctc_check(const ProcessFunction& w, const std::string& ops_arg, Output& out) {
  out.data["function"] = w.to_string();
  out.line(w.to_string());
  if (!ops_arg.empty()) {
    LocalOperationSet ops;
    for (const auto& s : split(ops_arg, ',')) ops.push_back(bit_op(s));
    if (static_cast<int>(ops.size()) != w.n_labs()) throw UsageError("--ops needs one operation per lab");
    const int c = count_fixed_points(w, ops);
    out.data["operations"] = ops_text(ops);
    out.data["fixed_points"] = c;
    out.line("operations " + ops_text(ops) + ": " + std::to_string(c) + " fixed points");
    return c == 1 ? kOk : kNegative;
  }
  const auto r = check_consistency(w);
  out.data["valid"] = r.valid;
  if (r.counterexample) {
    out.data["counterexample"] = ops_text(*r.counterexample);
    out.data["fixed_points"] = r.fixed_points;
    out.line("invalid: operations " + ops_text(*r.counterexample) + " give " + std::to_string(r.fixed_points) +
             " fixed points");
  } else {
    out.line("valid: every local operation set has exactly one fixed point");
  }
  return r.valid ? kOk : kNegative;
}

int cmd_reverse(const ProcessFile& f, bool check, Output& out) {
  const auto& d = expect<ISDescription>(f, "reverse");
  const auto r = reverse_is(d);
  const auto text = serialize(make_file(f.name.empty() ? "" : f.name + " reversed", r));
  out.data["reversed"] = json::parse(text);
  out.line(text.substr(0, text.size() - 1));
  if (!check) return kOk;
  const bool ok = causal_reversibility_check(d);
  out.data["reversible"] = ok;
  out.line(std::string("causal reversibility check: ") + (ok ? "passed" : "failed"));
  return ok ? kOk : kNegative;
}

void emit(const Output& result, const Options& o, std::ostream& out) {
  if (o.quiet) return;
  if (o.json) {
    out << result.data.dump(2) << "\n";
  } else {
    for (const auto& l : result.lines) out << l << "\n";
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal-structure analysis of process matrices, behaviors and process functions", "causal"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--tol", o.tol, "numerical tolerance for signalling and decompositions")->capture_default_str();
  app.add_option("--seed", o.seed, "seed for random instruments and test families")->capture_default_str();
  app.add_option("--max-iter", o.max_iter, "iteration cap of the separability search")->capture_default_str();
  app.add_flag("--json", o.json, "machine-readable output");
  app.add_flag("--quiet", o.quiet, "no output; the exit code carries the verdict");

  std::string file, second_file, game = "ocb", ops, subset;
  int n = 0, samples = 16;
  std::vector<std::string> discriminate;
  bool check = false, identity = false;
  std::vector<std::uint32_t> constant;

  auto* validate = app.add_subcommand("validate", "check a file's validity conditions");
  validate->add_option("file", file, "process file")->required();
  auto* classify_cmd = app.add_subcommand("classify", "place a process matrix or behavior in the causal hierarchy");
  classify_cmd->add_option("file", file, "process file")->required();
  auto* order = app.add_subcommand("order-detect", "causal-order detection via the signal requirement");
  order->add_option("file", file, "behavior or process_matrix file")->required();
  order->add_option("--subset", subset, "comma-separated labs to test (default: all)");
  auto* signal = app.add_subcommand("signalling", "signalling graph");
  signal->add_option("file", file, "behavior, process_matrix or process_function file")->required();
  auto* game_cmd = app.add_subcommand("game", "play a causal game");
  game_cmd->add_option("file", file, "behavior or process_matrix file")->required();
  game_cmd->add_option("--game", game, "ocb, gyni or a game file")->capture_default_str();
  game_cmd->add_option("--samples", samples, "random instrument sets for process matrices")->capture_default_str();
  auto* sw = app.add_subcommand("switch-demo", "quantum SWITCH facts and order discrimination");
  sw->add_option("--discriminate", discriminate, "two gates among I X Y Z H S T")->expected(2);
  auto* ctc = app.add_subcommand("ctc", "classical process functions");
  ctc->require_subcommand(1);
  auto* ctc_enum = ctc->add_subcommand("enumerate", "all valid process functions on n one-bit labs");
  ctc_enum->add_option("n", n, "number of labs (1 to 3)")->required();
  auto* ctc_check = ctc->add_subcommand("check", "check a process function for consistency");
  ctc_check->add_option("file", file, "process_function file");
  ctc_check->add_flag("--identity", identity, "use the identity function");
  ctc_check->add_option("--labs", n, "number of labs for --identity or --constant");
  ctc_check->add_option("--constant", constant, "use the constant function with this value")->expected(1);
  ctc_check->add_option("--ops", ops, "count fixed points for these local operations (comma-separated)");
  auto* qcm = app.add_subcommand("qcm", "quantum causal models");
  qcm->require_subcommand(1);
  auto* qcm_verify = qcm->add_subcommand("verify", "check the Markov condition of a process for a model");
  qcm_verify->add_option("model", file, "qcm file with channels")->required();
  qcm_verify->add_option("process", second_file, "process_matrix file")->required();
  auto* qcm_discover = qcm->add_subcommand("discover", "extract channels for a DAG from a process");
  qcm_discover->add_option("process", file, "process_matrix file")->required();
  qcm_discover->add_option("dag", second_file, "qcm file giving nodes and edges")->required();
  auto* rev = app.add_subcommand("reverse", "reverse an interventionist description");
  rev->add_option("file", file, "is_description file")->required();
  rev->add_flag("--check", check, "also run the causal reversibility check");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  Output result;
  int code = kOk;
  try {
    if (*validate) {
      code = cmd_validate(load_process_file(file), o, result);
    } else if (*classify_cmd) {
      const auto f = load_process_file(file);
      if (f.kind != FileKind::process_matrix && f.kind != FileKind::behavior) {
        throw UsageError("classify needs a process_matrix or behavior file");
      }
      const auto r = classify(f, {o.tol, o.seed, o.max_iter});
      if (!o.quiet) out << (o.json ? r.to_json() : r.to_text());
      return kOk;
    } else if (*order) {
      code = cmd_order_detect(load_process_file(file), split(subset, ','), o, result);
    } else if (*signal) {
      code = cmd_signalling(load_process_file(file), o, result);
    } else if (*game_cmd) {
      code = cmd_game(load_process_file(file), game, samples, o, result);
    } else if (*sw) {
      code = cmd_switch(discriminate, o, result);
    } else if (*ctc_enum) {
      code = cmd_ctc_enumerate(n, result);
    } else if (*ctc_check) {
      const int sources = !file.empty() + identity + !constant.empty();
      if (sources != 1) throw UsageError("ctc check needs exactly one of FILE, --identity or --constant");
      if (file.empty() && (n < 1 || n > 4)) throw UsageError("--labs must be between 1 and 4");
      ProcessFunction w;
      if (!file.empty()) {
        w = expect<ProcessFunction>(load_process_file(file), "ctc check");
      } else if (identity) {
        w = ProcessFunction::identity(n);
      } else {
        w = ProcessFunction::constant(n, constant.front());
      }
      code = cmd_ctc_check(w, ops, result);
    } else if (*qcm_verify) {
      const auto model = expect<QuantumCausalModel>(load_process_file(file), "qcm verify");
      const auto sigma = expect<ProcessMatrix>(load_process_file(second_file), "qcm verify");
      const bool ok = verify_markov(sigma, model, std::max(o.tol, 1e-7), 1e-8);
      result.data["markov"] = ok;
      const auto why = model.problem(1e-9, 1e-8);
      if (!why.empty()) result.data["model_problem"] = why;
      result.line(ok ? "Markov condition holds" : "Markov condition fails" + (why.empty() ? "" : ": " + why));
      code = ok ? kOk : kNegative;
    } else if (*qcm_discover) {
      const auto sigma = expect<ProcessMatrix>(load_process_file(file), "qcm discover");
      const auto dag = expect<QuantumCausalModel>(load_process_file(second_file), "qcm discover").dag;
      const auto m = markov_discover(sigma, dag, std::max(o.tol, 1e-7), 1e-8);
      result.data["found"] = m.has_value();
      if (m) {
        const auto text = serialize(make_file("discovered", *m));
        result.data["model"] = json::parse(text);
        result.line(text.substr(0, text.size() - 1));
      } else {
        result.line("no model for this DAG reproduces the process");
      }
      code = m ? kOk : kNegative;
    } else if (*rev) {
      code = cmd_reverse(load_process_file(file), check, result);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  emit(result, o, out);
  return code;
}

}  // namespace causal::cli
