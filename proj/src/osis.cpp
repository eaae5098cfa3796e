#include "causal/osis.hpp"

#include "causal/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace causal {
namespace {

const std::string kInverse = "^-1";

std::string toggle_inverse(const std::string& name) {
  if (name.size() >= kInverse.size() && name.compare(name.size() - kInverse.size(), kInverse.size(), kInverse) == 0) {
    return name.substr(0, name.size() - kInverse.size());
  }
  return name + kInverse;
}

std::uint64_t radix_size(const ISDescription& d, const std::vector<std::string>& names) {
  std::uint64_t n = 1;
  for (const auto& v : names) n *= static_cast<std::uint64_t>(d.variables[d.variable_index(v)].cardinality);
  return n;
}

std::uint64_t encode(const ISDescription& d, const std::vector<std::string>& names, const std::vector<int>& values) {
  std::uint64_t code = 0;
  for (const auto& v : names) {
    const int i = d.variable_index(v);
    code = code * static_cast<std::uint64_t>(d.variables[i].cardinality) + static_cast<std::uint64_t>(values[i]);
  }
  return code;
}

void decode(const ISDescription& d, const std::vector<std::string>& names, std::uint64_t code, std::vector<int>& values) {
  for (std::size_t k = names.size(); k-- > 0;) {
    const int i = d.variable_index(names[k]);
    const auto card = static_cast<std::uint64_t>(d.variables[i].cardinality);
    values[i] = static_cast<int>(code % card);
    code /= card;
  }
}

std::vector<double> input_weights(const ISDescription& d, const std::string& var, const InputDistribution& inputs) {
  const int card = d.variables[d.variable_index(var)].cardinality;
  const auto it = inputs.find(var);
  if (it == inputs.end()) return std::vector<double>(card, 1.0 / card);
  const auto& w = it->second;
  if (static_cast<int>(w.size()) != card) throw Error("input distribution for '" + var + "' has the wrong length");
  double sum = 0.0;
  for (double x : w) {
    if (x < -1e-12) throw Error("input distribution for '" + var + "' has a negative entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("input distribution for '" + var + "' is not normalized");
  return w;
}

// Propagates the free values already in `values` through every operation.
void run(const ISDescription& d, std::vector<int>& values) {
  for (const auto& op : d.operations) {
    const auto out = op.table[encode(d, op.inputs, values)];
    decode(d, op.outputs, out, values);
  }
}

bool is_bijection(const ISDescription& d, const ISOperation& op) {
  if (radix_size(d, op.inputs) != radix_size(d, op.outputs)) return false;
  std::vector<bool> seen(op.table.size(), false);
  for (auto v : op.table) {
    if (v >= seen.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

std::vector<std::string> all_names(const ISDescription& d) {
  std::vector<std::string> out;
  for (const auto& v : d.variables) out.push_back(v.name);
  return out;
}

std::vector<std::string> lab_names(const ISDescription& d) {
  std::vector<std::string> out;
  for (const auto& l : d.labs) out.push_back(l.name);
  return out;
}

// Variables no operation consumes.
std::vector<std::string> final_variables(const ISDescription& d) {
  std::set<std::string> consumed;
  for (const auto& op : d.operations) consumed.insert(op.inputs.begin(), op.inputs.end());
  std::vector<std::string> out;
  for (const auto& v : d.variables) {
    if (!consumed.count(v.name)) out.push_back(v.name);
  }
  return out;
}

}  // namespace

int ISDescription::variable_index(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == name) return static_cast<int>(i);
  }
  throw Error("unknown variable '" + name + "'");
}

std::vector<std::string> ISDescription::free_variables() const {
  std::set<std::string> produced;
  for (const auto& op : operations) produced.insert(op.outputs.begin(), op.outputs.end());
  std::vector<std::string> out;
  for (const auto& v : variables) {
    if (!produced.count(v.name)) out.push_back(v.name);
  }
  return out;
}

void ISDescription::check() const {
  std::set<std::string> names;
  for (const auto& v : variables) {
    if (v.cardinality < 1) throw Error("variable '" + v.name + "' needs a positive cardinality");
    if (!names.insert(v.name).second) throw Error("variable '" + v.name + "' is declared twice");
  }
  const auto free = free_variables();
  std::set<std::string> available(free.begin(), free.end());
  std::set<std::string> produced;
  for (const auto& op : operations) {
    for (const auto& v : op.inputs) {
      variable_index(v);
      if (!available.count(v)) throw Error("operation '" + op.name + "' reads '" + v + "' before it is produced");
    }
    for (const auto& v : op.outputs) {
      variable_index(v);
      if (!produced.insert(v).second) throw Error("variable '" + v + "' is produced twice");
      available.insert(v);
    }
    if (op.table.size() != radix_size(*this, op.inputs)) {
      throw Error("operation '" + op.name + "' needs " + std::to_string(radix_size(*this, op.inputs)) + " table entries");
    }
    const auto range = radix_size(*this, op.outputs);
    for (auto v : op.table) {
      if (v >= range) throw Error("operation '" + op.name + "' has a table entry out of range");
    }
  }
  std::set<std::string> lab_seen;
  for (const auto& l : labs) {
    if (!lab_seen.insert(l.name).second) throw Error("lab '" + l.name + "' is declared twice");
    if (l.setting) {
      variable_index(*l.setting);
      if (produced.count(*l.setting)) throw Error("setting of lab '" + l.name + "' is produced by an operation");
    }
    if (l.outcome) variable_index(*l.outcome);
  }
}

double OSDistribution::p(const std::map<std::string, int>& assignment) const {
  std::uint64_t code = 0;
  for (const auto& v : variables) {
    const auto it = assignment.find(v.name);
    if (it == assignment.end()) throw Error("assignment misses variable '" + v.name + "'");
    code = code * static_cast<std::uint64_t>(v.cardinality) + static_cast<std::uint64_t>(it->second);
  }
  return table[code];
}

std::vector<double> OSDistribution::marginal(const std::vector<std::string>& names) const {
  const ISDescription shape{variables, {}, {}};
  std::vector<double> out(radix_size(shape, names), 0.0);
  std::vector<int> values(variables.size());
  for (std::uint64_t code = 0; code < table.size(); ++code) {
    decode(shape, all_names(shape), code, values);
    out[encode(shape, names, values)] += table[code];
  }
  return out;
}

OSDistribution os_from_is(const ISDescription& d, const InputDistribution& inputs) {
  d.check();
  const auto free = d.free_variables();
  std::vector<std::vector<double>> weights;
  for (const auto& v : free) weights.push_back(input_weights(d, v, inputs));
  const auto names = all_names(d);
  OSDistribution os{d.variables, std::vector<double>(radix_size(d, names), 0.0)};
  std::vector<int> values(d.variables.size(), 0);
  const auto n_free = radix_size(d, free);
  for (std::uint64_t code = 0; code < n_free; ++code) {
    decode(d, free, code, values);
    double w = 1.0;
    for (std::size_t k = 0; k < free.size(); ++k) w *= weights[k][values[d.variable_index(free[k])]];
    if (w == 0.0) continue;
    run(d, values);
    os.table[encode(d, names, values)] += w;
  }
  return os;
}

Behavior is_behavior(const ISDescription& d, const InputDistribution& inputs) {
  d.check();
  std::vector<std::string> setting_vars, outcome_vars;
  std::vector<int> settings, outcomes;
  for (const auto& l : d.labs) {
    settings.push_back(l.setting ? d.variables[d.variable_index(*l.setting)].cardinality : 1);
    outcomes.push_back(l.outcome ? d.variables[d.variable_index(*l.outcome)].cardinality : 1);
    if (l.setting) setting_vars.push_back(*l.setting);
    if (l.outcome) outcome_vars.push_back(*l.outcome);
  }
  std::vector<std::string> hidden;
  for (const auto& v : d.free_variables()) {
    if (std::find(setting_vars.begin(), setting_vars.end(), v) == setting_vars.end()) hidden.push_back(v);
  }
  std::vector<std::vector<double>> weights;
  for (const auto& v : hidden) weights.push_back(input_weights(d, v, inputs));

  const auto n_settings = radix_size(d, setting_vars);
  const auto n_outcomes = radix_size(d, outcome_vars);
  const auto n_hidden = radix_size(d, hidden);
  std::vector<double> table(n_settings * n_outcomes, 0.0);
  std::vector<int> values(d.variables.size(), 0);
  for (std::uint64_t s = 0; s < n_settings; ++s) {
    for (std::uint64_t h = 0; h < n_hidden; ++h) {
      decode(d, setting_vars, s, values);
      decode(d, hidden, h, values);
      double w = 1.0;
      for (std::size_t k = 0; k < hidden.size(); ++k) w *= weights[k][values[d.variable_index(hidden[k])]];
      run(d, values);
      table[s * n_outcomes + encode(d, outcome_vars, values)] += w;
    }
  }
  return {lab_names(d), settings, outcomes, table};
}

ISDescription reverse_is(const ISDescription& d) {
  d.check();
  ISDescription r{d.variables, {}, {}};
  for (auto it = d.operations.rbegin(); it != d.operations.rend(); ++it) {
    if (!is_bijection(d, *it)) throw Error("operation '" + it->name + "' is not invertible");
    std::vector<std::uint32_t> inverse(it->table.size());
    for (std::uint32_t i = 0; i < it->table.size(); ++i) inverse[it->table[i]] = i;
    r.operations.push_back({toggle_inverse(it->name), it->outputs, it->inputs, inverse});
  }
  for (const auto& l : d.labs) r.labs.push_back({l.name, l.outcome, l.setting});
  r.check();
  return r;
}

bool causal_reversibility_check(const ISDescription& d, double tol) {
  d.check();
  std::set<std::string> consumed;
  for (const auto& op : d.operations) {
    if (!is_bijection(d, op)) throw Error("precondition failed: operation '" + op.name + "' is not invertible");
    for (const auto& v : op.inputs) {
      if (!consumed.insert(v).second) throw Error("precondition failed: variable '" + v + "' is consumed twice");
    }
  }
  const auto forward = os_from_is(d);
  const auto finals = final_variables(d);
  const auto final_marginal = forward.marginal(finals);
  for (double p : final_marginal) {
    if (std::abs(p - 1.0 / static_cast<double>(final_marginal.size())) > tol) {
      throw Error("precondition failed: uniform inputs do not give uniform final variables");
    }
  }
  const auto r = reverse_is(d);
  const auto backward = os_from_is(r);
  for (std::size_t k = 0; k < forward.table.size(); ++k) {
    if (std::abs(forward.table[k] - backward.table[k]) > tol) return false;
  }
  if (d.labs.empty()) return true;
  const auto b = is_behavior(d);
  const auto rb = is_behavior(r);
  for (const auto& order : enumerate_posets(lab_names(d))) {
    if (signal_requirement_check(b, order)) return signal_requirement_check(rb, order.reversed());
  }
  return false;
}

BiOrder biorder_of(const CausalOrderVerdict& verdict) {
  if (!verdict.exhibits || verdict.compatible_orders.empty()) throw Error("biorder_of: the verdict exhibits no causal order");
  return BiOrder(verdict.compatible_orders.front());
}

ISDescription random_bit_chain(std::uint64_t seed, int n_labs) {
  if (n_labs < 1 || n_labs > 8) throw Error("random_bit_chain supports 1 to 8 labs");
  Rng rng(seed);
  std::bernoulli_distribution coin(0.5);
  ISDescription d;
  auto k_name = [](const char* stem, int k) { return std::string(stem) + "_" + std::to_string(k); };
  for (int k = 0; k < n_labs; ++k) {
    for (const char* stem : {"in", "s", "o", "out"}) d.variables.push_back({k_name(stem, k), 2});
  }
  for (int k = 0; k < n_labs; ++k) {
    const std::uint32_t alpha = coin(rng);
    const std::uint32_t beta = coin(rng);
    // (in, s) -> (o, out) with o = in ^ alpha and out = s ^ beta.
    std::vector<std::uint32_t> table(4);
    for (std::uint32_t in = 0; in < 2; ++in)
      for (std::uint32_t s = 0; s < 2; ++s) table[in * 2 + s] = (in ^ alpha) * 2 + (s ^ beta);
    const std::string lab(1, static_cast<char>('A' + k));
    d.operations.push_back({lab, {k_name("in", k), k_name("s", k)}, {k_name("o", k), k_name("out", k)}, table});
    d.labs.push_back({lab, k_name("s", k), k_name("o", k)});
    if (k + 1 < n_labs) {
      const std::uint32_t gamma = coin(rng);
      d.operations.push_back({"wire_" + std::to_string(k), {k_name("out", k)}, {k_name("in", k + 1)}, {gamma, 1U ^ gamma}});
    }
  }
  d.check();
  return d;
}

UnitaryChain reverse(const UnitaryChain& c) {
  if (c.names.size() != c.gates.size()) throw Error("unitary chain needs one name per gate");
  UnitaryChain r;
  for (std::size_t k = c.gates.size(); k-- > 0;) {
    if (!is_unitary(c.gates[k])) throw Error("gate '" + c.names[k] + "' is not unitary");
    r.names.push_back(toggle_inverse(c.names[k]));
    r.gates.push_back(c.gates[k].adjoint());
  }
  return r;
}

Matrix chain_unitary(const UnitaryChain& c) {
  if (c.gates.empty()) throw Error("unitary chain is empty");
  Matrix u = c.gates.front();
  for (std::size_t k = 1; k < c.gates.size(); ++k) u = c.gates[k] * u;
  return u;
}

std::vector<double> unitary_chain_os(const UnitaryChain& c) {
  const Matrix u = chain_unitary(c);
  const int d = static_cast<int>(u.rows());
  std::vector<double> p(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) p[static_cast<std::size_t>(i) * d + j] = std::norm(u(j, i)) / d;
  return p;
}

}  // namespace causal
