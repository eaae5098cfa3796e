#include "causal/io.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace causal {
namespace {

using json = nlohmann::json;

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& array_of(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

int read_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
  return j.get<int>();
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected a string");
  return j.get<std::string>();
}

std::vector<int> read_ints(const json& j, const std::string& path) {
  std::vector<int> out;
  for (std::size_t i = 0; i < array_of(j, path).size(); ++i) out.push_back(read_int(j[i], at(path, i)));
  return out;
}

std::vector<double> read_numbers(const json& j, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < array_of(j, path).size(); ++i) out.push_back(read_number(j[i], at(path, i)));
  return out;
}

std::vector<std::string> read_strings(const json& j, const std::string& path) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < array_of(j, path).size(); ++i) out.push_back(read_string(j[i], at(path, i)));
  return out;
}

std::vector<std::uint32_t> read_table(const json& j, const std::string& path) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < array_of(j, path).size(); ++i) {
    const int v = read_int(j[i], at(path, i));
    if (v < 0) throw ParseError(at(path, i), "expected a non-negative integer");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

Complex read_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError(path, "expected a number or an [re, im] pair");
  return {read_number(j[0], at(path, 0)), read_number(j[1], at(path, 1))};
}

Matrix read_matrix(const json& j, int dim, const std::string& path) {
  if (static_cast<int>(array_of(j, path).size()) != dim) {
    throw ParseError(path, "expected " + std::to_string(dim) + " rows, found " + std::to_string(j.size()));
  }
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const auto row_path = at(path, static_cast<std::size_t>(r));
    const auto& row = array_of(j[r], row_path);
    if (static_cast<int>(row.size()) != dim) {
      throw ParseError(row_path, "expected " + std::to_string(dim) + " entries, found " + std::to_string(row.size()));
    }
    for (int c = 0; c < dim; ++c) m(r, c) = read_complex(row[c], at(row_path, static_cast<std::size_t>(c)));
  }
  return m;
}

json write_matrix(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

Lab read_lab(const json& j, const std::string& path) {
  const auto name = read_string(require(j, "name", path), join(path, "name"));
  const int in = read_int(require(j, "in", path), join(path, "in"));
  const int out = read_int(require(j, "out", path), join(path, "out"));
  if (in < 1) throw ParseError(join(path, "in"), "dimension must be positive");
  if (out < 1) throw ParseError(join(path, "out"), "dimension must be positive");
  Lab lab = make_lab(name, in, out);
  if (j.contains("in_space")) lab.in.name = read_string(j["in_space"], join(path, "in_space"));
  if (j.contains("out_space")) lab.out.name = read_string(j["out_space"], join(path, "out_space"));
  return lab;
}

json write_lab(const Lab& lab) {
  json j{{"name", lab.name}, {"in", lab.in.dim}, {"out", lab.out.dim}};
  const Lab plain = make_lab(lab.name, lab.in.dim, lab.out.dim);
  if (lab.in.name != plain.in.name) j["in_space"] = lab.in.name;
  if (lab.out.name != plain.out.name) j["out_space"] = lab.out.name;
  return j;
}

std::vector<Lab> read_labs(const json& j, const std::string& path) {
  std::vector<Lab> labs;
  for (std::size_t i = 0; i < array_of(j, path).size(); ++i) labs.push_back(read_lab(j[i], at(path, i)));
  return labs;
}

json write_labs(const std::vector<Lab>& labs) {
  json out = json::array();
  for (const auto& l : labs) out.push_back(write_lab(l));
  return out;
}

int total_dim(const std::vector<SpaceLabel>& spaces) {
  int d = 1;
  for (const auto& s : spaces) d *= s.dim;
  return d;
}

// Rethrows library validation failures as parse errors on `path`.
template <typename F>
auto checked(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

ProcessMatrix read_process_matrix(const json& j) {
  const auto labs = read_labs(require(j, "labs", ""), "labs");
  const auto spaces = process_spaces(labs);
  const Matrix w = read_matrix(require(j, "w", ""), total_dim(spaces), "w");
  return checked("w", [&] { return ProcessMatrix(labs, DenseOperator(spaces, w)); });
}

Behavior read_behavior(const json& j) {
  const auto labs = read_strings(require(j, "labs", ""), "labs");
  const auto settings = read_ints(require(j, "settings", ""), "settings");
  const auto outcomes = read_ints(require(j, "outcomes", ""), "outcomes");
  if (settings.size() != labs.size()) throw ParseError("settings", "one entry per lab is required");
  if (outcomes.size() != labs.size()) throw ParseError("outcomes", "one entry per lab is required");
  std::size_t n_settings = 1;
  std::size_t n_outcomes = 1;
  for (int s : settings) n_settings *= static_cast<std::size_t>(std::max(s, 0));
  for (int o : outcomes) n_outcomes *= static_cast<std::size_t>(std::max(o, 0));
  const auto& rows = array_of(require(j, "table", ""), "table");
  if (rows.size() != n_settings) {
    throw ParseError("table", "expected " + std::to_string(n_settings) + " rows, one per joint setting");
  }
  std::vector<double> table;
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const auto row = read_numbers(rows[s], at("table", s));
    if (row.size() != n_outcomes) {
      throw ParseError(at("table", s), "expected " + std::to_string(n_outcomes) + " outcome probabilities");
    }
    table.insert(table.end(), row.begin(), row.end());
  }
  return checked("table", [&] { return Behavior(labs, settings, outcomes, table); });
}

json write_behavior(const Behavior& b) {
  json rows = json::array();
  const auto n = static_cast<std::size_t>(b.outcome_count());
  for (int s = 0; s < b.setting_count(); ++s) {
    const auto first = b.table().begin() + static_cast<std::ptrdiff_t>(s * n);
    rows.push_back(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(n)));
  }
  return {{"labs", b.labs()}, {"settings", b.settings()}, {"outcomes", b.outcomes()}, {"table", rows}};
}

ProcessFunction read_process_function(const json& j) {
  const int n = read_int(require(j, "n_labs", ""), "n_labs");
  const auto table = read_table(require(j, "table", ""), "table");
  return checked("table", [&] { return ProcessFunction(n, table); });
}

ISDescription read_is(const json& j) {
  ISDescription d;
  const auto& vars = array_of(require(j, "variables", ""), "variables");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto p = at("variables", i);
    d.variables.push_back({read_string(require(vars[i], "name", p), join(p, "name")),
                           read_int(require(vars[i], "cardinality", p), join(p, "cardinality"))});
  }
  const auto& ops = array_of(require(j, "operations", ""), "operations");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto p = at("operations", i);
    d.operations.push_back({read_string(require(ops[i], "name", p), join(p, "name")),
                            read_strings(require(ops[i], "inputs", p), join(p, "inputs")),
                            read_strings(require(ops[i], "outputs", p), join(p, "outputs")),
                            read_table(require(ops[i], "table", p), join(p, "table"))});
  }
  const auto& labs = array_of(require(j, "labs", ""), "labs");
  for (std::size_t i = 0; i < labs.size(); ++i) {
    const auto p = at("labs", i);
    ISLab lab{read_string(require(labs[i], "name", p), join(p, "name")), std::nullopt, std::nullopt};
    if (labs[i].contains("setting")) lab.setting = read_string(labs[i]["setting"], join(p, "setting"));
    if (labs[i].contains("outcome")) lab.outcome = read_string(labs[i]["outcome"], join(p, "outcome"));
    d.labs.push_back(lab);
  }
  checked("operations", [&] {
    d.check();
    return 0;
  });
  return d;
}

json write_is(const ISDescription& d) {
  json vars = json::array();
  for (const auto& v : d.variables) vars.push_back({{"name", v.name}, {"cardinality", v.cardinality}});
  json ops = json::array();
  for (const auto& op : d.operations) {
    ops.push_back({{"name", op.name}, {"inputs", op.inputs}, {"outputs", op.outputs}, {"table", op.table}});
  }
  json labs = json::array();
  for (const auto& l : d.labs) {
    json lab{{"name", l.name}};
    if (l.setting) lab["setting"] = *l.setting;
    if (l.outcome) lab["outcome"] = *l.outcome;
    labs.push_back(lab);
  }
  return {{"variables", vars}, {"operations", ops}, {"labs", labs}};
}

QuantumCausalModel read_qcm(const json& j) {
  QuantumCausalModel m;
  m.nodes = read_labs(require(j, "nodes", ""), "nodes");
  std::vector<std::string> names;
  for (const auto& n : m.nodes) names.push_back(n.name);
  m.dag = checked("nodes", [&] { return DiGraph(names); });
  const auto& edges = array_of(require(j, "edges", ""), "edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto pair = read_strings(edges[i], at("edges", i));
    if (pair.size() != 2) throw ParseError(at("edges", i), "expected a [from, to] pair");
    const auto from = std::find(names.begin(), names.end(), pair[0]);
    const auto to = std::find(names.begin(), names.end(), pair[1]);
    if (from == names.end() || to == names.end()) throw ParseError(at("edges", i), "edge names an unknown node");
    m.dag.add_edge(static_cast<int>(from - names.begin()), static_cast<int>(to - names.begin()));
  }
  if (!j.contains("channels")) return m;
  std::vector<SpaceLabel> all = process_spaces(m.nodes);
  const auto& channels = array_of(j["channels"], "channels");
  m.channels.resize(m.nodes.size());
  std::vector<bool> seen(m.nodes.size(), false);
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const auto p = at("channels", i);
    const auto node = read_string(require(channels[i], "node", p), join(p, "node"));
    const auto it = std::find(names.begin(), names.end(), node);
    if (it == names.end()) throw ParseError(join(p, "node"), "unknown node '" + node + "'");
    const auto k = static_cast<std::size_t>(it - names.begin());
    if (seen[k]) throw ParseError(join(p, "node"), "second channel for node '" + node + "'");
    seen[k] = true;
    std::vector<SpaceLabel> spaces;
    const auto space_names = read_strings(require(channels[i], "spaces", p), join(p, "spaces"));
    for (const auto& s : space_names) {
      const auto sp = std::find_if(all.begin(), all.end(), [&s](const SpaceLabel& l) { return l.name == s; });
      if (sp == all.end()) throw ParseError(join(p, "spaces"), "unknown space '" + s + "'");
      spaces.push_back(*sp);
    }
    const Matrix mat = read_matrix(require(channels[i], "matrix", p), total_dim(spaces), join(p, "matrix"));
    m.channels[k] = checked(join(p, "spaces"), [&] { return DenseOperator(spaces, mat); });
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) throw ParseError("channels", "no channel for node '" + names[k] + "'");
  }
  return m;
}

json write_qcm(const QuantumCausalModel& m) {
  json edges = json::array();
  for (const auto& [from, to] : m.dag.edges()) edges.push_back({from, to});
  json out{{"nodes", write_labs(m.nodes)}, {"edges", edges}};
  if (m.channels.empty()) return out;
  json channels = json::array();
  for (std::size_t i = 0; i < m.channels.size(); ++i) {
    channels.push_back({{"node", m.nodes[i].name}, {"spaces", m.channels[i].labels()}, {"matrix", write_matrix(m.channels[i].matrix())}});
  }
  out["channels"] = channels;
  return out;
}

CausalGame read_game(const json& j) {
  CausalGame g;
  g.name = read_string(require(j, "name", ""), "name");
  g.source = read_string(require(j, "source", ""), "source");
  g.labs = read_strings(require(j, "labs", ""), "labs");
  g.settings = read_ints(require(j, "settings", ""), "settings");
  g.outcomes = read_ints(require(j, "outcomes", ""), "outcomes");
  const auto& inputs = array_of(require(j, "inputs", ""), "inputs");
  for (std::size_t i = 0; i < inputs.size(); ++i) g.inputs.push_back(read_numbers(inputs[i], at("inputs", i)));
  g.payoff = read_ints(require(j, "payoff", ""), "payoff");
  checked("payoff", [&] {
    g.check();
    return 0;
  });
  return g;
}

json write_game(const CausalGame& g) {
  return {{"name", g.name},         {"source", g.source}, {"labs", g.labs},    {"settings", g.settings},
          {"outcomes", g.outcomes}, {"inputs", g.inputs}, {"payoff", g.payoff}};
}

FileKind read_kind(const json& j) {
  const auto k = read_string(require(j, "kind", ""), "kind");
  for (auto kind : {FileKind::process_matrix, FileKind::behavior, FileKind::process_function, FileKind::is_description,
                    FileKind::qcm, FileKind::game}) {
    if (to_string(kind) == k) return kind;
  }
  throw ParseError("kind", "unknown kind '" + k + "'");
}

FileKind kind_of(const Payload& p) {
  return static_cast<FileKind>(p.index());
}

}  // namespace

ParseError::ParseError(std::string field, const std::string& message)
    : Error("parse error at '" + field + "': " + message), field_(std::move(field)) {}

std::string to_string(FileKind kind) {
  switch (kind) {
    case FileKind::process_matrix:
      return "process_matrix";
    case FileKind::behavior:
      return "behavior";
    case FileKind::process_function:
      return "process_function";
    case FileKind::is_description:
      return "is_description";
    case FileKind::qcm:
      return "qcm";
    case FileKind::game:
      return "game";
  }
  return "?";
}

ProcessFile parse_process_file(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("(document)", "malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("(document)", "expected a JSON object");
  ProcessFile f;
  f.kind = read_kind(j);
  if (j.contains("name")) f.name = read_string(j["name"], "name");
  switch (f.kind) {
    case FileKind::process_matrix:
      f.payload = read_process_matrix(j);
      break;
    case FileKind::behavior:
      f.payload = read_behavior(j);
      break;
    case FileKind::process_function:
      f.payload = read_process_function(j);
      break;
    case FileKind::is_description:
      f.payload = read_is(j);
      break;
    case FileKind::qcm:
      f.payload = read_qcm(j);
      break;
    case FileKind::game:
      f.payload = read_game(j);
      break;
  }
  return f;
}

ProcessFile load_process_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("(file)", "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_process_file(buf.str());
}

std::string serialize(const ProcessFile& file) {
  if (kind_of(file.payload) != file.kind) throw Error("process file kind does not match its payload");
  json j = std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ProcessMatrix>) {
          return {{"labs", write_labs(p.labs())}, {"w", write_matrix(p.w().matrix())}};
        } else if constexpr (std::is_same_v<T, Behavior>) {
          return write_behavior(p);
        } else if constexpr (std::is_same_v<T, ProcessFunction>) {
          return {{"n_labs", p.n_labs()}, {"table", p.table()}};
        } else if constexpr (std::is_same_v<T, ISDescription>) {
          return write_is(p);
        } else if constexpr (std::is_same_v<T, QuantumCausalModel>) {
          return write_qcm(p);
        } else {
          return write_game(p);
        }
      },
      file.payload);
  j["kind"] = to_string(file.kind);
  if (!file.name.empty()) j["name"] = file.name;
  return j.dump(2) + "\n";
}

ProcessFile make_file(std::string name, Payload payload) {
  const auto kind = kind_of(payload);
  return {kind, std::move(name), std::move(payload)};
}

}  // namespace causal
