#include "causal/classify.hpp"
#include "causal/io.hpp"
#include "causal/random.hpp"
#include "causal/switch.hpp"
#include "doctest.h"

#include <string>

using namespace causal;

namespace {

const std::string kData = CAUSAL_DATA_DIR;

bool same(const DenseOperator& a, const DenseOperator& b) { return a.factors() == b.factors() && a.matrix() == b.matrix(); }

bool same(const ProcessMatrix& a, const ProcessMatrix& b) { return a.labs() == b.labs() && same(a.w(), b.w()); }

bool same(const Behavior& a, const Behavior& b) {
  return a.labs() == b.labs() && a.settings() == b.settings() && a.outcomes() == b.outcomes() && a.table() == b.table();
}

bool same(const QuantumCausalModel& a, const QuantumCausalModel& b) {
  if (a.nodes != b.nodes || !(a.dag == b.dag) || a.channels.size() != b.channels.size()) return false;
  for (std::size_t i = 0; i < a.channels.size(); ++i) {
    if (!same(a.channels[i], b.channels[i])) return false;
  }
  return true;
}

bool same(const CausalGame& a, const CausalGame& b) {
  return a.name == b.name && a.source == b.source && a.labs == b.labs && a.settings == b.settings &&
         a.outcomes == b.outcomes && a.inputs == b.inputs && a.payoff == b.payoff;
}

bool same(const ProcessFunction& a, const ProcessFunction& b) { return a == b; }
bool same(const ISDescription& a, const ISDescription& b) { return a == b; }

template <typename T>
void check_round_trip(const T& x, const std::string& name) {
  const auto text = serialize(make_file(name, x));
  const auto f = parse_process_file(text);
  CHECK(f.name == name);
  REQUIRE(std::holds_alternative<T>(f.payload));
  CHECK(same(std::get<T>(f.payload), x));
  CHECK(serialize(f) == text);
}

std::string field_of(const std::string& text) {
  try {
    parse_process_file(text);
  } catch (const ParseError& e) {
    return e.field();
  }
  return "(no error)";
}

const char* kIdentityBehavior = R"({
  "kind": "behavior",
  "labs": ["A", "B"],
  "settings": [2, 1],
  "outcomes": [1, 2],
  "table": [[1, 0], [0, 1]]
})";

}  // namespace

TEST_CASE("round trip for every kind") {
  const PartialOrder ab = PartialOrder::total({"A", "B"});
  check_round_trip(random_causal_process(3, ab, {make_lab("A", 2, 2), make_lab("B", 2, 1)}), "random chain");
  check_round_trip(switch_w_matrix(), "switch");
  check_round_trip(ocb_behavior(), "ocb behavior");
  check_round_trip(tsirelson_behavior(), "");
  for (const auto& w : enumerate_valid(2)) check_round_trip(w, "w");
  check_round_trip(random_bit_chain(5), "chain");
  for (std::uint64_t seed = 0; seed < 5; ++seed) check_round_trip(random_markov_model(seed), "model");
  check_round_trip(ocb_game(), "OCB");
  check_round_trip(gyni_game(), "GYNI");
}

TEST_CASE("serialization is deterministic with sorted keys") {
  const auto text = serialize(make_file("x", ocb_game()));
  CHECK(text == serialize(make_file("x", ocb_game())));
  CHECK(text.find("\"inputs\"") < text.find("\"kind\""));
  CHECK(text.find("\"kind\"") < text.find("\"payoff\""));
}

TEST_CASE("behavior file with the identity channel") {
  const auto f = parse_process_file(kIdentityBehavior);
  CHECK(f.kind == FileKind::behavior);
  const auto& b = std::get<Behavior>(f.payload);
  CHECK(b.lab_count() == 2);
  CHECK(detect_causal_order(b, b.labs()).exhibits);
}

TEST_CASE("complex entries") {
  const auto f = parse_process_file(R"({
    "kind": "process_matrix",
    "labs": [{"name": "A", "in": 2, "out": 1}],
    "w": [[[0.5, 0], [0, -0.5]], [[0, 0.5], 0.5]]
  })");
  const auto& p = std::get<ProcessMatrix>(f.payload);
  CHECK(p.w().matrix()(0, 1) == Complex(0, -0.5));
  CHECK(p.w().matrix()(1, 0) == Complex(0, 0.5));
  CHECK(p.w().matrix()(1, 1) == Complex(0.5, 0));
  CHECK(validate_process(p).valid());
}

TEST_CASE("parse errors name the offending field") {
  CHECK(field_of(R"({"kind": "process_matrix", "labs": [{"name": "A", "in": 2, "out": 1}], "w": [[1, 0]]})") == "w");
  CHECK(field_of(R"({"kind": "process_matrix", "labs": [{"name": "A", "in": 2, "out": 1}], "w": [[1, 0], [0]]})") ==
        "w[1]");
  CHECK(field_of(R"({"kind": "process_matrix", "labs": [{"name": "A", "in": 2, "out": 1}], "w": [[1, 0], [0, "x"]]})")
            .rfind("w[1][1]", 0) == 0);
  CHECK(field_of(R"({"kind": "quantum_thing"})") == "kind");
  CHECK(field_of(R"({"labs": []})") == "kind");
  CHECK(field_of("{\"kind\": ") != "(no error)");
  CHECK(field_of(R"({"kind": "process_function", "n_labs": 2, "table": [0, 1, 2]})") == "table");
  CHECK(field_of(R"({"kind": "behavior", "labs": ["A"], "settings": [2], "outcomes": [2], "table": [[0.5, 0.5]]})") ==
        "table");
  CHECK_THROWS_AS(load_process_file(kData + "/does-not-exist.json"), ParseError);
}

TEST_CASE("shipped game files match the built-in definitions") {
  const auto ocb = load_process_file(kData + "/games/ocb.json");
  const auto gyni = load_process_file(kData + "/games/gyni.json");
  CHECK(same(std::get<CausalGame>(ocb.payload), ocb_game()));
  CHECK(same(std::get<CausalGame>(gyni.payload), gyni_game()));
  CHECK_FALSE(std::get<CausalGame>(ocb.payload).source.empty());
  CHECK_FALSE(std::get<CausalGame>(gyni.payload).source.empty());
}

TEST_CASE("every shipped data file parses") {
  for (const char* f : {"processes/chain.json", "processes/ocb.json", "processes/switch.json", "processes/invalid.json",
                        "processes/random3_markov.json", "behaviors/chain.json", "behaviors/ocb.json",
                        "behaviors/tsirelson.json", "functions/identity1.json", "functions/constant2.json",
                        "functions/nontrivial3.json", "descriptions/bit_chain.json", "models/random3.json",
                        "models/random3_dag.json"}) {
    CAPTURE(f);
    CHECK_NOTHROW(load_process_file(kData + "/" + f));
  }
}

TEST_CASE("classify placements") {
  const auto chain = classify(load_process_file(kData + "/processes/chain.json"));
  CHECK(chain.placement == "causally ordered");
  const auto ocb = classify(load_process_file(kData + "/processes/ocb.json"));
  CHECK(ocb.placement == "non-causal");
  CHECK(ocb.summary == "non-causal (inequality violation 0.853553 > 0.75)");
  const auto sw = classify(make_file("switch", switch_w_matrix()));
  CHECK(sw.summary == "causal, not causally ordered; separability search: undecided (heuristic)");
  const auto bad = classify(load_process_file(kData + "/processes/invalid.json"));
  CHECK(bad.placement == "invalid");
  const auto ocb_b = classify(make_file("b", ocb_behavior()));
  CHECK(ocb_b.placement == "non-causal");
  // No signalling: compatible with the empty order, yet no causal order is exhibited.
  const auto t = classify(make_file("t", tsirelson_behavior()));
  CHECK(t.placement == "causally ordered");
  CHECK(t.verdicts.at("causal_order_detection").rfind("no causal order", 0) == 0);
  CHECK_THROWS_AS(classify(make_file("g", ocb_game())), Error);
}

TEST_CASE("classify verdicts are monotone in the hierarchy") {
  const auto yes = [](const Report& r, const std::string& k) { return r.verdicts.at(k).rfind("yes", 0) == 0; };
  std::vector<Report> reports;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto order = seed % 2 ? PartialOrder::total({"A", "B"}) : PartialOrder({"A", "B"});
    reports.push_back(classify(make_file("r", random_causal_process(seed, order, {make_lab("A", 2, 2), make_lab("B", 2, 2)}))));
  }
  reports.push_back(classify(make_file("ocb", ocb_process())));
  reports.push_back(classify(make_file("b", tsirelson_behavior())));
  reports.push_back(classify(make_file("b", pr_box_behavior())));
  for (const auto& r : reports) {
    CAPTURE(r.summary);
    if (yes(r, "causally_ordered")) CHECK(yes(r, "causally_separable"));
    if (yes(r, "causally_separable")) CHECK(yes(r, "causal"));
    if (r.placement == "non-causal") CHECK_FALSE(yes(r, "causal"));
  }
}

TEST_CASE("reports are byte-identical across runs") {
  const auto f = load_process_file(kData + "/processes/ocb.json");
  CHECK(classify(f).to_json() == classify(f).to_json());
  const auto j = classify(f, {1e-7, 3, 100, 4}).to_json();
  CHECK(j == classify(f, {1e-7, 3, 100, 4}).to_json());
  CHECK(j.find("\"provenance\": \"input\"") != std::string::npos);
  CHECK(j.find("\"evidence\"") < j.find("\"kind\""));
}
