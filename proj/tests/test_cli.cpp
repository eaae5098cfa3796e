#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

#include <sstream>
#include <string>
#include <vector>

using namespace causal::cli;

namespace {

const std::string kData = CAUSAL_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

int count_lines(const std::string& s, const std::string& prefix) {
  std::istringstream in(s);
  int n = 0;
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST_CASE("ctc enumerate lists the valid functions") {
  const auto r = run({"ctc", "enumerate", "1"});
  CHECK(r.code == kOk);
  CHECK(count_lines(r.out, "w(") == 2);
  const auto j = nlohmann::json::parse(run({"--json", "ctc", "enumerate", "2"}).out);
  CHECK(j["count"] == 12);
  CHECK(j["nontrivial"] == 0);
}

TEST_CASE("ctc check on the single-lab loop") {
  const auto flip = run({"ctc", "check", "--identity", "--labs", "1", "--ops", "flip"});
  CHECK(flip.code == kNegative);
  CHECK(flip.out.find("0 fixed points") != std::string::npos);
  CHECK(run({"ctc", "check", "--constant", "0", "--labs", "1"}).code == kOk);
  CHECK(run({"ctc", "check", "--identity", "--labs", "1"}).code == kNegative);
  CHECK(run({"ctc", "check", kData + "/functions/nontrivial3.json"}).code == kOk);
  CHECK(run({"ctc", "check", "--identity", "--constant", "0", "--labs", "1"}).code == kUsage);
  CHECK(run({"ctc", "check", "--constant", "0", "--labs", "1", "--ops", "spin"}).code == kUsage);
}

TEST_CASE("switch discrimination") {
  const auto r = run({"switch-demo", "--discriminate", "X", "Z"});
  CHECK(r.code == kOk);
  CHECK(r.out.find("outcome -") != std::string::npos);
  CHECK(r.out.find("probability 0.0") != std::string::npos);
  const auto j = nlohmann::json::parse(run({"--json", "switch-demo", "--discriminate", "X", "X"}).out);
  CHECK(j["outcome"] == "+");
  CHECK(j["p_plus"].get<double>() == doctest::Approx(1.0));
  CHECK(nlohmann::json::parse(run({"--json", "switch-demo", "--discriminate", "X", "H"}).out)["warning"] == true);
  CHECK(run({"switch-demo", "--discriminate", "X", "Q"}).code == kUsage);
}

TEST_CASE("usage and parse errors exit 2") {
  CHECK(run({"classify", "nonexistent.json"}).code == kUsage);
  const auto none = run({});
  CHECK(none.code == kUsage);
  CHECK(none.err.find("Usage:") != std::string::npos);
  CHECK(run({"frobnicate"}).code == kUsage);
  CHECK(run({"--tol", "abc", "ctc", "enumerate", "1"}).code == kUsage);
  CHECK(run({"classify", kData + "/functions/constant2.json"}).code == kUsage);
  CHECK(run({"reverse", kData + "/processes/chain.json"}).code == kUsage);
  CHECK(run({"ctc", "enumerate", "9"}).code == kUsage);
}

TEST_CASE("validate covers every kind") {
  CHECK(run({"validate", kData + "/processes/ocb.json"}).code == kOk);
  CHECK(run({"validate", kData + "/processes/invalid.json"}).code == kNegative);
  CHECK(run({"validate", kData + "/behaviors/ocb.json"}).code == kOk);
  CHECK(run({"validate", kData + "/functions/identity1.json"}).code == kNegative);
  CHECK(run({"validate", kData + "/descriptions/bit_chain.json"}).code == kOk);
  CHECK(run({"validate", kData + "/models/random3.json"}).code == kOk);
  CHECK(run({"validate", kData + "/games/ocb.json"}).code == kOk);
}

TEST_CASE("classify through the command line") {
  const auto r = run({"--json", "classify", kData + "/processes/chain.json"});
  CHECK(r.code == kOk);
  CHECK(nlohmann::json::parse(r.out)["placement"] == "causally ordered");
  CHECK(r.out == run({"--json", "classify", kData + "/processes/chain.json"}).out);
  CHECK(run({"--quiet", "classify", kData + "/processes/ocb.json"}).out.empty());
}

TEST_CASE("order detection and signalling") {
  CHECK(run({"order-detect", kData + "/behaviors/chain.json"}).code == kOk);
  CHECK(run({"order-detect", kData + "/behaviors/ocb.json"}).code == kNegative);
  CHECK(run({"order-detect", kData + "/behaviors/tsirelson.json"}).code == kNegative);
  CHECK(run({"order-detect", kData + "/behaviors/chain.json", "--subset", "A"}).code == kNegative);
  const auto s = nlohmann::json::parse(run({"--json", "signalling", kData + "/functions/nontrivial3.json"}).out);
  CHECK(s["cyclic"] == true);
  CHECK(s["trivial"] == false);
  CHECK(run({"signalling", kData + "/behaviors/chain.json"}).out == "A->B\n");
}

TEST_CASE("games") {
  const auto j = nlohmann::json::parse(run({"--json", "game", kData + "/behaviors/ocb.json"}).out);
  CHECK(j["violates"] == true);
  CHECK(j["causal_bound"].get<double>() == doctest::Approx(0.75));
  const auto g = nlohmann::json::parse(
      run({"--json", "game", kData + "/processes/chain.json", "--game", kData + "/games/gyni.json"}).out);
  CHECK(g["violates"] == false);
}

TEST_CASE("qcm and reversal") {
  CHECK(run({"qcm", "verify", kData + "/models/random3.json", kData + "/processes/random3_markov.json"}).code == kOk);
  CHECK(run({"qcm", "verify", kData + "/models/random3.json", kData + "/processes/ocb.json"}).code == kNegative);
  CHECK(run({"qcm", "discover", kData + "/processes/random3_markov.json", kData + "/models/random3_dag.json"}).code ==
        kOk);
  const auto r = run({"--json", "reverse", kData + "/descriptions/bit_chain.json", "--check"});
  CHECK(r.code == kOk);
  CHECK(nlohmann::json::parse(r.out)["reversible"] == true);
}
