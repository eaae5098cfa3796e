#pragma once

// JSON process files. Every file is an object with a "kind" and an optional
// "name"; the remaining fields depend on the kind. Complex numbers are
// [re, im] pairs (a bare number is read as real), matrices are arrays of
// rows, and all dimensions are declared explicitly.

#include "causal/ctc.hpp"
#include "causal/games.hpp"
#include "causal/osis.hpp"
#include "causal/process.hpp"
#include "causal/qcm.hpp"
#include "causal/structure.hpp"

#include <string>
#include <string_view>
#include <variant>

namespace causal {

/// Parse failure; `field` is a path such as "w[3][1]" or "labs[0].in".
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class FileKind { process_matrix, behavior, process_function, is_description, qcm, game };

std::string to_string(FileKind kind);

using Payload = std::variant<ProcessMatrix, Behavior, ProcessFunction, ISDescription, QuantumCausalModel, CausalGame>;

struct ProcessFile {
  FileKind kind = FileKind::process_matrix;
  std::string name;
  Payload payload;
};

ProcessFile parse_process_file(std::string_view text);
/// Reads and parses; a missing file is a ParseError on field "(file)".
ProcessFile load_process_file(const std::string& path);

/// Pretty-printed JSON with sorted keys; parse_process_file inverts it.
std::string serialize(const ProcessFile& file);

ProcessFile make_file(std::string name, Payload payload);

}  // namespace causal
