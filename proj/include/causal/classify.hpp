#pragma once

// Classification of process matrices and behaviors into the nested tiers
// causally ordered, causally separable, causal and non-causal.

#include "causal/io.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace causal {

struct ClassifyOptions {
  double tol = 1e-7;
  std::uint64_t seed = 7;
  /// Iteration cap of the separability search.
  int max_iter = 500;
  /// Random instrument sets tried per game in the inequality scan.
  int random_instruments = 16;
};

struct ReportNumber {
  double value = 0.0;
  /// "computed" or "input".
  std::string provenance = "computed";
};

struct Report {
  std::string subject;
  std::string kind;
  /// One of: invalid, causally ordered, causally separable, causal,
  /// non-causal.
  std::string placement;
  std::string summary;
  std::map<std::string, std::string> verdicts;
  std::map<std::string, ReportNumber> evidence;

  /// Sorted keys; byte-identical for identical reports.
  std::string to_json() const;
  std::string to_text() const;
};

/// Validity, causal order, separability (two labs plus an optional global
/// future), inequality scan and causal membership, then causal-order
/// detection on the informationally complete behavior. Accepts
/// process_matrix and behavior files; throws Error for other kinds.
Report classify(const ProcessFile& file, const ClassifyOptions& options = {});

}  // namespace causal
