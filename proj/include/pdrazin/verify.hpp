#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdrazin/instance.hpp"
#include "pdrazin/report.hpp"

namespace pdrazin {

/// Identity tags accepted by run_identity and the CLI, in catalog order:
/// lem2.1, lem2.2, thm2.3, cor2.4, thm2.5, cor2.6, thm2.7, cor2.8-nilpotent,
/// cor2.8-invertible, cor2.8-group, lem3.1, lem3.2, thm3.3, cor3.4, thm3.5,
/// cor3.6.
const std::vector<std::string>& known_identities();

/// Checks one identity on one instance. Throws StructuralError for unknown
/// tags or missing elements, HypothesisError past the rejection threshold.
/// Formula evaluations always run against the independent definition-based
/// oracle; the report carries every residual with its tolerance.
VerificationReport run_identity(const std::string& identity, const InstanceFile& inst);

// ============================================================================
// Fuzzing
// ============================================================================

struct FuzzOptions {
  std::string identity;
  int count = 100;
  std::uint64_t seed = 0;
  int dim_lo = 2;
  int dim_hi = 8;
  std::string context_kind = "full";  ///< full | upper | trunc | dsum
  std::optional<Scalar> lambda;
  /// Directory for counterexample instance files ("." by default).
  std::string save_dir = ".";
  Tolerances tolerances;
};

struct FuzzFailure {
  int ordinal = 0;
  std::string file;  ///< saved instance path, replayable through run_identity
  VerificationReport report;
};

struct FuzzSummary {
  std::string identity;
  int count = 0;
  std::uint64_t seed = 0;
  int passed = 0;
  int failed = 0;
  double max_residual = 0.0;
  double median_residual = 0.0;
  std::vector<FuzzFailure> failures;
  bool pass = true;

  nlohmann::ordered_json to_json() const;
  void print(std::ostream& os) const;
};

/// Context used by the fuzzer for a kind string and total dimension; "dsum"
/// splits into a full block and an upper triangular remainder.
AlgebraContext context_for(const std::string& kind, int dim);

/// Builds the k-th deterministic instance for an identity/fuzz run. Exposed
/// so fuzz results can be reproduced instance by instance.
InstanceFile make_fuzz_instance(const FuzzOptions& opt, int ordinal);

/// Runs `count` seeded instances through run_identity, aggregating by
/// ordinal. Deterministic: same options, same summary, byte for byte.
/// Counterexample instances are serialized for replay.
FuzzSummary run_fuzz(const FuzzOptions& opt);

}  // namespace pdrazin
