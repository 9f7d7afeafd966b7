#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace pdrazin {

/// Outcome of checking one identity (or one axiom bundle) on one instance.
/// Carries every residual together with the tolerance it was compared
/// against, so pass/fail can be re-derived offline from the JSON alone.
struct VerificationReport {
  std::string identity;

  /// Residuals of the identity hypotheses (commutation, orthogonality, ...).
  std::map<std::string, double> hypothesis_residuals;

  /// Residuals of each formula evaluated against its oracle or counterpart.
  std::map<std::string, double> formula_residuals;

  /// max over formula_residuals; 0 when the identity has no formula part.
  double formula_residual = 0.0;

  /// p-Drazin axiom residuals of formula outputs (and of oracle results).
  std::map<std::string, double> axiom_residuals;

  /// Number of accumulated terms per terminating series, by series name.
  std::map<std::string, int> series_terms;

  /// Name -> threshold for every tolerance consulted by this check.
  std::map<std::string, double> tolerances_used;

  bool pass = false;

  /// Marginal-hypothesis warnings and documentation notes (e.g. the residual
  /// of a misprinted textbook form evaluated alongside the corrected one).
  std::vector<std::string> notes;

  nlohmann::ordered_json to_json() const;

  /// Human-readable rendering, 6 significant digits.
  void print(std::ostream& os) const;
};

}  // namespace pdrazin
