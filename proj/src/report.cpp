#include "pdrazin/report.hpp"

#include <iomanip>
#include <ostream>

namespace pdrazin {

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["identity"] = identity;
  j["pass"] = pass;
  j["hypothesis_residuals"] = hypothesis_residuals;
  j["formula_residual"] = formula_residual;
  j["formula_residuals"] = formula_residuals;
  j["axiom_residuals"] = axiom_residuals;
  j["series_terms"] = series_terms;
  j["tolerances_used"] = tolerances_used;
  j["notes"] = notes;
  return j;
}

void VerificationReport::print(std::ostream& os) const {
  const auto flags = os.flags();
  os << std::setprecision(6);
  os << "identity: " << identity << "\n";
  os << "result:   " << (pass ? "PASS" : "FAIL") << "\n";
  if (!hypothesis_residuals.empty()) {
    os << "hypotheses:\n";
    for (const auto& [name, r] : hypothesis_residuals)
      os << "  " << name << " = " << r << "\n";
  }
  if (!formula_residuals.empty()) {
    os << "formulas:\n";
    for (const auto& [name, r] : formula_residuals)
      os << "  " << name << " = " << r << "\n";
    os << "  (max = " << formula_residual << ")\n";
  }
  if (!axiom_residuals.empty()) {
    os << "axioms:\n";
    for (const auto& [name, r] : axiom_residuals)
      os << "  " << name << " = " << r << "\n";
  }
  if (!series_terms.empty()) {
    os << "series terms:\n";
    for (const auto& [name, t] : series_terms)
      os << "  " << name << " = " << t << "\n";
  }
  if (!tolerances_used.empty()) {
    os << "tolerances:\n";
    for (const auto& [name, t] : tolerances_used)
      os << "  " << name << " = " << t << "\n";
  }
  for (const auto& note : notes) os << "note: " << note << "\n";
  os.flags(flags);
}

}  // namespace pdrazin
