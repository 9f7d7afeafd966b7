#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "pdrazin/algebra.hpp"
#include "pdrazin/drazin.hpp"

namespace pdrazin {

/// On-disk problem instance. JSON schema (documented in the README):
///   context   {"kind": "full|upper|trunc|dsum", "dim": n}
///             ("summands": [context, ...] instead of "dim" for dsum)
///   elements  name -> row-major nested arrays, complex entries as [re, im]
///   lambda    [re, im], optional
///   policy    {"max_terms": int, "term_tol": real}, optional
///   tolerances {"tol_res": ..., "tol_acc": ..., "tol_rad": ...}, optional
/// Pair commands require names "a", "b"; n-ary commands require "a1".."an".
struct InstanceFile {
  AlgebraContext context = AlgebraContext::full_matrix(2);
  std::map<std::string, AlgebraElement> elements;
  std::optional<Scalar> lambda;
  SeriesPolicy policy;
  Tolerances tolerances;

  const AlgebraElement& element(const std::string& name) const;
  bool has_element(const std::string& name) const { return elements.count(name) != 0; }
};

nlohmann::ordered_json context_to_json(const AlgebraContext& ctx);
AlgebraContext context_from_json(const nlohmann::json& j);

nlohmann::ordered_json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::ordered_json instance_to_json(const InstanceFile& inst);

/// Parses and validates: every element must match the context pattern.
/// Throws StructuralError on malformed input.
InstanceFile instance_from_json(const nlohmann::json& j);

InstanceFile load_instance(const std::string& path);
void save_instance(const InstanceFile& inst, const std::string& path);

}  // namespace pdrazin
