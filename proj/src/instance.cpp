#include "pdrazin/instance.hpp"

#include <fstream>

namespace pdrazin {

using nlohmann::json;
using nlohmann::ordered_json;

const AlgebraElement& InstanceFile::element(const std::string& name) const {
  auto it = elements.find(name);
  if (it == elements.end())
    throw StructuralError("instance has no element named '" + name + "'");
  return it->second;
}

// ============================================================================
// Context
// ============================================================================

ordered_json context_to_json(const AlgebraContext& ctx) {
  ordered_json j;
  switch (ctx.kind()) {
    case AlgebraContext::Kind::full_matrix: j["kind"] = "full"; break;
    case AlgebraContext::Kind::upper_triangular: j["kind"] = "upper"; break;
    case AlgebraContext::Kind::truncated_polynomial: j["kind"] = "trunc"; break;
    case AlgebraContext::Kind::direct_sum: j["kind"] = "dsum"; break;
  }
  if (ctx.kind() == AlgebraContext::Kind::direct_sum) {
    ordered_json arr = ordered_json::array();
    for (const auto& s : ctx.summands()) arr.push_back(context_to_json(s));
    j["summands"] = arr;
  } else {
    j["dim"] = ctx.dim();
  }
  return j;
}

AlgebraContext context_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw StructuralError("context must be an object with a string 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "dsum") {
    if (!j.contains("summands") || !j.at("summands").is_array())
      throw StructuralError("dsum context needs a 'summands' array");
    std::vector<AlgebraContext> parts;
    for (const auto& s : j.at("summands")) parts.push_back(context_from_json(s));
    return AlgebraContext::direct_sum(std::move(parts));
  }
  if (!j.contains("dim") || !j.at("dim").is_number_integer())
    throw StructuralError("context needs an integer 'dim'");
  const int dim = j.at("dim").get<int>();
  if (dim < 1 || dim > 64) throw StructuralError("context dim out of range");
  if (kind == "full") return AlgebraContext::full_matrix(dim);
  if (kind == "upper") return AlgebraContext::upper_triangular(dim);
  if (kind == "trunc") return AlgebraContext::truncated_polynomial(dim);
  throw StructuralError("unknown context kind '" + kind + "'");
}

// ============================================================================
// Matrices and scalars
// ============================================================================

namespace {

ordered_json complex_to_json(const Scalar& c) {
  return ordered_json::array({c.real(), c.imag()});
}

Scalar complex_from_json(const json& j) {
  if (j.is_number()) return Scalar{j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Scalar{j[0].get<double>(), j[1].get<double>()};
  throw StructuralError("complex entry must be [re, im] (or a plain number)");
}

}  // namespace

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw StructuralError("matrix must be a nested array");
  const auto rows = j.size();
  const auto cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw StructuralError("matrix rows must be nonempty arrays");
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw StructuralError("matrix rows have inconsistent lengths");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

// ============================================================================
// Instances
// ============================================================================

ordered_json instance_to_json(const InstanceFile& inst) {
  ordered_json j;
  j["context"] = context_to_json(inst.context);
  ordered_json elems = ordered_json::object();
  for (const auto& [name, elem] : inst.elements) elems[name] = matrix_to_json(elem.matrix);
  j["elements"] = elems;
  if (inst.lambda) j["lambda"] = complex_to_json(*inst.lambda);
  return j;
}

InstanceFile instance_from_json(const json& j) {
  if (!j.is_object()) throw StructuralError("instance must be a JSON object");
  if (!j.contains("context")) throw StructuralError("instance needs a 'context'");

  InstanceFile inst;
  inst.context = context_from_json(j.at("context"));

  if (j.contains("lambda")) inst.lambda = complex_from_json(j.at("lambda"));

  if (j.contains("policy")) {
    const auto& p = j.at("policy");
    if (p.contains("max_terms")) inst.policy.max_terms = p.at("max_terms").get<int>();
    if (p.contains("term_tol")) inst.policy.term_tol = p.at("term_tol").get<double>();
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (t.contains("tol_res")) inst.tolerances.tol_res = t.at("tol_res").get<double>();
    if (t.contains("tol_acc")) inst.tolerances.tol_acc = t.at("tol_acc").get<double>();
    if (t.contains("tol_rad")) inst.tolerances.tol_rad = t.at("tol_rad").get<double>();
  }

  if (!j.contains("elements") || !j.at("elements").is_object())
    throw StructuralError("instance needs an 'elements' object");
  for (const auto& [name, mat] : j.at("elements").items()) {
    AlgebraElement e = make_element(inst.context, matrix_from_json(mat));
    require_valid_element(e, inst.tolerances.tol_pattern);
    inst.elements.emplace(name, std::move(e));
  }
  return inst;
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open instance file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw StructuralError("malformed JSON in " + path + ": " + e.what());
  }
  return instance_from_json(j);
}

void save_instance(const InstanceFile& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw StructuralError("cannot write instance file: " + path);
  out << instance_to_json(inst).dump(2) << "\n";
}

}  // namespace pdrazin
