#include <CLI11.hpp>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "pdrazin/drazin.hpp"
#include "pdrazin/generators.hpp"
#include "pdrazin/identities.hpp"
#include "pdrazin/instance.hpp"
#include "pdrazin/verify.hpp"

namespace {

using namespace pdrazin;

// Exit-code contract, stable for CI:
//   0 pass, 1 identity failure, 2 input error, 3 internal numerical
//   breakdown, 4 hypothesis rejection.
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;
constexpr int kExitHypothesis = 4;

void apply_env_tolerance(Tolerances& tol) {
  const char* raw = std::getenv("PDRAZIN_TOL_ACC");
  if (!raw) return;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0.0))
    throw StructuralError("PDRAZIN_TOL_ACC must be a positive number");
  tol.tol_acc = v;
}

Scalar parse_lambda(const std::string& text) {
  std::istringstream is(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(is >> re)) throw StructuralError("bad lambda: " + text);
  if (is >> comma) {
    if (comma != ',' || !(is >> im)) throw StructuralError("bad lambda: " + text);
  }
  std::string rest;
  if (is >> rest) throw StructuralError("bad lambda: " + text);
  return Scalar{re, im};
}

std::pair<int, int> parse_dims(const std::string& text) {
  const auto sep = text.find("..");
  if (sep == std::string::npos) {
    int d = 0;
    std::istringstream is(text);
    if (!(is >> d)) throw StructuralError("bad dimension range: " + text);
    return {d, d};
  }
  int lo = 0, hi = 0;
  std::istringstream left(text.substr(0, sep)), right(text.substr(sep + 2));
  if (!(left >> lo) || !(right >> hi) || lo < 1 || hi < lo)
    throw StructuralError("bad dimension range: " + text);
  return {lo, hi};
}

std::string fmt_scalar(const Scalar& z) {
  std::ostringstream os;
  os << std::setprecision(6) << z.real();
  if (z.imag() != 0.0) {
    os << (z.imag() < 0.0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  }
  return os.str();
}

void print_matrix(std::ostream& os, const Matrix& m) {
  for (int i = 0; i < m.rows(); ++i) {
    os << "  [ ";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) os << ", ";
      os << fmt_scalar(m(i, j));
    }
    os << " ]\n";
  }
}

int cmd_compute(const std::string& file, const std::string& name, bool as_json) {
  InstanceFile inst = load_instance(file);
  apply_env_tolerance(inst.tolerances);
  const AlgebraElement& a = inst.element(name);
  const PDrazinResult result = pdrazin::pdrazin(a, inst.tolerances);
  const AlgebraElement core_nil = a * result.spectral_idempotent;
  const QuasinilpotenceDiagnostics diag =
      quasinilpotence_diagnostics(core_nil, inst.tolerances);

  if (as_json) {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["context"] = context_to_json(inst.context);
    j["drazin_index"] = result.drazin_index;
    j["radical_index"] = result.radical_index;
    j["inverse"] = matrix_to_json(result.inverse.matrix);
    j["spectral_idempotent"] = matrix_to_json(result.spectral_idempotent.matrix);
    j["quasinilpotent_part"] = {{"quasinilpotent", diag.quasinilpotent},
                                {"root_norms", diag.root_norms}};
    std::cout << j.dump(2) << "\n";
    return kExitPass;
  }

  std::cout << "element:       " << name << "\n"
            << "context:       " << inst.context.describe() << "\n"
            << "drazin index:  " << result.drazin_index << "\n"
            << "radical index: " << result.radical_index << "\n"
            << "inverse:\n";
  print_matrix(std::cout, result.inverse.matrix);
  std::cout << "spectral idempotent:\n";
  print_matrix(std::cout, result.spectral_idempotent.matrix);
  std::cout << "a*aPi quasinilpotent: " << (diag.quasinilpotent ? "yes" : "no") << "\n"
            << "  root norms |a*aPi^n|^(1/n):";
  std::cout << std::setprecision(6);
  for (double r : diag.root_norms) std::cout << " " << r;
  std::cout << "\n";
  return kExitPass;
}

int cmd_verify(const std::string& file, const std::string& identity, bool as_json) {
  InstanceFile inst = load_instance(file);
  apply_env_tolerance(inst.tolerances);
  const VerificationReport rep = run_identity(identity, inst);
  if (as_json) std::cout << rep.to_json().dump(2) << "\n";
  else rep.print(std::cout);
  return rep.pass ? kExitPass : kExitFail;
}

int cmd_fuzz(const FuzzOptions& opt, bool as_json) {
  const FuzzSummary summary = run_fuzz(opt);
  if (as_json) std::cout << summary.to_json().dump(2) << "\n";
  else summary.print(std::cout);
  return summary.pass ? kExitPass : kExitFail;
}

int cmd_gen(const std::string& kind, const std::string& context_kind, int dim,
            std::uint64_t seed, int target, const std::string& lambda_text,
            const std::string& out) {
  RandomSpec spec;
  spec.seed = seed;
  spec.target_index = target;
  spec.context = context_for(context_kind, dim);

  InstanceFile inst;
  inst.context = spec.context;

  if (kind == "index") {
    inst.elements.emplace("a", gen_with_index(spec));
  } else if (kind == "element") {
    inst.elements.emplace("a", gen_element(spec));
  } else if (kind == "commuting") {
    auto [a, b] = gen_commuting_pair(spec);
    inst.elements.emplace("a", std::move(a));
    inst.elements.emplace("b", std::move(b));
  } else if (kind == "orthogonal") {
    auto [a, b] = gen_orthogonal_pair(spec);
    inst.elements.emplace("a", std::move(a));
    inst.elements.emplace("b", std::move(b));
  } else if (kind == "triple") {
    auto elems = gen_orthogonal_n(spec, 3);
    for (std::size_t i = 0; i < elems.size(); ++i)
      inst.elements.emplace("a" + std::to_string(i + 1), std::move(elems[i]));
  } else if (kind == "lambda") {
    if (lambda_text.empty()) throw StructuralError("gen --kind lambda needs --lambda");
    spec.lambda = parse_lambda(lambda_text);
    const LambdaPair p = gen_lambda_pair(spec);
    inst.elements.emplace("a", p.a);
    inst.elements.emplace("b", p.b);
    inst.lambda = p.lambda;
  } else if (kind == "radical") {
    inst.elements.emplace("a", gen_radical_member(spec));
    RandomSpec other = spec;
    other.seed = seed + 1;
    inst.elements.emplace("b", gen_radical_member(other));
  } else {
    throw StructuralError("unknown gen kind: " + kind +
                          " (expected index, element, commuting, orthogonal, triple, "
                          "lambda or radical)");
  }

  save_instance(inst, out);
  std::cout << "wrote " << out << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-Drazin inverse calculator and identity verifier"};
  app.require_subcommand(1);

  std::string file, name, identity, out;
  bool as_json = false;

  auto* compute = app.add_subcommand("compute", "compute the p-Drazin inverse of an element");
  compute->add_option("file", file, "instance file (JSON)")->required();
  compute->add_option("name", name, "element name")->required();
  compute->add_flag("--json", as_json, "machine-readable output");

  auto* verify = app.add_subcommand("verify", "check one identity on an instance file");
  verify->add_option("file", file, "instance file (JSON)")->required();
  verify->add_option("identity", identity, "identity tag, see list-identities")->required();
  verify->add_flag("--json", as_json, "machine-readable output");

  FuzzOptions fuzz_opt;
  std::string dims = "2..8";
  std::string lambda_text;
  auto* fuzz = app.add_subcommand("fuzz", "run seeded random instances through an identity");
  fuzz->add_option("identity", fuzz_opt.identity, "identity tag")->required();
  fuzz->add_option("--count", fuzz_opt.count, "number of instances");
  fuzz->add_option("--seed", fuzz_opt.seed, "base seed");
  fuzz->add_option("--dims", dims, "dimension range LO..HI");
  fuzz->add_option("--context", fuzz_opt.context_kind, "full | upper | trunc | dsum");
  fuzz->add_option("--lambda", lambda_text, "lambda as RE or RE,IM");
  fuzz->add_option("--save-dir", fuzz_opt.save_dir, "directory for counterexample files");
  fuzz->add_flag("--json", as_json, "machine-readable output");

  std::string gen_kind = "index", gen_context = "full";
  int gen_dim = 2, gen_target = 0;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "write a deterministic instance file");
  gen->add_option("--kind", gen_kind,
                  "index | element | commuting | orthogonal | triple | lambda | radical");
  gen->add_option("--context", gen_context, "full | upper | trunc | dsum");
  gen->add_option("--dim", gen_dim, "dimension")->required();
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--target", gen_target, "target drazin index (kind index/commuting)");
  gen->add_option("--lambda", lambda_text, "lambda as RE or RE,IM");
  gen->add_option("--out", out, "output path")->required();

  auto* list = app.add_subcommand("list-identities", "print the identity tag catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (list->parsed()) {
      for (const auto& tag : known_identities()) std::cout << tag << "\n";
      return kExitPass;
    }
    if (compute->parsed()) return cmd_compute(file, name, as_json);
    if (verify->parsed()) return cmd_verify(file, identity, as_json);
    if (fuzz->parsed()) {
      std::tie(fuzz_opt.dim_lo, fuzz_opt.dim_hi) = parse_dims(dims);
      if (!lambda_text.empty()) fuzz_opt.lambda = parse_lambda(lambda_text);
      apply_env_tolerance(fuzz_opt.tolerances);
      return cmd_fuzz(fuzz_opt, as_json);
    }
    if (gen->parsed())
      return cmd_gen(gen_kind, gen_context, gen_dim, gen_seed, gen_target, lambda_text, out);
    return kExitInput;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis rejected: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const SeriesDivergenceError& e) {
    std::cerr << "series divergence: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ConsistencyError& e) {
    std::cerr << "internal consistency: " << e.what() << "\n";
    return kExitInternal;
  } catch (const StructuralError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitInternal;
  }
}
