#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <pdrazin/drazin.hpp>
#include <pdrazin/instance.hpp>
#include <pdrazin/verify.hpp>

#include "support.hpp"

using namespace pdrazin;
using testsupport::cli_path;
using testsupport::data_dir;
using testsupport::gap;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// popen with 2>&1 so diagnostics land in the captured stream too.
RunResult run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string golden(const std::string& name) { return data_dir() + "/" + name; }

}  // namespace

TEST_CASE("instance round-trip preserves the mathematical content") {
  InstanceFile inst;
  inst.context = AlgebraContext::upper_triangular(3);
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = Scalar(0.125, -3.0);  // binary-exact values round-trip bit for bit
  m(0, 2) = Scalar(1.0 / 3.0, 2e-7);
  inst.elements.emplace("a", make_element(inst.context, m));
  inst.lambda = Scalar(0.5, -0.25);
  inst.policy.max_terms = 17;  // settings are not part of the serialized payload

  const std::string path = "roundtrip_tmp.json";
  save_instance(inst, path);
  const InstanceFile back = load_instance(path);
  std::remove(path.c_str());

  CHECK(back.context == inst.context);
  CHECK(back.element("a").matrix == inst.element("a").matrix);
  REQUIRE(back.lambda.has_value());
  CHECK(*back.lambda == *inst.lambda);
  // saved files carry only the instance itself, so a replay picks its policy
  // and tolerances from the environment it runs under
  CHECK(back.policy.max_terms == SeriesPolicy{}.max_terms);
  CHECK(back.tolerances.tol_acc == Tolerances{}.tol_acc);
}

TEST_CASE("policy and tolerances load from hand-written files") {
  const std::string path = "settings_tmp.json";
  std::ofstream(path) << R"({
    "context": {"kind": "full", "dim": 2},
    "elements": {"a": [[1, 0], [0, 1]]},
    "policy": {"max_terms": 17, "term_tol": 1e-10},
    "tolerances": {"tol_acc": 1e-7}
  })";
  const InstanceFile inst = load_instance(path);
  std::remove(path.c_str());

  CHECK(inst.policy.max_terms == 17);
  CHECK(inst.policy.term_tol == 1e-10);
  CHECK(inst.tolerances.tol_acc == 1e-7);
  CHECK(inst.tolerances.tol_res == Tolerances{}.tol_res);
}

TEST_CASE("instance validation errors") {
  CHECK_THROWS_AS(load_instance("no_such_file.json"), StructuralError);

  const auto write_and_load = [](const std::string& body) {
    const std::string path = "invalid_tmp.json";
    std::ofstream(path) << body;
    auto cleanup = [&] { std::remove(path.c_str()); };
    try {
      load_instance(path);
    } catch (...) {
      cleanup();
      throw;
    }
    cleanup();
  };

  CHECK_THROWS_AS(write_and_load("not json at all"), StructuralError);
  CHECK_THROWS_AS(write_and_load(R"({"elements": {}})"), StructuralError);
  CHECK_THROWS_AS(write_and_load(R"({"context": {"kind": "banach"}, "elements": {}})"),
                  StructuralError);
  // wrong matrix size for the declared context
  CHECK_THROWS_AS(
      write_and_load(R"({"context": {"kind": "full", "dim": 2}, "elements": {"a": [[1]]}})"),
      StructuralError);
  // pattern violation: below-diagonal entry in an upper context
  CHECK_THROWS_AS(write_and_load(
                      R"({"context": {"kind": "upper", "dim": 2},
                          "elements": {"a": [[1, 0], [1, 1]]}})"),
                  StructuralError);
}

TEST_CASE("golden files agree with frozen engine results") {
  SUBCASE("jordan block, full context") {
    const auto inst = load_instance(golden("jordan2_full.json"));
    const auto r = pdrazin::pdrazin(inst.element("a"));
    CHECK(r.drazin_index == 2);
    CHECK(norm(r.inverse) == 0.0);
    CHECK(r.radical_index == 2);
  }
  SUBCASE("jordan block, upper context") {
    const auto inst = load_instance(golden("jordan2_upper.json"));
    CHECK(pdrazin::pdrazin(inst.element("a")).radical_index == 1);
  }
  SUBCASE("truncated polynomial nilpotent of full index") {
    const auto inst = load_instance(golden("trunc_nilpotent.json"));
    const auto r = pdrazin::pdrazin(inst.element("a"));
    CHECK(r.drazin_index == 4);
    CHECK(norm(r.inverse) == 0.0);
    CHECK(r.radical_index == 1);
  }
  SUBCASE("orthogonal pair verifies") {
    const auto rep = run_identity("thm2.5", load_instance(golden("orthogonal_pair.json")));
    CHECK(rep.pass);
    CHECK(rep.formula_residuals.at("sum_formula") < 1e-12);
  }
  SUBCASE("lambda pair verifies across the section tags") {
    const auto inst = load_instance(golden("lambda_pair.json"));
    for (const char* tag : {"lem3.1", "lem3.2", "thm3.3", "cor3.4", "thm3.5", "cor3.6"}) {
      CAPTURE(tag);
      CHECK(run_identity(tag, inst).pass);
    }
  }
  SUBCASE("shipped specialization counterexamples document the misprints") {
    const auto nil = run_identity("cor2.8-nilpotent",
                                  load_instance(golden("cor28_nilpotent_cex.json")));
    CHECK(nil.pass);  // corrected form
    CHECK(nil.formula_residuals.at("printed_form(doc)") >= 1e-1);

    const auto inv = run_identity("cor2.8-invertible",
                                  load_instance(golden("cor28_invertible_cex.json")));
    CHECK(inv.pass);
    CHECK(inv.formula_residuals.at("printed_form(doc)") >= 1e-1);
  }
}

TEST_CASE("unknown identity tag is structural") {
  const auto inst = load_instance(golden("jordan2_full.json"));
  CHECK_THROWS_AS(run_identity("thm9.9", inst), StructuralError);
}

TEST_CASE("cli exit codes") {
  SUBCASE("pass is 0") {
    const auto r = run_cli("verify " + golden("orthogonal_pair.json") + " thm2.5");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);
  }
  SUBCASE("identity failure is 1") {
    // squeeze the acceptance tolerance below rounding level via environment
    FILE* pipe = popen(("PDRAZIN_TOL_ACC=1e-20 " + cli_path() + " verify " +
                        golden("orthogonal_pair.json") + " thm2.5 2>&1")
                           .c_str(),
                       "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::fread(buf, 1, sizeof buf, pipe)) {
    }
    const int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 1);
  }
  SUBCASE("input errors are 2") {
    CHECK(run_cli("verify no_such_file.json thm2.5").exit_code == 2);
    CHECK(run_cli("verify " + golden("jordan2_full.json") + " thm9.9").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
  }
  SUBCASE("hypothesis rejection is 4") {
    const auto r = run_cli("verify " + golden("noncommuting_pair.json") + " thm2.7");
    CHECK(r.exit_code == 4);
  }
}

TEST_CASE("cli compute and gen round-trips") {
  const auto c = run_cli("compute " + golden("jordan2_full.json") + " a");
  CHECK(c.exit_code == 0);
  CHECK(c.output.find("drazin index:  2") != std::string::npos);

  const std::string out = "gen_tmp.json";
  const auto g = run_cli("gen --kind lambda --context full --dim 3 --seed 11 --lambda -1 --out " +
                         out);
  CHECK(g.exit_code == 0);
  const auto v = run_cli("verify " + out + " thm3.3");
  CHECK(v.exit_code == 0);
  std::remove(out.c_str());
}

TEST_CASE("fuzz is deterministic and counterexamples replay") {
  const std::string args = "fuzz thm2.5 --count 6 --seed 17 --dims 2..5 --context dsum --json";
  const auto r1 = run_cli(args);
  const auto r2 = run_cli(args);
  CHECK(r1.exit_code == 0);
  CHECK(r1.output == r2.output);  // byte identical

  // independent of the CLI process: library-level fuzz instances replay to
  // the exact same report through run_identity
  FuzzOptions opt;
  opt.identity = "thm2.7";
  opt.count = 4;
  opt.seed = 99;
  opt.dim_lo = 2;
  opt.dim_hi = 4;
  opt.context_kind = "upper";
  for (int ordinal = 0; ordinal < opt.count; ++ordinal) {
    const auto inst = make_fuzz_instance(opt, ordinal);
    const auto a = run_identity(opt.identity, inst);
    const auto b = run_identity(opt.identity, inst);
    CHECK(a.to_json() == b.to_json());
    CHECK(a.pass);
  }
}
