#pragma once

// Shared test helpers, chiefly an oracle for the oracle: elements assembled
// as a = S (C (+) N) S^-1 from an invertible diagonal C, a nilpotent shift
// block N and an exactly invertible integer similarity S. The inverse
// a^+ = S (C^-1 (+) 0) S^-1 is then a closed form that involves no rank
// decision at all, so it cross-checks the SVD-based engine independently.

#include <complex>
#include <cstdlib>
#include <string>
#include <vector>

#include <pdrazin/algebra.hpp>

namespace testsupport {

using pdrazin::AlgebraContext;
using pdrazin::AlgebraElement;
using pdrazin::Matrix;
using pdrazin::Scalar;

struct KnownDrazin {
  AlgebraElement a;
  AlgebraElement drazin;  // closed form, no rank decisions involved
  int index = 0;          // size of the nilpotent block (0 when absent)
};

// Unit upper triangular with a deterministic -1/0/+1 strict upper part.
// T = S - I is nilpotent, so S^-1 = I - T + T^2 - ... is an exact finite
// sum with small integer entries; both directions are float-exact.
inline void unimodular_upper(int n, unsigned salt, Matrix& s, Matrix& sinv) {
  Matrix t = Matrix::Zero(n, n);
  unsigned state = salt * 2654435761u + 1u;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      state = state * 1664525u + 1013904223u;
      const int pick = static_cast<int>((state >> 16) % 3u);
      t(i, j) = Scalar(pick - 1, 0.0);
    }
  s = Matrix::Identity(n, n) + t;
  sinv = Matrix::Identity(n, n);
  Matrix tp = t;
  double sign = -1.0;
  for (int k = 1; k < n; ++k) {
    sinv += sign * tp;
    tp = tp * t;
    sign = -sign;
  }
}

// Fixed well-separated invertible diagonal entries; reciprocals stay exact
// enough (one rounding each) that comparisons at 1e-12 are comfortable.
inline Scalar core_entry(int i) {
  static const Scalar pool[] = {{2.0, 0.0},  {-3.0, 0.0}, {1.0, 2.0},
                                {-1.0, -1.0}, {4.0, 0.0},  {0.5, -1.5}};
  return pool[i % 6];
}

// a = S (diag (+) shift) S^-1 in full_matrix(n_core + n_nilp); for the
// upper_triangular context only the triangular similarity is applied, which
// preserves the pattern.
inline KnownDrazin known_decomposition(const AlgebraContext& ctx, int n_core, int n_nilp,
                                       unsigned salt, bool lower_too = true) {
  const int n = n_core + n_nilp;
  Matrix d = Matrix::Zero(n, n);
  Matrix dinv = Matrix::Zero(n, n);
  for (int i = 0; i < n_core; ++i) {
    d(i, i) = core_entry(static_cast<int>(salt) + i);
    dinv(i, i) = 1.0 / d(i, i);
  }
  for (int i = n_core; i + 1 < n; ++i) d(i, i + 1) = Scalar(1.0, 0.0);

  Matrix u, uinv;
  unimodular_upper(n, salt, u, uinv);
  Matrix s = u, sinv = uinv;
  if (lower_too && ctx.kind() == AlgebraContext::Kind::full_matrix) {
    Matrix l, linv;
    unimodular_upper(n, salt ^ 0x9e3779b9u, l, linv);
    l.transposeInPlace();
    linv.transposeInPlace();
    s = l * u;          // inverse is exactly uinv * linv
    sinv = uinv * linv;
  }

  return {pdrazin::make_element(ctx, s * d * sinv),
          pdrazin::make_element(ctx, s * dinv * sinv), n_nilp};
}

inline double gap(const AlgebraElement& x, const AlgebraElement& y) {
  return pdrazin::norm(x - y) / std::max({1.0, pdrazin::norm(x), pdrazin::norm(y)});
}

// Path plumbing for tests that shell out to the CLI or read golden files.
inline std::string env_or(const char* name, const char* fallback) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string(fallback);
}

inline std::string cli_path() { return env_or("PDRAZIN_CLI", "./build/tools/pdrazin"); }
inline std::string data_dir() { return env_or("PDRAZIN_DATA", "./data"); }

}  // namespace testsupport
