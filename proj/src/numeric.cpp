// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#include "ktsieve/numeric.hpp"

#include <cstdio>
#include <vector>

#include "ktsieve/error.hpp"

namespace ktsieve {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::validation: return "validation";
    case ErrorCode::range: return "range";
    case ErrorCode::resource: return "resource";
    case ErrorCode::numeric: return "numeric";
    case ErrorCode::not_found: return "not-found";
    case ErrorCode::basis: return "basis";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

namespace {

struct Panel {
  double a, b, fa, fm, fb, whole, tol;
  int depth;
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double abs_tol,
                                  int max_depth) {
  QuadratureResult out;
  if (a == b) return out;

  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  out.evaluations = 3;

  // Explicit stack, left branch processed first so the summation order is
  // fixed by the integrand alone.
  std::vector<Panel> stack;
  stack.push_back({a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4 * fm + fb),
                   abs_tol, 0});
  CompensatedSum total, error;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m), rm = 0.5 * (m + p.b);
    const double flm = f(lm), frm = f(rm);
    out.evaluations += 2;
    const double left = (m - p.a) / 6.0 * (p.fa + 4 * flm + p.fm);
    const double right = (p.b - m) / 6.0 * (p.fm + 4 * frm + p.fb);
    const double delta = left + right - p.whole;
    if (std::fabs(delta) <= 15.0 * p.tol) {
      total.add(left + right + delta / 15.0);
      error.add(std::fabs(delta) / 15.0);
      continue;
    }
    if (p.depth >= max_depth || !std::isfinite(delta)) {
      fail(ErrorCode::numeric,
           "adaptive quadrature did not converge near t=" + std::to_string(m));
    }
    stack.push_back({m, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol, p.depth + 1});
    stack.push_back({p.a, m, p.fa, flm, p.fm, left, 0.5 * p.tol, p.depth + 1});
  }
  out.value = total.value();
  out.error_estimate = error.value();
  return out;
}

std::string format_real(double x) {
  if (x == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace ktsieve
