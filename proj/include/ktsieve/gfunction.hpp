// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace ktsieve::sieve {

/// G(t) = c sqrt(L) / (1 + t L) on 0 <= t < T and 0 beyond, with L = k log k,
/// T = k^{-3/4} and c > 0 chosen so that int G^2 = 1.
struct GSpec {
  double k = 0.0;
  double log_scale = 0.0;  // L
  double support = 0.0;    // T
  double c = 0.0;

  double operator()(double t) const noexcept;
};

/// Requires k >= 2.
GSpec make_gspec(double k);

struct GConstraints {
  double m1_int = 0.0;  // int t G^2
  double norm = 0.0;    // int G^2
  double m2_int = 0.0;  // k int t^2 G^2
  double l1_sq = 0.0;   // k (int G)^2
};

/// Requires k >= 16. Adaptive quadrature in u = log(1 + tL), where G^2 dt = c^2 e^{-u} du.
GConstraints g_constraints(const GSpec& spec, double abs_tol = 1e-13);

/// The same four quantities in closed form.
GConstraints g_constraints_exact(const GSpec& spec);

struct MonteCarloResult {
  double estimate = 0.0;
  double std_err = 0.0;
};

/// Estimates P(Z_1 + ... + Z_k < 1) for Z_i i.i.d. with density G^2, drawn
/// by inverting the distribution function. Samples are split into fixed
/// blocks with independent streams, so the result ignores the thread count.
MonteCarloResult monte_carlo_I(const GSpec& spec, std::uint64_t samples,
                               std::uint64_t seed, unsigned threads = 1);

/// Inverse distribution function of G^2 on [0, T].
double g_quantile(const GSpec& spec, double u) noexcept;

}  // namespace ktsieve::sieve
