// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ktsieve/forms.hpp"

namespace ktsieve::sieve {

struct EigenOptions {
  /// Working precision of the reduction. Retried at double precision (up to
  /// max_precision_bits) when the factorization loses definiteness.
  unsigned precision_bits = 256;
  unsigned max_precision_bits = 2048;
  /// Lanczos stops once successive Ritz values agree to this relative
  /// tolerance and the Ritz residual is below it.
  double tolerance = 1e-12;
};

/// Largest generalized eigenpair of (m1, m2).
struct RayleighResult {
  double ratio = 0.0;
  /// f^T m1 f / f^T m2 f evaluated exactly for the rounded coefficient
  /// vector; a rigorous lower bound for the supremum over span(basis).
  Rational certified_ratio;
  /// Normalized so that max |f_i| = 1.
  std::vector<double> coefficients;
  /// ||m1 f - ratio m2 f|| / ||m2 f||
  double residual = 0.0;
  int degree = -1;
  std::size_t basis_size = 0;
  std::string family;
  std::size_t iterations = 0;
  unsigned precision_bits = 0;
};

/// Symmetric-definite reduction: Cholesky of the diagonally scaled m2, then
/// Lanczos with full reorthogonalization on L^{-1} m1 L^{-T}. Throws
/// Error(basis) naming the pivot when m2 is not positive definite.
RayleighResult max_ratio(const RationalMatrix& m1, const RationalMatrix& m2,
                         const EigenOptions& options = {});
RayleighResult max_ratio(const QuadraticForms& forms,
                         const EigenOptions& options = {});

/// assemble_forms followed by max_ratio.
RayleighResult mk_lower_bound(int k, int degree, const BasisFamily& family,
                              const AssemblyOptions& assembly = {},
                              const EigenOptions& eigen = {});

struct EscalationStep {
  std::string family;
  int degree = 0;
  std::size_t basis_size = 0;
  double ratio = 0.0;
  bool certified_above_target = false;
};

struct EscalationResult {
  bool reached = false;
  double target = 0.0;
  std::vector<EscalationStep> steps;
  RayleighResult best;  // the first result whose certified ratio beats target
};

/// For each family in order, raises the degree from `start_degree` in steps
/// of `degree_step` until the certified ratio exceeds `target`, the degree
/// passes `max_degree`, or the ratio stalls (gain below `stall_gain` over
/// `stall_window` consecutive steps). Later families start where the
/// previous one stopped.
struct EscalationOptions {
  int start_degree = 1;
  int degree_step = 1;
  int max_degree = 30;
  double stall_gain = 1e-3;
  int stall_window = 3;
};

EscalationResult mk_escalate(int k, double target,
                             const std::vector<BasisFamily>& families,
                             const EscalationOptions& options = {},
                             const AssemblyOptions& assembly = {},
                             const EigenOptions& eigen = {});

/// Expected number of prime shifts ratio * theta, and the guaranteed count
/// m: the largest integer with m - 1 < ratio * theta. The conclusion "at least
/// m of the shifts are prime infinitely often" is meaningful when m >= 2.
struct ExpectedPrimes {
  double expectation = 0.0;
  int guaranteed = 0;
  bool conclusive = false;  // guaranteed >= 2
};

/// theta = log R / log X, restricted to (0, 1/4].
ExpectedPrimes expected_primes(double ratio, double theta);
/// Exact variant used on certified ratios.
ExpectedPrimes expected_primes(const Rational& ratio, const Rational& theta);

}  // namespace ktsieve::sieve
