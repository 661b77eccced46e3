// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ktsieve/primes.hpp"
#include "ktsieve/sympoly.hpp"

namespace ktsieve::sieve {

/// F(t) = int_{s >= t, sum s <= 1} Ftilde(s) ds for Ftilde given as a
/// symmetric polynomial on the simplex, evaluated exactly term by term.
class SieveFunction {
 public:
  explicit SieveFunction(const SymPoly& ftilde);

  int k() const noexcept { return k_; }
  double operator()(std::span<const double> t) const;

 private:
  int k_;
  std::vector<std::vector<int>> exponents_;
  std::vector<double> coefficients_;
};

struct EmpiricalWeights {
  double expectation = 0.0;          // E #{i : n + h_i prime} under w
  double prediction = 0.0;           // ratio * log R / log x
  double ratio = 0.0;                // sum J_i / I for the polynomial
  double uniform_expectation = 0.0;  // same count under uniform weights
  double min_nu = 0.0;
  std::uint64_t divisor_tuples = 0;  // squarefree (d_i) with prod d_i < R
};

/// nu(n) = (sum over squarefree d_i | n + h_i with prod d_i < R of
/// mu(d_1...d_k) F(log d / log R))^2 for n in [x, 2x], with w = nu / sum nu.
/// Requires r <= sqrt(x), r <= 1000, x <= 1e7 and 2x + h_k below the table
/// limit. When R = 1 the divisor sum is empty and w is uniform.
EmpiricalWeights empirical_weights(std::span<const std::int64_t> tuple,
                                   std::uint64_t x, std::uint64_t r,
                                   const SymPoly& poly, const PrimeTable& table,
                                   unsigned threads = 1);

}  // namespace ktsieve::sieve
