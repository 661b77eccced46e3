// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ktsieve/primes.hpp"

namespace ktsieve::twin {

/// pi2(x) = #{p <= x : p and p + 2 prime}. Needs x + 2 < table.limit().
std::uint64_t count_twins(const PrimeTable& table, std::uint64_t x,
                          unsigned threads = 1);

struct SingularSeriesValue {
  double value = 0.0;
  std::uint64_t truncation_prime = 0;  // largest prime in the product
  double tail_bound = 0.0;             // |value - S| <= tail_bound
};

/// 2 * prod_{3 <= p <= P} (1 - 1/(p-1)^2) with P chosen so the certified
/// tail bound is at most target_abs_err.
SingularSeriesValue singular_series(double target_abs_err);

/// The product truncated after the primes p <= max_prime.
SingularSeriesValue singular_series_truncated(std::uint64_t max_prime);

/// Largest truncation point singular_series will sieve to.
inline constexpr std::uint64_t kMaxSingularSeriesPrime = 10'000'000'000ull;

/// Li2(x) = int_2^x dt / log^2 t, relative error about rel_err.
double li2(double x, double rel_err = 1e-9);

struct TwinTableRow {
  std::uint64_t x = 0;
  std::uint64_t pi2 = 0;
  double prediction = 0.0;  // S * Li2(x)
  double difference = 0.0;  // pi2 - prediction
};

std::vector<TwinTableRow> twin_table(const PrimeTable& table,
                                     std::span<const std::uint64_t> xs,
                                     const SingularSeriesValue& series,
                                     unsigned threads = 1);

/// Sum over twin pairs (p, p + 2) with p <= x of 1/p + 1/(p + 2). The prime
/// 5 belongs to two pairs and is counted twice.
double brun_partial(const PrimeTable& table, std::uint64_t x, unsigned threads = 1);

/// Twin count through the autocorrelation of the prime indicator on
/// [0, x + 2], computed with a real FFT and rounded to the nearest integer.
std::uint64_t circle_check(const PrimeTable& table, std::uint64_t x);

struct CramerEstimates {
  double naive = 0.0;      // Li2(x)
  double corrected = 0.0;  // S * Li2(x)
  double monte_carlo_mean = 0.0;
  double monte_carlo_std = 0.0;
};

/// Monte Carlo trials draw each n in [3, x + 2] independently with
/// probability 1/log n and count n <= x with n and n + 2 both drawn.
CramerEstimates cramer_estimates(double x, std::uint64_t trials,
                                 std::uint64_t seed,
                                 const SingularSeriesValue& series,
                                 unsigned threads = 1);

std::string rows_to_csv(std::span<const TwinTableRow> rows);
std::string rows_to_json(std::span<const TwinTableRow> rows);

}  // namespace ktsieve::twin
