// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ktsieve/primes.hpp"

namespace ktsieve::liouville {

/// Window statistics over all starts y in [X, 2X - h]; each window is the h
/// integers y, ..., y + h - 1.
struct IntervalStats {
  std::uint64_t X = 0;
  std::uint64_t h = 0;
  double threshold_const = 0.0;
  double exceed_fraction = 0.0;      // share of windows with |S| > c h / (log h)^{1/10}
  double mean_abs_normalized = 0.0;  // mean of |S| / h
};

/// Requires 2X <= table limit and 3 <= h <= X.
IntervalStats interval_stats(const LiouvilleTable& lt, std::uint64_t X,
                             std::uint64_t h, double c = 1.0,
                             unsigned threads = 1);

/// |sum_{j<h} lambda(y + j) e(j theta)| over the same windows, slid with a
/// complex recurrence and recomputed directly at every multiple of 2^16.
/// theta = 0 reproduces interval_stats exactly.
IntervalStats exp_sum_stats(const LiouvilleTable& lt, std::uint64_t X,
                            std::uint64_t h, double theta, double c = 1.0,
                            unsigned threads = 1);

struct ChowlaPoint {
  std::uint64_t x = 0;
  std::uint64_t shift = 0;
  double log_avg = 0.0;      // sum_{n<x} lambda(n) lambda(n+shift) / n, over log x
  double plain_avg = 0.0;    // sum_{n<=x} lambda(n) lambda(n+shift), over x
  std::int64_t plain_sum = 0;
  double log_sum = 0.0;
};

/// Requires x >= 2, max(xs) + shift <= table limit and shift >= 1.
std::vector<ChowlaPoint> chowla_scan(const LiouvilleTable& lt,
                                     std::span<const std::uint64_t> xs,
                                     std::uint64_t shift);

struct SmallFactorDensity {
  double fraction_with_factor = 0.0;
  double mean_count = 0.0;
  double mertens_sum = 0.0;  // sum_{p in I_h} 1/p
  double lower = 0.0;        // I_h = [exp((log h)^{9/10}), h]
  double upper = 0.0;
};

/// Over n in [X, 2X]: share with a prime factor in I_h, and the mean number
/// of distinct such factors. Requires h >= 16 and h < pt.limit().
SmallFactorDensity small_factor_density(const PrimeTable& pt, std::uint64_t X,
                                        std::uint64_t h, unsigned threads = 1);

/// Midpoint-rule approximation of int_T^{2T} |sum_n a_n n^{-it}|^2 dt on a
/// uniform grid no coarser than grid_step. Exploratory: the quadrature error
/// is not certified. Requires grid_step <= 1/(4 log N).
double dirichlet_mean_value(std::span<const double> coeffs, double T,
                            double grid_step, unsigned threads = 1);

std::string stats_to_csv(std::span<const IntervalStats> rows);
std::string stats_to_json(std::span<const IntervalStats> rows);
std::string chowla_to_csv(std::span<const ChowlaPoint> rows);
std::string chowla_to_json(std::span<const ChowlaPoint> rows);

}  // namespace ktsieve::liouville
