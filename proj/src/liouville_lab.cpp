// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#include "ktsieve/liouville_lab.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "ktsieve/error.hpp"
#include "ktsieve/numeric.hpp"
#include "ktsieve/parallel.hpp"

namespace ktsieve::liouville {

namespace {

constexpr std::uint64_t kRecompute = std::uint64_t{1} << 16;

void check_window_args(const LiouvilleTable& lt, std::uint64_t X, std::uint64_t h) {
  if (h < 3 || h > X) fail(ErrorCode::range, "need 3 <= h <= X");
  if (2 * X > lt.limit()) {
    fail(ErrorCode::range, "2X = " + std::to_string(2 * X) +
                               " exceeds the Liouville table limit " +
                               std::to_string(lt.limit()));
  }
}

double threshold(std::uint64_t h, double c) {
  return c * static_cast<double>(h) / std::pow(std::log(static_cast<double>(h)), 0.1);
}

struct WindowPartial {
  std::uint64_t windows = 0;
  std::uint64_t exceed = 0;
  double abs_sum = 0.0;  // integer valued for theta = 0
  CompensatedSum abs_comp;
};

// Chunks are [m 2^16, (m+1) 2^16) intersected with the window starts.
template <typename Chunk>
IntervalStats run_windows(std::uint64_t X, std::uint64_t h, double c, unsigned threads,
                          Chunk&& chunk) {
  const std::uint64_t first = X, last = 2 * X - h;
  const std::uint64_t m0 = first / kRecompute, m1 = last / kRecompute;
  std::vector<WindowPartial> parts(m1 - m0 + 1);
  parallel_for(parts.size(), threads, [&](std::size_t i) {
    const std::uint64_t lo = std::max(first, (m0 + i) * kRecompute);
    const std::uint64_t hi = std::min(last + 1, (m0 + i + 1) * kRecompute);
    chunk(lo, hi, parts[i]);
  });
  IntervalStats out;
  out.X = X;
  out.h = h;
  out.threshold_const = c;
  std::uint64_t windows = 0, exceed = 0;
  CompensatedSum abs_total;
  for (const auto& p : parts) {
    windows += p.windows;
    exceed += p.exceed;
    abs_total.add(p.abs_comp);
  }
  out.exceed_fraction = static_cast<double>(exceed) / static_cast<double>(windows);
  out.mean_abs_normalized =
      abs_total.value() / static_cast<double>(windows) / static_cast<double>(h);
  return out;
}

}  // namespace

IntervalStats interval_stats(const LiouvilleTable& lt, std::uint64_t X,
                             std::uint64_t h, double c, unsigned threads) {
  check_window_args(lt, X, h);
  const double thr = threshold(h, c);
  return run_windows(X, h, c, threads, [&](std::uint64_t lo, std::uint64_t hi,
                                           WindowPartial& p) {
    std::int64_t s = 0;
    for (std::uint64_t n = lo; n < lo + h; ++n) s += lt(n);
    for (std::uint64_t y = lo; y < hi; ++y) {
      if (y > lo) s += lt(y + h - 1) - lt(y - 1);
      const double a = static_cast<double>(s < 0 ? -s : s);
      ++p.windows;
      if (a > thr) ++p.exceed;
      p.abs_comp.add(a);
    }
  });
}

IntervalStats exp_sum_stats(const LiouvilleTable& lt, std::uint64_t X,
                            std::uint64_t h, double theta, double c,
                            unsigned threads) {
  check_window_args(lt, X, h);
  if (!(theta >= 0.0 && theta < 1.0)) fail(ErrorCode::range, "theta must lie in [0, 1)");
  const double thr = threshold(h, c);
  const double w = 2.0 * std::numbers::pi * theta;
  const std::complex<double> back(std::cos(w), -std::sin(w));  // e(-theta)
  const double wh = w * static_cast<double>(h);
  const std::complex<double> head(std::cos(wh), std::sin(wh));  // e(h theta)
  return run_windows(X, h, c, threads, [&](std::uint64_t lo, std::uint64_t hi,
                                           WindowPartial& p) {
    // S(y) = sum_{j<h} lambda(y+j) e(j theta);
    // S(y+1) = e(-theta) (S(y) - lambda(y) + lambda(y+h) e(h theta)).
    std::complex<double> s = 0.0;
    for (std::uint64_t j = 0; j < h; ++j) {
      const double a = w * static_cast<double>(j);
      s += static_cast<double>(lt(lo + j)) *
           (theta == 0.0 ? std::complex<double>(1.0, 0.0)
                         : std::complex<double>(std::cos(a), std::sin(a)));
    }
    for (std::uint64_t y = lo; y < hi; ++y) {
      if (y > lo) {
        s = back * (s - static_cast<double>(lt(y - 1)) +
                    static_cast<double>(lt(y + h - 1)) * head);
      }
      const double a = std::abs(s);
      ++p.windows;
      if (a > thr) ++p.exceed;
      p.abs_comp.add(a);
    }
  });
}

std::vector<ChowlaPoint> chowla_scan(const LiouvilleTable& lt,
                                     std::span<const std::uint64_t> xs,
                                     std::uint64_t shift) {
  if (shift < 1) fail(ErrorCode::validation, "shift must be at least 1");
  std::vector<ChowlaPoint> out(xs.size());
  if (xs.empty()) return out;
  for (auto x : xs) {
    if (x < 2) fail(ErrorCode::range, "chowla_scan needs x >= 2");
  }
  const std::uint64_t xmax = *std::max_element(xs.begin(), xs.end());
  if (xmax + shift > lt.limit()) {
    fail(ErrorCode::range, "x + shift exceeds the Liouville table limit");
  }
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  std::int64_t plain = 0;
  CompensatedSum logs;
  double log_below = 0.0;  // sum over n < x, captured when n reaches x
  std::uint64_t n = 1;
  for (std::size_t idx : order) {
    const std::uint64_t x = xs[idx];
    for (; n <= x; ++n) {
      const int v = lt(n) * lt(n + shift);
      if (n == x) log_below = logs.value();
      plain += v;
      logs.add(static_cast<double>(v) / static_cast<double>(n));
    }
    ChowlaPoint p;
    p.x = x;
    p.shift = shift;
    p.plain_sum = plain;
    p.log_sum = log_below;
    p.plain_avg = static_cast<double>(plain) / static_cast<double>(x);
    p.log_avg = p.log_sum / std::log(static_cast<double>(x));
    out[idx] = p;
  }
  return out;
}

SmallFactorDensity small_factor_density(const PrimeTable& pt, std::uint64_t X,
                                        std::uint64_t h, unsigned threads) {
  if (h < 16) fail(ErrorCode::validation, "need h >= 16 so that I_h is nonempty");
  if (h >= pt.limit()) fail(ErrorCode::range, "prime table must extend beyond h");
  if (X < 1) fail(ErrorCode::validation, "need X >= 1");
  SmallFactorDensity out;
  out.lower = std::exp(std::pow(std::log(static_cast<double>(h)), 0.9));
  out.upper = static_cast<double>(h);
  std::vector<std::uint64_t> primes;
  for (auto p = static_cast<std::uint64_t>(std::ceil(out.lower)); p <= h; ++p) {
    if (pt.is_prime(p)) primes.push_back(p);
  }
  CompensatedSum mertens;
  for (auto p : primes) mertens.add(1.0 / static_cast<double>(p));
  out.mertens_sum = mertens.value();

  constexpr std::uint64_t kChunk = 1 << 16;
  const std::uint64_t count = X + 1;
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> with(chunks, 0), total(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::uint64_t lo = X + c * kChunk;
    const std::uint64_t hi = std::min(2 * X + 1, lo + kChunk);
    std::vector<std::uint16_t> cnt(hi - lo, 0);
    for (auto p : primes) {
      for (std::uint64_t m = (lo + p - 1) / p * p; m < hi; m += p) ++cnt[m - lo];
    }
    for (auto v : cnt) {
      with[c] += v > 0 ? 1 : 0;
      total[c] += v;
    }
  });
  const double n = static_cast<double>(count);
  out.fraction_with_factor =
      static_cast<double>(std::accumulate(with.begin(), with.end(), std::uint64_t{0})) / n;
  out.mean_count =
      static_cast<double>(std::accumulate(total.begin(), total.end(), std::uint64_t{0})) / n;
  return out;
}

double dirichlet_mean_value(std::span<const double> coeffs, double T,
                            double grid_step, unsigned threads) {
  const std::size_t N = coeffs.size();
  if (N < 1) fail(ErrorCode::validation, "need at least one coefficient");
  if (!(T > 0.0) || !(grid_step > 0.0)) fail(ErrorCode::validation, "T and grid_step must be positive");
  for (double a : coeffs) {
    if (!(a >= -1.0 && a <= 1.0)) fail(ErrorCode::validation, "coefficients must lie in [-1, 1]");
  }
  if (N > 1 && grid_step > 1.0 / (4.0 * std::log(static_cast<double>(N)))) {
    fail(ErrorCode::validation, "grid_step must be at most 1/(4 log N)");
  }
  const double points = std::ceil(T / grid_step);
  if (points * static_cast<double>(N) > 2e10) fail(ErrorCode::resource, "grid too fine for N");
  const auto M = static_cast<std::uint64_t>(points);
  const double step = T / static_cast<double>(M);
  std::vector<double> logs(N);
  for (std::size_t n = 0; n < N; ++n) logs[n] = std::log(static_cast<double>(n + 1));
  constexpr std::uint64_t kChunk = 256;
  const std::size_t chunks = (M + kChunk - 1) / kChunk;
  std::vector<CompensatedSum> parts(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::uint64_t hi = std::min(M, (c + 1) * kChunk);
    for (std::uint64_t j = c * kChunk; j < hi; ++j) {
      const double t = T + (static_cast<double>(j) + 0.5) * step;
      double re = 0.0, im = 0.0;
      for (std::size_t n = 0; n < N; ++n) {
        if (coeffs[n] == 0.0) continue;
        const double a = t * logs[n];
        re += coeffs[n] * std::cos(a);
        im -= coeffs[n] * std::sin(a);
      }
      parts[c].add(re * re + im * im);
    }
  });
  CompensatedSum total;
  for (const auto& p : parts) total.add(p);
  return total.value() * step;
}

std::string stats_to_csv(std::span<const IntervalStats> rows) {
  std::ostringstream os;
  os << "X,h,c,exceed_fraction,mean_abs\n";
  for (const auto& r : rows) {
    os << r.X << ',' << r.h << ',' << format_real(r.threshold_const) << ','
       << format_real(r.exceed_fraction) << ',' << format_real(r.mean_abs_normalized) << '\n';
  }
  return os.str();
}

std::string stats_to_json(std::span<const IntervalStats> rows) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << (i ? "," : "") << "{\"X\":" << r.X << ",\"h\":" << r.h
       << ",\"c\":" << format_real(r.threshold_const)
       << ",\"exceed_fraction\":" << format_real(r.exceed_fraction)
       << ",\"mean_abs\":" << format_real(r.mean_abs_normalized) << '}';
  }
  os << "]\n";
  return os.str();
}

std::string chowla_to_csv(std::span<const ChowlaPoint> rows) {
  std::ostringstream os;
  os << "x,shift,log_avg,plain_avg\n";
  for (const auto& r : rows) {
    os << r.x << ',' << r.shift << ',' << format_real(r.log_avg) << ','
       << format_real(r.plain_avg) << '\n';
  }
  return os.str();
}

std::string chowla_to_json(std::span<const ChowlaPoint> rows) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << (i ? "," : "") << "{\"x\":" << r.x << ",\"shift\":" << r.shift
       << ",\"log_avg\":" << format_real(r.log_avg)
       << ",\"plain_avg\":" << format_real(r.plain_avg) << '}';
  }
  os << "]\n";
  return os.str();
}

}  // namespace ktsieve::liouville
