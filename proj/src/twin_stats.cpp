// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#include "ktsieve/twin_stats.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <mutex>
#include <sstream>

#include "ktsieve/error.hpp"
#include "ktsieve/numeric.hpp"
#include "ktsieve/parallel.hpp"

namespace ktsieve::twin {

namespace {

void require_room(const PrimeTable& table, std::uint64_t x) {
  if (x > table.limit() || table.limit() - x <= 2) {
    fail(ErrorCode::range, "x + 2 = " + std::to_string(x + 2) +
                               " must be below the table limit " +
                               std::to_string(table.limit()));
  }
}

// Bits marking primes p such that p + 2 is also prime, for word w.
std::uint64_t twin_word(std::span<const std::uint64_t> words, std::size_t w) {
  const std::uint64_t next = w + 1 < words.size() ? words[w + 1] : 0;
  return words[w] & ((words[w] >> 2) | (next << 62));
}

std::uint64_t low_mask(unsigned bit) {  // bits 0..bit inclusive
  return bit == 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << (bit + 1)) - 1;
}

// Word chunks processed independently and reduced in index order.
constexpr std::size_t kChunkWords = 1 << 14;

template <typename Partial, typename PerWord>
std::vector<Partial> over_chunks(const PrimeTable& table, std::uint64_t x,
                                 unsigned threads, PerWord&& per_word) {
  const auto words = table.words();
  const std::size_t last = static_cast<std::size_t>(x >> 6);
  const std::size_t chunks = last / kChunkWords + 1;
  std::vector<Partial> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t begin = c * kChunkWords;
    const std::size_t end = std::min(last + 1, begin + kChunkWords);
    for (std::size_t w = begin; w < end; ++w) {
      std::uint64_t t = twin_word(words, w);
      if (w == last) t &= low_mask(static_cast<unsigned>(x & 63));
      per_word(partial[c], w, t);
    }
  });
  return partial;
}

}  // namespace

std::uint64_t count_twins(const PrimeTable& table, std::uint64_t x, unsigned threads) {
  require_room(table, x);
  const auto counts = over_chunks<std::uint64_t>(
      table, x, threads, [](std::uint64_t& acc, std::size_t, std::uint64_t t) {
        acc += static_cast<std::uint64_t>(std::popcount(t));
      });
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

double brun_partial(const PrimeTable& table, std::uint64_t x, unsigned threads) {
  require_room(table, x);
  const auto sums = over_chunks<CompensatedSum>(
      table, x, threads, [](CompensatedSum& acc, std::size_t w, std::uint64_t t) {
        while (t) {
          const double p = static_cast<double>(w * 64 + static_cast<std::size_t>(std::countr_zero(t)));
          acc.add(1.0 / p);
          acc.add(1.0 / (p + 2.0));
          t &= t - 1;
        }
      });
  CompensatedSum total;
  for (const auto& s : sums) total.add(s);
  return total.value();
}

SingularSeriesValue singular_series_truncated(std::uint64_t max_prime) {
  CompensatedSum log_sum;
  std::uint64_t largest = max_prime >= 2 ? 2 : 0;
  if (max_prime >= 3) {
    for_each_prime(max_prime + 1, [&](std::uint64_t p) {
      largest = p;
      if (p < 3) return;
      const double q = static_cast<double>(p - 1);
      log_sum.add(std::log1p(-1.0 / (q * q)));
    });
  }
  SingularSeriesValue out;
  out.value = 2.0 * std::exp(log_sum.value());
  out.truncation_prime = largest;
  // Omitted factors have p odd and p > M, so p - 1 = 2j with j >= J, and
  // sum_{j >= J} 1/(4 j^2) <= 1/(4J - 2). Add an allowance for rounding.
  const std::uint64_t even_floor = (max_prime % 2 == 0) ? max_prime : max_prime + 1;
  const double J = std::max<double>(1.0, static_cast<double>(even_floor) / 2.0);
  out.tail_bound = out.value / (4.0 * J - 2.0) + 1e-14 * out.value;
  return out;
}

SingularSeriesValue singular_series(double target_abs_err) {
  if (!(target_abs_err > 0.0)) fail(ErrorCode::validation, "target error must be positive");
  // value <= 1.5, so P with 1.5/(2P - 2) + 1.5e-14 <= target suffices.
  const double slack = target_abs_err - 1.5e-14;
  const double best = 1.5 / (2.0 * static_cast<double>(kMaxSingularSeriesPrime) - 2.0) + 1.5e-14;
  if (slack <= 0 || 1.0 + 1.5 / (2.0 * slack) > static_cast<double>(kMaxSingularSeriesPrime)) {
    fail(ErrorCode::range, "tail bound " + format_real(target_abs_err) +
                               " is unattainable; the smallest achievable bound is " +
                               format_real(best));
  }
  const auto P = static_cast<std::uint64_t>(std::ceil(1.0 + 1.5 / (2.0 * slack)));
  return singular_series_truncated(P);
}

double li2(double x, double rel_err) {
  if (!(x >= 2.0)) fail(ErrorCode::range, "li2 needs x >= 2 (domain error)");
  if (!(rel_err > 0.0)) fail(ErrorCode::validation, "rel_err must be positive");
  if (x == 2.0) return 0.0;
  const double floor_estimate = (x - 2.0) / (std::log(x) * std::log(x));
  const auto r = adaptive_simpson(
      [](double t) {
        const double l = std::log(t);
        return 1.0 / (l * l);
      },
      2.0, x, rel_err * floor_estimate);
  return r.value;
}

std::vector<TwinTableRow> twin_table(const PrimeTable& table,
                                     std::span<const std::uint64_t> xs,
                                     const SingularSeriesValue& series,
                                     unsigned threads) {
  std::vector<TwinTableRow> rows;
  rows.reserve(xs.size());
  for (std::uint64_t x : xs) {
    TwinTableRow row;
    row.x = x;
    row.pi2 = count_twins(table, x, threads);
    row.prediction = series.value * li2(static_cast<double>(x));
    row.difference = static_cast<double>(row.pi2) - row.prediction;
    rows.push_back(row);
  }
  return rows;
}

std::uint64_t circle_check(const PrimeTable& table, std::uint64_t x) {
  require_room(table, x);
  const std::uint64_t span = x + 3;  // indicator on [0, x + 2]
  const std::size_t n = std::bit_ceil(static_cast<std::size_t>(2 * span));
  static std::mutex planner;  // the FFTW planner is not thread safe
  double* in = fftw_alloc_real(n);
  fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
  if (in == nullptr || spec == nullptr) {
    fftw_free(in);
    fftw_free(spec);
    fail(ErrorCode::resource, "cannot allocate FFT buffers");
  }
  fftw_plan forward, backward;
  {
    std::lock_guard lock(planner);
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, in, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) in[i] = (i < span && table.is_prime(i)) ? 1.0 : 0.0;
  fftw_execute(forward);
  for (std::size_t i = 0; i <= n / 2; ++i) {
    spec[i][0] = spec[i][0] * spec[i][0] + spec[i][1] * spec[i][1];
    spec[i][1] = 0.0;
  }
  fftw_execute(backward);
  const double c = in[2] / static_cast<double>(n);  // sum_m a[m] a[m + 2]
  {
    std::lock_guard lock(planner);
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  fftw_free(in);
  fftw_free(spec);
  const double rounded = std::nearbyint(c);
  if (std::fabs(c - rounded) >= 1e-3) {
    fail(ErrorCode::numeric, "FFT correlation " + format_real(c) + " is not near an integer");
  }
  return static_cast<std::uint64_t>(rounded);
}

CramerEstimates cramer_estimates(double x, std::uint64_t trials, std::uint64_t seed,
                                 const SingularSeriesValue& series, unsigned threads) {
  if (!(x >= 10.0)) fail(ErrorCode::range, "cramer_estimates needs x >= 10");
  if (trials < 1) fail(ErrorCode::validation, "trials must be at least 1");
  if (x > 1e9) fail(ErrorCode::resource, "Monte Carlo is limited to x <= 1e9");
  CramerEstimates out;
  out.naive = li2(x);
  out.corrected = series.value * out.naive;
  const auto top = static_cast<std::uint64_t>(std::floor(x));
  std::vector<double> prob(top + 3, 0.0);
  for (std::uint64_t n = 3; n <= top + 2; ++n) prob[n] = 1.0 / std::log(static_cast<double>(n));
  std::vector<double> counts(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    // Trial t draws from its own stream, so results ignore scheduling.
    std::uint64_t state = seed ^ (0xD1B54A32D192ED03ull * (t + 1));
    splitmix64(state);
    bool prev2 = false, prev1 = false;  // inclusion of n - 2, n - 1
    std::uint64_t hits = 0;
    for (std::uint64_t n = 3; n <= top + 2; ++n) {
      const bool in = unit_interval(splitmix64(state)) < prob[n];
      if (in && prev2 && n - 2 <= top) ++hits;
      prev2 = prev1;
      prev1 = in;
    }
    counts[t] = static_cast<double>(hits);
  });
  CompensatedSum sum;
  for (double c : counts) sum.add(c);
  out.monte_carlo_mean = sum.value() / static_cast<double>(trials);
  CompensatedSum sq;
  for (double c : counts) sq.add((c - out.monte_carlo_mean) * (c - out.monte_carlo_mean));
  out.monte_carlo_std =
      trials > 1 ? std::sqrt(sq.value() / static_cast<double>(trials - 1)) : 0.0;
  return out;
}

std::string rows_to_csv(std::span<const TwinTableRow> rows) {
  std::ostringstream os;
  os << "x,pi2,prediction,difference\n";
  for (const auto& r : rows) {
    os << r.x << ',' << r.pi2 << ',' << format_real(r.prediction) << ','
       << format_real(r.difference) << '\n';
  }
  return os.str();
}

std::string rows_to_json(std::span<const TwinTableRow> rows) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << (i ? "," : "") << "{\"x\":" << r.x << ",\"pi2\":" << r.pi2
       << ",\"prediction\":" << format_real(r.prediction)
       << ",\"difference\":" << format_real(r.difference) << '}';
  }
  os << "]\n";
  return os.str();
}

}  // namespace ktsieve::twin
