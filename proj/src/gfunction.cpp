// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#include "ktsieve/gfunction.hpp"

#include <cmath>
#include <vector>

#include "ktsieve/error.hpp"
#include "ktsieve/numeric.hpp"
#include "ktsieve/parallel.hpp"

namespace ktsieve::sieve {

double GSpec::operator()(double t) const noexcept {
  if (t < 0.0 || t >= support) return 0.0;
  return c * std::sqrt(log_scale) / (1.0 + t * log_scale);
}

GSpec make_gspec(double k) {
  if (!(k >= 2.0)) fail(ErrorCode::validation, "G needs k >= 2");
  GSpec g;
  g.k = k;
  g.log_scale = k * std::log(k);
  g.support = std::pow(k, -0.75);
  // int_0^T L/(1+tL)^2 dt = TL/(1+TL)
  const double tl = g.support * g.log_scale;
  g.c = std::sqrt((1.0 + tl) / tl);
  return g;
}

GConstraints g_constraints(const GSpec& spec, double abs_tol) {
  if (!(spec.k >= 16.0)) fail(ErrorCode::validation, "g_constraints needs k >= 16");
  const double L = spec.log_scale;
  const double c2 = spec.c * spec.c;
  const double umax = std::log1p(spec.support * L);
  // t(u) = (e^u - 1)/L and G^2 dt = c^2 e^{-u} du; G dt = c e^{-u} sqrt(L) dt.
  auto integrate = [&](auto&& f, double scale) {
    return adaptive_simpson(f, 0.0, umax, abs_tol * scale).value;
  };
  GConstraints out;
  out.norm = integrate([&](double u) { return c2 * std::exp(-u); }, 1.0);
  out.m1_int = integrate([&](double u) { return c2 * std::expm1(u) / L * std::exp(-u); },
                         1.0 / L);
  const double t2 = integrate(
      [&](double u) {
        const double t = std::expm1(u) / L;
        return c2 * t * t * std::exp(-u);
      },
      1.0 / (L * L));
  out.m2_int = spec.k * t2;
  // int G dt = int c sqrt(L) / (1 + tL) dt = (c / sqrt(L)) int du
  const double l1 = integrate([&](double) { return spec.c / std::sqrt(L); },
                              1.0 / std::sqrt(L));
  out.l1_sq = spec.k * l1 * l1;
  return out;
}

GConstraints g_constraints_exact(const GSpec& spec) {
  const double L = spec.log_scale;
  const double c2 = spec.c * spec.c;
  const double tl = spec.support * L;
  const double lg = std::log1p(tl);
  GConstraints out;
  out.norm = c2 * tl / (1.0 + tl);
  out.m1_int = c2 / L * (lg - tl / (1.0 + tl));
  out.m2_int = spec.k * c2 / (L * L) * (tl - 2.0 * lg + tl / (1.0 + tl));
  out.l1_sq = spec.k * c2 * lg * lg / L;
  return out;
}

double g_quantile(const GSpec& spec, double u) noexcept {
  // CDF(t) = c^2 (1 - 1/(1 + tL)) on [0, T].
  const double c2 = spec.c * spec.c;
  const double t = (1.0 / (1.0 - u / c2) - 1.0) / spec.log_scale;
  return std::min(t, spec.support);
}

MonteCarloResult monte_carlo_I(const GSpec& spec, std::uint64_t samples,
                               std::uint64_t seed, unsigned threads) {
  if (samples < 1000) fail(ErrorCode::validation, "monte_carlo_I needs at least 1000 samples");
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  const auto k = static_cast<std::uint64_t>(spec.k);
  std::vector<std::uint64_t> hits(blocks, 0);
  parallel_for(blocks, threads, [&](std::size_t b) {
    std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ull * (b + 1));
    splitmix64(state);
    const std::uint64_t begin = b * kBlock;
    const std::uint64_t end = std::min(samples, begin + kBlock);
    for (std::uint64_t s = begin; s < end; ++s) {
      double sum = 0.0;
      std::uint64_t i = 0;
      for (; i < k && sum < 1.0; ++i) sum += g_quantile(spec, unit_interval(splitmix64(state)));
      if (sum < 1.0) ++hits[b];
    }
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  MonteCarloResult out;
  const double n = static_cast<double>(samples);
  out.estimate = static_cast<double>(total) / n;
  out.std_err = std::sqrt(out.estimate * (1.0 - out.estimate) / n);
  return out;
}

}  // namespace ktsieve::sieve
