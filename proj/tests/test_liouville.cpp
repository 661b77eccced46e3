#include <cmath>
#include <complex>

#include "doctest.h"
#include "ktsieve/error.hpp"
#include "ktsieve/liouville_lab.hpp"
#include "ktsieve/primes.hpp"
#include "oracles.hpp"

using namespace ktsieve;
using namespace ktsieve::liouville;

namespace {
const LiouvilleTable& lt() {
  static const LiouvilleTable t = build_liouville(400000);
  return t;
}

IntervalStats naive_windows(std::uint64_t X, std::uint64_t h, double c, double theta) {
  const double threshold = c * h / std::pow(std::log(static_cast<double>(h)), 0.1);
  const double pi2 = 2 * std::acos(-1.0);
  std::uint64_t exceed = 0, windows = 0;
  double total = 0.0;
  for (std::uint64_t y = X; y + h <= 2 * X; ++y) {
    std::complex<double> s = 0;
    for (std::uint64_t j = 0; j < h; ++j) {
      s += static_cast<double>(oracle::liouville(y + j)) * std::polar(1.0, pi2 * theta * j);
    }
    exceed += std::abs(s) > threshold;
    total += std::abs(s) / h;
    ++windows;
  }
  return {X, h, c, double(exceed) / windows, total / windows};
}
}  // namespace

TEST_CASE("interval statistics agree with direct window sums") {
  for (std::uint64_t h : {3ull, 10ull, 37ull}) {
    const auto ref = naive_windows(2000, h, 0.5, 0.0);
    const auto s = interval_stats(lt(), 2000, h, 0.5);
    CHECK(s.exceed_fraction == doctest::Approx(ref.exceed_fraction).epsilon(1e-12));
    CHECK(s.mean_abs_normalized == doctest::Approx(ref.mean_abs_normalized).epsilon(1e-12));
  }
}

TEST_CASE("twisted sums agree with direct evaluation") {
  const auto ref = naive_windows(1500, 40, 0.3, 0.3183);
  const auto s = exp_sum_stats(lt(), 1500, 40, 0.3183, 0.3);
  CHECK(s.exceed_fraction == doctest::Approx(ref.exceed_fraction).epsilon(1e-12));
  CHECK(s.mean_abs_normalized == doctest::Approx(ref.mean_abs_normalized).epsilon(1e-9));
  // A long run crosses the periodic recomputation points.
  const auto a = exp_sum_stats(lt(), 150000, 500, 0.25, 1.0, 1);
  const auto b = exp_sum_stats(lt(), 150000, 500, 0.25, 1.0, 3);
  CHECK(a.exceed_fraction == b.exceed_fraction);
  CHECK(a.mean_abs_normalized == b.mean_abs_normalized);
}

TEST_CASE("theta = 0 reproduces the untwisted statistics") {
  const auto a = interval_stats(lt(), 100000, 100, 0.2);
  const auto b = exp_sum_stats(lt(), 100000, 100, 0.0, 0.2);
  CHECK(a.exceed_fraction == b.exceed_fraction);
  CHECK(a.mean_abs_normalized == doctest::Approx(b.mean_abs_normalized).epsilon(1e-12));
}

TEST_CASE("window preconditions") {
  CHECK_THROWS_AS(interval_stats(lt(), 300000, 100), Error);
  CHECK_THROWS_AS(interval_stats(lt(), 1000, 2), Error);
}

TEST_CASE("Chowla averages at x = 10 by hand") {
  // lambda(1..12) = 1 -1 -1 1 -1 1 -1 -1 1 1 -1 -1
  // shift 2, n = 1..10: products -1 -1 1 1 1 -1 -1 -1 -1 -1, sum -4
  // log sum over n < 10: -1 -1/2 +1/3 +1/4 +1/5 -1/6 -1/7 -1/8 -1/9
  const std::uint64_t xs[] = {10};
  const auto p = chowla_scan(lt(), xs, 2).front();
  CHECK(p.plain_sum == -4);
  CHECK(p.plain_avg == doctest::Approx(-0.4));
  const double log_sum = -1 - 0.5 + 1.0 / 3 + 0.25 + 0.2 - 1.0 / 6 - 1.0 / 7 - 0.125 - 1.0 / 9;
  CHECK(p.log_sum == doctest::Approx(log_sum));
  CHECK(p.log_avg == doctest::Approx(log_sum / std::log(10.0)));
}

TEST_CASE("Chowla scan agrees with a direct sum") {
  const std::uint64_t xs[] = {1000, 54321, 200000};
  const auto pts = chowla_scan(lt(), xs, 3);
  for (const auto& p : pts) {
    std::int64_t plain = 0;
    for (std::uint64_t n = 1; n <= p.x; ++n) plain += lt()(n) * lt()(n + 3);
    CHECK(p.plain_sum == plain);
  }
  CHECK_THROWS_AS(chowla_scan(lt(), xs, 0), Error);
}

TEST_CASE("small-factor density agrees with direct factor counting") {
  const auto pt = build_primes(40000);
  const auto s = small_factor_density(pt, 20000, 1000);
  const double lo = s.lower, hi = s.upper;
  std::uint64_t with = 0, count = 0, n_total = 0;
  double mertens = 0.0;
  for (std::uint64_t p = 2; p <= hi; ++p) {
    if (oracle::is_prime(p) && p >= lo) mertens += 1.0 / p;
  }
  for (std::uint64_t n = 20000; n <= 40000; ++n) {
    std::uint64_t c = 0;
    for (std::uint64_t p = 2; p <= hi; ++p) {
      if (p >= lo && n % p == 0 && oracle::is_prime(p)) ++c;
    }
    with += c > 0;
    count += c;
    ++n_total;
  }
  CHECK(s.fraction_with_factor == doctest::Approx(double(with) / n_total).epsilon(1e-12));
  CHECK(s.mean_count == doctest::Approx(double(count) / n_total).epsilon(1e-12));
  CHECK(s.mertens_sum == doctest::Approx(mertens).epsilon(1e-12));
  CHECK(std::fabs(s.mean_count - s.mertens_sum) <= 0.25 * s.mertens_sum);
}

TEST_CASE("Dirichlet mean value") {
  const double one[] = {1.0};
  CHECK(dirichlet_mean_value(one, 1000.0, 0.01) == doctest::Approx(1000.0).epsilon(1e-12));
  // |1 + 2^{-it}|^2 = 2 + 2 cos(t log 2) integrates in closed form.
  const double two[] = {1.0, 1.0};
  const double T = 500.0, l2 = std::log(2.0);
  const double exact = 2 * T + 2 * (std::sin(2 * T * l2) - std::sin(T * l2)) / l2;
  CHECK(dirichlet_mean_value(two, T, 0.01) == doctest::Approx(exact).epsilon(1e-5));
  std::vector<double> coeffs(200);
  double sq = 0.0;
  for (std::size_t n = 1; n <= 200; ++n) {
    coeffs[n - 1] = lt()(n);
    sq += 1.0;
  }
  const double a = dirichlet_mean_value(coeffs, 200.0, 0.04, 1);
  const double b = dirichlet_mean_value(coeffs, 200.0, 0.04, 3);
  CHECK(a == b);
  CHECK(a <= (200.0 + 200.0) * sq);
}

TEST_CASE("CSV schemas") {
  const auto s = interval_stats(lt(), 100000, 10);
  const IntervalStats rows[] = {s};
  CHECK(stats_to_csv(rows).rfind("X,h,c,exceed_fraction,mean_abs\n", 0) == 0);
  const std::uint64_t xs[] = {100};
  const auto pts = chowla_scan(lt(), xs, 1);
  CHECK(chowla_to_csv(pts).find("\n100,1,") != std::string::npos);
}
