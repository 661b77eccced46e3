#include <cmath>

#include "doctest.h"
#include "ktsieve/error.hpp"
#include "ktsieve/primes.hpp"
#include "ktsieve/twin_stats.hpp"
#include "oracles.hpp"

using namespace ktsieve;

namespace {
const PrimeTable& table() {
  static const PrimeTable t = build_primes(2000003);
  return t;
}
}  // namespace

TEST_CASE("twin counts agree with a direct pair scan") {
  std::uint64_t pairs = 0;
  double brun = 0.0L;
  long double brun_ld = 0.0L;
  for (std::uint64_t p = 2; p <= 50000; ++p) {
    if (oracle::is_prime(p) && oracle::is_prime(p + 2)) {
      ++pairs;
      brun_ld += 1.0L / p + 1.0L / (p + 2);
    }
    if (p % 4999 == 0 || p == 50000) {
      for (unsigned threads : {1u, 4u}) {
        REQUIRE(twin::count_twins(table(), p, threads) == pairs);
        brun = twin::brun_partial(table(), p, threads);
        CHECK(brun == doctest::Approx(static_cast<double>(brun_ld)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("Brun partial sums are monotone and below 1.902") {
  double prev = 0.0;
  for (std::uint64_t x = 10; x <= 2000000; x *= 2) {
    const double b = twin::brun_partial(table(), x);
    CHECK(b >= prev);
    CHECK(b < 1.902);
    prev = b;
  }
}

TEST_CASE("circle_check reproduces count_twins") {
  for (std::uint64_t x : {3ull, 4ull, 5ull, 10ull, 99ull, 1000ull, 12345ull, 100000ull}) {
    CHECK(twin::circle_check(table(), x) == twin::count_twins(table(), x));
  }
}

TEST_CASE("count_twins rejects bounds at the table edge") {
  CHECK_THROWS_AS(twin::count_twins(table(), 2000001), Error);
  CHECK_NOTHROW(twin::count_twins(table(), 2000000));
}

TEST_CASE("li2 agrees with fixed-panel Simpson") {
  for (double x : {10.0, 1e3, 1e6, 1e8}) {
    // t = e^u keeps the integrand smooth across the whole range.
    const double ref = oracle::simpson([](double u) { return std::exp(u) / (u * u); },
                                       std::log(2.0), std::log(x), 1000000);
    CHECK(twin::li2(x) == doctest::Approx(ref).epsilon(1e-9));
  }
  CHECK(twin::li2(2.0) == 0.0);
}

TEST_CASE("singular series tail bounds are honest") {
  const auto coarse = twin::singular_series_truncated(1000);
  const auto fine = twin::singular_series_truncated(10000000);
  CHECK(coarse.value > fine.value);  // every factor is below 1
  CHECK(coarse.value - fine.value <= coarse.tail_bound);
  CHECK(fine.tail_bound < coarse.tail_bound);

  const auto s = twin::singular_series(1e-9);
  CHECK(s.tail_bound <= 1e-9);
  CHECK(std::fabs(s.value - fine.value) <= fine.tail_bound);
  CHECK(s.value == doctest::Approx(1.3203236316).epsilon(1e-9));
  CHECK_THROWS_AS(twin::singular_series(1e-20), Error);
}

TEST_CASE("twin table rows and CSV schema") {
  const auto s = twin::singular_series(1e-9);
  const std::uint64_t xs[] = {10, 100, 1000, 10000, 100000, 1000000};
  const std::uint64_t pi2[] = {2, 8, 35, 205, 1224, 8169};
  const auto rows = twin::twin_table(table(), xs, s);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(rows[i].pi2 == pi2[i]);
    CHECK(rows[i].difference == doctest::Approx(rows[i].pi2 - rows[i].prediction));
  }
  const auto csv = twin::rows_to_csv(rows);
  CHECK(csv.rfind("x,pi2,prediction,difference\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(twin::rows_to_json(rows).front() == '[');
}

TEST_CASE("Cramer estimates") {
  const auto s = twin::singular_series(1e-9);
  const auto a = twin::cramer_estimates(1e4, 200, 7, s, 1);
  const auto b = twin::cramer_estimates(1e4, 200, 7, s, 3);
  CHECK(a.monte_carlo_mean == b.monte_carlo_mean);
  CHECK(a.monte_carlo_std == b.monte_carlo_std);
  CHECK(a.naive == doctest::Approx(twin::li2(1e4)));
  CHECK(a.corrected == doctest::Approx(s.value * a.naive));
  // The random model ignores the parity correlation: its mean tracks Li2,
  // not S Li2.
  CHECK(std::fabs(a.monte_carlo_mean - a.naive) < 5 * a.monte_carlo_std);
  CHECK(std::fabs(a.monte_carlo_mean - a.corrected) > 3 * a.monte_carlo_std);
  const auto c = twin::cramer_estimates(1e4, 200, 8, s, 1);
  CHECK(c.monte_carlo_mean != a.monte_carlo_mean);
}
