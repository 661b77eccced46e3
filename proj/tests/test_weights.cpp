#include <cmath>

#include "doctest.h"
#include "ktsieve/error.hpp"
#include "ktsieve/primes.hpp"
#include "ktsieve/sympoly.hpp"
#include "ktsieve/weights.hpp"

using namespace ktsieve;
using namespace ktsieve::sieve;

namespace {
const PrimeTable& table() {
  static const PrimeTable t = build_primes(400100);
  return t;
}
}  // namespace

TEST_CASE("F from the monomial expansion matches the closed form for constant Ftilde") {
  const SieveFunction f(SymPoly::p2_term(2, 0, 0));
  for (double s : {0.0, 0.1, 0.3}) {
    for (double t : {0.0, 0.2, 0.5}) {
      const double pt[] = {s, t};
      const double rho = std::max(0.0, 1 - s - t);
      CHECK(f(pt) == doctest::Approx(rho * rho / 2));
    }
  }
  const SieveFunction f3(SymPoly::p2_term(3, 1, 0));
  const double origin[] = {0.0, 0.0, 0.0};
  // int over the 3-simplex of (1 - s1 - s2 - s3) = 1/24.
  CHECK(f3(origin) == doctest::Approx(1.0 / 24));
}

TEST_CASE("uniform weights when R = 1") {
  const std::int64_t t[] = {0, 2};
  const auto w = empirical_weights(t, 100000, 1, SymPoly::p2_term(2, 0, 0), table());
  CHECK(w.expectation == doctest::Approx(w.uniform_expectation).epsilon(1e-12));
  CHECK(w.divisor_tuples == 0);  // no product of divisors lies below 1
}

TEST_CASE("sieve weights concentrate on primes") {
  const std::int64_t t[] = {0, 2};
  const auto w = empirical_weights(t, 100000, 30, SymPoly::p2_term(2, 0, 0), table());
  CHECK(w.ratio == doctest::Approx(4.0 / 3.0));
  CHECK(w.prediction == doctest::Approx(w.ratio * std::log(30.0) / std::log(1e5)));
  CHECK(w.expectation > 2 * w.uniform_expectation);
  CHECK(w.expectation == doctest::Approx(w.prediction).epsilon(0.1));
  CHECK(w.min_nu >= 0.0);

  const auto w4 = empirical_weights(t, 100000, 30, SymPoly::p2_term(2, 0, 0), table(), 4);
  CHECK(w4.expectation == w.expectation);
}

TEST_CASE("weight preconditions") {
  const std::int64_t t[] = {0, 2};
  const std::int64_t t3[] = {0, 2, 6};
  CHECK_THROWS_AS(empirical_weights(t, 100000, 400, SymPoly::p2_term(2, 0, 0), table()), Error);
  CHECK_THROWS_AS(empirical_weights(t3, 100000, 30, SymPoly::p2_term(2, 0, 0), table()), Error);
  CHECK_THROWS_AS(empirical_weights(t, 300000, 30, SymPoly::p2_term(2, 0, 0), table()), Error);
}
