#include <random>

#include "doctest.h"
#include "ktsieve/error.hpp"
#include "ktsieve/primes.hpp"
#include "ktsieve/tuples.hpp"
#include "oracles.hpp"

using namespace ktsieve;
using tuples::Tuple;

TEST_CASE("admissibility matches the residue-class definition") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 2000; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 9);
    Tuple t{0};
    while (static_cast<int>(t.size()) < k) t.push_back(t.back() + 1 + static_cast<std::int64_t>(rng() % 7));
    const auto cert = tuples::check_admissible(t);
    REQUIRE(cert.admissible == oracle::admissible(t));
    CHECK(tuples::verify_certificate(t, cert));
    if (cert.admissible) {
      CHECK_FALSE(cert.blocking_prime.has_value());
      for (const auto& [p, r] : cert.witness) {
        for (auto h : t) CHECK((r + h) % p != 0);
      }
    } else {
      REQUIRE(cert.blocking_prime.has_value());
      CHECK(*cert.blocking_prime <= k);
    }
  }
}

TEST_CASE("classic small tuples") {
  CHECK(tuples::check_admissible(Tuple{0, 2}).admissible);
  CHECK(tuples::check_admissible(Tuple{0, 2, 6}).admissible);
  CHECK(tuples::check_admissible(Tuple{0, 4, 6}).admissible);
  const auto bad = tuples::check_admissible(Tuple{0, 2, 4});
  CHECK_FALSE(bad.admissible);
  CHECK(bad.blocking_prime == 3);
  CHECK_FALSE(tuples::check_admissible(Tuple{0, 1}).admissible);
  CHECK_THROWS_AS(tuples::check_admissible(Tuple{0, 0}), Error);
}

TEST_CASE("a forged certificate is rejected") {
  const Tuple t{0, 2, 6};
  auto cert = tuples::check_admissible(t);
  cert.witness[3] = 1;  // 1 + 2 = 3
  CHECK_FALSE(tuples::verify_certificate(t, cert));
}

TEST_CASE("narrowest tuples match exhaustive enumeration") {
  for (int k = 2; k <= 8; ++k) {
    const auto t = tuples::narrowest_tuple(k, 64, 2);
    CAPTURE(k);
    CHECK(static_cast<int>(t.size()) == k);
    CHECK(t.front() == 0);
    CHECK(oracle::admissible(t));
    CHECK(tuples::diameter(t) == oracle::narrowest_diameter(k));
  }
  CHECK(tuples::narrowest_tuple(6, 64, 1) == tuples::narrowest_tuple(6, 64, 4));
  CHECK_THROWS_AS(tuples::narrowest_tuple(8, 10, 1), Error);
}

TEST_CASE("the 54-tuple of diameter 270") {
  const auto t = tuples::paper_tuple();
  CHECK(t.size() == 54);
  CHECK(tuples::diameter(t) == 270);
  CHECK(std::is_sorted(t.begin(), t.end()));
  CHECK(tuples::verify_paper_tuple().admissible);
  CHECK(oracle::admissible(Tuple(t.begin(), t.end())));
}

TEST_CASE("primes after k form an admissible tuple") {
  const auto table = build_primes(10000);
  for (int k : {2, 10, 54, 100}) {
    const auto t = tuples::primes_after_k(table, k);
    CHECK(static_cast<int>(t.size()) == k);
    CHECK(t.front() > k);
    CHECK(tuples::check_admissible(t).admissible);
    for (auto p : t) CHECK(oracle::is_prime(static_cast<std::uint64_t>(p)));
  }
}

TEST_CASE("tuple parsing and JSON") {
  CHECK(tuples::parse_tuple("0, 2,6") == Tuple{0, 2, 6});
  CHECK(tuples::parse_tuple("[0,4,6]") == Tuple{0, 4, 6});
  CHECK_THROWS_AS(tuples::parse_tuple("0,x"), Error);
  CHECK(tuples::tuple_to_json(Tuple{0, 2, 6}) == "[0,2,6]");
}
