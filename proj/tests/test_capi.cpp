#include <cstring>
#include <string>

#include "doctest.h"
#include "ktsieve/ktsieve.h"

TEST_CASE("C API: tables and twin counts") {
  kts_config* cfg = nullptr;
  REQUIRE(kts_config_new(&cfg) == KTS_OK);
  REQUIRE(kts_config_set_threads(cfg, 2) == KTS_OK);
  kts_prime_table* pt = nullptr;
  REQUIRE(kts_prime_table_build(cfg, 1000003, &pt) == KTS_OK);
  CHECK(kts_prime_table_limit(pt) == 1000003);
  int prime = 0;
  CHECK(kts_is_prime(pt, 999983, &prime) == KTS_OK);
  CHECK(prime == 1);
  std::uint64_t n = 0;
  CHECK(kts_prime_count(pt, 1000000, &n) == KTS_OK);
  CHECK(n == 78498);
  CHECK(kts_count_twins(cfg, pt, 1000000, &n) == KTS_OK);
  CHECK(n == 8169);
  CHECK(kts_circle_check(pt, 100000, &n) == KTS_OK);
  CHECK(n == 1224);

  const std::uint64_t xs[] = {10, 100};
  char* report = nullptr;
  CHECK(kts_twin_table(cfg, pt, xs, 2, KTS_FORMAT_CSV, &report) == KTS_OK);
  CHECK(std::string(report).rfind("x,pi2,prediction,difference\n10,2,", 0) == 0);
  kts_string_free(report);

  kts_prime_table_free(pt);
  kts_config_free(cfg);
}

TEST_CASE("C API: error reporting") {
  kts_prime_table* pt = nullptr;
  REQUIRE(kts_prime_table_build(nullptr, 1000, &pt) == KTS_OK);
  std::uint64_t n = 0;
  CHECK(kts_count_twins(nullptr, pt, 5000, &n) == KTS_ERR_RANGE);
  CHECK(std::strlen(kts_last_error()) > 0);
  CHECK(kts_count_twins(nullptr, nullptr, 10, &n) == KTS_ERR_VALIDATION);
  CHECK(kts_count_twins(nullptr, pt, 10, &n) == KTS_OK);
  CHECK(std::strlen(kts_last_error()) == 0);
  kts_prime_table_free(pt);

  kts_config* cfg = nullptr;
  REQUIRE(kts_config_new(&cfg) == KTS_OK);
  CHECK(kts_config_set_threads(cfg, 0) == KTS_ERR_VALIDATION);
  CHECK(kts_config_set_memory_budget(cfg, 100) == KTS_OK);
  CHECK(kts_prime_table_build(cfg, 10000000, &pt) == KTS_ERR_RESOURCE);
  kts_config_free(cfg);

  kts_rayleigh r{};
  CHECK(kts_mk_lower_bound(nullptr, 5, 0, "bogus", &r) == KTS_ERR_VALIDATION);
  kts_expected_primes e{};
  CHECK(kts_expected_primes_value(4.1, 0.5, &e) == KTS_ERR_RANGE);
  std::int64_t t[8];
  std::size_t len = 0;
  CHECK(kts_narrowest_tuple(nullptr, 8, 10, t, 8, &len) == KTS_ERR_NOT_FOUND);
  CHECK(std::string(kts_status_name(KTS_ERR_RESOURCE)) == "resource error");
}

TEST_CASE("C API: tuples and sieve optimization") {
  kts_admissibility a{};
  std::size_t k = 0;
  std::int64_t d = 0;
  REQUIRE(kts_verify_paper_tuple(&a, &k, &d) == KTS_OK);
  CHECK(a.admissible == 1);
  CHECK(k == 54);
  CHECK(d == 270);

  const std::int64_t bad[] = {0, 2, 4};
  REQUIRE(kts_check_admissible(bad, 3, &a) == KTS_OK);
  CHECK(a.admissible == 0);
  CHECK(a.blocking_prime == 3);

  std::int64_t t[6];
  std::size_t len = 0;
  REQUIRE(kts_narrowest_tuple(nullptr, 6, 64, t, 6, &len) == KTS_OK);
  CHECK(len == 6);
  CHECK(t[5] - t[0] == 16);

  kts_rayleigh r{};
  REQUIRE(kts_mk_lower_bound(nullptr, 5, 0, "p2", &r) == KTS_OK);
  CHECK(r.ratio == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  CHECK(r.basis_size == 1);

  double v = 0;
  char* exact = nullptr;
  REQUIRE(kts_gpy_closed_form(5, 0, &v, &exact) == KTS_OK);
  CHECK(std::string(exact) == "5/3");
  kts_string_free(exact);

  char* json = nullptr;
  REQUIRE(kts_mk_lower_bound_json(nullptr, 5, 2, "p2", &json) == KTS_OK);
  CHECK(std::string(json).find("\"coefficients\":[") != std::string::npos);
  kts_string_free(json);

  kts_expected_primes e{};
  REQUIRE(kts_expected_primes_value(4.0049789021, 0.25, &e) == KTS_OK);
  CHECK(e.guaranteed == 2);
}

TEST_CASE("C API: Liouville") {
  kts_liouville_table* lt = nullptr;
  REQUIRE(kts_liouville_build(nullptr, 100, &lt) == KTS_OK);
  int v = 0;
  CHECK(kts_liouville_value(lt, 10, &v) == KTS_OK);
  CHECK(v == 1);
  CHECK(kts_liouville_value(lt, 0, &v) == KTS_ERR_RANGE);
  const std::uint64_t xs[] = {10};
  kts_chowla_point p{};
  CHECK(kts_chowla_scan(lt, xs, 1, 2, &p) == KTS_OK);
  CHECK(p.plain_avg == doctest::Approx(-0.4));
  kts_liouville_free(lt);
}
