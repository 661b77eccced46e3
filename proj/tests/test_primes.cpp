#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "ktsieve/error.hpp"
#include "ktsieve/primes.hpp"
#include "oracles.hpp"

using namespace ktsieve;

TEST_CASE("prime table agrees with trial division") {
  for (std::uint64_t seg : {64ull, 640ull, 1ull << 20}) {
    for (unsigned threads : {1u, 3u}) {
      TableOptions opt;
      opt.segment_bits = seg;
      opt.threads = threads;
      const auto t = build_primes(20011, opt);
      std::uint64_t count = 0;
      for (std::uint64_t n = 0; n < 20011; ++n) {
        REQUIRE(t.is_prime(n) == oracle::is_prime(n));
        count += oracle::is_prime(n);
        if (n % 997 == 0) CHECK(prime_count(t, n) == count);
      }
      CHECK_FALSE(t.is_prime(20011));
    }
  }
}

TEST_CASE("pi(10^6) and the table boundary") {
  const auto t = build_primes(1000001);
  CHECK(prime_count(t, 1000000) == 78498);
  CHECK_THROWS_AS(prime_count(t, 1000001), Error);
}

TEST_CASE("small_primes and streaming agree with the table") {
  const auto t = build_primes(100000);
  const auto sp = small_primes(100000);
  std::vector<std::uint64_t> streamed;
  for_each_prime(100000, [&](std::uint64_t p) { streamed.push_back(p); }, 4096);
  REQUIRE(sp.size() == prime_count(t, 99999));
  REQUIRE(streamed.size() == sp.size());
  for (std::size_t i = 0; i < sp.size(); ++i) {
    CHECK(t.is_prime(sp[i]));
    CHECK(streamed[i] == sp[i]);
  }
}

TEST_CASE("segments tile the table") {
  TableOptions opt;
  opt.segment_bits = 1024;
  const auto t = build_primes(5000, opt);
  std::uint64_t next = 0;
  for (std::size_t i = 0; i < t.segment_count(); ++i) {
    const auto s = t.segment(i);
    CHECK(s.base == next);
    CHECK(s.length % 64 == 0);
    next += s.length;
  }
  CHECK(next >= 5000);
  CHECK(next < 5000 + 64);
}

TEST_CASE("Liouville table agrees with factorization") {
  for (unsigned threads : {1u, 2u}) {
    TableOptions opt;
    opt.segment_bits = 4096;
    opt.threads = threads;
    const auto lt = build_liouville(30000, opt);
    for (std::uint64_t n = 1; n <= 30000; ++n) REQUIRE(lt(n) == oracle::liouville(n));
    CHECK_THROWS_AS(lt.at(0), Error);
    CHECK_THROWS_AS(lt.at(30001), Error);
  }
  const auto lt = build_liouville(12);
  CHECK(lt.at(1) == 1);
  CHECK(lt.at(2) == -1);
  CHECK(lt.at(4) == 1);
  CHECK(lt.at(8) == -1);
  CHECK(lt.at(10) == 1);
  CHECK(lt.at(12) == -1);
}

TEST_CASE("memory budget is enforced") {
  TableOptions opt;
  opt.memory_budget = 1024;
  try {
    build_primes(1000000, opt);
    FAIL("expected a resource error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::resource);
  }
}

TEST_CASE("cached tables round-trip and stale files are ignored") {
  const auto dir = std::filesystem::temp_directory_path() / "ktsieve-test-cache";
  std::filesystem::remove_all(dir);
  TableOptions opt;
  opt.cache_dir = dir;
  opt.segment_bits = 1 << 14;
  const auto fresh = build_primes(200000, opt);
  const auto path = cache_path(dir, TableKind::prime, 200000, opt.segment_bits);
  REQUIRE(std::filesystem::exists(path));
  const auto cached = build_primes(200000, opt);
  CHECK(std::equal(fresh.words().begin(), fresh.words().end(), cached.words().begin(),
                   cached.words().end()));

  {  // bump the version field so the file is stale
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(4);
    const char v[2] = {char(kCacheVersion + 1), 0};
    f.write(v, 2);
  }
  std::vector<std::uint64_t> words;
  CHECK_FALSE(load_table(path, TableKind::prime, fresh.words().size() * 64, opt.segment_bits,
                         words));
  const auto rebuilt = build_primes(200000, opt);
  CHECK(prime_count(rebuilt, 199999) == prime_count(fresh, 199999));

  const auto lt1 = build_liouville(100000, opt);
  const auto lt2 = build_liouville(100000, opt);
  CHECK(std::equal(lt1.words().begin(), lt1.words().end(), lt2.words().begin(),
                   lt2.words().end()));
  std::filesystem::remove_all(dir);
}
