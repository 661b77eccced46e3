// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#include "ktsieve/primes.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "ktsieve/error.hpp"
#include "ktsieve/parallel.hpp"

namespace ktsieve {

namespace {

constexpr std::uint64_t kBlockWords = 512;
constexpr std::uint64_t kMaxLimit = std::uint64_t{1} << 63;

std::uint64_t round_up64(std::uint64_t n) { return (n + 63) & ~std::uint64_t{63}; }

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::uint64_t normalized_segment_bits(std::uint64_t bits) {
  if (bits == 0) fail(ErrorCode::validation, "segment length must be positive");
  return round_up64(bits);
}

void check_budget(std::uint64_t needed, std::uint64_t budget, const char* what) {
  if (needed > budget) {
    fail(ErrorCode::resource,
         std::string(what) + " needs " + std::to_string(needed) +
             " bytes, over the memory budget of " + std::to_string(budget) +
             " bytes");
  }
}

// Marks primes in [lo, hi), lo a multiple of 64, into out (hi - lo bits).
void sieve_segment(std::uint64_t lo, std::uint64_t hi,
                   std::span<const std::uint32_t> base, std::uint64_t* out) {
  const std::uint64_t nwords = (hi - lo) / 64;
  std::fill(out, out + nwords, 0xAAAAAAAAAAAAAAAAull);  // odd integers
  for (std::uint32_t p32 : base) {
    const std::uint64_t p = p32;
    if (p == 2) continue;
    if (p * p >= hi) break;
    std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
    if ((start & 1u) == 0) start += p;
    for (std::uint64_t m = start - lo; m < hi - lo; m += 2 * p) {
      out[m >> 6] &= ~(std::uint64_t{1} << (m & 63));
    }
  }
  if (lo == 0) {
    out[0] &= ~std::uint64_t{2};  // 1 is not prime
    out[0] |= std::uint64_t{4};   // 2 is
  }
}

void write_le(std::ostream& os, std::uint64_t v, int bytes) {
  char buf[8];
  for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(buf, bytes);
}

bool read_le(std::istream& is, std::uint64_t& v, int bytes) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), bytes)) return false;
  v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return true;
}

template <typename Build>
std::vector<std::uint64_t> cached_build(const TableOptions& options, TableKind kind,
                                        std::uint64_t limit,
                                        std::uint64_t total_bits,
                                        std::uint64_t seg, Build&& build) {
  std::vector<std::uint64_t> words;
  if (!options.cache_dir.empty()) {
    const auto path = cache_path(options.cache_dir, kind, limit, seg);
    if (load_table(path, kind, total_bits, seg, words)) return words;
    words = build();
    std::error_code ec;
    std::filesystem::create_directories(options.cache_dir, ec);
    save_table(path, kind, seg, words);
    return words;
  }
  return build();
}

}  // namespace

std::vector<std::uint32_t> small_primes(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

std::uint64_t table_bytes(std::uint64_t limit) noexcept {
  const std::uint64_t words = round_up64(limit) / 64;
  return words * 8 + (words / kBlockWords + 1) * 8;
}

PrimeTable::PrimeTable(std::uint64_t limit, std::uint64_t segment_bits,
                       std::vector<std::uint64_t> words)
    : limit_(limit), segment_bits_(segment_bits), words_(std::move(words)) {
  block_prefix_.reserve(words_.size() / kBlockWords + 1);
  std::uint64_t running = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (w % kBlockWords == 0) block_prefix_.push_back(running);
    running += static_cast<std::uint64_t>(std::popcount(words_[w]));
  }
}

std::size_t PrimeTable::segment_count() const noexcept {
  const std::uint64_t bits = words_.size() * 64;
  return static_cast<std::size_t>((bits + segment_bits_ - 1) / segment_bits_);
}

Segment PrimeTable::segment(std::size_t i) const {
  const std::uint64_t base = i * segment_bits_;
  const std::uint64_t length = std::min(segment_bits_, words_.size() * 64 - base);
  return {base, length, std::span(words_).subspan(base / 64, length / 64)};
}

std::uint64_t PrimeTable::count_through(std::uint64_t x) const {
  if (x >= limit_) {
    fail(ErrorCode::range, "x = " + std::to_string(x) +
                               " is outside the table (limit " +
                               std::to_string(limit_) + ")");
  }
  const std::uint64_t w = x >> 6;
  std::uint64_t count = block_prefix_[w / kBlockWords];
  for (std::uint64_t i = w / kBlockWords * kBlockWords; i < w; ++i) {
    count += static_cast<std::uint64_t>(std::popcount(words_[i]));
  }
  const unsigned bit = static_cast<unsigned>(x & 63);
  const std::uint64_t mask =
      bit == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (bit + 1)) - 1);
  return count + static_cast<std::uint64_t>(std::popcount(words_[w] & mask));
}

PrimeTable build_primes(std::uint64_t limit, const TableOptions& options) {
  if (limit >= kMaxLimit) fail(ErrorCode::range, "limits of 2^63 and above are not supported");
  const std::uint64_t seg = normalized_segment_bits(options.segment_bits);
  check_budget(table_bytes(limit), options.memory_budget, "prime table");
  const std::uint64_t total_bits = std::max<std::uint64_t>(64, round_up64(limit));
  auto build = [&] {
    std::vector<std::uint64_t> words(total_bits / 64, 0);
    const auto base = small_primes(static_cast<std::uint32_t>(isqrt(limit)));
    const std::size_t segments = (total_bits + seg - 1) / seg;
    parallel_for(segments, options.threads, [&](std::size_t s) {
      const std::uint64_t lo = s * seg;
      const std::uint64_t hi = std::min(total_bits, lo + seg);
      sieve_segment(lo, hi, base, words.data() + lo / 64);
    });
    // Clear everything at or beyond the limit.
    for (std::uint64_t n = limit; n < total_bits && n % 64 != 0; ++n) {
      words[n >> 6] &= ~(std::uint64_t{1} << (n & 63));
    }
    for (std::uint64_t w = round_up64(limit) / 64; w < words.size(); ++w) words[w] = 0;
    if (limit == 0) words[0] = 0;
    return words;
  };
  return PrimeTable(limit, seg,
                    cached_build(options, TableKind::prime, limit, total_bits, seg, build));
}

std::uint64_t prime_count(const PrimeTable& table, std::uint64_t x) {
  return table.count_through(x);
}

LiouvilleTable::LiouvilleTable(std::uint64_t limit, std::uint64_t segment_bits,
                               std::vector<std::uint64_t> words)
    : limit_(limit), segment_bits_(segment_bits), words_(std::move(words)) {}

std::size_t LiouvilleTable::segment_count() const noexcept {
  const std::uint64_t bits = words_.size() * 64;
  return static_cast<std::size_t>((bits + segment_bits_ - 1) / segment_bits_);
}

Segment LiouvilleTable::segment(std::size_t i) const {
  const std::uint64_t base = i * segment_bits_;
  const std::uint64_t length = std::min(segment_bits_, words_.size() * 64 - base);
  return {base, length, std::span(words_).subspan(base / 64, length / 64)};
}

int LiouvilleTable::at(std::uint64_t n) const {
  if (n < 1 || n > limit_) {
    fail(ErrorCode::range, "n = " + std::to_string(n) +
                               " is outside [1, " + std::to_string(limit_) + "]");
  }
  return (*this)(n);
}

LiouvilleTable build_liouville(std::uint64_t limit, const TableOptions& options) {
  if (limit < 1) fail(ErrorCode::validation, "Liouville table limit must be at least 1");
  if (limit >= kMaxLimit - 64) fail(ErrorCode::range, "limits of 2^63 and above are not supported");
  const std::uint64_t seg = normalized_segment_bits(options.segment_bits);
  const unsigned workers = std::max(1u, options.threads);
  check_budget(table_bytes(limit + 1) + std::uint64_t{workers} * seg * 8,
               options.memory_budget, "Liouville table");
  const std::uint64_t total_bits = round_up64(limit + 1);
  auto build = [&] {
    std::vector<std::uint64_t> words(total_bits / 64, 0);
    const auto base = small_primes(static_cast<std::uint32_t>(isqrt(limit)));
    const std::size_t segments = (total_bits + seg - 1) / seg;
    parallel_for(segments, workers, [&](std::size_t s) {
      const std::uint64_t lo = s * seg;
      const std::uint64_t hi = std::min(total_bits, lo + seg);
      // found[i] accumulates the product of the prime powers found for lo+i;
      // a leftover cofactor above sqrt(limit) is a single prime.
      std::vector<std::uint64_t> found(hi - lo, 1);
      std::uint64_t* out = words.data() + lo / 64;
      for (std::uint32_t p32 : base) {
        const std::uint64_t p = p32;
        for (std::uint64_t q = p; q < hi; q *= p) {
          for (std::uint64_t m = (lo + q - 1) / q * q; m < hi; m += q) {
            found[m - lo] *= p;
            out[(m - lo) >> 6] ^= std::uint64_t{1} << ((m - lo) & 63);
          }
          if (q > (hi - 1) / p) break;
        }
      }
      for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n < hi; ++n) {
        if (found[n - lo] != n) out[(n - lo) >> 6] ^= std::uint64_t{1} << ((n - lo) & 63);
      }
      if (lo == 0) out[0] &= ~std::uint64_t{1};
    });
    for (std::uint64_t n = limit + 1; n < total_bits; ++n) {
      words[n >> 6] &= ~(std::uint64_t{1} << (n & 63));
    }
    return words;
  };
  return LiouvilleTable(
      limit, seg,
      cached_build(options, TableKind::liouville, limit, total_bits, seg, build));
}

void for_each_prime(std::uint64_t limit,
                    const std::function<void(std::uint64_t)>& visit,
                    std::uint64_t segment_bits) {
  const std::uint64_t seg = normalized_segment_bits(segment_bits);
  const auto base = small_primes(static_cast<std::uint32_t>(isqrt(limit)));
  std::vector<std::uint64_t> buf(seg / 64);
  for (std::uint64_t lo = 0; lo < limit; lo += seg) {
    const std::uint64_t hi = lo + seg;
    sieve_segment(lo, hi, base, buf.data());
    for (std::uint64_t w = 0; w < buf.size(); ++w) {
      std::uint64_t bits = buf[w];
      while (bits) {
        const std::uint64_t n = lo + w * 64 + static_cast<std::uint64_t>(std::countr_zero(bits));
        if (n >= limit) return;
        visit(n);
        bits &= bits - 1;
      }
    }
  }
}

std::filesystem::path cache_path(const std::filesystem::path& dir, TableKind kind,
                                 std::uint64_t limit, std::uint64_t segment_bits) {
  const char* name = kind == TableKind::prime ? "primes" : "liouville";
  return dir / (std::string(name) + "-" + std::to_string(limit) + "-s" +
                std::to_string(segment_bits) + "-v" + std::to_string(kCacheVersion) +
                ".ktsl");
}

void save_table(const std::filesystem::path& path, TableKind kind,
                std::uint64_t segment_bits, std::span<const std::uint64_t> words) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) fail(ErrorCode::io, "cannot write cache file " + tmp);
    const std::uint64_t total = words.size() * 64;
    for (std::uint64_t base = 0; base < total; base += segment_bits) {
      const std::uint64_t length = std::min(segment_bits, total - base);
      os.write("KTSL", 4);
      write_le(os, kCacheVersion, 2);
      write_le(os, static_cast<std::uint8_t>(kind), 1);
      write_le(os, base, 8);
      write_le(os, length, 8);
      for (std::uint64_t w = base / 64; w < (base + length) / 64; ++w) write_le(os, words[w], 8);
    }
    if (!os) fail(ErrorCode::io, "failed writing cache file " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

bool load_table(const std::filesystem::path& path, TableKind kind,
                std::uint64_t total_bits, std::uint64_t segment_bits,
                std::vector<std::uint64_t>& words) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return false;
  std::vector<std::uint64_t> out(total_bits / 64);
  std::uint64_t expected_base = 0;
  while (expected_base < total_bits) {
    char magic[4];
    if (!is.read(magic, 4)) return false;
    if (std::memcmp(magic, "KTSL", 4) != 0) {
      fail(ErrorCode::io, "bad magic in cache file " + path.string());
    }
    std::uint64_t version = 0, k = 0, base = 0, length = 0;
    if (!read_le(is, version, 2)) return false;
    if (version != kCacheVersion) return false;
    if (!read_le(is, k, 1) || !read_le(is, base, 8) || !read_le(is, length, 8)) {
      fail(ErrorCode::io, "truncated cache file " + path.string());
    }
    if (k != static_cast<std::uint8_t>(kind) || base != expected_base ||
        length % 64 != 0 || length == 0 || base + length > total_bits ||
        (length != segment_bits && base + length != total_bits)) {
      return false;
    }
    for (std::uint64_t w = base / 64; w < (base + length) / 64; ++w) {
      if (!read_le(is, out[w], 8)) {
        fail(ErrorCode::io, "truncated cache file " + path.string());
      }
    }
    expected_base = base + length;
  }
  words = std::move(out);
  return true;
}

}  // namespace ktsieve
