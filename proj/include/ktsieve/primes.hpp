// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

namespace ktsieve {

struct TableOptions {
  /// Bits per segment; rounded up to a multiple of 64.
  std::uint64_t segment_bits = std::uint64_t{1} << 20;
  unsigned threads = 1;
  /// Upper bound on table storage in bytes.
  std::uint64_t memory_budget = std::uint64_t{2} << 30;
  /// When non-empty, tables are loaded from and saved to this directory.
  std::filesystem::path cache_dir;
};

/// A contiguous run of bits; bit i describes the integer base + i.
struct Segment {
  std::uint64_t base = 0;
  std::uint64_t length = 0;  // multiple of 64
  std::span<const std::uint64_t> payload;
};

/// Prime indicator for 0 <= n < limit. The segments tile
/// [0, roundup(limit, 64)); bits at or beyond limit are zero.
class PrimeTable {
 public:
  PrimeTable() = default;
  PrimeTable(std::uint64_t limit, std::uint64_t segment_bits,
             std::vector<std::uint64_t> words);

  std::uint64_t limit() const noexcept { return limit_; }
  std::uint64_t segment_bits() const noexcept { return segment_bits_; }
  std::size_t segment_count() const noexcept;
  Segment segment(std::size_t i) const;

  bool is_prime(std::uint64_t n) const noexcept {
    return n < limit_ && ((words_[n >> 6] >> (n & 63)) & 1u);
  }
  /// Number of primes in [0, x]. Requires x < limit.
  std::uint64_t count_through(std::uint64_t x) const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

 private:
  std::uint64_t limit_ = 0;
  std::uint64_t segment_bits_ = 64;
  std::vector<std::uint64_t> words_;
  std::vector<std::uint64_t> block_prefix_;  // primes below each 512-word block
};

/// Liouville lambda(n) for 1 <= n <= limit, one bit per integer (set = -1).
class LiouvilleTable {
 public:
  LiouvilleTable() = default;
  LiouvilleTable(std::uint64_t limit, std::uint64_t segment_bits,
                 std::vector<std::uint64_t> words);

  std::uint64_t limit() const noexcept { return limit_; }
  std::uint64_t segment_bits() const noexcept { return segment_bits_; }
  std::size_t segment_count() const noexcept;
  Segment segment(std::size_t i) const;

  /// lambda(n) in {-1, +1}; requires 1 <= n <= limit.
  int operator()(std::uint64_t n) const noexcept {
    return ((words_[n >> 6] >> (n & 63)) & 1u) ? -1 : 1;
  }
  int at(std::uint64_t n) const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

 private:
  std::uint64_t limit_ = 0;
  std::uint64_t segment_bits_ = 64;
  std::vector<std::uint64_t> words_;
};

PrimeTable build_primes(std::uint64_t limit, const TableOptions& options = {});

/// pi(x); throws Error(range) when x >= table.limit().
std::uint64_t prime_count(const PrimeTable& table, std::uint64_t x);

LiouvilleTable build_liouville(std::uint64_t limit,
                               const TableOptions& options = {});

/// Primes p <= n with n < 2^32, by a plain sieve. Used for base primes.
std::vector<std::uint32_t> small_primes(std::uint32_t n);

/// Calls visit(p) for every prime p < limit in increasing order without
/// storing the table.
void for_each_prime(std::uint64_t limit,
                    const std::function<void(std::uint64_t)>& visit,
                    std::uint64_t segment_bits = std::uint64_t{1} << 20);

/// Storage for a table of `limit` bits including the counting index.
std::uint64_t table_bytes(std::uint64_t limit) noexcept;

/// Cache file I/O. Files hold one record per segment:
/// "KTSL", u16 version, u8 kind, u64 base, u64 length, payload (all LE).
inline constexpr std::uint16_t kCacheVersion = 1;
enum class TableKind : std::uint8_t { prime = 0, liouville = 1 };

std::filesystem::path cache_path(const std::filesystem::path& dir,
                                 TableKind kind, std::uint64_t limit,
                                 std::uint64_t segment_bits);
void save_table(const std::filesystem::path& path, TableKind kind,
                std::uint64_t segment_bits, std::span<const std::uint64_t> words);
/// Returns false when the file is missing, has a different version, or does
/// not tile the expected range; throws Error(io) on a corrupt record.
bool load_table(const std::filesystem::path& path, TableKind kind,
                std::uint64_t total_bits, std::uint64_t segment_bits,
                std::vector<std::uint64_t>& words);

}  // namespace ktsieve
