// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ktsieve/primes.hpp"

namespace ktsieve::tuples {

using Tuple = std::vector<std::int64_t>;

struct AdmissibilityCertificate {
  bool admissible = false;
  std::optional<std::int64_t> blocking_prime;
  /// For each prime p <= k, a residue n_p with n_p + h_i != 0 mod p for all i.
  std::map<std::int64_t, std::int64_t> witness;
  /// Only primes p <= k are checked: k offsets cannot fill the p residue
  /// classes of a larger prime.
  std::int64_t prime_bound = 0;
};

/// Offsets must be strictly increasing; throws Error(validation) otherwise.
AdmissibilityCertificate check_admissible(std::span<const std::int64_t> t);

/// Recomputes the witness residues by direct modular arithmetic.
bool verify_certificate(std::span<const std::int64_t> t,
                        const AdmissibilityCertificate& cert);

std::int64_t diameter(std::span<const std::int64_t> t);

/// Lexicographically least admissible k-tuple of minimal diameter with
/// h_1 = 0 and h_k <= search_bound, 2 <= k <= 12. Throws Error(not_found)
/// when no such tuple exists within the bound.
Tuple narrowest_tuple(int k, std::int64_t search_bound, unsigned threads = 1);

/// The first k primes above k, checked admissible.
Tuple primes_after_k(const PrimeTable& table, int k);

/// The 54-tuple of diameter 270.
std::span<const std::int64_t> paper_tuple();
AdmissibilityCertificate verify_paper_tuple();

/// Comma-separated offsets, e.g. "0,2,6".
Tuple parse_tuple(const std::string& text);
std::string tuple_to_json(std::span<const std::int64_t> t);

}  // namespace ktsieve::tuples
