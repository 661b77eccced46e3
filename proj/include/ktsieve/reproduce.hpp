// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace ktsieve {

struct ReproduceOptions {
  unsigned threads = 1;
  std::filesystem::path cache_dir;
  std::uint64_t memory_budget = std::uint64_t{2} << 30;
  /// Re-run criteria 1-10 at 1, 4 and 8 threads and compare the reports.
  bool check_determinism = false;
  /// Receives "name seconds" timing lines; never part of the report.
  std::function<void(const std::string&)> timing;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // deterministic: no timings
};

struct ReproduceReport {
  std::vector<CriterionResult> criteria;
  bool all_passed() const;
  /// One line per criterion followed by a summary line.
  std::string text() const;
};

ReproduceReport reproduce(const ReproduceOptions& options);

/// Independent exhaustive enumerator used as the oracle for the narrowest
/// tuple search: scans every subset of [0, d] containing 0 and d in
/// lexicographic order for d = k - 1, k, ...
std::vector<std::int64_t> brute_force_narrowest(int k, std::int64_t max_diameter);

}  // namespace ktsieve
