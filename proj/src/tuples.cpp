// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#include "ktsieve/tuples.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>

#include "ktsieve/error.hpp"
#include "ktsieve/parallel.hpp"

namespace ktsieve::tuples {

namespace {

constexpr std::array<std::int64_t, 54> kPaperTuple = {
    0,   2,   6,   12,  20,  26,  30,  32,  42,  56,  60,  62,  72,  74,
    84,  86,  90,  96,  104, 110, 114, 116, 120, 126, 132, 134, 140, 144,
    152, 156, 162, 170, 174, 176, 182, 186, 194, 200, 204, 210, 216, 222,
    224, 230, 236, 240, 242, 246, 252, 254, 260, 264, 266, 270};

std::int64_t mod(std::int64_t a, std::int64_t p) {
  const std::int64_t r = a % p;
  return r < 0 ? r + p : r;
}

std::vector<std::int64_t> primes_through(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 2) return out;
  for (std::uint32_t p : small_primes(static_cast<std::uint32_t>(n))) out.push_back(p);
  return out;
}

// Depth-first search for the lexicographically least admissible tuple
// 0 = h_1 < h_2 < ... < h_k = d, keeping per-prime residue coverage counts.
class TupleSearch {
 public:
  TupleSearch(int k, std::int64_t d) : k_(k), d_(d), primes_(primes_through(k)) {
    for (auto p : primes_) cover_.emplace_back(static_cast<std::size_t>(p), 0);
    free_.resize(primes_.size());
    for (std::size_t i = 0; i < primes_.size(); ++i) free_[i] = primes_[i];
  }

  // Searches with h_1 = 0 and h_2 = second.
  std::optional<Tuple> run(std::int64_t second) {
    tuple_.clear();
    if (!push(0)) return std::nullopt;
    if (k_ == 2) {
      if (second != d_ || !push(d_)) return std::nullopt;
      return tuple_;
    }
    if (second >= d_ || !push(second)) return std::nullopt;
    if (!push_last()) return std::nullopt;
    if (extend(second + 1)) {
      Tuple out(tuple_.begin(), tuple_.end() - 1);
      out.push_back(d_);
      std::sort(out.begin(), out.end());
      return out;
    }
    return std::nullopt;
  }

 private:
  bool push(std::int64_t h) {
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      auto& c = cover_[i][static_cast<std::size_t>(mod(h, primes_[i]))];
      if (c == 0 && free_[i] == 1) {
        for (std::size_t j = 0; j < i; ++j) unmark(j, h);
        return false;
      }
      if (c++ == 0) --free_[i];
    }
    tuple_.push_back(h);
    return true;
  }
  void unmark(std::size_t i, std::int64_t h) {
    if (--cover_[i][static_cast<std::size_t>(mod(h, primes_[i]))] == 0) ++free_[i];
  }
  void pop() {
    const std::int64_t h = tuple_.back();
    tuple_.pop_back();
    for (std::size_t i = 0; i < primes_.size(); ++i) unmark(i, h);
  }
  // The last offset d is placed early so coverage accounts for it; it stays
  // at the back of tuple_ while middle offsets are inserted before it.
  bool push_last() { return push(d_); }

  bool extend(std::int64_t from) {
    const int placed = static_cast<int>(tuple_.size());
    if (placed == k_) return true;
    const int needed = k_ - placed;
    for (std::int64_t h = from; h < d_ && d_ - h >= needed; ++h) {
      if (!push(h)) continue;
      // Keep d at the end of tuple_ for pop(): swap the two last entries.
      std::swap(tuple_[tuple_.size() - 1], tuple_[tuple_.size() - 2]);
      if (extend(h + 1)) return true;
      std::swap(tuple_[tuple_.size() - 1], tuple_[tuple_.size() - 2]);
      pop();
    }
    return false;
  }

  int k_;
  std::int64_t d_;
  std::vector<std::int64_t> primes_;
  std::vector<std::vector<int>> cover_;
  std::vector<std::int64_t> free_;
  Tuple tuple_;
};

}  // namespace

AdmissibilityCertificate check_admissible(std::span<const std::int64_t> t) {
  if (t.empty()) fail(ErrorCode::validation, "a tuple needs at least one offset");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] <= t[i - 1]) {
      fail(ErrorCode::validation, "offsets must be strictly increasing (distinct and sorted)");
    }
  }
  AdmissibilityCertificate cert;
  const auto k = static_cast<std::int64_t>(t.size());
  cert.prime_bound = k;
  for (std::int64_t p : primes_through(k)) {
    std::vector<bool> hit(static_cast<std::size_t>(p), false);
    for (auto h : t) hit[static_cast<std::size_t>(mod(-h, p))] = true;
    const auto it = std::find(hit.begin(), hit.end(), false);
    if (it == hit.end()) {
      cert.admissible = false;
      cert.blocking_prime = p;
      cert.witness.clear();
      return cert;
    }
    cert.witness[p] = it - hit.begin();
  }
  cert.admissible = true;
  return cert;
}

bool verify_certificate(std::span<const std::int64_t> t,
                        const AdmissibilityCertificate& cert) {
  if (!cert.admissible) return cert.blocking_prime.has_value();
  for (auto p : primes_through(static_cast<std::int64_t>(t.size()))) {
    const auto it = cert.witness.find(p);
    if (it == cert.witness.end()) return false;
    for (auto h : t) {
      if (mod(it->second + h, p) == 0) return false;
    }
  }
  return true;
}

std::int64_t diameter(std::span<const std::int64_t> t) {
  return t.empty() ? 0 : t.back() - t.front();
}

Tuple narrowest_tuple(int k, std::int64_t search_bound, unsigned threads) {
  if (k < 2 || k > 12) fail(ErrorCode::validation, "narrowest_tuple supports 2 <= k <= 12");
  if (search_bound < k) fail(ErrorCode::validation, "search bound must be at least k");
  for (std::int64_t d = k - 1; d <= search_bound; ++d) {
    // Branch on h_2; each branch yields its own least tuple, and the least
    // h_2 with a solution wins, so the answer ignores scheduling.
    const auto branches = static_cast<std::size_t>(k == 2 ? 1 : d - 1);
    std::vector<std::optional<Tuple>> found(branches);
    parallel_for(branches, threads, [&](std::size_t b) {
      TupleSearch search(k, d);
      found[b] = search.run(k == 2 ? d : static_cast<std::int64_t>(b) + 1);
    });
    for (auto& f : found) {
      if (f) return *f;
    }
  }
  fail(ErrorCode::not_found, "no admissible " + std::to_string(k) +
                                 "-tuple with diameter <= " + std::to_string(search_bound));
}

Tuple primes_after_k(const PrimeTable& table, int k) {
  if (k < 1) fail(ErrorCode::validation, "k must be positive");
  Tuple out;
  for (std::uint64_t n = static_cast<std::uint64_t>(k) + 1;
       n < table.limit() && out.size() < static_cast<std::size_t>(k); ++n) {
    if (table.is_prime(n)) out.push_back(static_cast<std::int64_t>(n));
  }
  if (out.size() < static_cast<std::size_t>(k)) {
    fail(ErrorCode::range, "prime table limit " + std::to_string(table.limit()) +
                               " holds fewer than k primes above k");
  }
  if (!check_admissible(out).admissible) {
    fail(ErrorCode::numeric, "primes after k failed the admissibility check");
  }
  return out;
}

std::span<const std::int64_t> paper_tuple() { return kPaperTuple; }

AdmissibilityCertificate verify_paper_tuple() { return check_admissible(kPaperTuple); }

Tuple parse_tuple(const std::string& raw) {
  // Accepts "0,2,6" and the JSON form "[0,2,6]".
  std::string text = raw;
  text.erase(0, text.find_first_not_of(" \t\n"));
  text.erase(text.find_last_not_of(" \t\n") + 1);
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') {
    text = text.substr(1, text.size() - 2);
  }
  Tuple out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(pos, end - pos);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || p != item.data() + item.size()) {
      fail(ErrorCode::validation, "bad tuple offset '" + item + "'");
    }
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

std::string tuple_to_json(std::span<const std::int64_t> t) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
  os << ']';
  return os.str();
}

}  // namespace ktsieve::tuples
