// Slow, obviously-correct reference implementations used by the tests.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline int liouville(std::uint64_t n) {
  int omega = 0;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      n /= d;
      ++omega;
    }
  }
  if (n > 1) ++omega;
  return omega % 2 ? -1 : 1;
}

// Composite Simpson with a fixed panel count.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline bool admissible(const std::vector<std::int64_t>& t) {
  const auto k = static_cast<std::int64_t>(t.size());
  for (std::int64_t p = 2; p <= k; ++p) {
    if (!is_prime(static_cast<std::uint64_t>(p))) continue;
    std::vector<bool> hit(static_cast<std::size_t>(p), false);
    for (auto h : t) hit[static_cast<std::size_t>(((h % p) + p) % p)] = true;
    bool all = true;
    for (bool b : hit) all = all && b;
    if (all) return false;
  }
  return true;
}

// Smallest diameter of an admissible k-tuple starting at 0, by exhaustive
// enumeration of subsets of [1, d - 1].
inline std::int64_t narrowest_diameter(int k) {
  for (std::int64_t d = k - 1;; ++d) {
    std::vector<std::int64_t> t{0};
    bool found = false;
    std::function<void(std::int64_t)> rec = [&](std::int64_t next) {
      if (found) return;
      if (static_cast<int>(t.size()) == k - 1) {
        t.push_back(d);
        if (admissible(t)) found = true;
        t.pop_back();
        return;
      }
      for (std::int64_t h = next; h < d; ++h) {
        t.push_back(h);
        rec(h + 1);
        t.pop_back();
      }
    };
    if (k == 1) return 0;
    rec(1);
    if (found) return d;
  }
}

}  // namespace oracle
