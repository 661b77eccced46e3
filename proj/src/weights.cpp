// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#include "ktsieve/weights.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "ktsieve/error.hpp"
#include "ktsieve/forms.hpp"
#include "ktsieve/numeric.hpp"
#include "ktsieve/parallel.hpp"

namespace ktsieve::sieve {

namespace {

using Monomials = std::map<std::vector<int>, double>;
constexpr std::size_t kMaxMonomials = 200000;

Monomials multiply(const Monomials& a, const Monomials& b) {
  Monomials out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  }
  if (out.size() > kMaxMonomials) {
    fail(ErrorCode::resource, "monomial expansion exceeds " + std::to_string(kMaxMonomials) + " terms");
  }
  return out;
}

Monomials power_sum(int k, int m) {
  Monomials p;
  for (int i = 0; i < k; ++i) {
    std::vector<int> e(static_cast<std::size_t>(k), 0);
    e[static_cast<std::size_t>(i)] = m;
    p[e] = 1.0;
  }
  return p;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

double binomial(int n, int j) { return factorial(n) / (factorial(j) * factorial(n - j)); }

struct DivisorTuple {
  std::vector<std::uint64_t> d;
  double weight = 0.0;  // mu(prod d) F(log d / log R)
};

int omega_if_squarefree(std::uint64_t n) {  // -1 if not squarefree
  int count = 0;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return -1;
    ++count;
  }
  return count + (n > 1 ? 1 : 0);
}

}  // namespace

SieveFunction::SieveFunction(const SymPoly& ftilde) : k_(ftilde.k()) {
  Monomials total;
  const std::vector<int> zero(static_cast<std::size_t>(k_), 0);
  Monomials one_minus_p1 = {{zero, 1.0}};
  for (int i = 0; i < k_; ++i) {
    std::vector<int> e = zero;
    e[static_cast<std::size_t>(i)] = 1;
    one_minus_p1[e] = -1.0;
  }
  for (const auto& [term, coef] : ftilde.terms()) {
    Monomials m = {{zero, coef.get_d()}};
    for (int i = 0; i < term.a; ++i) m = multiply(m, one_minus_p1);
    for (int part : term.signature) m = multiply(m, power_sum(k_, part));
    for (const auto& [e, c] : m) total[e] += c;
  }
  for (const auto& [e, c] : total) {
    if (c == 0.0) continue;
    exponents_.push_back(e);
    coefficients_.push_back(c);
  }
}

double SieveFunction::operator()(std::span<const double> t) const {
  if (static_cast<int>(t.size()) != k_) fail(ErrorCode::validation, "point has the wrong dimension");
  const double rho = 1.0 - std::accumulate(t.begin(), t.end(), 0.0);
  if (rho <= 0.0) return 0.0;
  // With s = t + u the region is u >= 0, sum u <= rho, and
  // int_{Delta_rho} prod u_i^{j_i} du = rho^{k + |j|} prod j_i! / (k + |j|)!.
  CompensatedSum total;
  std::vector<int> j(static_cast<std::size_t>(k_));
  for (std::size_t m = 0; m < exponents_.size(); ++m) {
    const auto& e = exponents_[m];
    std::fill(j.begin(), j.end(), 0);
    for (;;) {
      double term = coefficients_[m];
      int js = 0;
      for (int i = 0; i < k_; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        term *= binomial(e[ii], j[ii]) * std::pow(t[ii], e[ii] - j[ii]) * factorial(j[ii]);
        js += j[ii];
      }
      term *= std::pow(rho, k_ + js) / factorial(k_ + js);
      total.add(term);
      std::size_t i = 0;
      while (i < j.size() && j[i] == e[i]) j[i++] = 0;
      if (i == j.size()) break;
      ++j[i];
    }
  }
  return total.value();
}

EmpiricalWeights empirical_weights(std::span<const std::int64_t> tuple,
                                   std::uint64_t x, std::uint64_t r,
                                   const SymPoly& poly, const PrimeTable& table,
                                   unsigned threads) {
  const int k = static_cast<int>(tuple.size());
  if (k < 2) fail(ErrorCode::validation, "empirical_weights needs a tuple with k >= 2");
  if (poly.k() != k) fail(ErrorCode::validation, "polynomial dimension differs from the tuple size");
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] < 0 || (i > 0 && tuple[i] <= tuple[i - 1])) {
      fail(ErrorCode::validation, "offsets must be nonnegative and strictly increasing");
    }
  }
  if (x < 16 || r < 1) fail(ErrorCode::validation, "need x >= 16 and r >= 1");
  if (r * r > x) fail(ErrorCode::validation, "need r <= sqrt(x)");
  if (r > 1000 || x > 10'000'000) {
    fail(ErrorCode::resource, "divisor enumeration limited to r <= 1000 and x <= 1e7");
  }
  const std::uint64_t top = 2 * x + static_cast<std::uint64_t>(tuple.back());
  if (top >= table.limit()) {
    fail(ErrorCode::range, "prime table must extend beyond " + std::to_string(top));
  }

  EmpiricalWeights out;
  const QuadraticForms forms = assemble_forms(k, std::vector<SymPoly>{poly});
  out.ratio = rayleigh_quotient(forms, {Rational(1)}).get_d();
  out.prediction = out.ratio * std::log(static_cast<double>(r)) / std::log(static_cast<double>(x));

  // Squarefree, pairwise coprime divisor tuples with product below R.
  const SieveFunction F(poly);
  std::vector<int> omega(r, -1);
  for (std::uint64_t d = 1; d < r; ++d) omega[d] = omega_if_squarefree(d);
  std::vector<DivisorTuple> tuples;
  const double log_r = std::log(static_cast<double>(r));
  std::vector<std::uint64_t> current;
  std::vector<double> point(static_cast<std::size_t>(k));
  auto enumerate = [&](auto&& self, std::uint64_t product, int parity) -> void {
    if (static_cast<int>(current.size()) == k) {
      for (int i = 0; i < k; ++i) {
        point[static_cast<std::size_t>(i)] =
            std::log(static_cast<double>(current[static_cast<std::size_t>(i)])) / log_r;
      }
      tuples.push_back({current, (parity ? -1.0 : 1.0) * F(point)});
      if (tuples.size() > 5'000'000) fail(ErrorCode::resource, "too many divisor tuples");
      return;
    }
    for (std::uint64_t d = 1; product * d < r; ++d) {
      if (omega[d] < 0 || std::gcd(d, product) != 1) continue;
      current.push_back(d);
      self(self, product * d, parity ^ (omega[d] & 1));
      current.pop_back();
    }
  };
  enumerate(enumerate, 1, 0);
  out.divisor_tuples = tuples.size();
  if (static_cast<double>(tuples.size()) * static_cast<double>(x + 1) > 4e9) {
    fail(ErrorCode::resource, "divisor sum evaluation exceeds the work budget");
  }

  constexpr std::uint64_t kChunk = 1 << 14;
  const std::uint64_t count = x + 1;
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  struct Partial {
    CompensatedSum nu, nu_primes, uniform_primes;
    double min_nu = INFINITY;
  };
  std::vector<Partial> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    Partial& p = partial[c];
    const std::uint64_t begin = x + c * kChunk;
    const std::uint64_t end = std::min(2 * x + 1, begin + kChunk);
    for (std::uint64_t n = begin; n < end; ++n) {
      double nu = 1.0;
      if (!tuples.empty()) {
        double s = 0.0;
        for (const auto& dt : tuples) {
          bool divides = true;
          for (int i = 0; i < k && divides; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            divides = (n + static_cast<std::uint64_t>(tuple[ii])) % dt.d[ii] == 0;
          }
          if (divides) s += dt.weight;
        }
        nu = s * s;
      }
      int primes = 0;
      for (auto h : tuple) primes += table.is_prime(n + static_cast<std::uint64_t>(h)) ? 1 : 0;
      p.nu.add(nu);
      p.nu_primes.add(nu * primes);
      p.uniform_primes.add(primes);
      p.min_nu = std::min(p.min_nu, nu);
    }
  });
  CompensatedSum nu, nu_primes, uniform;
  double min_nu = INFINITY;
  for (const auto& p : partial) {
    nu.add(p.nu);
    nu_primes.add(p.nu_primes);
    uniform.add(p.uniform_primes);
    min_nu = std::min(min_nu, p.min_nu);
  }
  out.uniform_expectation = uniform.value() / static_cast<double>(count);
  out.expectation = nu.value() > 0 ? nu_primes.value() / nu.value() : out.uniform_expectation;
  out.min_nu = min_nu;
  return out;
}

}  // namespace ktsieve::sieve
