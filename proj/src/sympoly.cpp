// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#include "ktsieve/sympoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ktsieve/error.hpp"

namespace ktsieve::sieve {

namespace {

Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// Signatures with parts drawn from `parts` (ascending) and weight <= max_weight.
void signatures_rec(const std::vector<int>& parts, std::size_t first,
                    int budget, Signature& current,
                    std::vector<Signature>& out) {
  out.push_back(current);
  for (std::size_t i = first; i < parts.size(); ++i) {
    if (parts[i] > budget) break;
    current.push_back(parts[i]);
    signatures_rec(parts, i, budget - parts[i], current, out);
    current.pop_back();
  }
}

}  // namespace

int SymTerm::degree() const noexcept {
  return a + std::accumulate(signature.begin(), signature.end(), 0);
}

SymPoly::SymPoly(int k) : k_(k) {
  if (k < 0) fail(ErrorCode::validation, "dimension must be non-negative");
}

SymPoly SymPoly::term(int k, int a, Signature signature,
                      const Rational& coefficient) {
  if (a < 0) fail(ErrorCode::validation, "exponent of (1-P1) must be >= 0");
  for (int m : signature) {
    if (m < 2) fail(ErrorCode::validation, "power-sum index must be >= 2");
  }
  std::sort(signature.begin(), signature.end());
  SymPoly p(k);
  p.add(SymTerm{a, std::move(signature)}, coefficient);
  return p;
}

SymPoly SymPoly::p2_term(int k, int a, int b) {
  return term(k, a, Signature(static_cast<std::size_t>(b), 2));
}

int SymPoly::degree() const noexcept {
  int d = -1;
  for (const auto& [t, c] : terms_) d = std::max(d, t.degree());
  return d;
}

void SymPoly::add(const SymTerm& term, const Rational& coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(term, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

SymPoly& SymPoly::operator+=(const SymPoly& other) {
  if (other.k_ != k_) fail(ErrorCode::validation, "dimension mismatch");
  for (const auto& [t, c] : other.terms_) add(t, c);
  return *this;
}

SymPoly& SymPoly::operator*=(const Rational& factor) {
  if (factor == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [t, c] : terms_) c *= factor;
  return *this;
}

double SymPoly::evaluate(std::span<const double> t) const {
  const double p1 = std::accumulate(t.begin(), t.end(), 0.0);
  double total = 0.0;
  for (const auto& [term, c] : terms_) {
    double v = std::pow(1.0 - p1, term.a);
    for (int m : term.signature) {
      double pm = 0.0;
      for (double x : t) pm += std::pow(x, m);
      v *= pm;
    }
    total += c.get_d() * v;
  }
  return total;
}

std::string SymPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [term, c] : terms_) {
    Rational mag = abs(c);
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    std::vector<std::string> factors;
    if (term.a > 0) {
      factors.push_back(term.a == 1 ? "(1-P1)"
                                    : "(1-P1)^" + std::to_string(term.a));
    }
    for (std::size_t i = 0; i < term.signature.size();) {
      std::size_t j = i;
      while (j < term.signature.size() && term.signature[j] == term.signature[i]) ++j;
      std::string f = "P" + std::to_string(term.signature[i]);
      if (j - i > 1) f += "^" + std::to_string(j - i);
      factors.push_back(f);
      i = j;
    }
    if (factors.empty() || mag != 1) {
      os << mag.get_str();
      if (!factors.empty()) os << "*";
    }
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) os << "*";
      os << factors[i];
    }
  }
  return os.str();
}

BasisFamily family_p2() { return {"p2", {2}}; }

BasisFamily family_p2p3() { return {"p2p3", {2, 3}}; }

BasisFamily family_even(int degree) {
  BasisFamily f{"even", {}};
  for (int m = 2; m <= std::max(degree, 2); m += 2) f.parts.push_back(m);
  return f;
}

BasisFamily family_full(int degree) {
  BasisFamily f{"full", {}};
  for (int m = 2; m <= std::max(degree, 2); ++m) f.parts.push_back(m);
  return f;
}

BasisFamily family_by_name(const std::string& name, int degree) {
  if (name == "p2") return family_p2();
  if (name == "p2p3") return family_p2p3();
  if (name == "even") return family_even(degree);
  if (name == "full") return family_full(degree);
  fail(ErrorCode::validation,
       "unknown basis family '" + name + "' (expected p2, p2p3, even, full)");
}

std::vector<SymPoly> monomial_basis(int k, int degree,
                                    const BasisFamily& family) {
  if (degree < 0) fail(ErrorCode::validation, "degree must be >= 0");
  std::vector<int> parts = family.parts;
  std::sort(parts.begin(), parts.end());
  parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
  std::vector<Signature> sigs;
  Signature cur;
  signatures_rec(parts, 0, degree, cur, sigs);
  std::stable_sort(sigs.begin(), sigs.end(),
                   [](const Signature& x, const Signature& y) {
                     const int wx = std::accumulate(x.begin(), x.end(), 0);
                     const int wy = std::accumulate(y.begin(), y.end(), 0);
                     if (wx != wy) return wx < wy;
                     return x < y;
                   });
  std::vector<SymPoly> basis;
  for (const auto& s : sigs) {
    const int w = std::accumulate(s.begin(), s.end(), 0);
    for (int a = 0; a + w <= degree; ++a) basis.push_back(SymPoly::term(k, a, s));
  }
  return basis;
}

Rational simplex_monomial_integral(int k, std::span<const int> exponents,
                                   int b) {
  if (k < 0 || b < 0 || exponents.size() > static_cast<std::size_t>(k)) {
    fail(ErrorCode::validation, "invalid simplex integral arguments");
  }
  Integer num = factorial(static_cast<unsigned long>(b));
  long total = static_cast<long>(k) + b;
  for (int e : exponents) {
    if (e < 0) fail(ErrorCode::validation, "negative exponent");
    num *= factorial(static_cast<unsigned long>(e));
    total += e;
  }
  Rational r(num, factorial(static_cast<unsigned long>(total)));
  r.canonicalize();
  return r;
}

SymPoly integrate_last_variable(const SymPoly& g) {
  if (g.k() < 1) fail(ErrorCode::validation, "need at least one variable");
  SymPoly out(g.k() - 1);
  for (const auto& [term, coef] : g.terms()) {
    // Group the signature into (part, multiplicity).
    std::vector<std::pair<int, int>> groups;
    for (int m : term.signature) {
      if (!groups.empty() && groups.back().first == m) ++groups.back().second;
      else groups.emplace_back(m, 1);
    }
    // Odometer over sub-multisets S: take s_i copies of each part into x^e.
    std::vector<int> take(groups.size(), 0);
    while (true) {
      Integer mult = 1;
      int e = 0;
      Signature rest;
      for (std::size_t i = 0; i < groups.size(); ++i) {
        mult *= binomial(static_cast<unsigned long>(groups[i].second),
                         static_cast<unsigned long>(take[i]));
        e += take[i] * groups[i].first;
        rest.insert(rest.end(), static_cast<std::size_t>(groups[i].second - take[i]),
                    groups[i].first);
      }
      // int_0^u (u - x)^a x^e dx = a! e! / (a + e + 1)! u^{a+e+1}
      Rational c(factorial(static_cast<unsigned long>(term.a)) *
                     factorial(static_cast<unsigned long>(e)) * mult,
                 factorial(static_cast<unsigned long>(term.a + e + 1)));
      c.canonicalize();
      out.add(SymTerm{term.a + e + 1, std::move(rest)}, coef * c);

      std::size_t i = 0;
      for (; i < groups.size(); ++i) {
        if (take[i] < groups[i].second) {
          ++take[i];
          break;
        }
        take[i] = 0;
      }
      if (i == groups.size()) break;
    }
  }
  return out;
}

}  // namespace ktsieve::sieve
