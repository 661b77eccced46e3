// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ktsieve::sieve {

using Integer = mpz_class;
using Rational = mpq_class;

/// Multiset of power-sum indices m >= 2, kept sorted ascending. The empty
/// signature is the constant 1.
using Signature = std::vector<int>;

/// One product (1 - P1)^a * P_{m_1} * ... * P_{m_r} on the simplex
/// {t_i >= 0, t_1 + ... + t_k <= 1}, where P_m = sum_i t_i^m.
struct SymTerm {
  int a = 0;
  Signature signature;

  int degree() const noexcept;
  auto operator<=>(const SymTerm&) const = default;
};

/// Symmetric polynomial in k variables written in the (1 - P1), P2, P3, ...
/// coordinates, restricted to the unit simplex. Coefficients are exact.
class SymPoly {
 public:
  explicit SymPoly(int k);

  static SymPoly term(int k, int a, Signature signature,
                      const Rational& coefficient = 1);
  /// (1 - P1)^a * P2^b, the two-parameter family.
  static SymPoly p2_term(int k, int a, int b);

  int k() const noexcept { return k_; }
  const std::map<SymTerm, Rational>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  int degree() const noexcept;

  void add(const SymTerm& term, const Rational& coefficient);
  SymPoly& operator+=(const SymPoly& other);
  SymPoly& operator*=(const Rational& factor);

  /// Value at a point of the simplex (points outside give the polynomial's
  /// value, not zero; callers handle the support).
  double evaluate(std::span<const double> t) const;

  /// e.g. "2*(1-P1)^3*P2^2 - 1/3*P2*P3"
  std::string to_string() const;

 private:
  int k_;
  std::map<SymTerm, Rational> terms_;
};

/// Allowed power-sum indices for a basis family.
struct BasisFamily {
  std::string name;
  std::vector<int> parts;
};

/// (1 - P1)^a P2^b with a + 2b <= degree.
BasisFamily family_p2();
/// (1 - P1)^a P2^b P3^c with a + 2b + 3c <= degree.
BasisFamily family_p2p3();
/// Signatures built from even power sums P2, P4, ..., up to `degree`.
BasisFamily family_even(int degree);
/// Every signature with parts in 2..degree.
BasisFamily family_full(int degree);
/// Lookup by name: "p2", "p2p3", "even", "full". Throws Error(validation).
BasisFamily family_by_name(const std::string& name, int degree);

/// All single-term functions (1 - P1)^a * P_sigma with parts from `family`
/// and a + |sigma| <= degree, ordered by (|sigma|, sigma, a).
std::vector<SymPoly> monomial_basis(int k, int degree,
                                    const BasisFamily& family);

/// Dirichlet integral over the k-simplex:
///   int prod t_i^{e_i} (1 - sum t)^b dt = b! prod e_i! / (k + b + sum e_i)!
/// `exponents.size()` may be smaller than k; missing exponents are zero.
Rational simplex_monomial_integral(int k, std::span<const int> exponents,
                                   int b);

/// The map g -> int_0^{1 - (t_1+...+t_{k-1})} g(t_1, ..., t_k) dt_k, which
/// lands in symmetric polynomials of k - 1 variables written against
/// (1 - P1') = 1 - t_1 - ... - t_{k-1}.
SymPoly integrate_last_variable(const SymPoly& g);

}  // namespace ktsieve::sieve
