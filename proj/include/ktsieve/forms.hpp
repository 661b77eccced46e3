// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "ktsieve/sympoly.hpp"

namespace ktsieve::sieve {

/// Count vector over a fixed list of parts: counts[i] copies of parts[i].
using CountVector = std::vector<unsigned char>;

struct CountVectorHash {
  std::size_t operator()(const CountVector& v) const noexcept;
};

/// Q_c(n) = E[prod_m P_m(X)^{c_m}] for X_1..X_n i.i.d. Exp(1), for every count
/// vector c of weight <= max_weight. These are exactly the numerators of the
/// simplex integrals of power-sum products:
///   int_{Delta_n} (1 - P1)^A P_c dt = A! Q_c(n) / (n + A + w(c))!.
/// Computed from the exponential generating function M(s)^n with the Euler
/// operator recurrence, so one pass covers all c.
class PowerSumMoments {
 public:
  PowerSumMoments(int dims, std::vector<int> parts, int max_weight);

  int dims() const noexcept { return dims_; }
  const std::vector<int>& parts() const noexcept { return parts_; }
  int max_weight() const noexcept { return max_weight_; }
  std::size_t size() const noexcept { return vectors_.size(); }

  /// Index of c, or -1 if c exceeds max_weight.
  long index_of(const CountVector& c) const;
  const CountVector& vector_at(std::size_t i) const { return vectors_[i]; }
  int weight_at(std::size_t i) const { return weights_[i]; }
  const Integer& moment_at(std::size_t i) const { return moments_[i]; }

  int weight(const CountVector& c) const noexcept;
  CountVector counts_of(const Signature& s) const;

  /// int_{Delta_dims} (1 - P1)^A P_c, exact.
  Rational simplex_integral(int A, const CountVector& c) const;

 private:
  int dims_;
  std::vector<int> parts_;
  int max_weight_;
  std::vector<CountVector> vectors_;
  std::vector<int> weights_;
  std::vector<Integer> moments_;
  std::unordered_map<CountVector, std::size_t, CountVectorHash> index_;
};

/// Dense symmetric matrix of exact rationals, row-major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t n) : n_(n), data_(n * n) {}

  std::size_t size() const noexcept { return n_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }
  bool is_symmetric() const;

 private:
  std::size_t n_ = 0;
  std::vector<Rational> data_;
};

/// Quadratic forms of sum_i J_i (m1) and I (m2) on span(basis).
struct QuadraticForms {
  int k = 0;
  int degree = -1;        // -1 for caller-supplied bases
  std::string family;     // empty for caller-supplied bases
  std::vector<SymPoly> basis;
  RationalMatrix m1;
  RationalMatrix m2;
};

struct AssemblyOptions {
  unsigned threads = 1;
  std::size_t max_basis = 3000;
  std::size_t max_moments = 400000;
};

/// m2[i][j] = int_Delta g_i g_j and
/// m1[i][j] = k int_{Delta_{k-1}} (int_0^{1-s} g_i dt_k)(int_0^{1-s} g_j dt_k)
/// for an arbitrary list of symmetric polynomials in k >= 1 variables.
/// Throws Error(resource) when the basis or moment table exceeds the budget.
QuadraticForms assemble_forms(int k, std::vector<SymPoly> basis,
                              const AssemblyOptions& options = {});

/// assemble_forms over monomial_basis(k, degree, family).
QuadraticForms assemble_forms(int k, int degree, const BasisFamily& family,
                              const AssemblyOptions& options = {});

/// Exact value of (sum_i J_i)/I for the single function (1 - P1)^l:
///   2k(2l+1) / ((l+1)(k+2l+1)).
Rational gpy_closed_form(int k, int l);

/// Exact quotient f^T m1 f / f^T m2 f.
Rational rayleigh_quotient(const QuadraticForms& forms,
                           const std::vector<Rational>& f);

/// JSON object with k, degree, family, basis (strings), m1, m2 where every
/// rational is written as "numerator/denominator".
std::string forms_to_json(const QuadraticForms& forms);

}  // namespace ktsieve::sieve
