// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#include "ktsieve/forms.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <json.hpp>

#include "ktsieve/error.hpp"
#include "ktsieve/parallel.hpp"

namespace ktsieve::sieve {

namespace {

Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

void enumerate_counts(const std::vector<int>& parts, std::size_t pos,
                      int budget, CountVector& cur,
                      std::vector<CountVector>& out) {
  if (pos == parts.size()) {
    out.push_back(cur);
    return;
  }
  for (int c = 0; c * parts[pos] <= budget; ++c) {
    cur[pos] = static_cast<unsigned char>(c);
    enumerate_counts(parts, pos + 1, budget - c * parts[pos], cur, out);
  }
  cur[pos] = 0;
}

// A basis polynomial rescaled to integer coefficients over moment indices.
struct IntegerTerm {
  int a;
  CountVector counts;
  Integer coef;
};

struct ScaledPoly {
  std::vector<IntegerTerm> terms;
  Integer scale;  // original = terms / scale
};

ScaledPoly scale_to_integers(const SymPoly& p, const PowerSumMoments& table) {
  ScaledPoly out;
  out.scale = 1;
  for (const auto& [t, c] : p.terms()) {
    mpz_lcm(out.scale.get_mpz_t(), out.scale.get_mpz_t(),
            c.get_den_mpz_t());
  }
  for (const auto& [t, c] : p.terms()) {
    Integer v = c.get_num() * (out.scale / c.get_den());
    out.terms.push_back({t.a, table.counts_of(t.signature), std::move(v)});
  }
  return out;
}

// Bilinear form B_n(p, q) = sum_{terms} c c' int_{Delta_n} (1-P1)^{a+a'} P_{s+s'}
// evaluated over integer-scaled polynomials. Every simplex integral is
// A! Q_c / (n + A + w)! = A! Q_c F[A + w] / D with D = (n + S)! fixed, so the
// accumulation stays in integers.
class BilinearForm {
 public:
  BilinearForm(const PowerSumMoments& table, int max_a, unsigned threads)
      : table_(table), max_a_(max_a) {
    const int n = table.dims();
    const int smax = max_a + table.max_weight();
    denominator_ = factorial(static_cast<unsigned long>(n + smax));
    falling_.resize(static_cast<std::size_t>(smax) + 1);
    for (int s = 0; s <= smax; ++s) {
      falling_[static_cast<std::size_t>(s)] =
          denominator_ / factorial(static_cast<unsigned long>(n + s));
    }
    const std::size_t stride = static_cast<std::size_t>(max_a) + 1;
    values_.resize(table.size() * stride);
    parallel_for(table.size(), threads, [&](std::size_t ci) {
      const int w = table.weight_at(ci);
      for (int A = 0; A <= max_a; ++A) {
        values_[ci * stride + static_cast<std::size_t>(A)] =
            factorial(static_cast<unsigned long>(A)) * table.moment_at(ci) *
            falling_[static_cast<std::size_t>(A + w)];
      }
    });
  }

  Rational evaluate(const ScaledPoly& p, const ScaledPoly& q) const {
    Integer acc = 0;
    CountVector sum;
    const std::size_t stride = static_cast<std::size_t>(max_a_) + 1;
    for (const auto& s : p.terms) {
      for (const auto& t : q.terms) {
        sum = s.counts;
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += t.counts[i];
        const long idx = table_.index_of(sum);
        const int A = s.a + t.a;
        if (idx < 0 || A > max_a_) {
          fail(ErrorCode::resource, "moment table too small for basis product");
        }
        Integer term = s.coef * t.coef;
        acc += term * values_[static_cast<std::size_t>(idx) * stride +
                              static_cast<std::size_t>(A)];
      }
    }
    Rational r(acc, denominator_ * p.scale * q.scale);
    r.canonicalize();
    return r;
  }

 private:
  const PowerSumMoments& table_;
  int max_a_;
  Integer denominator_;
  std::vector<Integer> falling_;
  std::vector<Integer> values_;
};

}  // namespace

std::size_t CountVectorHash::operator()(const CountVector& v) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (unsigned char c : v) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

PowerSumMoments::PowerSumMoments(int dims, std::vector<int> parts,
                                 int max_weight)
    : dims_(dims), parts_(std::move(parts)), max_weight_(max_weight) {
  if (dims < 0 || max_weight < 0) {
    fail(ErrorCode::validation, "invalid power-sum moment table parameters");
  }
  std::sort(parts_.begin(), parts_.end());
  parts_.erase(std::unique(parts_.begin(), parts_.end()), parts_.end());
  for (int m : parts_) {
    if (m < 1) fail(ErrorCode::validation, "power-sum index must be >= 1");
  }
  CountVector cur(parts_.size(), 0);
  enumerate_counts(parts_, 0, max_weight, cur, vectors_);
  std::stable_sort(vectors_.begin(), vectors_.end(),
                   [this](const CountVector& x, const CountVector& y) {
                     return weight(x) < weight(y);
                   });
  weights_.reserve(vectors_.size());
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    weights_.push_back(weight(vectors_[i]));
    index_.emplace(vectors_[i], i);
  }

  // Exponential generating function of one Exp(1) variable:
  //   M(s) = sum_c s^c w(c)! / prod c_i!
  // and B = M^dims via  w(c) B_c = sum_{0 != c' <= c} (dims w(c') - w(c - c')) M_c' B_{c-c'}.
  const std::size_t n = vectors_.size();
  std::vector<Integer> egf(n), power(n);
  for (std::size_t i = 0; i < n; ++i) {
    Integer den = 1;
    for (unsigned char c : vectors_[i]) den *= factorial(c);
    egf[i] = factorial(static_cast<unsigned long>(weights_[i])) / den;
  }
  power[0] = 1;
  CountVector sub(parts_.size()), rest(parts_.size());
  for (std::size_t i = 1; i < n; ++i) {
    const CountVector& c = vectors_[i];
    Integer acc = 0;
    std::fill(sub.begin(), sub.end(), 0);
    while (true) {
      // advance odometer first so sub == 0 is skipped
      std::size_t p = 0;
      for (; p < sub.size(); ++p) {
        if (sub[p] < c[p]) {
          ++sub[p];
          break;
        }
        sub[p] = 0;
      }
      if (p == sub.size()) break;
      for (std::size_t q = 0; q < sub.size(); ++q) rest[q] = c[q] - sub[q];
      const std::size_t si = index_.at(sub), ri = index_.at(rest);
      const long coeff = static_cast<long>(dims) * weights_[si] - weights_[ri];
      if (coeff != 0) acc += coeff * egf[si] * power[ri];
    }
    mpz_divexact_ui(power[i].get_mpz_t(), acc.get_mpz_t(),
                    static_cast<unsigned long>(weights_[i]));
  }
  moments_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Integer f = 1;
    for (unsigned char c : vectors_[i]) f *= factorial(c);
    moments_[i] = power[i] * f;
  }
}

long PowerSumMoments::index_of(const CountVector& c) const {
  auto it = index_.find(c);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

int PowerSumMoments::weight(const CountVector& c) const noexcept {
  int w = 0;
  for (std::size_t i = 0; i < c.size(); ++i) w += c[i] * parts_[i];
  return w;
}

CountVector PowerSumMoments::counts_of(const Signature& s) const {
  CountVector c(parts_.size(), 0);
  for (int m : s) {
    auto it = std::lower_bound(parts_.begin(), parts_.end(), m);
    if (it == parts_.end() || *it != m) {
      fail(ErrorCode::validation,
           "power sum P" + std::to_string(m) + " not in moment table");
    }
    ++c[static_cast<std::size_t>(it - parts_.begin())];
  }
  return c;
}

Rational PowerSumMoments::simplex_integral(int A, const CountVector& c) const {
  const long idx = index_of(c);
  if (idx < 0) fail(ErrorCode::range, "count vector exceeds moment table");
  Rational r(factorial(static_cast<unsigned long>(A)) *
                 moments_[static_cast<std::size_t>(idx)],
             factorial(static_cast<unsigned long>(
                 dims_ + A + weights_[static_cast<std::size_t>(idx)])));
  r.canonicalize();
  return r;
}

bool RationalMatrix::is_symmetric() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) return false;
    }
  }
  return true;
}

QuadraticForms assemble_forms(int k, std::vector<SymPoly> basis,
                              const AssemblyOptions& options) {
  if (k < 1) fail(ErrorCode::validation, "assemble_forms needs k >= 1");
  if (basis.empty()) fail(ErrorCode::validation, "empty basis");
  if (basis.size() > options.max_basis) {
    fail(ErrorCode::resource,
         "basis size " + std::to_string(basis.size()) + " exceeds budget " +
             std::to_string(options.max_basis));
  }
  std::set<int> part_set;
  int max_sig = 0, max_deg = 0;
  for (const auto& g : basis) {
    if (g.k() != k) fail(ErrorCode::validation, "basis dimension mismatch");
    if (g.empty()) fail(ErrorCode::validation, "zero basis function");
    for (const auto& [t, c] : g.terms()) {
      part_set.insert(t.signature.begin(), t.signature.end());
      max_sig = std::max(max_sig, t.degree() - t.a);
      max_deg = std::max(max_deg, t.degree());
    }
  }
  const std::vector<int> parts(part_set.begin(), part_set.end());
  const int max_weight = 2 * max_sig;

  std::vector<SymPoly> inner;
  inner.reserve(basis.size());
  for (const auto& g : basis) inner.push_back(integrate_last_variable(g));

  const PowerSumMoments table_k(k, parts, max_weight);
  if (table_k.size() > options.max_moments) {
    fail(ErrorCode::resource, "moment table of " +
                                  std::to_string(table_k.size()) +
                                  " entries exceeds expansion budget");
  }
  const PowerSumMoments table_km1(k - 1, parts, max_weight);

  const BilinearForm form_k(table_k, 2 * max_deg, options.threads);
  const BilinearForm form_km1(table_km1, 2 * (max_deg + 1), options.threads);

  std::vector<ScaledPoly> outer_scaled, inner_scaled;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    outer_scaled.push_back(scale_to_integers(basis[i], table_k));
    inner_scaled.push_back(scale_to_integers(inner[i], table_km1));
  }

  const std::size_t r = basis.size();
  QuadraticForms out;
  out.k = k;
  out.m1 = RationalMatrix(r);
  out.m2 = RationalMatrix(r);
  const Rational kk(k);
  parallel_for(r, options.threads, [&](std::size_t i) {
    for (std::size_t j = i; j < r; ++j) {
      Rational v2 = form_k.evaluate(outer_scaled[i], outer_scaled[j]);
      Rational v1 = kk * form_km1.evaluate(inner_scaled[i], inner_scaled[j]);
      out.m2(j, i) = v2;
      out.m2(i, j) = std::move(v2);
      out.m1(j, i) = v1;
      out.m1(i, j) = std::move(v1);
    }
  });
  out.basis = std::move(basis);
  return out;
}

QuadraticForms assemble_forms(int k, int degree, const BasisFamily& family,
                              const AssemblyOptions& options) {
  QuadraticForms out =
      assemble_forms(k, monomial_basis(k, degree, family), options);
  out.degree = degree;
  out.family = family.name;
  return out;
}

Rational gpy_closed_form(int k, int l) {
  if (k < 1 || l < 0) fail(ErrorCode::validation, "need k >= 1 and l >= 0");
  Rational r(Integer(2) * k * (2 * l + 1), Integer(l + 1) * (k + 2 * l + 1));
  r.canonicalize();
  return r;
}

Rational rayleigh_quotient(const QuadraticForms& forms,
                           const std::vector<Rational>& f) {
  const std::size_t n = forms.m1.size();
  if (f.size() != n) fail(ErrorCode::validation, "coefficient length mismatch");
  Rational num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rational r1 = 0, r2 = 0;
    for (std::size_t j = 0; j < n; ++j) {
      r1 += forms.m1(i, j) * f[j];
      r2 += forms.m2(i, j) * f[j];
    }
    num += f[i] * r1;
    den += f[i] * r2;
  }
  if (den == 0) fail(ErrorCode::numeric, "zero denominator in Rayleigh quotient");
  return num / den;
}

std::string forms_to_json(const QuadraticForms& forms) {
  nlohmann::ordered_json j;
  j["k"] = forms.k;
  j["degree"] = forms.degree;
  j["family"] = forms.family;
  auto basis = nlohmann::ordered_json::array();
  for (const auto& g : forms.basis) basis.push_back(g.to_string());
  j["basis"] = basis;
  auto dump = [](const RationalMatrix& m) {
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
      auto row = nlohmann::ordered_json::array();
      for (std::size_t c = 0; c < m.size(); ++c) {
        row.push_back(m(i, c).get_num().get_str() + "/" +
                      m(i, c).get_den().get_str());
      }
      rows.push_back(row);
    }
    return rows;
  };
  j["m1"] = dump(forms.m1);
  j["m2"] = dump(forms.m2);
  return j.dump();
}

}  // namespace ktsieve::sieve
