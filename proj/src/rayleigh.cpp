// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#include "ktsieve/rayleigh.hpp"

#include <gmp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>

#include "ktsieve/error.hpp"

namespace ktsieve::sieve {

namespace {

// Fixed-length array of mpf_t at one precision.
class MpArray {
 public:
  MpArray(std::size_t n, unsigned bits) : data_(n) {
    for (auto& x : data_) mpf_init2(x, bits);
  }
  ~MpArray() {
    for (auto& x : data_) mpf_clear(x);
  }
  MpArray(const MpArray&) = delete;
  MpArray& operator=(const MpArray&) = delete;

  mpf_ptr operator[](std::size_t i) { return data_[i]; }
  mpf_srcptr operator[](std::size_t i) const { return data_[i]; }
  std::size_t size() const noexcept { return data_.size(); }

 private:
  std::vector<mpf_t> data_;
};

class MpScalar {
 public:
  explicit MpScalar(unsigned bits) { mpf_init2(v_, bits); }
  ~MpScalar() { mpf_clear(v_); }
  MpScalar(const MpScalar&) = delete;
  MpScalar& operator=(const MpScalar&) = delete;
  operator mpf_ptr() { return v_; }
  operator mpf_srcptr() const { return v_; }

 private:
  mpf_t v_;
};

// out = sum_{i<len} x[i] * y[i]
void dot(mpf_ptr out, const mpf_t* x, const mpf_t* y, std::size_t len,
         mpf_ptr tmp) {
  mpf_set_ui(out, 0);
  for (std::size_t i = 0; i < len; ++i) {
    mpf_mul(tmp, x[i], y[i]);
    mpf_add(out, out, tmp);
  }
}

struct Problem {
  std::size_t n;
  unsigned bits;
  MpArray a, b, l;     // scaled m1, scaled m2, Cholesky factor (row-major lower)
  MpArray scale;       // d_i = 1/sqrt(m2_ii)

  Problem(std::size_t size, unsigned precision)
      : n(size), bits(precision), a(size * size, precision),
        b(size * size, precision), l(size * size, precision),
        scale(size, precision) {}

  const mpf_t* row(const MpArray& m, std::size_t i) const {
    return reinterpret_cast<const mpf_t*>(m[i * n]);
  }
};

// Returns the failing pivot index, or nullopt on success.
std::optional<std::size_t> load_and_factor(Problem& p, const RationalMatrix& m1,
                                           const RationalMatrix& m2) {
  const std::size_t n = p.n;
  MpScalar tmp(p.bits), acc(p.bits);
  for (std::size_t i = 0; i < n; ++i) {
    if (m2(i, i) <= 0) return i;
    mpf_set_q(p.scale[i], m2(i, i).get_mpq_t());
    mpf_sqrt(p.scale[i], p.scale[i]);
    mpf_ui_div(p.scale[i], 1, p.scale[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      mpf_set_q(p.a[i * n + j], m1(i, j).get_mpq_t());
      mpf_mul(p.a[i * n + j], p.a[i * n + j], p.scale[i]);
      mpf_mul(p.a[i * n + j], p.a[i * n + j], p.scale[j]);
      mpf_set_q(p.b[i * n + j], m2(i, j).get_mpq_t());
      mpf_mul(p.b[i * n + j], p.b[i * n + j], p.scale[i]);
      mpf_mul(p.b[i * n + j], p.b[i * n + j], p.scale[j]);
    }
  }
  // Cholesky; the scaled diagonal is 1, so a pivot below 2^{-(bits-16)}
  // means definiteness is lost at this precision.
  MpScalar floor_v(p.bits);
  mpf_set_ui(floor_v, 1);
  mpf_div_2exp(floor_v, floor_v, p.bits > 32 ? p.bits - 16 : 16);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j; i < n; ++i) {
      dot(acc, p.row(p.l, i), p.row(p.l, j), j, tmp);
      mpf_sub(acc, p.b[i * n + j], acc);
      if (i == j) {
        if (mpf_cmp(acc, floor_v) <= 0) return j;
        mpf_sqrt(p.l[j * n + j], acc);
      } else {
        mpf_div(p.l[i * n + j], acc, p.l[j * n + j]);
      }
    }
  }
  return std::nullopt;
}

// x <- L^{-1} x
void forward_solve(const Problem& p, MpArray& x, mpf_ptr acc, mpf_ptr tmp) {
  for (std::size_t i = 0; i < p.n; ++i) {
    dot(acc, p.row(p.l, i), reinterpret_cast<const mpf_t*>(x[0]), i, tmp);
    mpf_sub(acc, x[i], acc);
    mpf_div(x[i], acc, p.l[i * p.n + i]);
  }
}

// x <- L^{-T} x
void backward_solve(const Problem& p, MpArray& x, mpf_ptr tmp) {
  for (std::size_t ii = p.n; ii-- > 0;) {
    mpf_div(x[ii], x[ii], p.l[ii * p.n + ii]);
    for (std::size_t k = 0; k < ii; ++k) {
      mpf_mul(tmp, p.l[ii * p.n + k], x[ii]);
      mpf_sub(x[k], x[k], tmp);
    }
  }
}

void matvec(const Problem& p, const MpArray& m, const MpArray& x, MpArray& y,
            mpf_ptr tmp) {
  for (std::size_t i = 0; i < p.n; ++i) {
    dot(y[i], p.row(m, i), reinterpret_cast<const mpf_t*>(x[0]), p.n, tmp);
  }
}

using Real = long double;

// Number of eigenvalues of the symmetric tridiagonal (alpha, beta) below x.
std::size_t sturm_count(const std::vector<Real>& alpha,
                        const std::vector<Real>& beta, Real x) {
  std::size_t count = 0;
  Real d = 1;
  const Real tiny = std::numeric_limits<Real>::min() * 1e10L;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const Real off = i == 0 ? 0 : beta[i - 1] * beta[i - 1] / d;
    d = alpha[i] - x - off;
    if (d == 0) d = -tiny;
    if (d < 0) ++count;
  }
  return count;
}

Real largest_tridiagonal_eigenvalue(const std::vector<Real>& alpha,
                                    const std::vector<Real>& beta) {
  const std::size_t m = alpha.size();
  Real lo = alpha[0], hi = alpha[0];
  for (std::size_t i = 0; i < m; ++i) {
    const Real r = (i > 0 ? std::fabs(beta[i - 1]) : 0) +
                   (i + 1 < m ? std::fabs(beta[i]) : 0);
    lo = std::min(lo, alpha[i] - r);
    hi = std::max(hi, alpha[i] + r);
  }
  for (int it = 0; it < 200; ++it) {
    const Real mid = 0.5L * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(alpha, beta, mid) == m) hi = mid;
    else lo = mid;
  }
  return hi;
}

// Inverse iteration for the eigenvector of (alpha, beta) near theta, by
// Gaussian elimination with partial pivoting on the tridiagonal system.
std::vector<Real> tridiagonal_eigenvector(const std::vector<Real>& alpha,
                                          const std::vector<Real>& beta,
                                          Real theta) {
  const std::size_t m = alpha.size();
  std::vector<Real> s(m, 1.0L);
  if (m == 1) return s;
  const Real shift =
      theta + std::max<Real>(std::fabs(theta), 1) * 64 *
                  std::numeric_limits<Real>::epsilon();
  for (int iter = 0; iter < 3; ++iter) {
    std::vector<Real> dl(beta.begin(), beta.end()), du(beta.begin(), beta.end());
    std::vector<Real> d(m), du2(m, 0);
    for (std::size_t i = 0; i < m; ++i) d[i] = alpha[i] - shift;
    std::vector<Real> b = s;
    const Real tiny = std::numeric_limits<Real>::epsilon() * 1e-6L;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (std::fabs(d[i]) >= std::fabs(dl[i])) {
        if (d[i] == 0) d[i] = tiny;
        const Real fact = dl[i] / d[i];
        d[i + 1] -= fact * du[i];
        b[i + 1] -= fact * b[i];
        du2[i] = 0;
      } else {
        const Real fact = d[i] / dl[i];
        d[i] = dl[i];
        const Real temp = d[i + 1];
        d[i + 1] = du[i] - fact * temp;
        if (i + 2 < m) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du2[i];
        }
        du[i] = temp;
        const Real tb = b[i];
        b[i] = b[i + 1];
        b[i + 1] = tb - fact * b[i + 1];
      }
    }
    if (d[m - 1] == 0) d[m - 1] = tiny;
    b[m - 1] /= d[m - 1];
    b[m - 2] = (b[m - 2] - du[m - 2] * b[m - 1]) / d[m - 2];
    for (std::size_t i = m - 2; i-- > 0;) {
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
    Real norm = 0;
    for (Real v : b) norm += v * v;
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < m; ++i) s[i] = b[i] / norm;
  }
  return s;
}

double to_double(mpf_srcptr x) { return mpf_get_d(x); }

Integer lcm_of_denominators(const RationalMatrix& m) {
  Integer l = 1;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    }
  }
  return l;
}

// f^T m f for integer f, exact.
Rational exact_quadratic(const RationalMatrix& m, const std::vector<Integer>& f) {
  const Integer den = lcm_of_denominators(m);
  Integer total = 0, row, entry;
  for (std::size_t i = 0; i < m.size(); ++i) {
    row = 0;
    for (std::size_t j = 0; j < m.size(); ++j) {
      entry = m(i, j).get_num() * (den / m(i, j).get_den());
      row += entry * f[j];
    }
    total += row * f[i];
  }
  Rational r(total, den);
  r.canonicalize();
  return r;
}

RayleighResult solve_at_precision(const RationalMatrix& m1,
                                  const RationalMatrix& m2, unsigned bits,
                                  double tolerance,
                                  std::optional<std::size_t>& failed_pivot) {
  const std::size_t n = m1.size();
  Problem p(n, bits);
  failed_pivot = load_and_factor(p, m1, m2);
  if (failed_pivot) return {};

  MpScalar tmp(bits), acc(bits), coef(bits);
  // Lanczos basis vectors, kept for full reorthogonalization.
  std::vector<std::unique_ptr<MpArray>> q;
  auto fresh = [&] { return std::make_unique<MpArray>(n, bits); };

  auto v = fresh();
  for (std::size_t i = 0; i < n; ++i) {
    mpf_set_d((*v)[i], 1.0 + static_cast<double>(i) / static_cast<double>(n));
  }
  auto normalize = [&](MpArray& x) {
    dot(acc, reinterpret_cast<const mpf_t*>(x[0]),
        reinterpret_cast<const mpf_t*>(x[0]), n, tmp);
    mpf_sqrt(acc, acc);
    double norm = to_double(acc);
    for (std::size_t i = 0; i < n; ++i) mpf_div(x[i], x[i], acc);
    return norm;
  };
  normalize(*v);
  q.push_back(std::move(v));

  std::vector<Real> alpha, beta;
  Real theta = 0, previous = std::numeric_limits<Real>::quiet_NaN();
  std::vector<Real> s;
  MpArray y(n, bits), w(n, bits);
  std::size_t steps = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const MpArray& qj = *q[j];
    // w = L^{-1} A L^{-T} q_j
    for (std::size_t i = 0; i < n; ++i) mpf_set(y[i], qj[i]);
    backward_solve(p, y, tmp);
    matvec(p, p.a, y, w, tmp);
    forward_solve(p, w, acc, tmp);

    dot(acc, reinterpret_cast<const mpf_t*>(qj[0]),
        reinterpret_cast<const mpf_t*>(w[0]), n, tmp);
    alpha.push_back(static_cast<Real>(to_double(acc)));
    // Two passes of classical Gram-Schmidt against every previous vector.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qi : q) {
        dot(coef, reinterpret_cast<const mpf_t*>((*qi)[0]),
            reinterpret_cast<const mpf_t*>(w[0]), n, tmp);
        for (std::size_t i = 0; i < n; ++i) {
          mpf_mul(tmp, (*qi)[i], coef);
          mpf_sub(w[i], w[i], tmp);
        }
      }
    }
    dot(acc, reinterpret_cast<const mpf_t*>(w[0]),
        reinterpret_cast<const mpf_t*>(w[0]), n, tmp);
    mpf_sqrt(acc, acc);
    const Real b = static_cast<Real>(to_double(acc));
    // Alpha from the projection above is exact up to rounding; recompute it
    // in long double from the mpf value for the tridiagonal model.
    theta = largest_tridiagonal_eigenvalue(alpha, beta);
    s = tridiagonal_eigenvector(alpha, beta, theta);
    steps = j + 1;
    const Real scale = std::max<Real>(std::fabs(theta), 1);
    const bool breakdown = b <= scale * 1e-30L;
    const bool stable = std::isfinite(static_cast<double>(previous)) &&
                        std::fabs(theta - previous) <= tolerance * scale;
    const bool small_residual = b * std::fabs(s.back()) <= tolerance * scale;
    if (breakdown || steps == n || (stable && small_residual)) break;
    previous = theta;
    beta.push_back(b);
    auto next = fresh();
    for (std::size_t i = 0; i < n; ++i) mpf_div((*next)[i], w[i], acc);
    q.push_back(std::move(next));
  }

  // Ritz vector, mapped back to coefficients of the original basis.
  MpArray g(n, bits);
  for (std::size_t i = 0; i < n; ++i) mpf_set_ui(g[i], 0);
  for (std::size_t c = 0; c < s.size(); ++c) {
    mpf_set_d(coef, static_cast<double>(s[c]));
    for (std::size_t i = 0; i < n; ++i) {
      mpf_mul(tmp, (*q[c])[i], coef);
      mpf_add(g[i], g[i], tmp);
    }
  }
  backward_solve(p, g, tmp);  // g now holds coefficients for D m D

  // Residual and Rayleigh quotient at full precision, in the scaled problem:
  // m1 f - t m2 f = D^{-1} (A g - t B g) with f = D g.
  MpArray ag(n, bits), bg(n, bits);
  matvec(p, p.a, g, ag, tmp);
  matvec(p, p.b, g, bg, tmp);
  MpScalar num(bits), den(bits), t(bits);
  dot(num, reinterpret_cast<const mpf_t*>(g[0]),
      reinterpret_cast<const mpf_t*>(ag[0]), n, tmp);
  dot(den, reinterpret_cast<const mpf_t*>(g[0]),
      reinterpret_cast<const mpf_t*>(bg[0]), n, tmp);
  mpf_div(t, num, den);
  MpScalar rn(bits), dn(bits);
  mpf_set_ui(rn, 0);
  mpf_set_ui(dn, 0);
  for (std::size_t i = 0; i < n; ++i) {
    mpf_mul(tmp, t, bg[i]);
    mpf_sub(tmp, ag[i], tmp);
    mpf_div(tmp, tmp, p.scale[i]);
    mpf_mul(tmp, tmp, tmp);
    mpf_add(rn, rn, tmp);
    mpf_div(acc, bg[i], p.scale[i]);
    mpf_mul(acc, acc, acc);
    mpf_add(dn, dn, acc);
  }
  mpf_div(rn, rn, dn);
  mpf_sqrt(rn, rn);

  // f = D g, normalized to max |f_i| = 1.
  MpArray f(n, bits);
  MpScalar fmax(bits);
  mpf_set_ui(fmax, 0);
  for (std::size_t i = 0; i < n; ++i) {
    mpf_mul(f[i], g[i], p.scale[i]);
    mpf_abs(tmp, f[i]);
    if (mpf_cmp(tmp, fmax) > 0) mpf_set(fmax, tmp);
  }
  RayleighResult out;
  out.ratio = to_double(t);
  out.residual = to_double(rn);
  out.iterations = steps;
  out.precision_bits = bits;
  // Fixed-point rounding with enough bits that every component, however
  // small, keeps about 64 significant bits.
  long shift = 64;
  for (std::size_t i = 0; i < n; ++i) {
    mpf_div(f[i], f[i], fmax);
    out.coefficients.push_back(to_double(f[i]));
    if (mpf_sgn(f[i]) != 0) {
      long e = 0;
      mpf_get_d_2exp(&e, f[i]);
      shift = std::max(shift, 64 - e);
    }
  }
  shift = std::min<long>(shift, static_cast<long>(bits));
  std::vector<Integer> rounded(n);
  for (std::size_t i = 0; i < n; ++i) {
    mpf_mul_2exp(tmp, f[i], static_cast<mp_bitcnt_t>(shift));
    mpz_set_f(rounded[i].get_mpz_t(), tmp);
  }
  out.certified_ratio = exact_quadratic(m1, rounded) / exact_quadratic(m2, rounded);
  return out;
}

}  // namespace

RayleighResult max_ratio(const RationalMatrix& m1, const RationalMatrix& m2,
                         const EigenOptions& options) {
  const std::size_t n = m1.size();
  if (n == 0 || m2.size() != n) {
    fail(ErrorCode::validation, "matrices must be square, nonempty, same size");
  }
  if (!m1.is_symmetric() || !m2.is_symmetric()) {
    fail(ErrorCode::validation, "matrices must be symmetric");
  }
  std::optional<std::size_t> pivot;
  for (unsigned bits = std::max(64u, options.precision_bits);
       bits <= std::max(options.precision_bits, options.max_precision_bits);
       bits *= 2) {
    RayleighResult r = solve_at_precision(m1, m2, bits, options.tolerance, pivot);
    if (!pivot) {
      r.basis_size = n;
      return r;
    }
    if (m2(*pivot, *pivot) <= 0) break;
  }
  fail(ErrorCode::basis,
       "m2 is not positive definite: factorization fails at pivot " +
           std::to_string(*pivot));
}

RayleighResult max_ratio(const QuadraticForms& forms,
                         const EigenOptions& options) {
  try {
    RayleighResult r = max_ratio(forms.m1, forms.m2, options);
    r.degree = forms.degree;
    r.family = forms.family;
    return r;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::basis) throw;
    // Name the basis function at the failing pivot.
    const std::string what = e.what();
    const auto pos = what.rfind(' ');
    const std::size_t pivot = std::stoul(what.substr(pos + 1));
    fail(ErrorCode::basis, what + " (basis function " +
                               forms.basis.at(pivot).to_string() +
                               " is dependent on earlier ones)");
  }
}

RayleighResult mk_lower_bound(int k, int degree, const BasisFamily& family,
                              const AssemblyOptions& assembly,
                              const EigenOptions& eigen) {
  return max_ratio(assemble_forms(k, degree, family, assembly), eigen);
}

EscalationResult mk_escalate(int k, double target,
                             const std::vector<BasisFamily>& families,
                             const EscalationOptions& options,
                             const AssemblyOptions& assembly,
                             const EigenOptions& eigen) {
  EscalationResult out;
  out.target = target;
  const Rational target_q(target);
  int degree = options.start_degree;
  for (const auto& fam : families) {
    std::vector<double> history;
    for (; degree <= options.max_degree; degree += options.degree_step) {
      BasisFamily f = fam;
      if (fam.name == "even") f = family_even(degree);
      if (fam.name == "full") f = family_full(degree);
      RayleighResult r = mk_lower_bound(k, degree, f, assembly, eigen);
      EscalationStep step{f.name, degree, r.basis_size, r.ratio,
                          r.certified_ratio > target_q};
      out.steps.push_back(step);
      if (step.certified_above_target) {
        out.reached = true;
        out.best = std::move(r);
        return out;
      }
      history.push_back(r.ratio);
      const std::size_t win = static_cast<std::size_t>(options.stall_window);
      if (history.size() > win) {
        const double gain = history.back() - history[history.size() - 1 - win];
        if (gain < options.stall_gain * static_cast<double>(win)) {
          degree += options.degree_step;
          break;
        }
      }
      out.best = std::move(r);
    }
  }
  return out;
}

ExpectedPrimes expected_primes(double ratio, double theta) {
  if (!(theta > 0.0 && theta <= 0.25)) {
    fail(ErrorCode::range, "theta must lie in (0, 1/4]");
  }
  ExpectedPrimes out;
  out.expectation = ratio * theta;
  out.guaranteed = out.expectation > 0 ? static_cast<int>(std::ceil(out.expectation)) : 0;
  out.conclusive = out.guaranteed >= 2;
  return out;
}

ExpectedPrimes expected_primes(const Rational& ratio, const Rational& theta) {
  if (!(theta > 0 && theta <= Rational(1, 4))) {
    fail(ErrorCode::range, "theta must lie in (0, 1/4]");
  }
  const Rational e = ratio * theta;
  ExpectedPrimes out;
  out.expectation = e.get_d();
  if (e > 0) {
    Integer c;
    mpz_cdiv_q(c.get_mpz_t(), e.get_num_mpz_t(), e.get_den_mpz_t());
    out.guaranteed = static_cast<int>(c.get_si());
  }
  out.conclusive = out.guaranteed >= 2;
  return out;
}

}  // namespace ktsieve::sieve
