#include <cmath>
#include <random>

#include "doctest.h"
#include "ktsieve/error.hpp"
#include "ktsieve/forms.hpp"
#include "ktsieve/rayleigh.hpp"
#include "ktsieve/sympoly.hpp"
#include "oracles.hpp"

using namespace ktsieve;
using namespace ktsieve::sieve;

namespace {

Integer factorial(int n) {
  Integer r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Integrals of a function on the 2-simplex by nested Simpson.
double simplex2(const std::function<double(double, double)>& f, int panels = 400) {
  return oracle::simpson(
      [&](double t1) {
        return oracle::simpson([&](double t2) { return f(t1, t2); }, 0.0, 1.0 - t1, panels);
      },
      0.0, 1.0, panels);
}

}  // namespace

TEST_CASE("simplex monomial integrals") {
  // Factorial closed form for several shapes.
  const std::vector<std::vector<int>> shapes = {{0, 0}, {1, 0}, {2, 3}, {1, 1, 1}, {4, 0, 2, 1}};
  for (const auto& a : shapes) {
    for (int b : {0, 1, 3}) {
      const int k = static_cast<int>(a.size());
      Integer num = factorial(b);
      int sum = 0;
      for (int ai : a) {
        num *= factorial(ai);
        sum += ai;
      }
      Rational expected(num, factorial(k + b + sum));
      expected.canonicalize();
      CHECK(simplex_monomial_integral(k, a, b) == expected);
    }
  }
  // Independent numerical route in two dimensions.
  const int a[] = {2, 1};
  const double num = simplex2([](double s, double t) { return s * s * t * std::pow(1 - s - t, 3); });
  CHECK(simplex_monomial_integral(2, a, 3).get_d() == doctest::Approx(num).epsilon(1e-9));
}

TEST_CASE("quadratic forms match direct integration for k = 2") {
  std::vector<SymPoly> basis{SymPoly::p2_term(2, 1, 0), SymPoly::p2_term(2, 0, 1),
                             SymPoly::p2_term(2, 2, 0)};
  const auto forms = assemble_forms(2, basis);
  REQUIRE(forms.m1.is_symmetric());
  REQUIRE(forms.m2.is_symmetric());
  auto eval = [&](std::size_t i, double s, double t) {
    const double pt[] = {s, t};
    return basis[i].evaluate(pt);
  };
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const double m2 = simplex2([&](double s, double t) { return eval(i, s, t) * eval(j, s, t); });
      // J: integrate out t2, square, integrate t1; both coordinates contribute equally.
      auto inner = [&](std::size_t b, double s) {
        return oracle::simpson([&](double t) { return eval(b, s, t); }, 0.0, 1.0 - s, 400);
      };
      const double m1 =
          2.0 * oracle::simpson([&](double s) { return inner(i, s) * inner(j, s); }, 0.0, 1.0, 400);
      CAPTURE(i);
      CAPTURE(j);
      CHECK(forms.m2(i, j).get_d() == doctest::Approx(m2).epsilon(1e-8));
      CHECK(forms.m1(i, j).get_d() == doctest::Approx(m1).epsilon(1e-8));
    }
  }
}

TEST_CASE("single-function ratios agree with the closed form") {
  for (int k : {1, 2, 3, 7, 20}) {
    for (int l = 0; l <= 4; ++l) {
      const auto forms = assemble_forms(k, {SymPoly::p2_term(k, l, 0)});
      const auto exact = forms.m1(0, 0) / forms.m2(0, 0);
      CHECK(exact == gpy_closed_form(k, l));
      const auto r = max_ratio(forms);
      CHECK(r.ratio == doctest::Approx(gpy_closed_form(k, l).get_d()).epsilon(1e-12));
    }
    Rational expected = Rational(2) - Rational(2, k + 1);
    expected.canonicalize();
    CHECK(gpy_closed_form(k, 0) == expected);
  }
  CHECK(gpy_closed_form(5, 0) == Rational(5, 3));
  CHECK_THROWS_AS(gpy_closed_form(0, 0), Error);
}

TEST_CASE("the maximal ratio dominates every Rayleigh quotient") {
  const auto forms = assemble_forms(6, 4, family_p2());
  const auto r = max_ratio(forms);
  CHECK(r.certified_ratio <= Rational(r.ratio + 1e-12));
  CHECK(r.residual < 1e-12);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Rational> f(forms.basis.size());
    for (auto& v : f) v = Rational(static_cast<long>(rng() % 2001) - 1000, 1000);
    if (std::all_of(f.begin(), f.end(), [](const Rational& v) { return v == 0; })) continue;
    CHECK(rayleigh_quotient(forms, f).get_d() <= r.ratio + 1e-12);
  }
  // Scaling invariance of the quotient.
  std::vector<Rational> f(forms.basis.size(), Rational(1));
  auto g = f;
  for (auto& v : g) v *= 7;
  CHECK(rayleigh_quotient(forms, f) == rayleigh_quotient(forms, g));
}

TEST_CASE("ratios grow with the basis") {
  double prev = 0.0;
  for (int d = 0; d <= 6; ++d) {
    const double r = mk_lower_bound(10, d, family_p2()).ratio;
    CHECK(r >= prev - 1e-12);
    prev = r;
  }
  const double p2 = mk_lower_bound(10, 6, family_p2()).ratio;
  const double p2p3 = mk_lower_bound(10, 6, family_p2p3()).ratio;
  const double full = mk_lower_bound(10, 6, family_full(6)).ratio;
  CHECK(p2p3 >= p2 - 1e-12);
  CHECK(full >= p2p3 - 1e-12);
}

TEST_CASE("eigen solve is independent of thread count") {
  AssemblyOptions one, four;
  four.threads = 4;
  const auto a = mk_lower_bound(12, 5, family_p2p3(), one);
  const auto b = mk_lower_bound(12, 5, family_p2p3(), four);
  CHECK(a.ratio == b.ratio);
  CHECK(a.certified_ratio == b.certified_ratio);
  CHECK(a.coefficients == b.coefficients);
}

TEST_CASE("known value at k = 105") {
  // Independent published computation for k = 105 with the (1 - P1)^a P2^b
  // basis of degree 11.
  const auto r = mk_lower_bound(105, 11, family_p2());
  CHECK(r.ratio == doctest::Approx(4.0020697619).epsilon(1e-9));
  CHECK(r.certified_ratio > 4);
}

TEST_CASE("a singular Gram matrix is reported as a basis error") {
  std::vector<SymPoly> basis{SymPoly::p2_term(4, 1, 0), SymPoly::p2_term(4, 1, 0)};
  const auto forms = assemble_forms(4, basis);
  try {
    max_ratio(forms);
    FAIL("expected a basis error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::basis);
  }
}

TEST_CASE("expected primes") {
  const auto e = expected_primes(4.0049789021, 0.25);
  CHECK(e.expectation > 1.0);
  CHECK(e.guaranteed == 2);
  CHECK(e.conclusive);
  const auto below = expected_primes(3.99, 0.25);
  CHECK(below.guaranteed == 1);
  CHECK_FALSE(below.conclusive);
  const auto exact = expected_primes(Rational(4), Rational(1, 4));
  CHECK(exact.guaranteed == 1);  // exactly 1 is not enough
  CHECK_THROWS_AS(expected_primes(4.1, 0.5), Error);
  CHECK_THROWS_AS(expected_primes(4.1, 0.0), Error);
}

TEST_CASE("basis families") {
  CHECK(monomial_basis(54, 0, family_p2()).size() == 1);
  // (1 - P1)^a P2^b with a + 2b <= 4: b = 0..2 gives 5 + 3 + 1 terms.
  CHECK(monomial_basis(54, 4, family_p2()).size() == 9);
  CHECK(monomial_basis(54, 4, family_p2p3()).size() > 9);
  CHECK_THROWS_AS(family_by_name("nope", 3), Error);
}
