// Copyright 2026 The iidsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "iidsp/polynomial.hpp"

namespace iidsp {
namespace {

SimplexPolynomial poly(int k, int d, std::initializer_list<std::pair<Exponent, Rational>> terms) {
  SimplexPolynomial f(k, d);
  for (const auto& [e, c] : terms) f.add_term(e, c);
  return f;
}

// Coefficient of phi^beta in (sum phi)^N f, from the multinomial expansion.
Rational expanded_coefficient(const SimplexPolynomial& f, int N, const Exponent& beta) {
  Rational total = 0;
  for (const auto& [alpha, c] : f.terms()) {
    mpz_class ways, fact;
    mpz_fac_ui(ways.get_mpz_t(), static_cast<unsigned long>(N));
    bool ok = true;
    for (std::size_t i = 0; i < beta.size(); ++i) {
      int diff = beta[i] - alpha[i];
      if (diff < 0) {
        ok = false;
        break;
      }
      mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(diff));
      ways /= fact;
    }
    if (ok) total += c * Rational(ways);
  }
  return total;
}

void all_exponents(int k, int d, Exponent& cur, std::vector<Exponent>& out) {
  if (static_cast<int>(cur.size()) == k - 1) {
    cur.push_back(d);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = 0; a <= d; ++a) {
    cur.push_back(a);
    all_exponents(k, d - a, cur, out);
    cur.pop_back();
  }
}

TEST(Polynomial, HomogeneityIsEnforced) {
  SimplexPolynomial f(2, 2);
  EXPECT_THROW(f.add_term({1, 0}, 1), std::domain_error);
  EXPECT_THROW(f.add_term({1, 1, 0}, 1), std::domain_error);
  EXPECT_THROW(f.add_term({3, -1}, 1), std::domain_error);
  f.add_term({1, 1}, 2);
  f.add_term({1, 1}, -2);
  EXPECT_TRUE(f.is_zero());
}

TEST(Polynomial, TimesCoordinateSum) {
  auto f = poly(2, 1, {{{1, 0}, 1}, {{0, 1}, -1}});
  auto g = f.times_coordinate_sum();
  EXPECT_EQ(g, poly(2, 2, {{{2, 0}, 1}, {{0, 2}, -1}}));
}

TEST(Polynomial, ExpansionMatchesMultinomialFormula) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const int k = 2 + static_cast<int>(rng() % 3), d = static_cast<int>(rng() % 3);
    SimplexPolynomial f(k, d);
    std::vector<Exponent> support;
    Exponent cur;
    all_exponents(k, d, cur, support);
    for (const auto& e : support) f.add_term(e, ratio(static_cast<long>(rng() % 11) - 5, 1 + static_cast<long>(rng() % 3)));
    SimplexPolynomial g = f;
    for (int N = 0; N <= 4; ++N) {
      std::vector<Exponent> betas;
      Exponent b;
      all_exponents(k, d + N, b, betas);
      for (const auto& beta : betas) ASSERT_EQ(g.coefficient(beta), expanded_coefficient(f, N, beta));
      g = g.times_coordinate_sum();
    }
  }
}

TEST(Polynomial, Evaluate) {
  auto f = poly(3, 2, {{{2, 0, 0}, 1}, {{0, 1, 1}, -3}});
  EXPECT_EQ(f.evaluate({Rational(1, 2), Rational(1, 4), Rational(1, 4)}), Rational(1, 4) - Rational(3, 16));
  EXPECT_DOUBLE_EQ(f.evaluate_as<double>({0.5, 0.25, 0.25}), 0.0625);
  EXPECT_THROW(f.evaluate({Rational(1)}), std::domain_error);
}

TEST(Polya, CertifiesStrictlyPositiveForms) {
  // (phi1 + phi2)(phi1^2 - phi1 phi2 + phi2^2) = phi1^3 + phi2^3
  auto f = poly(2, 2, {{{2, 0}, 1}, {{1, 1}, -1}, {{0, 2}, 1}});
  auto r = polya_certify(f, 5);
  EXPECT_TRUE(r.certified);
  EXPECT_EQ(r.degree, 1);
  EXPECT_FALSE(polya_certifies_at(f, 0));
  EXPECT_TRUE(polya_certifies_at(f, 1));
}

TEST(Polya, SquareWithInteriorZeroStaysUnknown) {
  auto f = poly(2, 2, {{{2, 0}, 1}, {{1, 1}, -2}, {{0, 2}, 1}});
  for (int N = 0; N <= 10; ++N) EXPECT_FALSE(polya_certifies_at(f, N)) << N;
  auto r = polya_certify(f, 10);
  EXPECT_FALSE(r.certified);
  EXPECT_EQ(r.degree, 10);
  EXPECT_FALSE(sample_refute(f, 2000, 1));
}

TEST(Polya, ZeroPolynomialIsCertified) {
  SimplexPolynomial f(6, 2);
  EXPECT_EQ(polya_certify(f, 3).degree, 0);
  EXPECT_TRUE(polya_certify(f, 3).certified);
  EXPECT_FALSE(sample_refute(f, 10, 1));
}

TEST(Refutation, PointMassesComeFirst) {
  auto f = poly(3, 1, {{{1, 0, 0}, 1}, {{0, 1, 0}, -1}, {{0, 0, 1}, -1}});
  auto phi = sample_refute(f, 10, 1);
  ASSERT_TRUE(phi);
  EXPECT_EQ(*phi, (std::vector<Rational>{0, 1, 0}));
}

TEST(Refutation, MidpointsBeforeRandom) {
  auto f = poly(3, 2, {{{2, 0, 0}, 1}, {{0, 2, 0}, 1}, {{0, 0, 2}, 1}, {{1, 1, 0}, -3}});
  auto phi = RefutationScanner(f).structured();
  ASSERT_TRUE(phi);
  EXPECT_EQ(*phi, (std::vector<Rational>{Rational(1, 2), Rational(1, 2), 0}));
}

TEST(Refutation, InteriorOnlyNegativity) {
  // (sum phi) * sum_{i<j} (phi_i - phi_j)^2 - 27 phi1 phi2 phi3 is -1 at the
  // centroid and positive at every vertex and edge midpoint.
  SimplexPolynomial q(3, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      Exponent a(3, 0), b(3, 0), ab(3, 0);
      a[static_cast<std::size_t>(i)] = 2;
      b[static_cast<std::size_t>(j)] = 2;
      ab[static_cast<std::size_t>(i)] = ab[static_cast<std::size_t>(j)] = 1;
      q.add_term(a, 1);
      q.add_term(b, 1);
      q.add_term(ab, -2);
    }
  auto f = q.times_coordinate_sum();
  f.add_term({1, 1, 1}, -27);
  EXPECT_EQ(f.evaluate({Rational(1, 3), Rational(1, 3), Rational(1, 3)}), -1);
  RefutationScanner scan(f);
  EXPECT_FALSE(scan.structured());
  auto phi = scan.random(5000, 3);
  ASSERT_TRUE(phi);
  EXPECT_LT(f.evaluate(*phi), 0);
  Rational total = 0;
  for (const auto& x : *phi) total += x;
  EXPECT_EQ(total, 1);
  EXPECT_EQ(phi, scan.random(5000, 3));
  EXPECT_THROW(sample_refute(f, 0, 1), std::domain_error);
}

}  // namespace
}  // namespace iidsp
