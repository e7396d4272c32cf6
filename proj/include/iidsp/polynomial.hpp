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

// Homogeneous polynomials over the probability simplex, with Polya's
// coefficient-positivity certificate and exact evaluation.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "iidsp/rational.hpp"

namespace iidsp {

using Exponent = std::vector<int>;

class SimplexPolynomial {
 public:
  SimplexPolynomial(int num_vars, int degree) : num_vars_(num_vars), degree_(degree) {
    if (num_vars < 1 || degree < 0) throw std::domain_error("SimplexPolynomial: bad shape");
  }

  int num_vars() const { return num_vars_; }
  int degree() const { return degree_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, const Rational& c) {
    if (static_cast<int>(e.size()) != num_vars_) throw std::domain_error("exponent has wrong length");
    int d = 0;
    for (int k : e) {
      if (k < 0) throw std::domain_error("negative exponent");
      d += k;
    }
    if (d != degree_) throw std::domain_error("term breaks homogeneity");
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  bool all_coefficients_nonnegative() const {
    for (const auto& [e, c] : terms_)
      if (c < 0) return false;
    return true;
  }

  // (phi_1 + ... + phi_k) * f
  SimplexPolynomial times_coordinate_sum() const {
    SimplexPolynomial out(num_vars_, degree_ + 1);
    for (const auto& [e, c] : terms_) {
      Exponent f(e);
      for (int i = 0; i < num_vars_; ++i) {
        ++f[static_cast<std::size_t>(i)];
        auto [it, fresh] = out.terms_.try_emplace(f, c);
        if (!fresh) it->second += c;
        --f[static_cast<std::size_t>(i)];
      }
    }
    std::erase_if(out.terms_, [](const auto& t) { return t.second == 0; });
    return out;
  }

  template <class T>
  T evaluate_as(const std::vector<T>& point) const {
    if (static_cast<int>(point.size()) != num_vars_) throw std::domain_error("evaluation point has wrong length");
    T total = 0;
    for (const auto& [e, c] : terms_) {
      T term;
      if constexpr (std::is_same_v<T, Rational>)
        term = c;
      else
        term = static_cast<T>(c.get_d());
      for (int i = 0; i < num_vars_; ++i)
        for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) term *= point[static_cast<std::size_t>(i)];
      total += term;
    }
    return total;
  }

  Rational evaluate(const std::vector<Rational>& point) const { return evaluate_as(point); }

  friend bool operator==(const SimplexPolynomial&, const SimplexPolynomial&) = default;

 private:
  int num_vars_;
  int degree_;
  std::map<Exponent, Rational> terms_;
};

struct PolyaResult {
  bool certified = false;
  int degree = 0;  // certifying N, or the largest N tried
};

// Certified iff every coefficient of (sum phi)^N * f is >= 0 for some N in
// [0, max_degree]. Sound for nonnegativity on the simplex; Unknown is
// inconclusive.
inline PolyaResult polya_certify(const SimplexPolynomial& f, int max_degree) {
  SimplexPolynomial g = f;
  for (int N = 0;; ++N) {
    if (g.all_coefficients_nonnegative()) return {true, N};
    if (N == max_degree) return {false, N};
    g = g.times_coordinate_sum();
  }
}

// Coefficients of (sum phi)^N * f at exactly N.
inline bool polya_certifies_at(const SimplexPolynomial& f, int N) {
  SimplexPolynomial g = f;
  for (int i = 0; i < N; ++i) g = g.times_coordinate_sum();
  return g.all_coefficients_nonnegative();
}

// Scans point masses, then pairwise midpoints, then `trials` seeded random
// interior-ish points; returns the first belief with f < 0 (exactly).
class RefutationScanner {
 public:
  explicit RefutationScanner(const SimplexPolynomial& f) : f_(f), k_(f.num_vars()) {
    // Integer-coefficient copy: f(w / W) has the sign of scaled(w) for any
    // nonnegative integer weights w by homogeneity.
    mpz_class lcm = 1;
    for (const auto& [e, c] : f.terms()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
    for (const auto& [e, c] : f.terms()) scaled_.emplace_back(e, mpz_class(c * lcm));
  }

  std::optional<std::vector<Rational>> structured() const {
    if (f_.is_zero()) return std::nullopt;
    std::vector<mpz_class> w(static_cast<std::size_t>(k_), 0);
    for (int i = 0; i < k_; ++i) {
      w[static_cast<std::size_t>(i)] = 1;
      if (negative(w)) return normalise(w);
      w[static_cast<std::size_t>(i)] = 0;
    }
    for (int i = 0; i < k_; ++i)
      for (int j = i + 1; j < k_; ++j) {
        w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(j)] = 1;
        if (negative(w)) return normalise(w);
        w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(j)] = 0;
      }
    return std::nullopt;
  }

  std::optional<std::vector<Rational>> random(int trials, std::uint64_t seed) const {
    if (f_.is_zero()) return std::nullopt;
    std::mt19937_64 rng(seed);
    std::vector<mpz_class> w(static_cast<std::size_t>(k_));
    for (int t = 0; t < trials; ++t) {
      bool any = false;
      for (auto& x : w) {
        // Exponential spacings of a uniform draw give a Dirichlet(1)-like
        // spread; every fourth coordinate is dropped for face coverage.
        std::uint64_t r = rng();
        if ((r & 3) == 0) {
          x = 0;
          continue;
        }
        double u = static_cast<double>((r >> 11) | 1) * 0x1.0p-53;
        x = static_cast<unsigned long>(1 + static_cast<unsigned long>(-std::log(u) * 1000.0));
        any = true;
      }
      if (!any) w[static_cast<std::size_t>(t % k_)] = 1;
      if (negative(w)) return normalise(w);
    }
    return std::nullopt;
  }

 private:
  bool negative(const std::vector<mpz_class>& w) const {
    mpz_class total = 0, term;
    for (const auto& [e, c] : scaled_) {
      term = c;
      for (int i = 0; i < k_; ++i)
        for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) term *= w[static_cast<std::size_t>(i)];
      total += term;
    }
    return total < 0;
  }

  std::vector<Rational> normalise(const std::vector<mpz_class>& w) const {
    mpz_class sum = 0;
    for (const auto& x : w) sum += x;
    std::vector<Rational> phi;
    for (const auto& x : w) {
      Rational q(x, sum);
      q.canonicalize();
      phi.push_back(q);
    }
    return phi;
  }

  const SimplexPolynomial& f_;
  int k_;
  std::vector<std::pair<Exponent, mpz_class>> scaled_;
};

// Point masses, pairwise midpoints, then `trials` seeded samples.
inline std::optional<std::vector<Rational>> sample_refute(const SimplexPolynomial& f, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::domain_error("sample_refute: trials must be >= 1");
  RefutationScanner scan(f);
  if (auto w = scan.structured()) return w;
  return scan.random(trials, seed);
}

}  // namespace iidsp
