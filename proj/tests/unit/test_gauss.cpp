#include "doctest.h"

#include <cmath>

#include "siegelfc/gauss.hpp"

using namespace siegelfc;

namespace {

const Complex kI(0.0, 1.0);

CMatrix criterion_matrix(std::int64_t p, int g, std::int64_t l, std::int64_t m, Complex kappa) {
  const CMatrix a = rho_m1(p, g, kappa);
  return a * rho_m2_power(p, g, l) * a * rho_m2_power(p, g, m) * a;
}

}  // namespace

TEST_CASE("quadratic Gauss sums mod 2p") {
  const Complex anchor = std::sqrt(3.0) * Complex(1.0, 1.0);
  // sum over nu mod 6 of e(nu^2 / 12)
  const Complex hand = 1.0 + 2.0 * e(1.0 / 12) + 2.0 * e(1.0 / 3) + e(3.0 / 4);
  CHECK(std::abs(hand - anchor) < 1e-12);
  CHECK(std::abs(gauss_sum_brute(3, 1, 0, 0) - anchor) < 1e-12);
  CHECK(std::abs(gauss_sum_closed(3, 1, 0, 0) - anchor) < 1e-12);
  CHECK_THROWS_AS(gauss_sum_closed(3, 3, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_sum_closed(9, 1, 0, 0), std::invalid_argument);
  CHECK(epsilon_p(5) == Complex(1.0, 0.0));
  CHECK(epsilon_p(7) == kI);

  double worst = 0, worst_unit = 0;
  for (std::int64_t p : {3, 5, 7, 11}) {
    for (std::int64_t m = 1; m <= 4 * p; ++m) {
      if (m % p == 0) continue;
      for (std::int64_t lam = 0; lam < 2 * p; ++lam) {
        for (std::int64_t beta = 0; beta < 2 * p; ++beta) {
          const Complex b = gauss_sum_brute(p, m, lam, beta);
          worst = std::max(worst, std::abs(gauss_sum_closed(p, m, lam, beta) - b));
          if (m % p == 1) {
            worst_unit = std::max(worst_unit, std::abs(gauss_sum_closed_unit(p, m, lam, beta) - b));
          }
        }
      }
    }
  }
  CHECK(worst < 1e-9);
  CHECK(worst_unit < 1e-9);
  CHECK_THROWS_AS(gauss_sum_closed_unit(5, 2, 0, 0), std::invalid_argument);
}

TEST_CASE("lambda sum") {
  double worst = 0;
  for (std::int64_t p : {3, 5, 7}) {
    for (std::int64_t l : {4, 8, 12, 16}) {
      if ((l - 1) % p == 0) continue;
      for (std::int64_t m : {4, 8, 12, 5, 7}) {
        for (std::int64_t a = 0; a < 2 * p; ++a) {
          for (std::int64_t b = 0; b < 2 * p; ++b) {
            const Complex c = lambda_sum_closed(p, l, m, a, b);
            worst = std::max(worst, std::abs(c - lambda_sum_brute(p, l, m, a, b)));
            CHECK(std::abs(c - lambda_sum_closed(p, l, m, -a, -b)) < 1e-9);
          }
        }
      }
    }
  }
  CHECK(worst < 1e-9);
  CHECK_THROWS_AS(lambda_sum_closed(3, 4, 4, 0, 0), std::invalid_argument);
}

TEST_CASE("kappa extraction") {
  for (std::int64_t p : {1, 2, 3, 5, 7}) {
    const KappaEstimate k = extract_kappa(p);
    CHECK(k.residual < 1e-6);
    CHECK(std::abs(std::abs(k.kappa) - 1.0) < 1e-12);
    CHECK(std::abs(std::pow(k.kappa, 8) - 1.0) < 1e-9);
    CHECK(std::abs(k.kappa - std::exp(Complex(0.0, -M_PI / 4))) < 1e-12);
    const KappaEstimate k2 = extract_kappa(p, Complex(0.0, 2.0));
    CHECK(std::abs(k2.kappa - k.kappa) < 1e-12);
  }
}

TEST_CASE("multiplier matrices") {
  const Complex kappa = extract_kappa(3).kappa;
  for (std::int64_t p : {3, 5}) {
    for (int g : {1, 2}) {
      CHECK(unitarity_defect(rho_m1(p, g, kappa)) < 1e-9);
      CHECK(unitarity_defect(rho_m2_power(p, g, 7)) < 1e-12);
      CHECK(unitarity_defect(criterion_matrix(p, g, 4, 8, kappa)) < 1e-8);
    }
    const CMatrix d = rho_m2_power(p, 2, 5);
    const auto phases = rho_m2_phases(p, 2, 5);
    for (std::size_t i = 0; i < d.n; ++i) {
      const auto idx = multi_index(p, 2, i);
      CHECK(phases[i] == Phase::of(5 * (idx[0] * idx[0] + idx[1] * idx[1]), 4 * p));
      CHECK(std::abs(d(i, i) - e(static_cast<double>(phases[i].num) / phases[i].den)) < 1e-12);
      for (std::size_t j = 0; j < d.n; ++j) {
        if (i != j) CHECK(d(i, j) == Complex(0.0, 0.0));
      }
    }
  }
  CHECK(Phase::of(6, 8) == Phase{3, 4});
  CHECK(Phase::of(-1, 4) * Phase::of(1, 2) == Phase{1, 4});
  CHECK_THROWS_AS(rho_m1(3, 3, kappa), std::invalid_argument);
}

TEST_CASE("rho product: closed form, double sum and matrix product") {
  const Complex kappa = extract_kappa(3).kappa;
  const std::int64_t z[] = {0};
  CHECK(std::abs(rho_product_closed(3, 1, 8, 4, z, z, kappa) -
                 rho_product_brute(3, 1, 8, 4, z, z, kappa)) < 1e-8);
  for (std::int64_t p : {3, 5}) {
    for (std::int64_t l : {4, 8, 12}) {
      for (std::int64_t m : {4, 8, 12}) {
        if ((l - 1) % p == 0 || m % p == 0) continue;
        const CMatrix mat = criterion_matrix(p, 1, l, m, kappa);
        for (std::int64_t a = 0; a < 2 * p; ++a) {
          for (std::int64_t b = 0; b < 2 * p; ++b) {
            const std::int64_t al[] = {a}, be[] = {b};
            const Complex brute = rho_product_brute(p, 1, l, m, al, be, kappa);
            CHECK(std::abs(rho_product_closed(p, 1, l, m, al, be, kappa) - brute) < 1e-8);
            CHECK(std::abs(mat(a, b) - brute) < 1e-8);
          }
        }
      }
    }
  }
  // degree two: the 2-dimensional sum factors over coordinates
  const CMatrix mat2 = criterion_matrix(3, 2, 8, 4, kappa);
  for (std::size_t row = 0; row < mat2.n; row += 5) {
    for (std::size_t col = 0; col < mat2.n; col += 7) {
      const auto a = multi_index(3, 2, row), b = multi_index(3, 2, col);
      const Complex full = rho_product_brute(3, 2, 8, 4, a, b, kappa);
      const std::int64_t a0[] = {a[0]}, a1[] = {a[1]}, b0[] = {b[0]}, b1[] = {b[1]};
      const Complex split =
          rho_product_brute(3, 1, 8, 4, a0, b0, kappa) * rho_product_brute(3, 1, 8, 4, a1, b1, kappa);
      CHECK(std::abs(full - split) < 1e-10);
      CHECK(std::abs(full - rho_product_closed(3, 2, 8, 4, a, b, kappa)) < 1e-8);
      CHECK(std::abs(full - mat2(row, col)) < 1e-8);
    }
  }
  CHECK_THROWS_AS(rho_product_closed(3, 1, 4, 3, z, z, kappa), std::invalid_argument);
}

TEST_CASE("theta transformation law for words") {
  const Complex kappa = extract_kappa(3).kappa;
  const Word inversion{{{Generator::M1, 1}}};
  const Word crit{{{Generator::M1, 1}, {Generator::M2, 4}, {Generator::M1, 1}, {Generator::M2, 8},
                   {Generator::M1, 1}}};
  CHECK(crit.describe() == "M1M2^4M1M2^8M1");
  CHECK(word_matrix(crit) == IntMatrix{{-8, 1}, {31, -4}});
  CHECK(word_matrix(crit) == criterion_word_matrix(4, 8, 1));
  for (std::int64_t p : {3, 5}) {
    CHECK(check_theta_transform(p, inversion, kappa).max_deviation < 1e-9);
    CHECK(check_theta_transform(p, crit, kappa, Complex(0.1, 0.9), Complex(0.05, 0.1)).max_deviation < 1e-8);
  }
  // the wrong eighth root is detected
  CHECK(check_theta_transform(3, inversion, kappa * kI).max_deviation > 0.1);
}

TEST_CASE("non-vanishing criterion") {
  const CriterionParams c{5, 4, 8, 1};
  CHECK_NOTHROW(c.validate());
  for (std::int64_t a = 0; a < 10; ++a) {
    for (std::int64_t b = 0; b < 10; ++b) {
      const GaussInt v = criterion_value(c, a, b);
      const std::int64_t want = b % 2 == 0 ? 2 : (a % 2 == 0 ? 2 : -2);
      CHECK(v == GaussInt{want, 0});
      CHECK(std::abs(criterion_factor(5, 4, 8, a, b) - Complex(static_cast<double>(want), 0.0)) < 1e-12);
    }
  }
  CHECK_THROWS_AS((CriterionParams{3, 4, 4, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CriterionParams{5, 6, 4, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CriterionParams{5, 4, 8, 3}.validate()), std::invalid_argument);
  CHECK(GaussInt::i_power(3) == GaussInt{0, -1});

  // p = 3, N = 1: l = 4 is excluded by p | l - 1
  const CriterionParams p3 = find_criterion_params(3, 1);
  CHECK(p3.l == 8);
  CHECK(p3.m == 4);
  // p = 5, N = 1: (4, 4) is rejected because 5 | 4*4 - 1
  const CriterionParams p5 = find_criterion_params(5, 1);
  CHECK(p5.l == 4);
  CHECK(p5.m == 8);
  for (std::int64_t p : {3, 5, 7, 11}) {
    for (std::int64_t n : {1, 5, 7, 9, 35, 105}) {
      if (gcd(p, n) != 1) continue;
      const CriterionParams c2 = find_criterion_params(p, n);
      CHECK_NOTHROW(c2.validate());
      CHECK(mod(c2.l * c2.m - 1, p) != 0);
      CHECK(in_gamma0(criterion_word_matrix(c2.l, c2.m, 2), n));
    }
  }
  CHECK_THROWS_AS(find_criterion_params(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(find_criterion_params(3, 4), std::invalid_argument);
}
