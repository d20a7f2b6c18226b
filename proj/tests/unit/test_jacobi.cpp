#include "doctest.h"

#include <cmath>

#include "siegelfc/jacobi.hpp"
#include "siegelfc/qseries.hpp"

using namespace siegelfc;

namespace {

// c_l(n, r) = sum_{d | (n, r, l)} d^(k-1) c(nl/d^2, r/d), straight from the definition.
Rational v_brute(const JacobiTable& phi, int l, std::int64_t n, std::int64_t r) {
  Rational s = 0;
  for (std::int64_t d = 1; d <= l; ++d) {
    if (l % d != 0 || n % d != 0 || r % d != 0) continue;
    s += Rational(ipow(d, static_cast<unsigned>(phi.weight() - 1))) *
         phi.coefficient(n * l / (d * d), r / d);
  }
  return s;
}

}  // namespace

TEST_CASE("table layout") {
  JacobiTable t(10, 3, 50);
  CHECK(JacobiTable::base_disc(3, 1) == 11);
  CHECK(JacobiTable::base_disc(3, 3) == 3);
  CHECK(t.admissible(11, 1));
  CHECK_FALSE(t.admissible(12, 1));
  CHECK_THROWS_AS((void)t.at(12, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)t.at(59, 1), std::out_of_range);
  t.set(11, 1, 5);
  CHECK(t.coefficient(1, 1) == 5);    // D = 12 - 1
  CHECK(t.coefficient(2, 7) == 0);    // D = 24 - 49 < 0
  CHECK(t.coefficient(5, 7) == 5);    // D = 60 - 49, 7 = 1 mod 6
  CHECK(t.coefficient(3, 5) == t.at(11, 5));
  CHECK(t.coefficient(0, 1) == 0);
  std::size_t keys = 0;
  std::int64_t prev = -1;
  t.for_each([&](std::int64_t d, std::int64_t, const Rational&) {
    CHECK(d >= prev);
    prev = d;
    ++keys;
  });
  CHECK(keys == t.key_count());
  CHECK_THROWS_AS(JacobiTable(10, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(JacobiTable(10, 1, -1), std::invalid_argument);
}

TEST_CASE("Jacobi Eisenstein series") {
  const JacobiTable e4 = jacobi_eisenstein(4, 200);
  CHECK(e4.at(0, 0) == 1);
  CHECK(e4.at(3, 1) == cohen_h(3, 3) / cohen_h(3, 0));
  const std::int64_t want[][2] = {{0, 1}, {3, 56}, {4, 126}, {7, 576}, {8, 756}, {11, 1512}, {12, 2072}};
  for (const auto& [d, v] : want) {
    CHECK(e4.at(d, d % 4 == 0 ? 0 : 1) == v);
  }
  CHECK(e4.coefficient(1, 3) == 0);  // 4 - 9 < 0
  CHECK_FALSE(e4.is_cusp());

  // E_{k,1}(tau, 0) = E_k
  for (int k : {4, 6}) {
    const JacobiTable e = jacobi_eisenstein(k, 4 * 12);
    const QSeries ek = eisenstein(k, 12);
    for (std::int64_t n = 0; n <= 12; ++n) {
      Rational s = 0;
      for (std::int64_t r = -2 * n; r <= 2 * n; ++r) s += e.coefficient(n, r);
      CHECK(s == ek[static_cast<std::size_t>(n)]);
    }
  }
}

TEST_CASE("scalar multiplication") {
  const JacobiTable e4 = jacobi_eisenstein(4, 100);
  QSeries one(40);
  one[0] = 1;
  CHECK(multiply_scalar_jacobi(one, 0, e4).same_coefficients(e4));

  QSeries q(40);
  q[1] = 1;
  const JacobiTable shifted = multiply_scalar_jacobi(q, 12, e4);
  CHECK(shifted.weight() == 16);
  for (std::int64_t d = 4; d <= 100; ++d) {
    for (std::int64_t r = 0; r < 2; ++r) {
      if (!e4.admissible(d, r)) continue;
      CHECK(shifted.at(d, r) == e4.at(d - 4, r));
    }
  }
  QSeries short_series(3);
  CHECK_THROWS_AS(multiply_scalar_jacobi(short_series, 4, e4), std::invalid_argument);
}

TEST_CASE("cusp forms of index one") {
  const JacobiTable raw = phi_cusp_unnormalized(10, 40);
  CHECK(raw.at(0, 0) == 0);
  CHECK(raw.at(3, 1) == 1);
  CHECK(raw.at(4, 0) == -2);

  const JacobiTable phi10 = phi_cusp(10, 3000);
  CHECK(phi10.is_cusp());
  CHECK(phi10.label() == "phi10,1");
  const std::pair<std::int64_t, const char*> fixtures[] = {
      {3, "1"},           {4, "-2"},           {7, "-16"},          {8, "36"},
      {11, "99"},         {12, "-272"},        {1000, "-40910898000"}, {1003, "-39413147956"},
      {1999, "170244629280"}, {2000, "-974967840000"}, {2996, "1417595520384"}};
  for (const auto& [d, v] : fixtures) {
    CHECK(phi10.at(d, d % 4 == 0 ? 0 : 1) == Rational(Integer(v)));
  }

  const JacobiTable phi12 = phi_cusp(12, 16);
  const std::int64_t f12[][2] = {{3, 1}, {4, 10}, {7, -88}, {8, -132}, {11, 1275}, {12, 736}, {15, -8040}, {16, -2880}};
  for (const auto& [d, v] : f12) CHECK(phi12.at(d, d % 4 == 0 ? 0 : 1) == v);
  CHECK_THROWS(phi_cusp(10, 2));
}

TEST_CASE("index-raising operator") {
  const JacobiTable phi = phi_cusp(10, 600);
  CHECK(v_operator(phi, 1).same_coefficients(phi));
  const JacobiTable v2 = v_operator(phi, 2);
  CHECK(v2.coefficient(1, 1) == phi.coefficient(2, 1));
  CHECK(v2.coefficient(2, 2) == phi.coefficient(4, 2) + 512 * phi.coefficient(1, 1));
  CHECK(v2.coefficient(2, 2) == 240);
  for (int l : {2, 3, 4, 5, 6}) {
    const JacobiTable vl = v_operator(phi, l);
    CHECK(vl.index() == l);
    CHECK(vl.disc_bound() == phi.disc_bound());
    vl.for_each([&](std::int64_t d, std::int64_t r, const Rational& v) {
      const std::int64_t n = (d + r * r) / (4 * l);
      CHECK(v == v_brute(phi, l, n, r));
      // a different representative of the same class
      const std::int64_t r2 = r + 2 * l;
      CHECK(v == v_brute(phi, l, (d + r2 * r2) / (4 * l), r2));
    });
  }
}

TEST_CASE("theta decomposition") {
  const JacobiTable phi = phi_cusp(10, 400);
  const auto comps = theta_split(phi);
  REQUIRE(comps.size() == 2);
  for (const auto& [d, v] : comps[0].coeffs) CHECK(d % 4 == 0);
  for (const auto& [d, v] : comps[1].coeffs) CHECK(d % 4 == 3);
  CHECK(comps[1].coeffs.at(3) == phi.coefficient(1, 1));
  CHECK(theta_assemble(comps).same_coefficients(phi));

  const JacobiTable v5 = v_operator(phi, 5);
  const auto c5 = theta_split(v5);
  REQUIRE(c5.size() == 10);
  CHECK(theta_assemble(c5).same_coefficients(v5));
  // h_{-r} = (-1)^k h_r with k even
  for (std::int64_t r = 1; r < 5; ++r) CHECK(c5[r].coeffs == c5[10 - r].coeffs);

  const auto support = check_nonvanishing(v_operator(phi, 3));
  REQUIRE(support.size() == 6);
  for (const auto& s : support) CHECK(s.first_nonzero_disc.has_value());
  for (std::int64_t r = 1; r < 3; ++r)
    CHECK(support[r].first_nonzero_disc == support[6 - r].first_nonzero_disc);

  const auto zero = check_nonvanishing(JacobiTable(10, 3, 100));
  for (const auto& s : zero) CHECK_FALSE(s.first_nonzero_disc.has_value());
  CHECK_THROWS_AS(check_nonvanishing(v_operator(phi, 4)), std::invalid_argument);

  auto broken = comps;
  broken.pop_back();
  CHECK_THROWS_AS(theta_assemble(broken), std::invalid_argument);
  CHECK_THROWS_AS(theta_assemble({}), std::invalid_argument);
}

TEST_CASE("theta_eval") {
  // partial sum of exp(-2 pi l^2) far past the tail bound
  double want = 0;
  for (int l = -20; l <= 20; ++l) want += std::exp(-2.0 * M_PI * l * l);
  const std::complex<double> i(0.0, 1.0);
  CHECK(std::abs(theta_eval(1, 0, i, 0.0) - want) < 1e-12);
  CHECK(std::abs(theta_eval(1, 0, i, 0.0) - 1.0037348854877390) < 1e-12);

  const std::complex<double> tau(0.3, 0.8), z(0.2, 0.1);
  for (int m : {1, 2, 3, 5}) {
    for (std::int64_t r = 0; r < 2 * m; ++r) {
      CHECK(std::abs(theta_eval(m, r, tau, 0.0) - theta_eval(m, -r, tau, 0.0)) < 1e-11);
      CHECK(std::abs(theta_eval(m, r, tau, z) - theta_eval(m, r + 2 * m, tau, z)) < 1e-11);
    }
  }
  CHECK_THROWS_AS(theta_eval(1, 0, {0.0, -1.0}, 0.0), std::domain_error);
}
