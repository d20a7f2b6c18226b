#pragma once

// Truncated q-series with exact rational coefficients and the classical
// scalars feeding the Jacobi Eisenstein series: Bernoulli numbers,
// generalized Bernoulli numbers, Kronecker symbols and Cohen's H(r, N).

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "siegelfc/arith.hpp"

namespace siegelfc {

/// Exact convolution c_n = sum_{i+j=n} a_i b_j for n < len, routed through
/// integer arithmetic after clearing denominators.
std::vector<Rational> exact_convolve(std::span<const Rational> a, std::span<const Rational> b,
                                     std::size_t len);

/// Power series sum_{n <= truncation} c_n q^n with exact rational c_n.
class QSeries {
 public:
  QSeries() = default;
  explicit QSeries(std::size_t truncation);
  explicit QSeries(std::vector<Rational> coeffs);

  std::size_t truncation() const noexcept { return coeffs_.size() - 1; }
  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
  const Rational& operator[](std::size_t n) const { return coeffs_.at(n); }
  Rational& operator[](std::size_t n) { return coeffs_.at(n); }

  friend QSeries operator+(const QSeries& a, const QSeries& b);
  friend QSeries operator-(const QSeries& a, const QSeries& b);
  friend QSeries operator*(const QSeries& a, const QSeries& b);
  friend QSeries operator*(const Rational& s, const QSeries& a);
  friend bool operator==(const QSeries&, const QSeries&) = default;

 private:
  std::vector<Rational> coeffs_{Rational(0)};
};

/// E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n. Throws std::invalid_argument
/// for odd k or k < 4.
QSeries eisenstein(int k, std::size_t truncation);

/// B_n with B_1 = -1/2.
Rational bernoulli(unsigned n);

/// Fundamental discriminant test (D = 1 counts as fundamental).
bool is_fundamental_discriminant(std::int64_t d);

/// B_{n, chi_D} for the Kronecker character of the fundamental discriminant D.
/// Throws std::invalid_argument when D is not fundamental.
Rational gen_bernoulli(unsigned n, std::int64_t d);

/// Kronecker symbol (D / n).
int kronecker(std::int64_t d, std::int64_t n);

/// H(r, 0) = zeta(1 - 2r); for N > 0 with (-1)^r N = D0 f^2, D0 fundamental,
/// H(r, N) = L(1 - r, chi_D0) sum_{d | f} mu(d) chi_D0(d) d^{r-1} sigma_{2r-1}(f/d);
/// zero when (-1)^r N is 2 or 3 mod 4.
Rational cohen_h(int r, std::int64_t n);

/// Memoizing evaluator for H(r, N) at fixed r. L-values are cached per
/// fundamental discriminant, so filling a whole range costs one
/// generalized Bernoulli number per distinct D0. Not thread-safe.
class CohenH {
 public:
  explicit CohenH(int r);
  int r() const noexcept { return r_; }
  Rational operator()(std::int64_t n);

 private:
  const Rational& l_value(std::int64_t d0);

  int r_;
  std::map<std::int64_t, Rational> l_values_;
};

}  // namespace siegelfc
