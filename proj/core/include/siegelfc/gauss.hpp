#pragma once

// Quadratic exponential sums modulo 2p and the theta multiplier system of
// the generators M1 = (0, -E; E, 0), M2 = (E, E; 0, E). Every closed form
// has a literal-summation twin for oracle checks.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "siegelfc/halfint.hpp"

namespace siegelfc {

using Complex = std::complex<double>;

/// e(x) = exp(2 pi i x).
Complex e(double x);

/// 1 for p = 1 mod 4, i for p = 3 mod 4.
Complex epsilon_p(std::int64_t p);

/// Literal sum over nu mod 2p of e((m nu^2 - 2 nu (lambda + beta)) / 4p).
Complex gauss_sum_brute(std::int64_t p, std::int64_t m, std::int64_t lambda, std::int64_t beta);

/// eps_p sqrt(p) (m/p) e(-s^2 (4m)^{-1} / p) (1 + (-1)^s e(mp/4)) with
/// s = lambda + beta and (4m)^{-1} taken mod p. Throws std::invalid_argument
/// unless p is an odd prime not dividing m.
Complex gauss_sum_closed(std::int64_t p, std::int64_t m, std::int64_t lambda, std::int64_t beta);

/// The special case m = 1 mod p, where the phase collapses to
/// i^(s^2 p) e(-s^2 / 4p). Throws when m != 1 mod p.
Complex gauss_sum_closed_unit(std::int64_t p, std::int64_t m, std::int64_t lambda,
                              std::int64_t beta);

/// 1 + (-1)^beta e(mp/4) + (-1)^alpha e(lp/4) (1 - (-1)^beta e(mp/4)).
Complex criterion_factor(std::int64_t p, std::int64_t l, std::int64_t m, std::int64_t alpha,
                         std::int64_t beta);

/// Sum over lambda mod 2p of e((l lambda^2 - 2 lambda alpha)/4p) times the
/// inner sum gauss_sum_brute(m, lambda, beta), divided by eps_p sqrt(p) (m/p)
/// (by eps_p sqrt(p) alone when p | m). Computed literally.
Complex lambda_sum_brute(std::int64_t p, std::int64_t l, std::int64_t m, std::int64_t alpha,
                         std::int64_t beta);

/// Closed form of lambda_sum_brute. With A = l - m^{-1}, B = alpha + beta m^{-1}
/// (mod p) it equals criterion_factor * e(-beta^2 (4m)^{-1}/p) * eps_p sqrt(p)
/// (A/p) e(-B^2 (4A)^{-1}/p), or p [B = 0] e(-beta^2 (4m)^{-1}/p) *
/// criterion_factor when p | A. When p | m only the two lambda = -beta mod p
/// survive. Throws when p | (l - 1).
Complex lambda_sum_closed(std::int64_t p, std::int64_t l, std::int64_t m, std::int64_t alpha,
                          std::int64_t beta);

/// rho_{alpha,beta}(M1 M2^l M1 M2^m M1) from the double sum over
/// lambda, nu in (Z/2p)^g, using kappa for kappa(M1) in degree one.
Complex rho_product_brute(std::int64_t p, int g, std::int64_t l, std::int64_t m,
                          std::span<const std::int64_t> alpha, std::span<const std::int64_t> beta,
                          Complex kappa);

/// Coordinatewise product of the degree-one closed forms. Throws unless
/// p is an odd prime with p not dividing (l - 1) m.
Complex rho_product_closed(std::int64_t p, int g, std::int64_t l, std::int64_t m,
                           std::span<const std::int64_t> alpha,
                           std::span<const std::int64_t> beta, Complex kappa);

struct KappaEstimate {
  Complex kappa;      // snapped to an 8th root of unity
  Complex raw;        // unsnapped least-squares scalar
  double residual;    // max |lhs - kappa * rhs| over all alpha
};

/// Solves theta_{p,a}(-1/tau, w/tau) = kappa tau^(1/2) e(p w^2/tau) (2p)^(-1/2)
/// sum_b e(-ab/2p) theta_{p,b}(tau, w) for kappa. The square root is the
/// principal branch. Throws std::domain_error("theta evaluation
/// inconsistent") when the residual exceeds 1e-6.
KappaEstimate extract_kappa(std::int64_t p, Complex tau = Complex(0.0, 1.0),
                            Complex w = Complex(0.3, 0.2));

/// Dense square complex matrix.
struct CMatrix {
  std::size_t n = 0;
  std::vector<Complex> a;

  explicit CMatrix(std::size_t size = 0) : n(size), a(size * size) {}
  Complex& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  Complex operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  friend CMatrix operator*(const CMatrix& x, const CMatrix& y);
};

/// Multi-indices in (Z/2p)^g enumerate rows in lexicographic order.
std::vector<std::int64_t> multi_index(std::int64_t p, int g, std::size_t row);

/// rho(M1): entries (2p)^(-g/2) kappa^g e(-alpha.beta / 2p).
CMatrix rho_m1(std::int64_t p, int g, Complex kappa);
/// rho(M2^a): diagonal with entries e(a alpha.alpha / 4p).
CMatrix rho_m2_power(std::int64_t p, int g, std::int64_t a);

/// max |(X X^*)_ij - delta_ij|.
double unitarity_defect(const CMatrix& x);

/// A phase e(num/den) with the fraction reduced and 0 <= num < den.
struct Phase {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Phase of(std::int64_t num, std::int64_t den);
  friend Phase operator*(const Phase& x, const Phase& y);
  friend bool operator==(const Phase&, const Phase&) = default;
};

/// Exact diagonal of rho(M2^a), one phase per multi-index.
std::vector<Phase> rho_m2_phases(std::int64_t p, int g, std::int64_t a);

/// Words in the generators, applied left to right as matrices.
enum class Generator { M1, M2 };
struct Word {
  std::vector<std::pair<Generator, std::int64_t>> letters;  // (generator, exponent)
  std::string describe() const;
};

/// 2x2 integer matrix of a degree-one word.
IntMatrix word_matrix(const Word& w);

struct TransformCheck {
  double max_deviation;  // theta(gamma tau) vs the assembled multiplier
  Complex cocycle;       // ratio J of principal square roots
};

/// Degree-one theta transformation law for a word: compares
/// theta_{p,a}(gamma tau, w/(c tau + d)) with
/// J (c tau + d)^(1/2) e(p c w^2/(c tau + d)) sum_b rho(word)_{ab} theta_{p,b}(tau, w)
/// where rho(word) is the product of the generator matrices.
TransformCheck check_theta_transform(std::int64_t p, const Word& w, Complex kappa,
                                     Complex tau = Complex(0.0, 1.0),
                                     Complex z = Complex(0.3, 0.2));

/// Exact Gaussian integer.
struct GaussInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  static GaussInt i_power(std::int64_t k);
  friend GaussInt operator+(GaussInt x, GaussInt y) { return {x.re + y.re, x.im + y.im}; }
  friend GaussInt operator-(GaussInt x, GaussInt y) { return {x.re - y.re, x.im - y.im}; }
  friend GaussInt operator*(GaussInt x, GaussInt y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend bool operator==(GaussInt, GaussInt) = default;
};

struct CriterionParams {
  std::int64_t p = 3;
  std::int64_t l = 4;
  std::int64_t m = 4;
  std::int64_t level = 1;

  /// Throws std::invalid_argument naming the failed condition.
  void validate() const;
};

/// criterion_factor evaluated exactly with e(kp/4) = i^(kp mod 4).
GaussInt criterion_value(const CriterionParams& params, std::int64_t alpha, std::int64_t beta);

/// Smallest (l, m) in lexicographic order with l = m = 0 mod 4,
/// lm = 1 mod N, and p dividing none of (l - 1) m and lm - 1.
CriterionParams find_criterion_params(std::int64_t p, std::int64_t level);

/// M1 M2^l M1 M2^m M1 as a 2g x 2g integer matrix.
IntMatrix criterion_word_matrix(std::int64_t l, std::int64_t m, int g);

/// Lower-left g x g block vanishes mod N.
bool in_gamma0(const IntMatrix& gamma, std::int64_t level);

}  // namespace siegelfc
