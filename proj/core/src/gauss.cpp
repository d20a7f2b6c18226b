#include "siegelfc/gauss.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "siegelfc/jacobi.hpp"
#include "siegelfc/qseries.hpp"

namespace siegelfc {

namespace {

void require_odd_prime(std::int64_t p, const char* what) {
  if (p < 3 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw std::invalid_argument(std::string(what) + ": p must be an odd prime, got " +
                                std::to_string(p));
  }
}

// e(k / modulus) for k reduced into [0, modulus); exact residues keep the
// floating-point phases reproducible.
Complex unit_root(std::int64_t k, std::int64_t modulus) {
  return e(static_cast<double>(mod(k, modulus)) / static_cast<double>(modulus));
}

std::int64_t odd_sign(std::int64_t k) { return mod(k, 2) == 0 ? 1 : -1; }

GaussInt sign_int(std::int64_t k) { return {odd_sign(k), 0}; }

// Exponent of i in e(kp/4), valid because k p is an integer.
std::int64_t quarter_phase(std::int64_t k, std::int64_t p) { return mod(k * p, 4); }

// Degree-one factor rho(M1 M2^l M1 M2^m M1)_{alpha,beta} in closed form.
Complex rho_factor_closed(std::int64_t p, std::int64_t l, std::int64_t m, std::int64_t alpha,
                          std::int64_t beta, Complex kappa) {
  const Complex prefactor = std::pow(2.0 * static_cast<double>(p), -1.5) * kappa * kappa * kappa;
  return prefactor * epsilon_p(p) * std::sqrt(static_cast<double>(p)) *
         static_cast<double>(kronecker(m, p)) * lambda_sum_closed(p, l, m, alpha, beta);
}

struct Mobius {
  Complex a, b, c, d;
  Complex apply(Complex tau) const { return (a * tau + b) / (c * tau + d); }
  Complex j(Complex tau) const { return c * tau + d; }
};

Mobius letter_mobius(Generator g, std::int64_t exponent) {
  if (g == Generator::M1) {
    return {0.0, -1.0, 1.0, 0.0};
  }
  return {1.0, static_cast<double>(exponent), 0.0, 1.0};
}

// Expands M1^k into k single letters.
std::vector<std::pair<Generator, std::int64_t>> flatten(const Word& w) {
  std::vector<std::pair<Generator, std::int64_t>> out;
  for (const auto& [g, k] : w.letters) {
    if (g == Generator::M1) {
      if (k < 0) {
        throw std::invalid_argument("Word: negative powers of M1 are not supported");
      }
      for (std::int64_t i = 0; i < k; ++i) {
        out.emplace_back(Generator::M1, 1);
      }
    } else {
      out.emplace_back(g, k);
    }
  }
  return out;
}

}  // namespace

Complex e(double x) {
  const double t = 2.0 * std::numbers::pi * x;
  return {std::cos(t), std::sin(t)};
}

Complex epsilon_p(std::int64_t p) {
  return mod(p, 4) == 1 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
}

Complex gauss_sum_brute(std::int64_t p, std::int64_t m, std::int64_t lambda, std::int64_t beta) {
  const std::int64_t s = lambda + beta;
  const std::int64_t modulus = 4 * p;
  Complex sum = 0.0;
  for (std::int64_t nu = 0; nu < 2 * p; ++nu) {
    sum += unit_root(mod(m * nu % modulus * nu - 2 * nu * s, modulus), modulus);
  }
  return sum;
}

Complex gauss_sum_closed(std::int64_t p, std::int64_t m, std::int64_t lambda, std::int64_t beta) {
  require_odd_prime(p, "gauss_sum_closed");
  if (mod(m, p) == 0) {
    throw std::invalid_argument("gauss_sum_closed: p divides m");
  }
  const std::int64_t s = lambda + beta;
  const std::int64_t inv4m = inverse_mod(mod(4 * m, p), p);
  const std::int64_t phase = mod(mod(s, p) * mod(s, p) % p * inv4m, p);
  const Complex two_part = 1.0 + static_cast<double>(odd_sign(s)) * unit_root(m * p, 4);
  return epsilon_p(p) * std::sqrt(static_cast<double>(p)) * static_cast<double>(kronecker(m, p)) *
         unit_root(-phase, p) * two_part;
}

Complex gauss_sum_closed_unit(std::int64_t p, std::int64_t m, std::int64_t lambda,
                              std::int64_t beta) {
  require_odd_prime(p, "gauss_sum_closed_unit");
  if (mod(m, p) != 1) {
    throw std::invalid_argument("gauss_sum_closed_unit: needs m = 1 mod p");
  }
  const std::int64_t s = lambda + beta;
  const Complex two_part = 1.0 + static_cast<double>(odd_sign(s)) * unit_root(m * p, 4);
  const Complex i_power = unit_root(quarter_phase(s * s, p), 4);
  return epsilon_p(p) * std::sqrt(static_cast<double>(p)) * static_cast<double>(kronecker(m, p)) *
         i_power * unit_root(-mod(s * s, 4 * p), 4 * p) * two_part;
}

Complex criterion_factor(std::int64_t p, std::int64_t l, std::int64_t m, std::int64_t alpha,
                         std::int64_t beta) {
  const Complex em = unit_root(m * p, 4);
  const Complex el = unit_root(l * p, 4);
  const double sb = static_cast<double>(odd_sign(beta));
  const double sa = static_cast<double>(odd_sign(alpha));
  return 1.0 + sb * em + sa * el * (1.0 - sb * em);
}

namespace {

// Normalizer of the inner sum: eps_p sqrt(p) (m/p), or eps_p sqrt(p) when p | m.
Complex inner_normalizer(std::int64_t p, std::int64_t m) {
  const double symbol = mod(m, p) == 0 ? 1.0 : static_cast<double>(kronecker(m, p));
  return epsilon_p(p) * std::sqrt(static_cast<double>(p)) * symbol;
}

}  // namespace

Complex lambda_sum_brute(std::int64_t p, std::int64_t l, std::int64_t m, std::int64_t alpha,
                         std::int64_t beta) {
  require_odd_prime(p, "lambda_sum_brute");
  const std::int64_t modulus = 4 * p;
  Complex sum = 0.0;
  for (std::int64_t x = 0; x < 2 * p; ++x) {
    const Complex outer = unit_root(mod(l * x * x - 2 * x * alpha, modulus), modulus);
    sum += outer * gauss_sum_brute(p, m, x, beta);
  }
  return sum / inner_normalizer(p, m);
}

Complex lambda_sum_closed(std::int64_t p, std::int64_t l, std::int64_t m, std::int64_t alpha,
                          std::int64_t beta) {
  require_odd_prime(p, "lambda_sum_closed");
  if (mod(l - 1, p) == 0) {
    throw std::invalid_argument("lambda_sum_closed: p divides l - 1");
  }
  const std::int64_t modulus = 4 * p;
  if (mod(m, p) == 0) {
    // the inner sum is p [lambda = -beta mod p] (1 + (-1)^(lambda+beta) e(mp/4))
    const Complex em = unit_root(m * p, 4);
    Complex sum = 0.0;
    for (std::int64_t t = 0; t < 2; ++t) {
      const std::int64_t x = mod(-beta, p) + p * t;
      sum += unit_root(mod(l * x * x - 2 * x * alpha, modulus), modulus) *
             (1.0 + static_cast<double>(odd_sign(x + beta)) * em);
    }
    return sum * std::sqrt(static_cast<double>(p)) / epsilon_p(p);
  }
  const std::int64_t inv_m = inverse_mod(m, p);
  const std::int64_t inv4m = inverse_mod(mod(4 * m, p), p);
  const std::int64_t b = mod(beta, p);
  const std::int64_t big_a = mod(l - inv_m, p);
  const std::int64_t big_b = mod(alpha + b * inv_m, p);
  const Complex base = unit_root(-(b * b % p * inv4m % p), p) *
                       criterion_factor(p, l, m, alpha, beta);
  if (big_a == 0) {
    return big_b == 0 ? static_cast<double>(p) * base : Complex(0.0, 0.0);
  }
  const std::int64_t inv4a = inverse_mod(mod(4 * big_a, p), p);
  return base * epsilon_p(p) * std::sqrt(static_cast<double>(p)) *
         static_cast<double>(kronecker(big_a, p)) *
         unit_root(-(big_b * big_b % p * inv4a % p), p);
}

Complex rho_product_brute(std::int64_t p, int g, std::int64_t l, std::int64_t m,
                          std::span<const std::int64_t> alpha, std::span<const std::int64_t> beta,
                          Complex kappa) {
  if (g < 1 || alpha.size() != static_cast<std::size_t>(g) ||
      beta.size() != static_cast<std::size_t>(g)) {
    throw std::invalid_argument("rho_product_brute: index vectors must have length g");
  }
  const std::int64_t q = 2 * p;
  const std::int64_t modulus = 4 * p;
  std::size_t cells = 1;
  for (int i = 0; i < g; ++i) {
    cells *= static_cast<std::size_t>(q);
  }
  std::vector<Complex> roots(static_cast<std::size_t>(modulus));
  for (std::int64_t k = 0; k < modulus; ++k) {
    roots[k] = unit_root(k, modulus);
  }
  Complex sum = 0.0;
  for (std::size_t li = 0; li < cells; ++li) {
    const std::vector<std::int64_t> lam = multi_index(p, g, li);
    for (std::size_t ni = 0; ni < cells; ++ni) {
      const std::vector<std::int64_t> nu = multi_index(p, g, ni);
      std::int64_t phase = 0;
      for (int j = 0; j < g; ++j) {
        phase += l * lam[j] * lam[j] - 2 * lam[j] * alpha[j];
        phase += m * nu[j] * nu[j] - 2 * nu[j] * lam[j] - 2 * beta[j] * nu[j];
      }
      sum += roots[mod(phase, modulus)];
    }
  }
  const Complex kappa_g = std::pow(kappa, g);
  return std::pow(static_cast<double>(q), -1.5 * g) * kappa_g * kappa_g * kappa_g * sum;
}

Complex rho_product_closed(std::int64_t p, int g, std::int64_t l, std::int64_t m,
                           std::span<const std::int64_t> alpha,
                           std::span<const std::int64_t> beta, Complex kappa) {
  require_odd_prime(p, "rho_product_closed");
  if (l < 1 || m < 1) {
    throw std::invalid_argument("rho_product_closed: l and m must be positive");
  }
  if (mod((l - 1) % p * (m % p), p) == 0) {
    throw std::invalid_argument("rho_product_closed: p divides (l - 1) m");
  }
  if (g < 1 || alpha.size() != static_cast<std::size_t>(g) ||
      beta.size() != static_cast<std::size_t>(g)) {
    throw std::invalid_argument("rho_product_closed: index vectors must have length g");
  }
  Complex out = 1.0;
  for (int j = 0; j < g; ++j) {
    out *= rho_factor_closed(p, l, m, alpha[j], beta[j], kappa);
  }
  return out;
}

KappaEstimate extract_kappa(std::int64_t p, Complex tau, Complex w) {
  if (p < 1) {
    throw std::invalid_argument("extract_kappa: p must be positive");
  }
  const int pm = static_cast<int>(p);
  const std::int64_t q = 2 * p;
  std::vector<Complex> theta(static_cast<std::size_t>(q));
  for (std::int64_t b = 0; b < q; ++b) {
    theta[b] = theta_eval(pm, b, tau, w);
  }
  // principal branch of tau^(1/2)
  const Complex factor = std::sqrt(tau) * std::exp(Complex(0.0, 2.0 * std::numbers::pi) *
                                                   static_cast<double>(p) * w * w / tau) /
                         std::sqrt(static_cast<double>(q));
  std::vector<Complex> lhs(theta.size()), rhs(theta.size());
  Complex num = 0.0;
  double den = 0.0;
  for (std::int64_t a = 0; a < q; ++a) {
    lhs[a] = theta_eval(pm, a, -1.0 / tau, w / tau);
    Complex s = 0.0;
    for (std::int64_t b = 0; b < q; ++b) {
      s += unit_root(-a * b, q) * theta[b];
    }
    rhs[a] = factor * s;
    num += std::conj(rhs[a]) * lhs[a];
    den += std::norm(rhs[a]);
  }
  if (!(den > 0.0)) {
    throw std::domain_error("theta evaluation inconsistent");
  }
  const Complex raw = num / den;
  const double step = std::numbers::pi / 4.0;
  const double k = std::round(std::arg(raw) / step);
  const Complex snapped = std::polar(1.0, k * step);
  double residual = 0.0;
  for (std::int64_t a = 0; a < q; ++a) {
    residual = std::max(residual, std::abs(lhs[a] - snapped * rhs[a]));
  }
  if (residual > 1e-6) {
    throw std::domain_error("theta evaluation inconsistent");
  }
  return {snapped, raw, residual};
}

CMatrix operator*(const CMatrix& x, const CMatrix& y) {
  if (x.n != y.n) {
    throw std::invalid_argument("CMatrix: size mismatch");
  }
  CMatrix out(x.n);
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t k = 0; k < x.n; ++k) {
      const Complex xik = x(i, k);
      for (std::size_t j = 0; j < x.n; ++j) {
        out(i, j) += xik * y(k, j);
      }
    }
  }
  return out;
}

std::vector<std::int64_t> multi_index(std::int64_t p, int g, std::size_t row) {
  const auto q = static_cast<std::size_t>(2 * p);
  std::vector<std::int64_t> idx(static_cast<std::size_t>(g));
  for (int j = g; j-- > 0;) {
    idx[j] = static_cast<std::int64_t>(row % q);
    row /= q;
  }
  return idx;
}

namespace {

std::size_t dimension(std::int64_t p, int g) {
  if (g < 1 || g > 2) {
    throw std::invalid_argument("multiplier matrices are assembled for g = 1, 2 only");
  }
  std::size_t n = 1;
  for (int i = 0; i < g; ++i) {
    n *= static_cast<std::size_t>(2 * p);
  }
  return n;
}

}  // namespace

CMatrix rho_m1(std::int64_t p, int g, Complex kappa) {
  const std::size_t n = dimension(p, g);
  CMatrix out(n);
  const Complex scale = std::pow(static_cast<double>(2 * p), -0.5 * g) * std::pow(kappa, g);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = multi_index(p, g, i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto b = multi_index(p, g, j);
      std::int64_t dot = 0;
      for (int k = 0; k < g; ++k) {
        dot += a[k] * b[k];
      }
      out(i, j) = scale * unit_root(-dot, 2 * p);
    }
  }
  return out;
}

CMatrix rho_m2_power(std::int64_t p, int g, std::int64_t a) {
  const std::size_t n = dimension(p, g);
  CMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto al = multi_index(p, g, i);
    std::int64_t norm = 0;
    for (int k = 0; k < g; ++k) {
      norm += al[k] * al[k];
    }
    out(i, i) = unit_root(mod(a, 4 * p) * norm, 4 * p);
  }
  return out;
}

double unitarity_defect(const CMatrix& x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t j = 0; j < x.n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < x.n; ++k) {
        s += x(i, k) * std::conj(x(j, k));
      }
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

Phase Phase::of(std::int64_t num, std::int64_t den) {
  if (den <= 0) {
    throw std::invalid_argument("Phase: denominator must be positive");
  }
  num = mod(num, den);
  const std::int64_t g = gcd(num, den);
  return {num / g, den / g};
}

Phase operator*(const Phase& x, const Phase& y) {
  const std::int64_t den = x.den / gcd(x.den, y.den) * y.den;
  return Phase::of(x.num * (den / x.den) + y.num * (den / y.den), den);
}

std::vector<Phase> rho_m2_phases(std::int64_t p, int g, std::int64_t a) {
  const std::size_t n = dimension(p, g);
  std::vector<Phase> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto al = multi_index(p, g, i);
    std::int64_t norm = 0;
    for (int k = 0; k < g; ++k) {
      norm += al[k] * al[k];
    }
    out.push_back(Phase::of(mod(a, 4 * p) * norm, 4 * p));
  }
  return out;
}

std::string Word::describe() const {
  std::string s;
  for (const auto& [g, k] : letters) {
    s += g == Generator::M1 ? "M1" : "M2";
    if (k != 1) {
      s += "^" + std::to_string(k);
    }
  }
  return s.empty() ? "E" : s;
}

IntMatrix word_matrix(const Word& w) {
  IntMatrix out = IntMatrix::identity(2);
  for (const auto& [g, k] : flatten(w)) {
    const IntMatrix letter = g == Generator::M1 ? IntMatrix{{0, -1}, {1, 0}} : IntMatrix{{1, k}, {0, 1}};
    out = out * letter;
  }
  return out;
}

TransformCheck check_theta_transform(std::int64_t p, const Word& w, Complex kappa, Complex tau,
                                     Complex z) {
  const auto letters = flatten(w);
  const std::size_t q = static_cast<std::size_t>(2 * p);
  const int pm = static_cast<int>(p);

  CMatrix rho = CMatrix(q);
  for (std::size_t i = 0; i < q; ++i) {
    rho(i, i) = 1.0;
  }
  for (const auto& [g, k] : letters) {
    rho = rho * (g == Generator::M1 ? rho_m1(p, 1, kappa) : rho_m2_power(p, 1, k));
  }

  // J = prod sqrt(j(g_i, tau_i)) / sqrt(j(gamma, tau)), tau_i = (g_{i+1} ... g_n) tau
  Complex chain = 1.0;
  Complex cur = tau;
  for (std::size_t i = letters.size(); i-- > 0;) {
    const Mobius mob = letter_mobius(letters[i].first, letters[i].second);
    chain *= std::sqrt(mob.j(cur));
    cur = mob.apply(cur);
  }
  const IntMatrix gm = word_matrix(w);
  const Mobius gamma{static_cast<double>(gm(0, 0)), static_cast<double>(gm(0, 1)),
                     static_cast<double>(gm(1, 0)), static_cast<double>(gm(1, 1))};
  const Complex jg = gamma.j(tau);
  const Complex cocycle = chain / std::sqrt(jg);
  const Complex gtau = gamma.apply(tau);
  const Complex factor = cocycle * std::sqrt(jg) *
                         std::exp(Complex(0.0, 2.0 * std::numbers::pi) * static_cast<double>(p) *
                                  gamma.c * z * z / jg);

  std::vector<Complex> theta(q);
  for (std::size_t b = 0; b < q; ++b) {
    theta[b] = theta_eval(pm, static_cast<std::int64_t>(b), tau, z);
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < q; ++a) {
    const Complex lhs = theta_eval(pm, static_cast<std::int64_t>(a), gtau, z / jg);
    Complex s = 0.0;
    for (std::size_t b = 0; b < q; ++b) {
      s += rho(a, b) * theta[b];
    }
    worst = std::max(worst, std::abs(lhs - factor * s));
  }
  return {worst, cocycle};
}

GaussInt GaussInt::i_power(std::int64_t k) {
  switch (mod(k, 4)) {
    case 0:
      return {1, 0};
    case 1:
      return {0, 1};
    case 2:
      return {-1, 0};
    default:
      return {0, -1};
  }
}

void CriterionParams::validate() const {
  if (p < 3 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw std::invalid_argument("CriterionParams: p must be an odd prime");
  }
  if (level < 1 || level % 2 == 0) {
    throw std::invalid_argument("CriterionParams: level must be odd and positive");
  }
  if (mod(l, 4) != 0 || mod(m, 4) != 0) {
    throw std::invalid_argument("CriterionParams: l and m must be 0 mod 4");
  }
  if (mod(l % level * (m % level), level) != mod(1, level)) {
    throw std::invalid_argument("CriterionParams: lm must be 1 mod N");
  }
  if (mod((l - 1) % p * (m % p), p) == 0) {
    throw std::invalid_argument("CriterionParams: p divides (l - 1) m");
  }
}

GaussInt criterion_value(const CriterionParams& params, std::int64_t alpha, std::int64_t beta) {
  params.validate();
  const GaussInt em = GaussInt::i_power(quarter_phase(params.m, params.p));
  const GaussInt el = GaussInt::i_power(quarter_phase(params.l, params.p));
  const GaussInt one{1, 0};
  const GaussInt sb = sign_int(beta);
  const GaussInt sa = sign_int(alpha);
  const GaussInt value = one + sb * em + sa * el * (one - sb * em);
  if (!(value == GaussInt{2, 0} || value == GaussInt{-2, 0})) {
    throw std::logic_error("criterion_value: value outside {2, -2}");
  }
  return value;
}

CriterionParams find_criterion_params(std::int64_t p, std::int64_t level) {
  if (level < 1 || level % 2 == 0) {
    throw std::invalid_argument("find_criterion_params: N must be odd and positive");
  }
  if (gcd(p, 2 * level) != 1) {
    throw std::invalid_argument("find_criterion_params: need gcd(p, 2N) = 1");
  }
  require_odd_prime(p, "find_criterion_params");
  // For fixed l the admissible m run through one class mod 4N, whose
  // residues mod p are equidistributed, so p steps always suffice.
  for (std::int64_t l = 4;; l += 4) {
    if (gcd(l, level) != 1 || mod(l - 1, p) == 0) {
      continue;
    }
    for (std::int64_t step = 0, m = 4; step < 4 * level * p + 1; ++step, m += 4) {
      if (mod(l % level * (m % level), level) != mod(1, level)) {
        continue;
      }
      if (mod(m, p) == 0 || mod(l % p * (m % p) - 1, p) == 0) {
        continue;
      }
      CriterionParams out{p, l, m, level};
      out.validate();
      return out;
    }
  }
}

IntMatrix criterion_word_matrix(std::int64_t l, std::int64_t m, int g) {
  if (g < 1) {
    throw std::invalid_argument("criterion_word_matrix: g must be positive");
  }
  const auto n = static_cast<std::size_t>(2 * g);
  const auto gg = static_cast<std::size_t>(g);
  IntMatrix m1(n, n);
  for (std::size_t i = 0; i < gg; ++i) {
    m1(i, gg + i) = -1;
    m1(gg + i, i) = 1;
  }
  auto m2_power = [&](std::int64_t a) {
    IntMatrix out = IntMatrix::identity(n);
    for (std::size_t i = 0; i < gg; ++i) {
      out(i, gg + i) = a;
    }
    return out;
  };
  return m1 * m2_power(l) * m1 * m2_power(m) * m1;
}

bool in_gamma0(const IntMatrix& gamma, std::int64_t level) {
  const std::size_t g = gamma.rows() / 2;
  for (std::size_t i = g; i < 2 * g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      if (mod(gamma(i, j), level) != 0) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace siegelfc
