#pragma once

// Integer helpers shared by the modules: exact big-number aliases, divisor
// functions, primality, factorization and modular arithmetic on 64-bit values.

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace siegelfc {

using Integer = mpz_class;
using Rational = mpq_class;

/// 128-bit intermediates for overflow-free 64-bit products.
__extension__ using Int128 = __int128;
__extension__ using UInt128 = unsigned __int128;

/// Non-negative remainder of a modulo m (m > 0).
constexpr std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t gcd(std::int64_t a, std::int64_t b);

/// Solves a*x + b*y = g = gcd(a, b) with g >= 0.
struct ExtendedGcd {
  std::int64_t g;
  std::int64_t x;
  std::int64_t y;
};
ExtendedGcd extended_gcd(std::int64_t a, std::int64_t b);

/// Inverse of a modulo m; throws std::domain_error when gcd(a, m) != 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// Prime factorization by trial division, ascending primes with exponents.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

/// All positive divisors of n > 0, ascending.
std::vector<std::int64_t> divisors(std::int64_t n);

int moebius(std::int64_t n);

/// sigma_k(n) = sum of d^k over d | n.
Integer divisor_sigma(unsigned k, std::int64_t n);

/// Overflow-checked 64-bit helpers; throw std::overflow_error.
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_add(std::int64_t a, std::int64_t b);

/// Exact power n^e as a big integer.
Integer ipow(std::int64_t n, unsigned e);

/// Converts a big integer known to fit into int64; throws otherwise.
std::int64_t to_int64(const Integer& z);

}  // namespace siegelfc
