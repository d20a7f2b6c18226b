#include "siegelfc/arith.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace siegelfc {

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

ExtendedGcd extended_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b;
  std::int64_t old_s = 1, s = 0;
  std::int64_t old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    return {-old_r, -old_s, -old_t};
  }
  return {old_r, old_s, old_t};
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  if (m <= 0) {
    throw std::domain_error("inverse_mod: modulus must be positive");
  }
  const ExtendedGcd eg = extended_gcd(mod(a, m), m);
  if (eg.g != 1) {
    throw std::domain_error("inverse_mod: " + std::to_string(a) +
                            " not invertible modulo " + std::to_string(m));
  }
  return mod(eg.x, m);
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<UInt128>(a) * b) % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) {
      result = mul_mod(result, base, m);
    }
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) {
    return false;
  }
  static constexpr std::uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : small) {
    if (n % p == 0) {
      return n == p;
    }
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // The first twelve prime bases are a proven witness set below 3.18e23.
  for (std::uint64_t a : small) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) {
      continue;
    }
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) {
      return false;
    }
  }
  return true;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n <= 0) {
    throw std::domain_error("factorize: argument must be positive");
  }
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
  }
  if (n > 1) {
    out.emplace_back(n, 1);
  }
  return out;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  if (n <= 0) {
    throw std::domain_error("divisors: argument must be positive");
  }
  std::vector<std::int64_t> small, large;
  for (std::int64_t d = 1; d <= n / d; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) {
        large.push_back(n / d);
      }
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

int moebius(std::int64_t n) {
  int mu = 1;
  for (const auto& [p, e] : factorize(n)) {
    if (e > 1) {
      return 0;
    }
    mu = -mu;
  }
  return mu;
}

Integer divisor_sigma(unsigned k, std::int64_t n) {
  Integer sum = 0;
  for (std::int64_t d : divisors(n)) {
    sum += ipow(d, k);
  }
  return sum;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("64-bit multiplication overflow");
  }
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("64-bit addition overflow");
  }
  return r;
}

Integer ipow(std::int64_t n, unsigned e) {
  Integer base = static_cast<long>(n);
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) {
    throw std::overflow_error("integer does not fit in 64 bits");
  }
  return z.get_si();
}

}  // namespace siegelfc
