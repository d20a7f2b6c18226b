#include "siegelfc/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <string>

namespace siegelfc {

namespace {

constexpr std::size_t kNaiveCutoff = 48;

std::vector<Integer> naive_convolve(const std::vector<Integer>& a, const std::vector<Integer>& b,
                                    std::size_t len) {
  std::vector<Integer> c(len);
  for (std::size_t i = 0; i < a.size() && i < len; ++i) {
    if (a[i] == 0) {
      continue;
    }
    const std::size_t jmax = std::min(b.size(), len - i);
    for (std::size_t j = 0; j < jmax; ++j) {
      mpz_addmul(c[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  return c;
}

// Packs |v_i| into consecutive slots of `limbs` machine words each, keeping
// only entries whose sign matches `negative`.
Integer pack(const std::vector<Integer>& v, std::size_t limbs, bool negative) {
  std::vector<mp_limb_t> buf(v.size() * limbs, 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int s = sgn(v[i]);
    if (s == 0 || (s < 0) != negative) {
      continue;
    }
    std::size_t count = 0;
    mpz_export(buf.data() + i * limbs, &count, -1, sizeof(mp_limb_t), 0, 0, v[i].get_mpz_t());
  }
  Integer out;
  mpz_import(out.get_mpz_t(), buf.size(), -1, sizeof(mp_limb_t), 0, 0, buf.data());
  return out;
}

// Kronecker substitution: evaluate both polynomials at 2^(64*limbs), multiply
// once, and read the signed digits back. Slot width leaves one spare bit so
// every product coefficient c satisfies |c| < 2^(64*limbs - 1).
std::vector<Integer> kronecker_convolve(const std::vector<Integer>& a,
                                        const std::vector<Integer>& b, std::size_t len) {
  auto max_bits = [](const std::vector<Integer>& v) {
    std::size_t bits = 0;
    for (const Integer& x : v) {
      bits = std::max(bits, mpz_sizeinbase(x.get_mpz_t(), 2));
    }
    return bits;
  };
  const std::size_t terms = std::min(a.size(), b.size());
  std::size_t len_bits = 1;
  while ((std::size_t{1} << len_bits) < terms + 1) {
    ++len_bits;
  }
  const std::size_t bits = max_bits(a) + max_bits(b) + len_bits + 2;
  const std::size_t limbs = (bits + 63) / 64;
  const std::size_t width = limbs * 64;

  const Integer x = pack(a, limbs, false) - pack(a, limbs, true);
  const Integer y = pack(b, limbs, false) - pack(b, limbs, true);
  Integer z = x * y;

  // Adding 2^(width-1) to each digit makes all digits non-negative.
  const std::size_t slots = a.size() + b.size();
  std::vector<mp_limb_t> offset_buf(slots * limbs, 0);
  for (std::size_t i = 0; i < slots; ++i) {
    offset_buf[i * limbs + limbs - 1] = mp_limb_t{1} << 63;
  }
  Integer offset;
  mpz_import(offset.get_mpz_t(), offset_buf.size(), -1, sizeof(mp_limb_t), 0, 0,
             offset_buf.data());
  z += offset;

  std::vector<mp_limb_t> digits(slots * limbs + 1, 0);
  std::size_t count = 0;
  mpz_export(digits.data(), &count, -1, sizeof(mp_limb_t), 0, 0, z.get_mpz_t());

  Integer half;
  mpz_setbit(half.get_mpz_t(), width - 1);
  std::vector<Integer> c(len);
  for (std::size_t i = 0; i < len && i < slots; ++i) {
    mpz_import(c[i].get_mpz_t(), limbs, -1, sizeof(mp_limb_t), 0, 0, digits.data() + i * limbs);
    c[i] -= half;
  }
  return c;
}

Integer lcm_of_denominators(std::span<const Rational> v) {
  Integer l = 1;
  for (const Rational& x : v) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  }
  return l;
}

std::vector<Integer> scaled_numerators(std::span<const Rational> v, const Integer& l,
                                       std::size_t len) {
  std::vector<Integer> out(std::min(v.size(), len));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = v[i].get_num() * (l / v[i].get_den());
  }
  return out;
}

}  // namespace

std::vector<Rational> exact_convolve(std::span<const Rational> a, std::span<const Rational> b,
                                     std::size_t len) {
  std::vector<Rational> out(len);
  if (a.empty() || b.empty() || len == 0) {
    return out;
  }
  const Integer la = lcm_of_denominators(a);
  const Integer lb = lcm_of_denominators(b);
  const std::vector<Integer> ia = scaled_numerators(a, la, len);
  const std::vector<Integer> ib = scaled_numerators(b, lb, len);
  const std::vector<Integer> ic = std::min(ia.size(), ib.size()) < kNaiveCutoff
                                      ? naive_convolve(ia, ib, len)
                                      : kronecker_convolve(ia, ib, len);
  const Integer denom = la * lb;
  for (std::size_t n = 0; n < len && n < ic.size(); ++n) {
    out[n] = Rational(ic[n], denom);
    out[n].canonicalize();
  }
  return out;
}

QSeries::QSeries(std::size_t truncation) : coeffs_(truncation + 1) {}

QSeries::QSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw std::invalid_argument("QSeries: need at least the constant term");
  }
}

QSeries operator+(const QSeries& a, const QSeries& b) {
  QSeries out(std::min(a.truncation(), b.truncation()));
  for (std::size_t n = 0; n <= out.truncation(); ++n) {
    out[n] = a[n] + b[n];
  }
  return out;
}

QSeries operator-(const QSeries& a, const QSeries& b) {
  QSeries out(std::min(a.truncation(), b.truncation()));
  for (std::size_t n = 0; n <= out.truncation(); ++n) {
    out[n] = a[n] - b[n];
  }
  return out;
}

QSeries operator*(const QSeries& a, const QSeries& b) {
  const std::size_t len = std::min(a.truncation(), b.truncation()) + 1;
  return QSeries(exact_convolve(a.coeffs(), b.coeffs(), len));
}

QSeries operator*(const Rational& s, const QSeries& a) {
  QSeries out(a.truncation());
  for (std::size_t n = 0; n <= out.truncation(); ++n) {
    out[n] = s * a[n];
  }
  return out;
}

QSeries eisenstein(int k, std::size_t truncation) {
  if (k < 4 || k % 2 != 0) {
    throw std::invalid_argument("eisenstein: weight must be even and at least 4, got " +
                                std::to_string(k));
  }
  // sigma_{k-1} by a divisor sieve
  std::vector<Integer> sigma(truncation + 1);
  for (std::size_t d = 1; d <= truncation; ++d) {
    const Integer power = ipow(static_cast<std::int64_t>(d), static_cast<unsigned>(k - 1));
    for (std::size_t n = d; n <= truncation; n += d) {
      sigma[n] += power;
    }
  }
  const Rational factor = Rational(-2 * k) / bernoulli(static_cast<unsigned>(k));
  QSeries out(truncation);
  out[0] = 1;
  for (std::size_t n = 1; n <= truncation; ++n) {
    out[n] = factor * Rational(sigma[n]);
  }
  return out;
}

Rational bernoulli(unsigned n) {
  static std::mutex lock;
  static std::vector<Rational> cache{Rational(1)};
  std::lock_guard<std::mutex> guard(lock);
  // B_m = -1/(m+1) sum_{j<m} C(m+1, j) B_j
  while (cache.size() <= n) {
    const unsigned m = static_cast<unsigned>(cache.size());
    Rational sum = 0;
    Integer binom = 1;  // C(m+1, j)
    for (unsigned j = 0; j < m; ++j) {
      sum += Rational(binom) * cache[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    Rational b = -sum / Rational(m + 1);
    b.canonicalize();
    cache.push_back(b);
  }
  return cache[n];
}

bool is_fundamental_discriminant(std::int64_t d) {
  if (d == 1) {
    return true;
  }
  if (d == 0) {
    return false;
  }
  auto squarefree = [](std::int64_t x) {
    for (const auto& [p, e] : factorize(x < 0 ? -x : x)) {
      if (e > 1) {
        return false;
      }
    }
    return true;
  };
  const std::int64_t r = mod(d, 4);
  if (r == 1) {
    return squarefree(d);
  }
  if (r == 0) {
    const std::int64_t q = d / 4;
    const std::int64_t rq = mod(q, 4);
    return (rq == 2 || rq == 3) && squarefree(q);
  }
  return false;
}

int kronecker(std::int64_t d, std::int64_t n) {
  if (n == 0) {
    return (d == 1 || d == -1) ? 1 : 0;
  }
  int result = 1;
  if (n < 0) {
    n = -n;
    if (d < 0) {
      result = -result;
    }
  }
  int twos = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++twos;
  }
  if (twos > 0) {
    if ((d & 1) == 0) {
      return 0;
    }
    const std::int64_t r8 = mod(d, 8);
    if ((twos & 1) == 1 && (r8 == 3 || r8 == 5)) {
      result = -result;
    }
  }
  // Jacobi symbol (a / n) for odd n > 0
  std::int64_t a = mod(d, n);
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      const std::int64_t r8 = n % 8;
      if (r8 == 3 || r8 == 5) {
        result = -result;
      }
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) {
      result = -result;
    }
    a %= n;
  }
  return n == 1 ? result : 0;
}

Rational gen_bernoulli(unsigned n, std::int64_t d) {
  if (!is_fundamental_discriminant(d)) {
    throw std::invalid_argument("gen_bernoulli: " + std::to_string(d) +
                                " is not a fundamental discriminant");
  }
  const std::int64_t f = d < 0 ? -d : d;

  // chi is completely multiplicative: fill it from a smallest-prime-factor sieve.
  std::vector<std::int64_t> spf(static_cast<std::size_t>(f) + 1, 0);
  std::vector<int> chi(static_cast<std::size_t>(f) + 1, 0);
  if (f >= 1) {
    chi[1] = 1;
  }
  for (std::int64_t a = 2; a <= f; ++a) {
    if (spf[a] == 0) {
      for (std::int64_t b = a; b <= f; b += a) {
        if (spf[b] == 0) {
          spf[b] = a;
        }
      }
      chi[a] = kronecker(d, a);
    } else {
      chi[a] = chi[spf[a]] * chi[a / spf[a]];
    }
  }

  // Power sums S_i = sum_{a=1}^{f} chi(a) a^i for i <= n.
  std::vector<Integer> s(n + 1);
  long double log_bound = static_cast<long double>(n + 1) * std::log2(static_cast<long double>(f) + 1);
  if (log_bound < 120) {
    std::vector<Int128> acc(n + 1, 0);
    for (std::int64_t a = 1; a <= f; ++a) {
      if (chi[a] == 0) {
        continue;
      }
      Int128 power = chi[a];
      for (unsigned i = 0; i <= n; ++i) {
        acc[i] += power;
        power *= a;
      }
    }
    for (unsigned i = 0; i <= n; ++i) {
      const bool neg = acc[i] < 0;
      UInt128 mag = neg ? -static_cast<UInt128>(acc[i])
                                  : static_cast<UInt128>(acc[i]);
      Integer hi = static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64));
      Integer lo = static_cast<unsigned long>(static_cast<std::uint64_t>(mag));
      s[i] = (hi << 64) + lo;
      if (neg) {
        s[i] = -s[i];
      }
    }
  } else {
    for (std::int64_t a = 1; a <= f; ++a) {
      if (chi[a] == 0) {
        continue;
      }
      Integer power = chi[a];
      for (unsigned i = 0; i <= n; ++i) {
        s[i] += power;
        power *= static_cast<long>(a);
      }
    }
  }

  // B_{n,chi} = sum_j C(n, j) B_j f^(j-1) S_{n-j}
  Rational out = 0;
  Integer binom = 1;
  for (unsigned j = 0; j <= n; ++j) {
    Rational term = Rational(binom) * bernoulli(j) * Rational(s[n - j]);
    if (j == 0) {
      term /= Rational(f);
    } else {
      term *= Rational(ipow(f, j - 1));
    }
    out += term;
    binom = binom * (n - j) / (j + 1);
  }
  out.canonicalize();
  return out;
}

Rational cohen_h(int r, std::int64_t n) {
  CohenH h(r);
  return h(n);
}

CohenH::CohenH(int r) : r_(r) {
  if (r < 1) {
    throw std::invalid_argument("cohen_h: r must be positive");
  }
}

const Rational& CohenH::l_value(std::int64_t d0) {
  auto it = l_values_.find(d0);
  if (it == l_values_.end()) {
    // L(1 - r, chi) = -B_{r,chi} / r
    Rational v = -gen_bernoulli(static_cast<unsigned>(r_), d0) / Rational(r_);
    it = l_values_.emplace(d0, std::move(v)).first;
  }
  return it->second;
}

Rational CohenH::operator()(std::int64_t n) {
  if (n < 0) {
    return 0;
  }
  if (n == 0) {
    Rational v = -bernoulli(static_cast<unsigned>(2 * r_)) / Rational(2 * r_);
    v.canonicalize();
    return v;
  }
  const std::int64_t signed_n = (r_ % 2 == 0) ? n : -n;
  const std::int64_t r4 = mod(signed_n, 4);
  if (r4 == 2 || r4 == 3) {
    return 0;
  }
  // signed_n = d0 * f^2 with d0 fundamental
  std::int64_t core = signed_n < 0 ? -1 : 1;
  std::int64_t f = 1;
  for (const auto& [p, e] : factorize(n)) {
    for (int i = 0; i < e / 2; ++i) {
      f *= p;
    }
    if (e % 2 == 1) {
      core *= p;
    }
  }
  if (mod(core, 4) != 1) {
    // core is 2 or 3 mod 4: move a factor 4 from f^2 into the discriminant
    core *= 4;
    f /= 2;
  }
  const std::int64_t d0 = core;
  Rational sum = 0;
  for (std::int64_t d : divisors(f)) {
    const int mu = moebius(d);
    if (mu == 0) {
      continue;
    }
    const int chi = kronecker(d0, d);
    if (chi == 0) {
      continue;
    }
    sum += Rational(mu * chi) * Rational(ipow(d, static_cast<unsigned>(r_ - 1))) *
           Rational(divisor_sigma(static_cast<unsigned>(2 * r_ - 1), f / d));
  }
  Rational out = l_value(d0) * sum;
  out.canonicalize();
  return out;
}

}  // namespace siegelfc
