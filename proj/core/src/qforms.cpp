#include "siegelfc/qforms.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace siegelfc {

namespace {

// Finds x with Q(x) != 0 mod p. Unit vectors and pairwise sums see every
// coefficient c_ij, so for a primitive form they already succeed; the full
// box scan is a bounded fallback.
std::vector<std::int64_t> nonzero_mod_p(const QuadForm& q, std::int64_t p) {
  const std::size_t n = q.size();
  const Integer big_p = static_cast<long>(p);
  auto nonzero = [&](const std::vector<std::int64_t>& x) {
    Integer v = q(x);
    return mpz_divisible_p(v.get_mpz_t(), big_p.get_mpz_t()) == 0;
  };
  std::vector<std::int64_t> x(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    x.assign(n, 0);
    x[i] = 1;
    if (nonzero(x)) {
      return x;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      x.assign(n, 0);
      x[i] = 1;
      x[j] = 1;
      if (nonzero(x)) {
        return x;
      }
    }
  }
  const double box = std::pow(static_cast<double>(p), static_cast<double>(n));
  if (box > 1e8) {
    throw std::logic_error("represent_coprime: no value coprime to " + std::to_string(p) +
                           " among small vectors");
  }
  x.assign(n, 0);
  for (;;) {
    std::size_t k = 0;
    while (k < n && ++x[k] == p) {
      x[k] = 0;
      ++k;
    }
    if (k == n) {
      break;
    }
    if (nonzero(x)) {
      return x;
    }
  }
  throw std::logic_error("represent_coprime: Q vanishes identically mod " + std::to_string(p));
}

std::int64_t crt_pair(std::int64_t r1, std::int64_t m1, std::int64_t r2, std::int64_t m2) {
  // x = r1 + m1 * t with m1 * t = r2 - r1 (mod m2)
  const std::int64_t t = static_cast<std::int64_t>(
      static_cast<Int128>(mod(r2 - r1, m2)) * inverse_mod(m1, m2) % m2);
  return static_cast<std::int64_t>(r1 + static_cast<Int128>(m1) * t);
}

// Successive coordinate values 0, 1, -1, 2, -2, ... truncated at |x| <= radius.
std::vector<std::int64_t> signed_order(std::int64_t radius) {
  std::vector<std::int64_t> out{0};
  for (std::int64_t k = 1; k <= radius; ++k) {
    out.push_back(k);
    out.push_back(-k);
  }
  return out;
}

}  // namespace

QuadForm QuadForm::from_matrix(IntMatrix a) {
  HalfIntMatrix half = HalfIntMatrix::from_doubled(std::move(a));
  if (half.size() < 2) {
    throw std::invalid_argument("quadratic form needs at least two variables");
  }
  return QuadForm(std::move(half));
}

QuadForm QuadForm::from_half_integral(const HalfIntMatrix& t) { return from_matrix(t.doubled()); }

std::vector<std::int64_t> represent_coprime(const QuadForm& q, std::int64_t n) {
  if (n < 1) {
    throw std::invalid_argument("represent_coprime: N must be positive");
  }
  if (!q.is_primitive()) {
    throw std::invalid_argument("imprimitive form");
  }
  const std::size_t dim = q.size();
  if (n == 1) {
    std::vector<std::int64_t> e(dim, 0);
    e[0] = 1;
    return e;
  }
  std::vector<std::int64_t> y(dim, 0);
  std::int64_t modulus = 1;
  for (const auto& [p, e] : factorize(n)) {
    const std::vector<std::int64_t> local = nonzero_mod_p(q, p);
    for (std::size_t j = 0; j < dim; ++j) {
      y[j] = crt_pair(y[j], modulus, mod(local[j], p), p);
    }
    modulus = checked_mul(modulus, p);
  }
  const Integer value = q(y);
  Integer g;
  const Integer big_n = static_cast<long>(n);
  mpz_gcd(g.get_mpz_t(), value.get_mpz_t(), big_n.get_mpz_t());
  if (g != 1) {
    throw std::logic_error("represent_coprime: CRT gluing produced a non-coprime value");
  }
  return y;
}

std::vector<PrimeRepresentation> represent_prime(const QuadForm& q, int count,
                                                 std::int64_t search_bound) {
  if (!q.is_positive_definite()) {
    throw std::invalid_argument("represent_prime: form must be positive definite");
  }
  const std::size_t n = q.size();
  if (count <= 0 || search_bound < 3) {
    return {};
  }
  // max x_i^2 subject to 1/2 x^t A x <= B is 2 B (A^{-1})_ii.
  const IntMatrix adj = q.matrix().adjugate();
  const double det = q.matrix().determinant().get_d();
  std::vector<std::vector<std::int64_t>> orders(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r2 = 2.0 * static_cast<double>(search_bound) *
                      static_cast<double>(adj(i, i)) / det;
    orders[i] = signed_order(static_cast<std::int64_t>(std::floor(std::sqrt(r2))) + 1);
  }

  const IntMatrix& a = q.matrix();
  std::map<std::uint64_t, std::vector<std::int64_t>> found;
  std::vector<std::size_t> pos(n, 0);
  std::vector<std::int64_t> x(n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = orders[i][pos[i]];
    }
    Int128 twice = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        twice += static_cast<Int128>(a(i, j)) * x[i] * x[j];
      }
    }
    const Int128 value = twice / 2;
    if (value <= search_bound && value > 2 && (value & 1) == 1) {
      const auto v = static_cast<std::uint64_t>(value);
      if (!found.contains(v) && is_prime(v)) {
        found.emplace(v, x);
      }
    }
    // odometer over the box, last coordinate fastest
    bool advanced = false;
    for (std::size_t k = n; k-- > 0;) {
      if (++pos[k] < orders[k].size()) {
        advanced = true;
        break;
      }
      pos[k] = 0;
    }
    if (!advanced) {
      break;
    }
  }

  std::vector<PrimeRepresentation> out;
  for (auto& [p, witness] : found) {
    if (static_cast<int>(out.size()) == count) {
      break;
    }
    out.push_back({p, std::move(witness)});
  }
  return out;
}

IntMatrix sl_completion(std::span<const std::int64_t> v) {
  const std::size_t n = v.size();
  if (n < 2) {
    throw std::invalid_argument("sl_completion: need at least two coordinates");
  }
  std::int64_t g = 0;
  for (std::int64_t c : v) {
    g = gcd(g, c);
  }
  if (g != 1) {
    throw std::invalid_argument("vector not primitive");
  }

  // Invariant: u * w == v. Each step applies a determinant-one elementary
  // matrix E to w and E^{-1} on the right of u.
  IntMatrix u = IntMatrix::identity(n);
  std::vector<std::int64_t> w(v.begin(), v.end());
  const std::size_t last = n - 1;
  auto add_col = [&](std::size_t dst, std::size_t src, std::int64_t q) {
    for (std::size_t r = 0; r < n; ++r) {
      u(r, dst) = checked_add(u(r, dst), checked_mul(q, u(r, src)));
    }
  };
  for (std::size_t i = 0; i < last; ++i) {
    while (w[i] != 0) {
      const std::int64_t q = w[last] / w[i];
      w[last] -= q * w[i];
      add_col(i, last, q);
      // rotation (w_i, w_last) -> (-w_last, w_i)
      const std::int64_t wi = w[i];
      w[i] = -w[last];
      w[last] = wi;
      for (std::size_t r = 0; r < n; ++r) {
        const std::int64_t ci = u(r, i);
        u(r, i) = -u(r, last);
        u(r, last) = ci;
      }
    }
  }
  if (w[last] == -1) {
    w[last] = 1;
    for (std::size_t r = 0; r < n; ++r) {
      u(r, 0) = -u(r, 0);
      u(r, last) = -u(r, last);
    }
  }
  if (u.determinant() == -1) {
    for (std::size_t r = 0; r < n; ++r) {
      u(r, 0) = -u(r, 0);
    }
  }
  if (u.determinant() != 1 || u.col(last) != std::vector<std::int64_t>(v.begin(), v.end())) {
    throw std::logic_error("sl_completion: construction failed");
  }
  return u;
}

std::vector<PrimePivot> pivot_to_prime(const HalfIntMatrix& a, int count,
                                       std::int64_t search_bound) {
  if (a.size() < 2) {
    throw std::invalid_argument("pivot_to_prime: size must be at least 2");
  }
  if (!is_primitive(a)) {
    throw std::invalid_argument("imprimitive form");
  }
  const QuadForm q = QuadForm::from_half_integral(a);
  std::vector<PrimePivot> out;
  for (auto& rep : represent_prime(q, count, search_bound)) {
    IntMatrix u = sl_completion(rep.x);
    HalfIntMatrix pivoted = act(a, u);
    if (pivoted.diag(a.size() - 1) != static_cast<std::int64_t>(rep.p)) {
      throw std::logic_error("pivot_to_prime: bottom-right entry is not p");
    }
    out.push_back({rep.p, std::move(u), std::move(pivoted)});
  }
  return out;
}

}  // namespace siegelfc
