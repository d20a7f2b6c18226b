#pragma once

// Constructive representation results for integral quadratic forms
// Q(x) = 1/2 x^t A x (A symmetric, even diagonal): values coprime to N,
// odd primes, and completion of primitive vectors to SL_n(Z).

#include <cstdint>
#include <vector>

#include "siegelfc/halfint.hpp"

namespace siegelfc {

class QuadForm {
 public:
  /// A must be symmetric with even diagonal, n >= 2.
  static QuadForm from_matrix(IntMatrix a);
  /// Q(x) = x^t T x for a half-integral T (so A = 2T).
  static QuadForm from_half_integral(const HalfIntMatrix& t);

  std::size_t size() const noexcept { return half_.size(); }
  const IntMatrix& matrix() const noexcept { return half_.doubled(); }
  const HalfIntMatrix& half() const noexcept { return half_; }

  /// gcd of the coefficients c_ij equals 1.
  bool is_primitive() const { return siegelfc::is_primitive(half_); }
  bool is_positive_definite() const { return half_.is_positive_definite(); }

  Integer operator()(std::span<const std::int64_t> x) const { return half_.evaluate(x); }

 private:
  explicit QuadForm(HalfIntMatrix half) : half_(std::move(half)) {}
  HalfIntMatrix half_;
};

/// x with gcd(Q(x), N) = 1, glued prime by prime with the CRT.
/// Throws std::invalid_argument("imprimitive form") if Q is not primitive.
std::vector<std::int64_t> represent_coprime(const QuadForm& q, std::int64_t n);

struct PrimeRepresentation {
  std::uint64_t p;
  std::vector<std::int64_t> x;
};

/// Up to `count` smallest odd primes p = Q(x) with Q(x) <= search_bound,
/// found by exhausting every such x. The witness for each prime is the first
/// x met when coordinates run through 0, 1, -1, 2, -2, ... lexicographically.
std::vector<PrimeRepresentation> represent_prime(const QuadForm& q, int count,
                                                 std::int64_t search_bound);

/// U in SL_n(Z) with last column v. Throws std::invalid_argument
/// ("vector not primitive") when gcd(v) != 1.
IntMatrix sl_completion(std::span<const std::int64_t> v);

struct PrimePivot {
  std::uint64_t p;
  IntMatrix transform;     // A_p in SL_n(Z)
  HalfIntMatrix pivoted;   // A_p^t A A_p, bottom-right entry p
};

/// For odd primes p = x^t A x found by represent_prime, moves p into the
/// bottom-right corner by an SL_n(Z) change of basis.
std::vector<PrimePivot> pivot_to_prime(const HalfIntMatrix& a, int count,
                                       std::int64_t search_bound);

}  // namespace siegelfc
