#pragma once

// Symmetric half-integral matrices, stored as the even-diagonal integer
// matrix 2T so that every operation stays in exact integer arithmetic.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "siegelfc/arith.hpp"

namespace siegelfc {

/// Dense row-major integer matrix with 64-bit entries and checked arithmetic.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix column(std::span<const std::int64_t> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntMatrix transpose() const;
  std::vector<std::int64_t> col(std::size_t j) const;

  /// Exact determinant (fraction-free Bareiss elimination); square only.
  Integer determinant() const;
  /// Adjugate matrix adj(A) with adj(A) * A = det(A) * I; the 1x1 adjugate is (1).
  IntMatrix adjugate() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator*(std::int64_t s, const IntMatrix& a);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// Symmetric half-integral matrix T: integral diagonal, half-integral
/// off-diagonal entries. Only 2T is stored.
class HalfIntMatrix {
 public:
  /// Validates that `doubled` is square, symmetric, with even diagonal.
  static HalfIntMatrix from_doubled(IntMatrix doubled);
  /// The binary form [[a, b/2], [b/2, c]], i.e. doubled [[2a, b], [b, 2c]].
  static HalfIntMatrix binary(std::int64_t a, std::int64_t b, std::int64_t c);
  /// diag(d_1, ..., d_n).
  static HalfIntMatrix diagonal(std::span<const std::int64_t> entries);

  std::size_t size() const noexcept { return doubled_.rows(); }
  const IntMatrix& doubled() const noexcept { return doubled_; }

  /// Diagonal entry T_ii (an integer).
  std::int64_t diag(std::size_t i) const { return doubled_(i, i) / 2; }
  /// 2 * T_ij (an integer for every i, j).
  std::int64_t twice(std::size_t i, std::size_t j) const { return doubled_(i, j); }

  bool is_zero() const;
  bool is_positive_definite() const;
  /// det(T) as an exact rational: det(2T) / 2^g.
  Rational determinant() const;

  /// x^t T x for an integer vector x.
  Integer evaluate(std::span<const std::int64_t> x) const;

  friend bool operator==(const HalfIntMatrix&, const HalfIntMatrix&) = default;

 private:
  explicit HalfIntMatrix(IntMatrix doubled) : doubled_(std::move(doubled)) {}
  IntMatrix doubled_;
};

/// max{a : T/a half-integral}; throws std::domain_error("undefined content")
/// on the zero matrix.
std::int64_t content(const HalfIntMatrix& t);
bool is_primitive(const HalfIntMatrix& t);

/// T[U] = U^t T U. Throws std::invalid_argument unless |det U| = 1.
HalfIntMatrix act(const HalfIntMatrix& t, const IntMatrix& u);

struct Reduction {
  HalfIntMatrix form;
  IntMatrix transform;  // in SL_2(Z), form == act(input, transform)
};

/// Gauss reduction of a positive-definite binary form. The output
/// [[a, b/2], [b/2, c]] satisfies |b| <= a <= c, and b >= 0 whenever |b| = a
/// or a = c. Throws std::invalid_argument for size != 2 or indefinite input.
Reduction reduce(const HalfIntMatrix& t);

/// Canonical GL_2(Z)-class key of a positive-definite binary form: the
/// reduced (a, b, c) with b = 2*T_12 made non-negative.
struct BinaryKey {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;

  std::int64_t det4() const { return 4 * a * c - b * b; }
  std::int64_t content() const { return gcd(gcd(a, b), c); }

  friend auto operator<=>(const BinaryKey& x, const BinaryKey& y) {
    if (auto cmp = x.det4() <=> y.det4(); cmp != 0) {
      return cmp;
    }
    if (auto cmp = x.a <=> y.a; cmp != 0) {
      return cmp;
    }
    if (auto cmp = x.b <=> y.b; cmp != 0) {
      return cmp;
    }
    return x.c <=> y.c;
  }
  friend bool operator==(const BinaryKey&, const BinaryKey&) = default;
};

BinaryKey gl2_key(const HalfIntMatrix& t);

/// Index data of the family S_{M,mu}: lower-right block M (size n), shift mu.
///
/// `cofactor` holds the integer matrix adj(2M). The quadratic quantity
/// M*[mu] that shifts the family is mu^t adj(2M) mu / 2^(n-1), which equals
/// mu^t adj(M) mu and reduces to mu^2 when n = 1.
struct SMmuSpec {
  HalfIntMatrix index_matrix;
  std::vector<std::int64_t> shift;
  IntMatrix cofactor;

  /// Builds the spec and checks its invariants.
  static SMmuSpec make(HalfIntMatrix index_matrix, std::vector<std::int64_t> shift);

  /// Throws std::invalid_argument when an invariant fails.
  void validate() const;

  /// M*[mu] as an exact rational.
  Rational cofactor_value() const;
  /// 4 det M as an exact rational.
  Rational four_det() const;
};

struct SMmuEntry {
  std::int64_t m;  // 4 det T
  HalfIntMatrix t;
};

/// All T in S_{M,mu} with 4 det T = m <= m_max, ascending in m.
std::vector<SMmuEntry> enumerate_smmu(const SMmuSpec& spec, std::int64_t m_max);

}  // namespace siegelfc
