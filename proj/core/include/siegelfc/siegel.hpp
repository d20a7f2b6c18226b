#pragma once

// Degree-2 Siegel cusp forms given by the Maass lift of an index-1 Jacobi
// cusp form. Coefficients are keyed by GL_2(Z)-reduced binary forms.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "siegelfc/halfint.hpp"
#include "siegelfc/jacobi.hpp"

namespace siegelfc {

class SiegelTable {
 public:
  using Entry = std::pair<BinaryKey, Rational>;

  SiegelTable() = default;
  /// Entries must be sorted by key and cover every reduced key with
  /// 4 det T <= det4_bound; this is checked.
  SiegelTable(int weight, std::int64_t det4_bound, std::string source, std::vector<Entry> entries);

  int weight() const noexcept { return weight_; }
  std::int64_t det4_bound() const noexcept { return det4_bound_; }
  const std::string& source() const noexcept { return source_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// a(T) for a 2x2 half-integral T: zero when T is not positive definite,
  /// std::out_of_range when 4 det T exceeds the stored bound.
  Rational lookup(const HalfIntMatrix& t) const;
  const Rational& at(const BinaryKey& key) const;

  friend bool operator==(const SiegelTable&, const SiegelTable&) = default;

 private:
  int weight_ = 0;
  std::int64_t det4_bound_ = 0;
  std::string source_;
  std::vector<Entry> entries_;
};

/// Every GL_2(Z)-reduced key (a, b, c), b >= 0, with 4ac - b^2 <= det4_bound,
/// in key order.
std::vector<BinaryKey> reduced_keys(std::int64_t det4_bound);

/// a([[n, r/2], [r/2, m]]) = sum_{d | (n, r, m)} d^(k-1) c(nm/d^2, r/d).
/// Requires a cusp table of index 1 whose bound reaches det4_bound.
SiegelTable maass_lift(const JacobiTable& phi, std::int64_t det4_bound);

/// phi_m with c_m(n, r) = a([[n, r/2], [r/2, m]]); the bound is det4_bound.
JacobiTable fourier_jacobi(const SiegelTable& f, int m);

struct SequenceEntry {
  std::int64_t n;
  Rational value;
};

/// (4 det T, a(T)) over S_{M,mu} for a 1x1 index matrix M, ascending.
std::vector<SequenceEntry> smmu_sequence(const SiegelTable& f, const SMmuSpec& spec,
                                         std::int64_t m_max);

/// (n, a(diag(n, p))) for 1 <= n <= n_max.
std::vector<SequenceEntry> diagonal_sequence(const SiegelTable& f, std::int64_t p,
                                             std::int64_t n_max);

}  // namespace siegelfc
