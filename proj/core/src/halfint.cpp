#include "siegelfc/halfint.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace siegelfc {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) {
    --q;
  }
  return q;
}

std::vector<Integer> to_big(const IntMatrix& a) {
  std::vector<Integer> m(a.rows() * a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      m[i * a.cols() + j] = static_cast<long>(a(i, j));
    }
  }
  return m;
}

Integer bareiss_determinant(std::vector<Integer> m, std::size_t n) {
  if (n == 0) {
    return 1;
  }
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k * n + k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row * n + k] == 0) {
        ++swap_row;
      }
      if (swap_row == n) {
        return 0;
      }
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m[k * n + j], m[swap_row * n + j]);
      }
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m[i * n + j] = std::move(v);
      }
    }
    prev = m[k * n + k];
  }
  return sign * m[(n - 1) * n + (n - 1)];
}

}  // namespace

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw std::invalid_argument("IntMatrix: ragged initializer");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix id(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    id(i, i) = 1;
  }
  return id;
}

IntMatrix IntMatrix::column(std::span<const std::int64_t> v) {
  IntMatrix c(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    c(i, 0) = v[i];
  }
  return c;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      t(j, i) = (*this)(i, j);
    }
  }
  return t;
}

std::vector<std::int64_t> IntMatrix::col(std::size_t j) const {
  std::vector<std::int64_t> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    c[i] = (*this)(i, j);
  }
  return c;
}

Integer IntMatrix::determinant() const {
  if (!square()) {
    throw std::invalid_argument("determinant of a non-square matrix");
  }
  return bareiss_determinant(to_big(*this), rows_);
}

IntMatrix IntMatrix::adjugate() const {
  if (!square()) {
    throw std::invalid_argument("adjugate of a non-square matrix");
  }
  const std::size_t n = rows_;
  IntMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // adj(A)_{ij} = (-1)^{i+j} det(A with row j and column i removed)
      std::vector<Integer> minor;
      minor.reserve((n - 1) * (n - 1));
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) {
          continue;
        }
        for (std::size_t c = 0; c < n; ++c) {
          if (c != i) {
            minor.emplace_back(static_cast<long>((*this)(r, c)));
          }
        }
      }
      Integer d = bareiss_determinant(std::move(minor), n - 1);
      if ((i + j) % 2 == 1) {
        d = -d;
      }
      adj(i, j) = to_int64(d);
    }
  }
  return adj;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw std::invalid_argument("IntMatrix product: shape mismatch");
  }
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const std::int64_t aik = a(i, k);
      if (aik == 0) {
        continue;
      }
      for (std::size_t j = 0; j < b.cols_; ++j) {
        c(i, j) = checked_add(c(i, j), checked_mul(aik, b(k, j)));
      }
    }
  }
  return c;
}

IntMatrix operator*(std::int64_t s, const IntMatrix& a) {
  IntMatrix c = a;
  for (auto& x : c.data_) {
    x = checked_mul(s, x);
  }
  return c;
}

HalfIntMatrix HalfIntMatrix::from_doubled(IntMatrix doubled) {
  if (!doubled.square() || doubled.rows() == 0) {
    throw std::invalid_argument("half-integral matrix must be square and non-empty");
  }
  for (std::size_t i = 0; i < doubled.rows(); ++i) {
    if (doubled(i, i) % 2 != 0) {
      throw std::invalid_argument("doubled matrix must have even diagonal");
    }
    for (std::size_t j = i + 1; j < doubled.cols(); ++j) {
      if (doubled(i, j) != doubled(j, i)) {
        throw std::invalid_argument("half-integral matrix must be symmetric");
      }
    }
  }
  return HalfIntMatrix(std::move(doubled));
}

HalfIntMatrix HalfIntMatrix::binary(std::int64_t a, std::int64_t b, std::int64_t c) {
  return from_doubled(IntMatrix{{checked_mul(2, a), b}, {b, checked_mul(2, c)}});
}

HalfIntMatrix HalfIntMatrix::diagonal(std::span<const std::int64_t> entries) {
  IntMatrix d(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    d(i, i) = checked_mul(2, entries[i]);
  }
  return from_doubled(std::move(d));
}

bool HalfIntMatrix::is_zero() const {
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      if (doubled_(i, j) != 0) {
        return false;
      }
    }
  }
  return true;
}

bool HalfIntMatrix::is_positive_definite() const {
  // Sylvester: every leading principal minor of 2T is positive.
  const std::size_t n = size();
  const auto big = to_big(doubled_);
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<Integer> lead;
    lead.reserve(k * k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        lead.push_back(big[i * n + j]);
      }
    }
    if (bareiss_determinant(std::move(lead), k) <= 0) {
      return false;
    }
  }
  return true;
}

Rational HalfIntMatrix::determinant() const {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, size());
  Rational d(doubled_.determinant(), scale);
  d.canonicalize();
  return d;
}

Integer HalfIntMatrix::evaluate(std::span<const std::int64_t> x) const {
  if (x.size() != size()) {
    throw std::invalid_argument("evaluate: vector length mismatch");
  }
  Integer twice_value = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      twice_value += Integer(static_cast<long>(doubled_(i, j))) * static_cast<long>(x[i]) *
                     static_cast<long>(x[j]);
    }
  }
  return twice_value / 2;
}

std::int64_t content(const HalfIntMatrix& t) {
  if (t.is_zero()) {
    throw std::domain_error("undefined content");
  }
  std::int64_t g = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    g = gcd(g, t.diag(i));
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      g = gcd(g, t.twice(i, j));
    }
  }
  return g;
}

bool is_primitive(const HalfIntMatrix& t) { return content(t) == 1; }

HalfIntMatrix act(const HalfIntMatrix& t, const IntMatrix& u) {
  if (!u.square() || u.rows() != t.size()) {
    throw std::invalid_argument("act: transform has the wrong shape");
  }
  const Integer d = u.determinant();
  if (d != 1 && d != -1) {
    throw std::invalid_argument("act: transform is not in GL_n(Z)");
  }
  return HalfIntMatrix::from_doubled(u.transpose() * t.doubled() * u);
}

Reduction reduce(const HalfIntMatrix& t) {
  if (t.size() != 2) {
    throw std::invalid_argument("reduce: only binary forms are supported");
  }
  if (!t.is_positive_definite()) {
    throw std::invalid_argument("reduce: form is not positive definite");
  }
  std::int64_t a = t.diag(0);
  std::int64_t b = t.twice(0, 1);
  std::int64_t c = t.diag(1);
  IntMatrix u = IntMatrix::identity(2);
  const IntMatrix swap{{0, -1}, {1, 0}};

  for (;;) {
    if (b > a || b <= -a) {
      // x -> x + k y moves b into (-a, a]
      const std::int64_t k = floor_div(a - b, 2 * a);
      c = checked_add(checked_add(checked_mul(checked_mul(a, k), k), checked_mul(b, k)), c);
      b = checked_add(b, checked_mul(2 * a, k));
      u = u * IntMatrix{{1, k}, {0, 1}};
    }
    if (a > c || (a == c && b < 0)) {
      std::swap(a, c);
      b = -b;
      u = u * swap;
      continue;
    }
    break;
  }
  return {HalfIntMatrix::binary(a, b, c), std::move(u)};
}

BinaryKey gl2_key(const HalfIntMatrix& t) {
  const Reduction r = reduce(t);
  const std::int64_t b = r.form.twice(0, 1);
  return {r.form.diag(0), b < 0 ? -b : b, r.form.diag(1)};
}

SMmuSpec SMmuSpec::make(HalfIntMatrix index_matrix, std::vector<std::int64_t> shift) {
  IntMatrix cof = index_matrix.doubled().adjugate();
  SMmuSpec spec{std::move(index_matrix), std::move(shift), std::move(cof)};
  spec.validate();
  return spec;
}

void SMmuSpec::validate() const {
  const std::size_t n = index_matrix.size();
  if (shift.size() != n) {
    throw std::invalid_argument("S_{M,mu}: shift length must match the index matrix");
  }
  if (!index_matrix.is_positive_definite()) {
    throw std::invalid_argument("S_{M,mu}: index matrix must be positive definite");
  }
  if (cofactor.rows() != n || cofactor.cols() != n) {
    throw std::invalid_argument("S_{M,mu}: cofactor has the wrong shape");
  }
  const IntMatrix lhs = cofactor * index_matrix.doubled();
  const std::int64_t det2m = to_int64(index_matrix.doubled().determinant());
  if (lhs != det2m * IntMatrix::identity(n)) {
    throw std::invalid_argument("S_{M,mu}: cofactor identity adj(2M) 2M = det(2M) I fails");
  }
}

Rational SMmuSpec::cofactor_value() const {
  const std::size_t n = index_matrix.size();
  Integer q = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      q += Integer(static_cast<long>(shift[i])) * static_cast<long>(cofactor(i, j)) *
           static_cast<long>(shift[j]);
    }
  }
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, n - 1);
  Rational v(q, scale);
  v.canonicalize();
  return v;
}

Rational SMmuSpec::four_det() const { return 4 * index_matrix.determinant(); }

std::vector<SMmuEntry> enumerate_smmu(const SMmuSpec& spec, std::int64_t m_max) {
  spec.validate();
  if (m_max < 1) {
    throw std::invalid_argument("enumerate_smmu: m_max must be at least 1");
  }
  const std::size_t n = spec.index_matrix.size();
  const Rational shift_value = spec.cofactor_value();
  const Rational four_det = spec.four_det();

  std::vector<SMmuEntry> out;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    Rational top = (Rational(static_cast<long>(m)) + shift_value) / four_det;
    top.canonicalize();
    if (top.get_den() != 1 || top <= 0) {
      continue;
    }
    IntMatrix doubled(n + 1, n + 1);
    doubled(0, 0) = checked_mul(2, to_int64(top.get_num()));
    for (std::size_t i = 0; i < n; ++i) {
      doubled(0, i + 1) = spec.shift[i];
      doubled(i + 1, 0) = spec.shift[i];
      for (std::size_t j = 0; j < n; ++j) {
        doubled(i + 1, j + 1) = spec.index_matrix.twice(i, j);
      }
    }
    HalfIntMatrix t = HalfIntMatrix::from_doubled(std::move(doubled));
    if (!t.is_positive_definite()) {
      continue;
    }
    if (4 * t.determinant() != m) {
      throw std::logic_error("enumerate_smmu: 4 det T != m for m = " + std::to_string(m));
    }
    out.push_back({m, std::move(t)});
  }
  return out;
}

}  // namespace siegelfc
