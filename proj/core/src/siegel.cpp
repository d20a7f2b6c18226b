#include "siegelfc/siegel.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace siegelfc {

SiegelTable::SiegelTable(int weight, std::int64_t det4_bound, std::string source,
                         std::vector<Entry> entries)
    : weight_(weight),
      det4_bound_(det4_bound),
      source_(std::move(source)),
      entries_(std::move(entries)) {
  const std::vector<BinaryKey> keys = reduced_keys(det4_bound);
  if (keys.size() != entries_.size()) {
    throw std::invalid_argument("SiegelTable: expected " + std::to_string(keys.size()) +
                                " reduced keys, got " + std::to_string(entries_.size()));
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!(keys[i] == entries_[i].first)) {
      throw std::invalid_argument("SiegelTable: entries are not the sorted reduced keys");
    }
  }
}

const Rational& SiegelTable::at(const BinaryKey& key) const {
  if (key.det4() > det4_bound_) {
    throw std::out_of_range("SiegelTable: 4 det T = " + std::to_string(key.det4()) +
                            " beyond stored bound " + std::to_string(det4_bound_));
  }
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const Entry& e, const BinaryKey& k) { return e.first < k; });
  if (it == entries_.end() || !(it->first == key)) {
    throw std::invalid_argument("SiegelTable: key is not reduced");
  }
  return it->second;
}

Rational SiegelTable::lookup(const HalfIntMatrix& t) const {
  if (t.size() != 2) {
    throw std::invalid_argument("SiegelTable: degree-2 lookup needs a 2x2 matrix");
  }
  if (!t.is_positive_definite()) {
    return 0;
  }
  return at(gl2_key(t));
}

std::vector<BinaryKey> reduced_keys(std::int64_t det4_bound) {
  std::vector<BinaryKey> keys;
  // 3a^2 <= 4ac - b^2 for reduced forms
  for (std::int64_t a = 1; 3 * a * a <= det4_bound; ++a) {
    for (std::int64_t b = 0; b <= a; ++b) {
      for (std::int64_t c = a; 4 * a * c - b * b <= det4_bound; ++c) {
        keys.push_back({a, b, c});
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

SiegelTable maass_lift(const JacobiTable& phi, std::int64_t det4_bound) {
  if (phi.index() != 1) {
    throw std::invalid_argument("maass_lift: seed must have index 1");
  }
  if (!phi.is_cusp()) {
    throw std::invalid_argument("maass_lift: seed must be a cusp form");
  }
  if (phi.disc_bound() < det4_bound) {
    throw std::invalid_argument("maass_lift: seed disc_bound " +
                                std::to_string(phi.disc_bound()) + " too small, need " +
                                std::to_string(det4_bound));
  }
  const unsigned ex = static_cast<unsigned>(phi.weight() - 1);
  std::vector<SiegelTable::Entry> entries;
  for (const BinaryKey& key : reduced_keys(det4_bound)) {
    const std::int64_t d4 = key.det4();
    Rational value = 0;
    for (std::int64_t d : divisors(key.content())) {
      value += Rational(ipow(d, ex)) * phi.at(d4 / (d * d), mod(key.b / d, 2));
    }
    entries.emplace_back(key, std::move(value));
  }
  return SiegelTable(phi.weight(), det4_bound, phi.label(), std::move(entries));
}

JacobiTable fourier_jacobi(const SiegelTable& f, int m) {
  if (m < 1) {
    throw std::invalid_argument("fourier_jacobi: index must be positive");
  }
  const std::int64_t bound = f.det4_bound();
  JacobiTable out(f.weight(), m, bound, f.source() + "|FJ" + std::to_string(m));
  const std::int64_t four_m = 4 * static_cast<std::int64_t>(m);
  for (std::int64_t r = 0; r < 2 * m; ++r) {
    auto& row = out.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) {
      const std::int64_t d = JacobiTable::base_disc(m, r) + four_m * static_cast<std::int64_t>(j);
      const std::int64_t n = (d + r * r) / four_m;
      if (d == 0) {
        row[j] = 0;  // semi-definite T: cusp form coefficient
        continue;
      }
      row[j] = f.lookup(HalfIntMatrix::binary(n, r, m));
    }
  }
  return out;
}

std::vector<SequenceEntry> smmu_sequence(const SiegelTable& f, const SMmuSpec& spec,
                                         std::int64_t m_max) {
  if (spec.index_matrix.size() != 1) {
    throw std::invalid_argument("smmu_sequence: only 1x1 index matrices give degree-2 forms");
  }
  if (m_max > f.det4_bound()) {
    throw std::out_of_range("smmu_sequence: m_max " + std::to_string(m_max) +
                            " exceeds table bound " + std::to_string(f.det4_bound()));
  }
  std::vector<SequenceEntry> out;
  for (const SMmuEntry& e : enumerate_smmu(spec, m_max)) {
    out.push_back({e.m, f.lookup(e.t)});
  }
  return out;
}

std::vector<SequenceEntry> diagonal_sequence(const SiegelTable& f, std::int64_t p,
                                             std::int64_t n_max) {
  if (p < 1) {
    throw std::invalid_argument("diagonal_sequence: p must be positive");
  }
  if (4 * p * n_max > f.det4_bound()) {
    throw std::out_of_range("diagonal_sequence: need det4_bound >= " +
                            std::to_string(4 * p * n_max));
  }
  std::vector<SequenceEntry> out;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    out.push_back({n, f.lookup(HalfIntMatrix::binary(n, 0, p))});
  }
  return out;
}

}  // namespace siegelfc
