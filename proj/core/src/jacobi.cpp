#include "siegelfc/jacobi.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace siegelfc {

namespace {

void require_index_one(const JacobiTable& phi, const char* what) {
  if (phi.index() != 1) {
    throw std::invalid_argument(std::string(what) + ": expected an index-1 table, got index " +
                                std::to_string(phi.index()));
  }
}

std::size_t row_length(int index, std::int64_t residue, std::int64_t disc_bound) {
  const std::int64_t base = JacobiTable::base_disc(index, residue);
  if (base > disc_bound) {
    return 0;
  }
  return static_cast<std::size_t>((disc_bound - base) / (4 * index) + 1);
}

}  // namespace

JacobiTable::JacobiTable(int weight, int index, std::int64_t disc_bound, std::string label)
    : weight_(weight), index_(index), disc_bound_(disc_bound), label_(std::move(label)) {
  if (index < 1) {
    throw std::invalid_argument("JacobiTable: index must be positive");
  }
  if (disc_bound < 0) {
    throw std::invalid_argument("JacobiTable: negative discriminant bound");
  }
  rows_.resize(static_cast<std::size_t>(2 * index));
  for (std::int64_t r = 0; r < 2 * index; ++r) {
    rows_[r].resize(row_length(index, r, disc_bound));
  }
}

std::int64_t JacobiTable::base_disc(int index, std::int64_t residue) {
  return mod(-residue * residue, 4 * static_cast<std::int64_t>(index));
}

bool JacobiTable::admissible(std::int64_t d, std::int64_t residue) const {
  return d >= 0 && residue >= 0 && residue < 2 * index_ &&
         mod(d + residue * residue, 4 * static_cast<std::int64_t>(index_)) == 0;
}

std::size_t JacobiTable::locate(std::int64_t d, std::int64_t residue) const {
  if (d > disc_bound_) {
    throw std::out_of_range("JacobiTable: D = " + std::to_string(d) + " beyond stored bound " +
                            std::to_string(disc_bound_));
  }
  if (!admissible(d, residue)) {
    throw std::invalid_argument("JacobiTable: inadmissible key (" + std::to_string(d) + ", " +
                                std::to_string(residue) + ")");
  }
  return static_cast<std::size_t>((d - base_disc(index_, residue)) / (4 * index_));
}

const Rational& JacobiTable::at(std::int64_t d, std::int64_t residue) const {
  return rows_[residue][locate(d, residue)];
}

void JacobiTable::set(std::int64_t d, std::int64_t residue, Rational value) {
  rows_[residue][locate(d, residue)] = std::move(value);
}

Rational JacobiTable::coefficient(std::int64_t n, std::int64_t r) const {
  const std::int64_t d = 4 * static_cast<std::int64_t>(index_) * n - r * r;
  if (d < 0) {
    return 0;
  }
  return at(d, mod(r, 2 * static_cast<std::int64_t>(index_)));
}

const std::vector<Rational>& JacobiTable::row(std::int64_t residue) const {
  return rows_.at(static_cast<std::size_t>(residue));
}

std::vector<Rational>& JacobiTable::row(std::int64_t residue) {
  return rows_.at(static_cast<std::size_t>(residue));
}

std::size_t JacobiTable::key_count() const {
  std::size_t n = 0;
  for (const auto& r : rows_) {
    n += r.size();
  }
  return n;
}

bool JacobiTable::is_cusp() const {
  for (std::int64_t r = 0; r < 2 * index_; ++r) {
    if (base_disc(index_, r) == 0 && !rows_[r].empty() && rows_[r][0] != 0) {
      return false;
    }
  }
  return true;
}

bool JacobiTable::is_zero() const {
  for (const auto& r : rows_) {
    for (const Rational& v : r) {
      if (v != 0) {
        return false;
      }
    }
  }
  return true;
}

bool JacobiTable::same_coefficients(const JacobiTable& other) const {
  return weight_ == other.weight_ && index_ == other.index_ &&
         disc_bound_ == other.disc_bound_ && rows_ == other.rows_;
}

void JacobiTable::check_compatible(const JacobiTable& other) const {
  if (weight_ != other.weight_ || index_ != other.index_ || disc_bound_ != other.disc_bound_) {
    throw std::invalid_argument("JacobiTable: incompatible weight, index or bound");
  }
}

JacobiTable operator+(const JacobiTable& a, const JacobiTable& b) {
  a.check_compatible(b);
  JacobiTable out = a;
  for (std::size_t r = 0; r < out.rows_.size(); ++r) {
    for (std::size_t j = 0; j < out.rows_[r].size(); ++j) {
      out.rows_[r][j] += b.rows_[r][j];
    }
  }
  return out;
}

JacobiTable operator-(const JacobiTable& a, const JacobiTable& b) {
  a.check_compatible(b);
  JacobiTable out = a;
  for (std::size_t r = 0; r < out.rows_.size(); ++r) {
    for (std::size_t j = 0; j < out.rows_[r].size(); ++j) {
      out.rows_[r][j] -= b.rows_[r][j];
    }
  }
  return out;
}

JacobiTable operator*(const Rational& s, const JacobiTable& a) {
  JacobiTable out = a;
  for (auto& r : out.rows_) {
    for (Rational& v : r) {
      v *= s;
    }
  }
  return out;
}

JacobiTable jacobi_eisenstein(int k, std::int64_t disc_bound) {
  if (k < 4 || k % 2 != 0) {
    throw std::invalid_argument("jacobi_eisenstein: weight must be even and at least 4");
  }
  CohenH h(k - 1);
  const Rational h0 = h(0);
  JacobiTable out(k, 1, disc_bound, "E" + std::to_string(k) + ",1");
  for (std::int64_t r = 0; r < 2; ++r) {
    auto& row = out.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) {
      const std::int64_t d = JacobiTable::base_disc(1, r) + 4 * static_cast<std::int64_t>(j);
      row[j] = h(d) / h0;
    }
  }
  return out;
}

JacobiTable multiply_scalar_jacobi(const QSeries& f, int f_weight, const JacobiTable& phi) {
  JacobiTable out(f_weight + phi.weight(), phi.index(), phi.disc_bound());
  for (std::int64_t r = 0; r < 2 * phi.index(); ++r) {
    const auto& in = phi.row(r);
    if (in.empty()) {
      continue;
    }
    // multiplying by q^t moves n by t, i.e. D by 4m t, i.e. the row by t slots
    if (f.truncation() + 1 < in.size()) {
      throw std::invalid_argument(
          "multiply_scalar_jacobi: q-series truncated at " + std::to_string(f.truncation()) +
          ", need at least " + std::to_string(in.size() - 1));
    }
    out.row(r) = exact_convolve(f.coeffs(), in, in.size());
  }
  return out;
}

JacobiTable phi_cusp_unnormalized(int k, std::int64_t disc_bound) {
  if (k != 10 && k != 12) {
    throw std::invalid_argument("phi_cusp: weight must be 10 or 12");
  }
  const std::size_t trunc = static_cast<std::size_t>(disc_bound / 4 + 1);
  const QSeries e4 = eisenstein(4, trunc);
  const QSeries e6 = eisenstein(6, trunc);
  const JacobiTable e41 = jacobi_eisenstein(4, disc_bound);
  const JacobiTable e61 = jacobi_eisenstein(6, disc_bound);
  JacobiTable raw;
  if (k == 10) {
    raw = multiply_scalar_jacobi(e6, 6, e41) - multiply_scalar_jacobi(e4, 4, e61);
  } else {
    raw = multiply_scalar_jacobi(e4 * e4, 8, e41) - multiply_scalar_jacobi(e6, 6, e61);
  }
  raw = Rational(1, 144) * raw;
  raw.set_label("phi" + std::to_string(k) + ",1");
  return raw;
}

JacobiTable phi_cusp(int k, std::int64_t disc_bound) {
  if (disc_bound < 3) {
    throw std::invalid_argument("phi_cusp: the normalizing coefficient needs disc_bound >= 3");
  }
  JacobiTable raw = phi_cusp_unnormalized(k, disc_bound);
  const Rational c3 = raw.at(3, 1);
  if (c3 == 0) {
    throw std::logic_error("phi_cusp: normalizing coefficient vanishes");
  }
  JacobiTable out = Rational(1) / c3 * raw;
  out.set_label(raw.label());
  return out;
}

JacobiTable v_operator(const JacobiTable& phi, int l) {
  require_index_one(phi, "v_operator");
  if (l < 1) {
    throw std::invalid_argument("v_operator: l must be positive");
  }
  JacobiTable out(phi.weight(), l, phi.disc_bound(), phi.label() + "|V" + std::to_string(l));
  const std::int64_t four_l = 4 * static_cast<std::int64_t>(l);
  for (std::int64_t r = 0; r < 2 * l; ++r) {
    auto& row = out.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) {
      const std::int64_t d = JacobiTable::base_disc(l, r) + four_l * static_cast<std::int64_t>(j);
      const std::int64_t n = (d + r * r) / four_l;
      // gcd(n, r, l) does not depend on the representative r of its class mod 2l
      const std::int64_t g = gcd(gcd(n, r), l);
      Rational sum = 0;
      for (std::int64_t dd : divisors(g)) {
        const std::int64_t sub = d / (dd * dd);
        sum += Rational(ipow(dd, static_cast<unsigned>(phi.weight() - 1))) *
               phi.at(sub, mod(r / dd, 2));
      }
      row[j] = sum;
    }
  }
  return out;
}

std::optional<std::int64_t> ThetaComponent::first_nonzero() const {
  for (const auto& [d, v] : coeffs) {
    if (v != 0) {
      return d;
    }
  }
  return std::nullopt;
}

std::vector<ThetaComponent> theta_split(const JacobiTable& phi) {
  std::vector<ThetaComponent> out;
  const std::int64_t four_m = 4 * static_cast<std::int64_t>(phi.index());
  for (std::int64_t r = 0; r < 2 * phi.index(); ++r) {
    ThetaComponent c{phi.index(), r, phi.weight(), phi.disc_bound(), {}};
    const auto& row = phi.row(r);
    const std::int64_t base = JacobiTable::base_disc(phi.index(), r);
    for (std::size_t j = 0; j < row.size(); ++j) {
      c.coeffs.emplace_hint(c.coeffs.end(), base + four_m * static_cast<std::int64_t>(j), row[j]);
    }
    out.push_back(std::move(c));
  }
  return out;
}

JacobiTable theta_assemble(const std::vector<ThetaComponent>& components) {
  if (components.empty()) {
    throw std::invalid_argument("theta_assemble: no components");
  }
  const ThetaComponent& first = components.front();
  JacobiTable out(first.weight, first.index, first.disc_bound);
  const std::int64_t classes = 2 * static_cast<std::int64_t>(first.index);
  std::vector<bool> seen(static_cast<std::size_t>(classes), false);
  for (const ThetaComponent& c : components) {
    if (c.index != first.index || c.weight != first.weight || c.disc_bound != first.disc_bound) {
      throw std::invalid_argument("theta_assemble: inconsistent components");
    }
    if (c.residue < 0 || c.residue >= classes || seen[c.residue]) {
      throw std::invalid_argument("theta_assemble: bad or repeated residue " +
                                  std::to_string(c.residue));
    }
    seen[c.residue] = true;
    if (c.coeffs.size() != out.row(c.residue).size()) {
      throw std::invalid_argument("theta_assemble: component for residue " +
                                  std::to_string(c.residue) + " has missing keys");
    }
    for (const auto& [d, v] : c.coeffs) {
      out.set(d, c.residue, v);
    }
  }
  for (std::int64_t r = 0; r < classes; ++r) {
    if (!seen[r]) {
      throw std::invalid_argument("theta_assemble: missing residue class " + std::to_string(r));
    }
  }
  return out;
}

std::vector<ComponentSupport> first_nonzero(const std::vector<ThetaComponent>& components) {
  std::vector<ComponentSupport> out;
  out.reserve(components.size());
  for (const ThetaComponent& c : components) {
    out.push_back({c.residue, c.first_nonzero()});
  }
  return out;
}

std::vector<ComponentSupport> check_nonvanishing(const JacobiTable& phi) {
  if (phi.index() < 3 || !is_prime(static_cast<std::uint64_t>(phi.index()))) {
    throw std::invalid_argument("check_nonvanishing: index must be an odd prime, got " +
                                std::to_string(phi.index()));
  }
  return first_nonzero(theta_split(phi));
}

std::complex<double> theta_eval(int m, std::int64_t r, std::complex<double> tau,
                                std::complex<double> z, double tail_tol) {
  const double v = tau.imag();
  if (!(v > 0.0)) {
    throw std::domain_error("theta_eval: Im(tau) must be positive");
  }
  if (m < 1 || !(tail_tol > 0.0)) {
    throw std::invalid_argument("theta_eval: need m >= 1 and a positive tolerance");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  // |term(x)| = exp(-a (x - x0)^2) * exp(a x0^2) with a = 2 pi m v, x0 = -Im(z)/v
  const double a = two_pi * m * v;
  const double x0 = -z.imag() / v;
  const double scale = std::exp(a * x0 * x0);
  double cut = 1.0;
  for (;;) {
    const double tail = 2.0 * scale * std::exp(-a * cut * cut) / (1.0 - std::exp(-2.0 * a * cut));
    if (tail < tail_tol) {
      break;
    }
    cut += 0.5;
  }
  const double shift = static_cast<double>(r) / (2.0 * m);
  const auto lo = static_cast<std::int64_t>(std::floor(x0 - cut - shift));
  const auto hi = static_cast<std::int64_t>(std::ceil(x0 + cut - shift));
  const std::complex<double> two_pi_i(0.0, two_pi);
  std::complex<double> sum = 0.0;
  for (std::int64_t l = lo; l <= hi; ++l) {
    const double x = static_cast<double>(l) + shift;
    sum += std::exp(two_pi_i * (static_cast<double>(m) * x * x * tau + 2.0 * m * x * z));
  }
  return sum;
}

}  // namespace siegelfc
