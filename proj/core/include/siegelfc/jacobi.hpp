#pragma once

// Degree-1 Jacobi forms stored on the quotient (D = 4mn - r^2, r mod 2m).
// Every admissible key up to the discriminant bound is present, so the
// table doubles as the shape of the theta decomposition.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "siegelfc/arith.hpp"
#include "siegelfc/qseries.hpp"

namespace siegelfc {

class JacobiTable {
 public:
  JacobiTable() = default;
  /// All-zero table with every admissible key D <= disc_bound.
  JacobiTable(int weight, int index, std::int64_t disc_bound, std::string label = {});

  int weight() const noexcept { return weight_; }
  int index() const noexcept { return index_; }
  std::int64_t disc_bound() const noexcept { return disc_bound_; }
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  /// Smallest admissible D >= 0 for the class r mod 2m, i.e. -r^2 mod 4m.
  static std::int64_t base_disc(int index, std::int64_t residue);
  bool admissible(std::int64_t d, std::int64_t residue) const;

  /// Coefficient stored under (D, r mod 2m). Throws std::out_of_range past the
  /// bound and std::invalid_argument for a key violating D = -r^2 mod 4m.
  const Rational& at(std::int64_t d, std::int64_t residue) const;
  void set(std::int64_t d, std::int64_t residue, Rational value);

  /// c(n, r) for arbitrary integers: zero when 4mn - r^2 < 0, otherwise the
  /// stored value of its class.
  Rational coefficient(std::int64_t n, std::int64_t r) const;

  /// Values for residue r at D = base_disc(r) + 4m j, j = 0, 1, ...
  const std::vector<Rational>& row(std::int64_t residue) const;
  std::vector<Rational>& row(std::int64_t residue);

  std::size_t key_count() const;
  /// No key with D = 0 carries a nonzero value.
  bool is_cusp() const;
  bool is_zero() const;

  /// Visits every key in ascending (D, residue) order.
  template <typename F>
  void for_each(F&& f) const {
    for (std::int64_t d = 0; d <= disc_bound_; ++d) {
      for (std::int64_t r = 0; r < 2 * index_; ++r) {
        if (admissible(d, r)) {
          f(d, r, rows_[r][static_cast<std::size_t>((d - base_disc(index_, r)) / (4 * index_))]);
        }
      }
    }
  }

  /// Same weight, index, bound and coefficients (labels are ignored).
  bool same_coefficients(const JacobiTable& other) const;

  friend JacobiTable operator+(const JacobiTable& a, const JacobiTable& b);
  friend JacobiTable operator-(const JacobiTable& a, const JacobiTable& b);
  friend JacobiTable operator*(const Rational& s, const JacobiTable& a);

 private:
  std::size_t locate(std::int64_t d, std::int64_t residue) const;
  void check_compatible(const JacobiTable& other) const;

  int weight_ = 0;
  int index_ = 1;
  std::int64_t disc_bound_ = -1;
  std::string label_;
  std::vector<std::vector<Rational>> rows_;
};

/// E_{k,1} with c(n, r) = H(k-1, 4n - r^2) / H(k-1, 0).
JacobiTable jacobi_eisenstein(int k, std::int64_t disc_bound);

/// f * phi for a scalar q-series f of weight f_weight. Throws
/// std::invalid_argument when f is truncated below what the table needs.
JacobiTable multiply_scalar_jacobi(const QSeries& f, int f_weight, const JacobiTable& phi);

/// (E6 E_{4,1} - E4 E_{6,1}) / 144 for k = 10, (E4^2 E_{4,1} - E6 E_{6,1}) / 144
/// for k = 12, before any rescaling.
JacobiTable phi_cusp_unnormalized(int k, std::int64_t disc_bound);

/// phi_{10,1} or phi_{12,1} scaled so that c(1, 1) = 1.
JacobiTable phi_cusp(int k, std::int64_t disc_bound);

/// Index-raising operator V_l on an index-1 table; the result keeps the
/// discriminant bound of the input.
JacobiTable v_operator(const JacobiTable& phi, int l);

struct ThetaComponent {
  int index = 1;
  std::int64_t residue = 0;
  int weight = 0;
  std::int64_t disc_bound = 0;
  std::map<std::int64_t, Rational> coeffs;  // D -> h_r(D), every admissible D

  std::optional<std::int64_t> first_nonzero() const;
  friend bool operator==(const ThetaComponent&, const ThetaComponent&) = default;
};

/// One component per residue 0 <= r < 2m.
std::vector<ThetaComponent> theta_split(const JacobiTable& phi);

/// Inverse of theta_split. Throws std::invalid_argument for inconsistent or
/// missing components.
JacobiTable theta_assemble(const std::vector<ThetaComponent>& components);

struct ComponentSupport {
  std::int64_t residue;
  std::optional<std::int64_t> first_nonzero_disc;
};

std::vector<ComponentSupport> first_nonzero(const std::vector<ThetaComponent>& components);

/// First nonzero D of every theta component; the index must be an odd prime.
std::vector<ComponentSupport> check_nonvanishing(const JacobiTable& phi);

/// theta_{m,r}(tau, z) = sum_l e(m (l + r/2m)^2 tau + 2m (l + r/2m) z), summed
/// until the Gaussian tail bound drops below tail_tol. Throws
/// std::domain_error when Im tau <= 0.
std::complex<double> theta_eval(int m, std::int64_t r, std::complex<double> tau,
                                std::complex<double> z, double tail_tol = 1e-12);

}  // namespace siegelfc
