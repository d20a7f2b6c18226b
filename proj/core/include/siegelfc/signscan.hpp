#pragma once

// Normalized coefficient sequences and the sign-change window scanner.
// Sign decisions always use the exact rational coefficient; doubles feed
// statistics and display only.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "siegelfc/arith.hpp"
#include "siegelfc/siegel.hpp"

namespace siegelfc {

struct NormalizedEntry {
  std::int64_t n;
  Rational c;
  double c_hat;  // c / n^((lambda - 1) / 2)
};

struct NormalizedSequence {
  Rational weight_lambda;       // k - g/2
  std::int64_t modulus = 1;     // support lies in n = residue mod modulus
  std::int64_t residue = 0;
  std::int64_t coverage = 0;    // every n <= coverage that lies in the support is present
  std::vector<NormalizedEntry> entries;
};

/// Normalizes sorted (n, c) pairs with lambda = k - g/2. Throws
/// std::invalid_argument for unsorted input or entries outside the residue
/// class. Coverage defaults to the last n.
NormalizedSequence normalize(std::span<const SequenceEntry> seq, int k, int g,
                             std::int64_t modulus = 1, std::int64_t residue = 0,
                             std::optional<std::int64_t> coverage = std::nullopt);

/// x + x^(3/5).
double window_end(double x);

struct WindowReport {
  double x = 0;
  double window_end = 0;
  bool sign_change = false;
  std::optional<std::pair<std::int64_t, std::int64_t>> witness;
  std::int64_t positive = 0;
  std::int64_t negative = 0;
  std::int64_t zero = 0;
};

/// One report per grid point; the window is x < n <= x + x^(3/5), with the
/// right endpoint widened by half an ulp. Throws std::out_of_range naming the
/// required n_max when a window reaches past the coverage.
std::vector<WindowReport> scan_windows(const NormalizedSequence& seq,
                                       std::span<const double> x_grid);

/// First pair of consecutive nonzero entries with strictly opposite signs.
std::optional<std::pair<std::int64_t, std::int64_t>> first_sign_change(
    const NormalizedSequence& seq);

struct PartialSums {
  double x;
  double s1;        // sum of c_hat over n <= x
  double s2;        // sum of c_hat^2 over n <= x
  double s2_over_x;
};

/// Compensated running sums at each checkpoint; throws std::out_of_range when
/// a checkpoint exceeds the coverage.
std::vector<PartialSums> partial_sum_stats(const NormalizedSequence& seq,
                                           std::span<const double> checkpoints);

/// (max - min) / mean of the S2/x column.
double relative_spread(std::span<const PartialSums> stats);

struct GrowthReport {
  double max_ratio = 0;
  std::optional<std::int64_t> argmax;
};

/// max |c_hat(n)| / n^(3/16 + margin); argmax is absent when every entry is 0.
GrowthReport growth_check(const NormalizedSequence& seq, double exponent_margin);

/// x_min * ratio^j for every j with x <= x_max and window_end(x) <= coverage.
std::vector<double> geometric_grid(double x_min, double ratio, double x_max,
                                   std::int64_t coverage);

struct ScanSummary {
  std::size_t windows = 0;
  std::size_t false_windows = 0;
  std::optional<double> last_false_x;
  /// Grid points x >= n1 of the first sign change (n1, n2).
  std::size_t windows_after_first_change = 0;
  std::size_t false_after_first_change = 0;
  /// Every window after the last false one reports a sign change; the index
  /// of the first window of that suffix.
  std::size_t true_suffix_start = 0;
};

ScanSummary summarize(const NormalizedSequence& seq, std::span<const WindowReport> reports);

}  // namespace siegelfc
