#include "siegelfc/signscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace siegelfc {

namespace {

// Neumaier's compensated summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Right endpoint widened by half an ulp so that an integer n computed as
// x + x^(3/5) up to rounding is still counted.
double guarded_end(double end) {
  return end + 0.5 * (std::nextafter(end, std::numeric_limits<double>::infinity()) - end);
}

}  // namespace

NormalizedSequence normalize(std::span<const SequenceEntry> seq, int k, int g,
                             std::int64_t modulus, std::int64_t residue,
                             std::optional<std::int64_t> coverage) {
  if (modulus < 1) {
    throw std::invalid_argument("normalize: modulus must be positive");
  }
  NormalizedSequence out;
  out.weight_lambda = Rational(2 * k - g, 2);
  out.modulus = modulus;
  out.residue = mod(residue, modulus);
  const double exponent = (out.weight_lambda.get_d() - 1.0) / 2.0;
  std::int64_t prev = std::numeric_limits<std::int64_t>::min();
  for (const SequenceEntry& e : seq) {
    if (e.n <= prev) {
      throw std::invalid_argument("normalize: entries must be strictly ascending in n");
    }
    if (e.n < 1) {
      throw std::invalid_argument("normalize: n must be positive");
    }
    if (mod(e.n, modulus) != out.residue) {
      throw std::invalid_argument("normalize: n = " + std::to_string(e.n) +
                                  " outside the residue class");
    }
    prev = e.n;
    const double scale = std::pow(static_cast<double>(e.n), exponent);
    out.entries.push_back({e.n, e.value, e.value.get_d() / scale});
    if (sgn(e.value) != (out.entries.back().c_hat > 0) - (out.entries.back().c_hat < 0)) {
      throw std::logic_error("normalize: sign of c_hat differs from the exact sign");
    }
  }
  out.coverage = coverage.value_or(out.entries.empty() ? 0 : out.entries.back().n);
  return out;
}

double window_end(double x) { return x + std::pow(x, 0.6); }

std::vector<WindowReport> scan_windows(const NormalizedSequence& seq,
                                       std::span<const double> x_grid) {
  std::vector<WindowReport> out;
  out.reserve(x_grid.size());
  const auto& es = seq.entries;
  for (double x : x_grid) {
    WindowReport rep;
    rep.x = x;
    rep.window_end = window_end(x);
    const double end = guarded_end(rep.window_end);
    if (end >= static_cast<double>(seq.coverage + 1)) {
      throw std::out_of_range("scan_windows: window at x = " + std::to_string(x) +
                              " needs coverage up to n_max = " +
                              std::to_string(static_cast<std::int64_t>(std::floor(end))));
    }
    auto it = std::upper_bound(es.begin(), es.end(), x, [](double v, const NormalizedEntry& en) {
      return v < static_cast<double>(en.n);
    });
    const NormalizedEntry* last_nonzero = nullptr;
    for (; it != es.end() && static_cast<double>(it->n) <= end; ++it) {
      const int s = sgn(it->c);
      if (s == 0) {
        ++rep.zero;
        continue;
      }
      (s > 0 ? rep.positive : rep.negative) += 1;
      if (!rep.witness && last_nonzero != nullptr && sgn(last_nonzero->c) != s) {
        rep.witness = std::make_pair(last_nonzero->n, it->n);
      }
      last_nonzero = &*it;
    }
    rep.sign_change = rep.witness.has_value();
    out.push_back(rep);
  }
  return out;
}

std::optional<std::pair<std::int64_t, std::int64_t>> first_sign_change(
    const NormalizedSequence& seq) {
  const NormalizedEntry* last_nonzero = nullptr;
  for (const NormalizedEntry& e : seq.entries) {
    const int s = sgn(e.c);
    if (s == 0) {
      continue;
    }
    if (last_nonzero != nullptr && sgn(last_nonzero->c) != s) {
      return std::make_pair(last_nonzero->n, e.n);
    }
    last_nonzero = &e;
  }
  return std::nullopt;
}

std::vector<PartialSums> partial_sum_stats(const NormalizedSequence& seq,
                                           std::span<const double> checkpoints) {
  std::vector<PartialSums> out;
  for (double x : checkpoints) {
    if (x > static_cast<double>(seq.coverage)) {
      throw std::out_of_range("partial_sum_stats: checkpoint " + std::to_string(x) +
                              " beyond coverage " + std::to_string(seq.coverage));
    }
    if (!(x > 0.0)) {
      throw std::invalid_argument("partial_sum_stats: checkpoints must be positive");
    }
    CompensatedSum s1, s2;
    for (const NormalizedEntry& e : seq.entries) {
      if (static_cast<double>(e.n) > x) {
        break;
      }
      s1.add(e.c_hat);
      s2.add(e.c_hat * e.c_hat);
    }
    out.push_back({x, s1.value(), s2.value(), s2.value() / x});
  }
  return out;
}

double relative_spread(std::span<const PartialSums> stats) {
  if (stats.empty()) {
    return 0.0;
  }
  double lo = stats.front().s2_over_x, hi = lo, total = 0.0;
  for (const PartialSums& s : stats) {
    lo = std::min(lo, s.s2_over_x);
    hi = std::max(hi, s.s2_over_x);
    total += s.s2_over_x;
  }
  const double mean = total / static_cast<double>(stats.size());
  return mean == 0.0 ? 0.0 : (hi - lo) / std::abs(mean);
}

GrowthReport growth_check(const NormalizedSequence& seq, double exponent_margin) {
  GrowthReport out;
  const double exponent = 3.0 / 16.0 + exponent_margin;
  for (const NormalizedEntry& e : seq.entries) {
    if (e.c == 0) {
      continue;
    }
    const double ratio = std::abs(e.c_hat) / std::pow(static_cast<double>(e.n), exponent);
    if (!out.argmax || ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.argmax = e.n;
    }
  }
  return out;
}

std::vector<double> geometric_grid(double x_min, double ratio, double x_max,
                                   std::int64_t coverage) {
  if (!(x_min > 0.0) || !(ratio > 1.0)) {
    throw std::invalid_argument("geometric_grid: need x_min > 0 and ratio > 1");
  }
  std::vector<double> out;
  for (int j = 0;; ++j) {
    const double x = x_min * std::pow(ratio, j);
    if (x > x_max || guarded_end(window_end(x)) >= static_cast<double>(coverage + 1)) {
      break;
    }
    out.push_back(x);
  }
  return out;
}

ScanSummary summarize(const NormalizedSequence& seq, std::span<const WindowReport> reports) {
  ScanSummary out;
  out.windows = reports.size();
  const auto first = first_sign_change(seq);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const WindowReport& r = reports[i];
    const bool after = first && r.x >= static_cast<double>(first->first);
    if (after) {
      ++out.windows_after_first_change;
    }
    if (!r.sign_change) {
      ++out.false_windows;
      out.last_false_x = r.x;
      out.true_suffix_start = i + 1;
      if (after) {
        ++out.false_after_first_change;
      }
    }
  }
  return out;
}

}  // namespace siegelfc
