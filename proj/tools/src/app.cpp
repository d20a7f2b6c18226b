#include "siegelfc_cli/app.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "siegelfc/gauss.hpp"
#include "siegelfc/qforms.hpp"
#include "siegelfc/signscan.hpp"
#include "siegelfc/table_io.hpp"

namespace siegelfc::cli {

using nlohmann::json;

namespace {

constexpr std::int64_t kDefaultCoeffsBound = 1000;
constexpr std::int64_t kDefaultDiscBound = 2000;
constexpr std::int64_t kDefaultScanN = 2000;

std::string rational_str(const Rational& q) { return q.get_str(); }

void emit(const RunConfig& cfg, std::ostream& out, const std::string& body) {
  if (!cfg.output) {
    out << body;
    return;
  }
  write_file(*cfg.output, body);
}

std::string render_json(const json& j) { return j.dump(2) + "\n"; }

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::filesystem::path cache_path(const RunConfig& cfg, const std::string& kind,
                                 std::int64_t bound) {
  return *cfg.cache_dir / (form_name(cfg.form) + "_" + kind + "_" + std::to_string(bound) + ".sfct");
}

// Seed tables need D = 3 for the normalization; smaller requests reuse that.
std::int64_t seed_bound(std::int64_t det4) { return std::max<std::int64_t>(det4, 3); }

JacobiTable build_seed(Form f, std::int64_t bound) {
  switch (f) {
    case Form::chi10:
      return phi_cusp(10, bound);
    case Form::chi12:
      return phi_cusp(12, bound);
    case Form::zero:
      return JacobiTable(10, 1, bound, "zero");
  }
  throw std::logic_error("unknown form");
}

template <class Table, class Decode, class Build, class Valid>
Table load_or_build(const RunConfig& cfg, const std::string& kind, std::int64_t bound,
                    std::ostream& err, Decode decode, Build build, Valid valid) {
  if (!cfg.cache_dir) {
    return build();
  }
  const std::filesystem::path path = cache_path(cfg, kind, bound);
  if (std::filesystem::exists(path)) {
    try {
      Table t = decode(read_file(path));
      if (valid(t)) {
        return t;
      }
      err << "warning: cache " << path.string() << " describes a different table; rebuilding\n";
    } catch (const CacheVersionError& e) {
      err << "warning: " << path.string() << ": " << e.what() << "; rebuilding\n";
    } catch (const CacheFormatError& e) {
      err << "warning: " << path.string() << ": " << e.what() << "; rebuilding\n";
    }
  }
  Table t = build();
  write_file(path, encode(t));
  return t;
}

bool odd_prime(std::int64_t n) { return n >= 3 && is_prime(static_cast<std::uint64_t>(n)); }

std::int64_t det4_bound_of(const RunConfig& cfg) { return cfg.det4_bound.value(); }

}  // namespace

std::string form_name(Form f) {
  switch (f) {
    case Form::chi10:
      return "chi10";
    case Form::chi12:
      return "chi12";
    case Form::zero:
      return "zero";
  }
  return "?";
}

Form parse_form(const std::string& s) {
  if (s == "chi10") return Form::chi10;
  if (s == "chi12") return Form::chi12;
  if (s == "zero") return Form::zero;
  throw UsageError("unknown form '" + s + "' (expected chi10, chi12 or zero)");
}

int form_weight(Form f) { return f == Form::chi12 ? 12 : 10; }

std::int64_t RunConfig::required_det4() const {
  if (command == "scan") {
    const std::int64_t n = n_max.value();
    return index == ScanIndex::n ? 4 * p * n : n;
  }
  if (command == "fj" || command == "theta-split") {
    return disc_bound.value();
  }
  return det4_bound.value_or(kDefaultCoeffsBound);
}

void RunConfig::resolve() {
  auto non_negative = [](const std::optional<std::int64_t>& v, const char* name) {
    if (v && *v < 0) {
      throw UsageError(std::string(name) + " must be non-negative");
    }
  };
  non_negative(disc_bound, "--disc-bound");
  non_negative(det4_bound, "--det4-bound");
  non_negative(n_max, "--n-max");

  if (command == "coeffs") {
    if (!det4_bound) {
      det4_bound = kDefaultCoeffsBound;
    }
    if (disc_bound && *disc_bound < *det4_bound) {
      throw UsageError("--disc-bound " + std::to_string(*disc_bound) +
                       " is below --det4-bound " + std::to_string(*det4_bound));
    }
    disc_bound = seed_bound(*det4_bound);
  } else if (command == "fj" || command == "theta-split") {
    if (m < 1 || m > std::numeric_limits<int>::max()) {
      throw UsageError("--m must be a positive index");
    }
    if (disc_bound && det4_bound && *disc_bound != *det4_bound) {
      throw UsageError("the Fourier-Jacobi bound equals the 4 det T bound; got --disc-bound " +
                       std::to_string(*disc_bound) + " and --det4-bound " +
                       std::to_string(*det4_bound));
    }
    disc_bound = disc_bound.value_or(det4_bound.value_or(kDefaultDiscBound));
    det4_bound = disc_bound;
  } else if (command == "scan") {
    if (p < 1) {
      throw UsageError("--p must be positive");
    }
    if (!(x_min > 0.0) || !(grid_ratio > 1.0)) {
      throw UsageError("need --x-min > 0 and --grid-ratio > 1");
    }
    if (x_max && *x_max < x_min) {
      throw UsageError("--x-max is below --x-min");
    }
    if (!n_max) {
      n_max = index == ScanIndex::n ? kDefaultScanN : 4 * p * kDefaultScanN;
    }
    const std::int64_t need = required_det4();
    if (det4_bound && *det4_bound < need) {
      throw UsageError("--det4-bound " + std::to_string(*det4_bound) + " is below the " +
                       std::to_string(need) + " needed by --n-max " + std::to_string(*n_max));
    }
    det4_bound = det4_bound.value_or(need);
    if (disc_bound && *disc_bound < *det4_bound) {
      throw UsageError("--disc-bound is below the required 4 det T bound " +
                       std::to_string(*det4_bound));
    }
    disc_bound = seed_bound(*det4_bound);
  } else if (command == "qrep") {
    if (count < 1 || search_bound < 1 || samples < 1) {
      throw UsageError("--count, --search-bound and --samples must be positive");
    }
    if (level < 1 || level % 2 == 0) {
      throw UsageError("--level must be odd and positive");
    }
    if (!matrix.empty()) {
      const auto n = static_cast<std::size_t>(std::lround(std::sqrt(matrix.size())));
      if (n * n != matrix.size() || n < 2) {
        throw UsageError("--matrix needs n*n entries with n >= 2");
      }
    }
  } else if (command == "gauss-verify") {
    if (p != 1 && !odd_prime(p)) {
      throw UsageError("--p must be an odd prime for gauss-verify");
    }
  }
}

void RunConfig::apply_json(const json& j) {
  if (!j.is_object()) {
    throw UsageError("config must be a JSON object");
  }
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "form") form = parse_form(v.get<std::string>());
      else if (key == "disc_bound") disc_bound = v.get<std::int64_t>();
      else if (key == "det4_bound") det4_bound = v.get<std::int64_t>();
      else if (key == "n_max") n_max = v.get<std::int64_t>();
      else if (key == "m") m = v.get<std::int64_t>();
      else if (key == "p") p = v.get<std::int64_t>();
      else if (key == "mu") mu = v.get<std::int64_t>();
      else if (key == "index") {
        const auto s = v.get<std::string>();
        if (s != "n" && s != "det4") throw UsageError("index must be n or det4");
        index = s == "n" ? ScanIndex::n : ScanIndex::det4;
      } else if (key == "x_min") x_min = v.get<double>();
      else if (key == "x_max") x_max = v.get<double>();
      else if (key == "grid_ratio") grid_ratio = v.get<double>();
      else if (key == "matrix") matrix = v.get<std::vector<std::int64_t>>();
      else if (key == "level") level = v.get<std::int64_t>();
      else if (key == "count") count = v.get<int>();
      else if (key == "search_bound") search_bound = v.get<std::int64_t>();
      else if (key == "samples") samples = v.get<int>();
      else if (key == "format") {
        const auto s = v.get<std::string>();
        if (s != "json" && s != "csv") throw UsageError("format must be json or csv");
        format = s == "json" ? OutputFormat::json : OutputFormat::csv;
      } else if (key == "cache_dir") cache_dir = v.get<std::string>();
      else if (key == "output") output = v.get<std::string>();
      else if (key == "seed") seed = v.get<std::uint64_t>();
      else if (key == "command") {
        // the subcommand on the command line decides
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

JacobiTable load_or_build_seed(const RunConfig& cfg, std::int64_t disc_bound, std::ostream& err) {
  return load_or_build<JacobiTable>(
      cfg, "jacobi", disc_bound, err, [](const std::string& b) { return decode_jacobi(b); },
      [&] { return build_seed(cfg.form, disc_bound); },
      [&](const JacobiTable& t) {
        return t.disc_bound() == disc_bound && t.index() == 1 &&
               t.weight() == form_weight(cfg.form);
      });
}

SiegelTable load_or_build_siegel(const RunConfig& cfg, std::int64_t det4_bound, std::ostream& err) {
  return load_or_build<SiegelTable>(
      cfg, "siegel", det4_bound, err, [](const std::string& b) { return decode_siegel(b); },
      [&] { return maass_lift(load_or_build_seed(cfg, seed_bound(det4_bound), err), det4_bound); },
      [&](const SiegelTable& t) {
        return t.det4_bound() == det4_bound && t.weight() == form_weight(cfg.form);
      });
}

HalfIntMatrix random_primitive_form(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::int64_t> diag(1, 9);
  std::uniform_int_distribution<std::int64_t> off(-4, 4);
  for (;;) {
    IntMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      a(i, i) = 2 * diag(rng);
      for (std::size_t j = i + 1; j < n; ++j) {
        a(i, j) = a(j, i) = off(rng);
      }
    }
    HalfIntMatrix t = HalfIntMatrix::from_doubled(a);
    if (t.is_positive_definite() && is_primitive(t)) {
      return t;
    }
  }
}

// ---------------------------------------------------------------------------

int cmd_coeffs(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SiegelTable f = load_or_build_siegel(cfg, det4_bound_of(cfg), err);
  std::ostringstream body;
  if (cfg.format == OutputFormat::csv) {
    body << "a,b,c,det4,coefficient\n";
    for (const auto& [k, v] : f.entries()) {
      body << k.a << ',' << k.b << ',' << k.c << ',' << k.det4() << ',' << rational_str(v) << '\n';
    }
  } else {
    json rows = json::array();
    for (const auto& [k, v] : f.entries()) {
      rows.push_back({{"a", k.a}, {"b", k.b}, {"c", k.c}, {"det4", k.det4()},
                      {"coefficient", rational_str(v)}});
    }
    body << render_json({{"form", form_name(cfg.form)},
                         {"weight", f.weight()},
                         {"det4_bound", f.det4_bound()},
                         {"convention", "T = [[a, b/2], [b/2, c]], GL2(Z)-reduced, 0 <= b <= a <= c"},
                         {"entries", rows}});
  }
  emit(cfg, out, body.str());
  return kExitOk;
}

namespace {

JacobiTable fj_table(const RunConfig& cfg, std::ostream& err) {
  const SiegelTable f = load_or_build_siegel(cfg, det4_bound_of(cfg), err);
  return fourier_jacobi(f, static_cast<int>(cfg.m));
}

}  // namespace

int cmd_fj(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const JacobiTable phi = fj_table(cfg, err);
  const bool prime_index = odd_prime(cfg.m);
  const std::vector<ComponentSupport> support =
      prime_index ? check_nonvanishing(phi) : first_nonzero(theta_split(phi));
  bool all_nonzero = true;
  for (const ComponentSupport& s : support) {
    all_nonzero = all_nonzero && s.first_nonzero_disc.has_value();
  }
  std::ostringstream body;
  if (cfg.format == OutputFormat::csv) {
    body << "residue,first_nonzero_disc\n";
    for (const ComponentSupport& s : support) {
      body << s.residue << ',';
      if (s.first_nonzero_disc) {
        body << *s.first_nonzero_disc;
      } else {
        body << "none";
      }
      body << '\n';
    }
  } else {
    json rows = json::array();
    for (const ComponentSupport& s : support) {
      rows.push_back({{"residue", s.residue}, {"first_nonzero_disc", optional_json(s.first_nonzero_disc)}});
    }
    body << render_json({{"form", form_name(cfg.form)},
                         {"index", cfg.m},
                         {"weight", phi.weight()},
                         {"disc_bound", phi.disc_bound()},
                         {"identically_zero", phi.is_zero()},
                         {"all_components_nonzero", all_nonzero},
                         {"components", rows}});
  }
  emit(cfg, out, body.str());
  return prime_index && !all_nonzero ? kExitFailed : kExitOk;
}

int cmd_theta_split(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const JacobiTable phi = fj_table(cfg, err);
  const std::vector<ThetaComponent> comps = theta_split(phi);
  const bool round_trip = theta_assemble(comps).same_coefficients(phi);
  std::ostringstream body;
  if (cfg.format == OutputFormat::csv) {
    body << "residue,disc,coefficient\n";
    for (const ThetaComponent& c : comps) {
      for (const auto& [d, v] : c.coeffs) {
        body << c.residue << ',' << d << ',' << rational_str(v) << '\n';
      }
    }
  } else {
    json rows = json::array();
    for (const ThetaComponent& c : comps) {
      json coeffs = json::array();
      for (const auto& [d, v] : c.coeffs) {
        coeffs.push_back({d, rational_str(v)});
      }
      rows.push_back({{"residue", c.residue},
                      {"first_nonzero_disc", optional_json(c.first_nonzero())},
                      {"coefficients", coeffs}});
    }
    body << render_json({{"form", form_name(cfg.form)},
                         {"index", cfg.m},
                         {"disc_bound", phi.disc_bound()},
                         {"round_trip", round_trip},
                         {"components", rows}});
  }
  emit(cfg, out, body.str());
  if (!round_trip) {
    err << "theta-split: reassembled components differ from phi_" << cfg.m << '\n';
    return kExitFailed;
  }
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SiegelTable f = load_or_build_siegel(cfg, det4_bound_of(cfg), err);
  const std::int64_t idx[] = {cfg.p};
  const SMmuSpec spec = SMmuSpec::make(HalfIntMatrix::diagonal(idx), {cfg.mu});
  const std::int64_t n_max = cfg.n_max.value();

  std::vector<SequenceEntry> seq;
  std::int64_t modulus = 1, residue = 0;
  if (cfg.index == ScanIndex::n) {
    for (const SMmuEntry& e : enumerate_smmu(spec, cfg.required_det4())) {
      const std::int64_t n = e.t.diag(0);
      if (n >= 1 && n <= n_max) {
        seq.push_back({n, f.lookup(e.t)});
      }
    }
    std::sort(seq.begin(), seq.end(), [](const auto& x, const auto& y) { return x.n < y.n; });
  } else {
    seq = smmu_sequence(f, spec, n_max);
    modulus = 4 * cfg.p;
    residue = -cfg.mu * cfg.mu;
  }
  const NormalizedSequence ns =
      normalize(seq, f.weight(), 1, modulus, residue, std::optional<std::int64_t>(n_max));
  const std::vector<double> grid =
      geometric_grid(cfg.x_min, cfg.grid_ratio,
                     cfg.x_max.value_or(std::numeric_limits<double>::infinity()), n_max);
  if (grid.empty()) {
    throw UsageError("the x-grid is empty; window_end(x_min) must stay within n_max = " +
                     std::to_string(n_max));
  }
  const std::vector<WindowReport> reports = scan_windows(ns, grid);
  const ScanSummary summary = summarize(ns, reports);
  const auto first = first_sign_change(ns);

  std::ostringstream body;
  if (cfg.format == OutputFormat::csv) {
    body << "x,window_end,sign_change,witness_n1,witness_n2,pos,neg,zero\n";
    body.precision(17);
    for (const WindowReport& r : reports) {
      body << r.x << ',' << r.window_end << ',' << (r.sign_change ? "true" : "false") << ',';
      if (r.witness) {
        body << r.witness->first << ',' << r.witness->second;
      } else {
        body << ',';
      }
      body << ',' << r.positive << ',' << r.negative << ',' << r.zero << '\n';
    }
  } else {
    json rows = json::array();
    for (const WindowReport& r : reports) {
      rows.push_back({{"x", r.x},
                      {"window_end", r.window_end},
                      {"sign_change", r.sign_change},
                      {"witness_n1", r.witness ? json(r.witness->first) : json(nullptr)},
                      {"witness_n2", r.witness ? json(r.witness->second) : json(nullptr)},
                      {"pos", r.positive},
                      {"neg", r.negative},
                      {"zero", r.zero}});
    }
    json first_json = first ? json::array({first->first, first->second}) : json(nullptr);
    body << render_json(
        {{"form", form_name(cfg.form)},
         {"p", cfg.p},
         {"mu", cfg.mu},
         {"index", cfg.index == ScanIndex::n ? "n" : "det4"},
         {"coverage", n_max},
         {"first_sign_change", first_json},
         {"summary",
          {{"windows", summary.windows},
           {"false_windows", summary.false_windows},
           {"last_false_x", optional_json(summary.last_false_x)},
           {"windows_after_first_change", summary.windows_after_first_change},
           {"false_after_first_change", summary.false_after_first_change},
           {"true_suffix_start_x", summary.true_suffix_start < reports.size()
                                       ? json(reports[summary.true_suffix_start].x)
                                       : json(nullptr)}}},
         {"windows", rows}});
  }
  emit(cfg, out, body.str());
  return reports.back().sign_change ? kExitOk : kExitFailed;
}

namespace {

struct QrepTally {
  std::int64_t checks = 0;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures.size() < 20) {
      failures.push_back(what);
    }
  }
};

std::string describe(const HalfIntMatrix& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      s += std::to_string(t.twice(i, j)) + (j + 1 < t.size() ? "," : "");
    }
    s += i + 1 < t.size() ? ";" : "]";
  }
  return s;
}

json check_form(const HalfIntMatrix& t, std::int64_t level, int count, std::int64_t bound,
                QrepTally& tally) {
  const QuadForm q = QuadForm::from_half_integral(t);
  const std::string tag = describe(t);
  json rec = {{"doubled_gram", tag}, {"level", level}};

  const std::vector<std::int64_t> x = represent_coprime(q, level);
  const Integer value = q(x);
  Integer g;
  mpz_gcd_ui(g.get_mpz_t(), value.get_mpz_t(), static_cast<unsigned long>(level));
  tally.expect(g == 1, tag + ": gcd(Q(x), N) != 1");
  rec["coprime"] = {{"x", x}, {"value", value.get_str()}};

  json primes = json::array();
  std::uint64_t prev = 0;
  for (const PrimeRepresentation& r : represent_prime(q, count, bound)) {
    tally.expect(r.p % 2 == 1 && is_prime(r.p), tag + ": uncertified prime");
    tally.expect(q(r.x) == Integer(static_cast<unsigned long>(r.p)), tag + ": Q(x) != p");
    tally.expect(r.p > prev && r.p <= static_cast<std::uint64_t>(bound), tag + ": prime order");
    prev = r.p;
    primes.push_back({{"p", r.p}, {"x", r.x}});

    const IntMatrix u = sl_completion(r.x);
    tally.expect(u.determinant() == 1 && u.col(u.cols() - 1) == r.x,
                 tag + ": sl_completion contract");
  }
  rec["primes"] = primes;

  const Rational det = t.determinant();
  const std::int64_t cont = content(t);
  for (const PrimePivot& pv : pivot_to_prime(t, count, bound)) {
    const std::size_t n = t.size();
    tally.expect(pv.transform.determinant() == 1 && pv.pivoted == act(t, pv.transform) &&
                     pv.pivoted.determinant() == det && content(pv.pivoted) == cont &&
                     pv.pivoted.diag(n - 1) == static_cast<std::int64_t>(pv.p),
                 tag + ": pivot_to_prime contract");
  }
  return rec;
}

}  // namespace

int cmd_qrep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  (void)err;
  QrepTally tally;
  json body;
  if (!cfg.matrix.empty()) {
    const auto n = static_cast<std::size_t>(std::lround(std::sqrt(cfg.matrix.size())));
    IntMatrix a(n, n);
    for (std::size_t i = 0; i < n * n; ++i) {
      a(i / n, i % n) = cfg.matrix[i];
    }
    const HalfIntMatrix t = [&] {
      try {
        return HalfIntMatrix::from_doubled(a);
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--matrix: ") + e.what());
      }
    }();
    if (!t.is_positive_definite()) {
      throw UsageError("--matrix must be positive definite");
    }
    body = check_form(t, cfg.level, cfg.count, cfg.search_bound, tally);
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::int64_t> level(0, 4999);
    json forms = json::array();
    for (int i = 0; i < cfg.samples; ++i) {
      const std::size_t n = i % 2 == 0 ? 2 : 3;
      const HalfIntMatrix t = random_primitive_form(rng, n);
      const std::int64_t big_n = 2 * level(rng) + 1;
      forms.push_back(check_form(t, big_n, cfg.count, cfg.search_bound, tally));
    }
    body = {{"seed", cfg.seed}, {"samples", cfg.samples}, {"forms", forms}};
  }
  body["checks"] = tally.checks;
  body["failures"] = tally.failures;
  body["pass"] = tally.failures.empty();
  if (cfg.format == OutputFormat::csv) {
    std::ostringstream csv;
    csv << "checks,failures,pass\n"
        << tally.checks << ',' << tally.failures.size() << ','
        << (tally.failures.empty() ? "true" : "false") << '\n';
    emit(cfg, out, csv.str());
  } else {
    emit(cfg, out, render_json(body));
  }
  return tally.failures.empty() ? kExitOk : kExitFailed;
}

namespace {

struct Identity {
  Identity(std::string n, double tol) : name(std::move(n)), tolerance(tol) {}

  std::string name;
  double tolerance;
  double max_deviation = 0.0;
  std::int64_t cases = 0;
  json sweep;
  bool exact_failure = false;

  void observe(double dev) {
    max_deviation = std::max(max_deviation, dev);
    ++cases;
  }
  bool pass() const { return !exact_failure && cases > 0 && max_deviation < tolerance; }
  json report() const {
    return {{"identity", name}, {"cases", cases},       {"max_abs_deviation", max_deviation},
            {"tolerance", tolerance}, {"sweep", sweep}, {"pass", pass()}};
  }
};

std::vector<std::int64_t> primes_or(std::int64_t p, std::vector<std::int64_t> defaults) {
  return p == 1 ? defaults : std::vector<std::int64_t>{p};
}

}  // namespace

int cmd_gauss_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  (void)err;
  const std::vector<std::int64_t> lm = {4, 8, 12};
  std::vector<Identity> ids;

  {
    Identity id{"gauss_sum_closed_form", 1e-9};
    const auto ps = primes_or(cfg.p, {3, 5, 7});
    for (std::int64_t p : ps) {
      for (std::int64_t m = 1; m <= 4 * p; ++m) {
        if (m % p == 0) continue;
        for (std::int64_t lam = 0; lam < 2 * p; ++lam) {
          for (std::int64_t beta = 0; beta < 2 * p; ++beta) {
            id.observe(std::abs(gauss_sum_closed(p, m, lam, beta) - gauss_sum_brute(p, m, lam, beta)));
          }
        }
      }
    }
    id.sweep = {{"p", ps}, {"m", "1..4p, p does not divide m"}, {"lambda_beta", "all mod 2p"}};
    ids.push_back(id);
  }
  {
    Identity id{"gauss_sum_anchor", 1e-12};
    const Complex want = std::sqrt(3.0) * Complex(1.0, 1.0);
    id.observe(std::abs(gauss_sum_brute(3, 1, 0, 0) - want));
    id.observe(std::abs(gauss_sum_closed(3, 1, 0, 0) - want));
    id.sweep = {{"p", 3}, {"m", 1}, {"lambda", 0}, {"beta", 0}};
    ids.push_back(id);
  }
  {
    Identity id{"lambda_sum_closed_form", 1e-9};
    const auto ps = primes_or(cfg.p, {3, 5});
    for (std::int64_t p : ps) {
      for (std::int64_t l : lm) {
        if ((l - 1) % p == 0) continue;
        for (std::int64_t m : lm) {
          for (std::int64_t a = 0; a < 2 * p; ++a) {
            for (std::int64_t b = 0; b < 2 * p; ++b) {
              id.observe(std::abs(lambda_sum_closed(p, l, m, a, b) - lambda_sum_brute(p, l, m, a, b)));
            }
          }
        }
      }
    }
    id.sweep = {{"p", ps}, {"l", lm}, {"m", lm}, {"condition", "p does not divide l - 1"}};
    ids.push_back(id);
  }
  json kappas = json::array();
  {
    Identity id{"rho_product", 1e-8};
    const auto ps = primes_or(cfg.p, {3, 5});
    for (std::int64_t p : ps) {
      const KappaEstimate k = extract_kappa(p);
      kappas.push_back({{"p", p}, {"kappa", {k.kappa.real(), k.kappa.imag()}}, {"residual", k.residual}});
      for (std::int64_t l : lm) {
        for (std::int64_t m : lm) {
          if ((l - 1) % p == 0 || m % p == 0) continue;
          for (std::int64_t a = 0; a < 2 * p; ++a) {
            for (std::int64_t b = 0; b < 2 * p; ++b) {
              const std::int64_t al[] = {a}, be[] = {b};
              id.observe(std::abs(rho_product_closed(p, 1, l, m, al, be, k.kappa) -
                                  rho_product_brute(p, 1, l, m, al, be, k.kappa)));
            }
          }
        }
      }
    }
    id.sweep = {{"p", ps}, {"g", 1}, {"l", lm}, {"m", lm}, {"condition", "p does not divide (l - 1) m"}};
    ids.push_back(id);
  }
  {
    Identity id{"theta_transform", 1e-8};
    const auto ps = primes_or(cfg.p, {3, 5});
    for (std::int64_t p : ps) {
      const Complex kappa = extract_kappa(p).kappa;
      Word w{{{Generator::M1, 1}, {Generator::M2, 4}, {Generator::M1, 1}, {Generator::M2, 8},
              {Generator::M1, 1}}};
      id.observe(check_theta_transform(p, w, kappa).max_deviation);
      id.observe(check_theta_transform(p, Word{{{Generator::M1, 1}}}, kappa).max_deviation);
    }
    id.sweep = {{"p", ps}, {"words", {"M1", "M1M2^4M1M2^8M1"}}};
    ids.push_back(id);
  }
  {
    Identity id{"criterion_exact", 0.5};
    const auto ps = primes_or(cfg.p, {3, 5, 7});
    const std::vector<std::int64_t> lms = {4, 8, 12, 16, 20, 24};
    for (std::int64_t p : ps) {
      for (std::int64_t l : lms) {
        for (std::int64_t m : lms) {
          if ((l - 1) % p == 0 || m % p == 0) continue;
          const CriterionParams params{p, l, m, 1};
          for (std::int64_t a = 0; a < 2 * p; ++a) {
            for (std::int64_t b = 0; b < 2 * p; ++b) {
              const GaussInt v = criterion_value(params, a, b);
              const bool ok = v.im == 0 && (v.re == 2 || v.re == -2);
              id.exact_failure = id.exact_failure || !ok;
              id.observe(ok ? 0.0 : 1.0);
            }
          }
        }
      }
    }
    id.sweep = {{"p", ps}, {"l", lms}, {"m", lms}, {"values", "exactly +-2"}};
    ids.push_back(id);
  }
  json params = json::array();
  {
    Identity id{"criterion_params", 0.5};
    const std::pair<std::int64_t, std::int64_t> pn[] = {{3, 1}, {5, 1}, {7, 1}, {3, 5}, {5, 7}, {7, 3}};
    for (const auto& [p, n] : pn) {
      if (cfg.p != 1 && p != cfg.p) continue;
      const CriterionParams c = find_criterion_params(p, n);
      const bool ok = in_gamma0(criterion_word_matrix(c.l, c.m, 1), n) &&
                      in_gamma0(criterion_word_matrix(c.l, c.m, 2), n);
      id.exact_failure = id.exact_failure || !ok;
      id.observe(ok ? 0.0 : 1.0);
      params.push_back({{"p", p}, {"N", n}, {"l", c.l}, {"m", c.m}, {"in_gamma0", ok}});
    }
    id.sweep = {{"pN", params}};
    ids.push_back(id);
  }

  bool pass = true;
  json reports = json::array();
  for (const Identity& id : ids) {
    pass = pass && id.pass();
    reports.push_back(id.report());
  }
  if (cfg.format == OutputFormat::csv) {
    std::ostringstream csv;
    csv.precision(6);
    csv << "identity,cases,max_abs_deviation,tolerance,pass\n";
    for (const Identity& id : ids) {
      csv << id.name << ',' << id.cases << ',' << id.max_deviation << ',' << id.tolerance << ','
          << (id.pass() ? "true" : "false") << '\n';
    }
    emit(cfg, out, csv.str());
  } else {
    emit(cfg, out, render_json({{"kappa", kappas}, {"identities", reports}, {"pass", pass}}));
  }
  return pass ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Fourier coefficients of degree-2 Siegel cusp forms, their Jacobi "
               "decompositions, Gauss-sum checks and sign-change scans."};
  app.require_subcommand(1);
  app.fallthrough();

  std::string form, index, format;
  std::int64_t disc_bound = 0, det4_bound = 0, n_max = 0, m = 0, p = 0, mu = 0, level = 0,
               search_bound = 0;
  double x_min = 0, x_max = 0, grid_ratio = 0;
  int count = 0, samples = 0;
  std::uint64_t seed = 0;
  std::string cache_dir, output, config;
  std::vector<std::int64_t> matrix;

  auto* o_form = app.add_option("--form", form, "chi10 | chi12 | zero");
  auto* o_disc = app.add_option("--disc-bound", disc_bound, "Jacobi discriminant bound");
  auto* o_det4 = app.add_option("--det4-bound", det4_bound, "bound on 4 det T");
  auto* o_nmax = app.add_option("--n-max", n_max, "scan coverage in the chosen index");
  auto* o_m = app.add_option("--m", m, "Fourier-Jacobi index");
  auto* o_p = app.add_option("--p", p, "index matrix M = (p) for scan; prime for gauss-verify");
  auto* o_mu = app.add_option("--mu", mu, "shift of S_{M,mu}");
  auto* o_index = app.add_option("--index", index, "scan index: n (top-left entry) or det4");
  auto* o_xmin = app.add_option("--x-min", x_min, "first grid point");
  auto* o_xmax = app.add_option("--x-max", x_max, "last grid point");
  auto* o_ratio = app.add_option("--grid-ratio", grid_ratio, "geometric grid ratio");
  auto* o_matrix =
      app.add_option("--matrix", matrix, "doubled Gram matrix, row-major, comma separated")
          ->delimiter(',');
  auto* o_level = app.add_option("--level", level, "odd N for qrep");
  auto* o_count = app.add_option("--count", count, "primes per form for qrep");
  auto* o_search = app.add_option("--search-bound", search_bound, "prime search bound for qrep");
  auto* o_samples = app.add_option("--samples", samples, "random forms for qrep");
  auto* o_format = app.add_option("--format", format, "json | csv");
  auto* o_cache = app.add_option("--cache-dir", cache_dir, "table cache directory");
  auto* o_output = app.add_option("--output", output, "write the report here instead of stdout");
  auto* o_seed = app.add_option("--seed", seed, "seed for randomized sweeps");
  app.add_option("--config", config, "JSON file with defaults; flags override it");

  const char* names[][2] = {{"coeffs", "reduced-T coefficient listing"},
                            {"fj", "Fourier-Jacobi coefficient and first nonzero D per component"},
                            {"theta-split", "theta components of a Fourier-Jacobi coefficient"},
                            {"scan", "sign changes in windows (x, x + x^(3/5)]"},
                            {"qrep", "quadratic-form representation checks"},
                            {"gauss-verify", "Gauss-sum and multiplier identities"}};
  for (const auto& n : names) {
    app.add_subcommand(n[0], n[1]);
  }

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig cfg;
    cfg.command = app.get_subcommands().front()->get_name();
    if (!config.empty()) {
      std::ifstream f(config);
      if (!f) {
        throw UsageError("cannot read config " + config);
      }
      json j;
      try {
        j = json::parse(f);
      } catch (const json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
      }
      cfg.apply_json(j);
    }
    auto set = [](CLI::Option* o) { return o->count() > 0; };
    if (set(o_form)) cfg.form = parse_form(form);
    if (set(o_disc)) cfg.disc_bound = disc_bound;
    if (set(o_det4)) cfg.det4_bound = det4_bound;
    if (set(o_nmax)) cfg.n_max = n_max;
    if (set(o_m)) cfg.m = m;
    if (set(o_p)) cfg.p = p;
    if (set(o_mu)) cfg.mu = mu;
    if (set(o_index)) cfg.apply_json({{"index", index}});
    if (set(o_xmin)) cfg.x_min = x_min;
    if (set(o_xmax)) cfg.x_max = x_max;
    if (set(o_ratio)) cfg.grid_ratio = grid_ratio;
    if (set(o_matrix)) cfg.matrix = matrix;
    if (set(o_level)) cfg.level = level;
    if (set(o_count)) cfg.count = count;
    if (set(o_search)) cfg.search_bound = search_bound;
    if (set(o_samples)) cfg.samples = samples;
    if (set(o_format)) cfg.apply_json({{"format", format}});
    if (set(o_cache)) cfg.cache_dir = cache_dir;
    if (set(o_output)) cfg.output = output;
    if (set(o_seed)) cfg.seed = seed;
    cfg.resolve();

    if (cfg.command == "coeffs") return cmd_coeffs(cfg, out, err);
    if (cfg.command == "fj") return cmd_fj(cfg, out, err);
    if (cfg.command == "theta-split") return cmd_theta_split(cfg, out, err);
    if (cfg.command == "scan") return cmd_scan(cfg, out, err);
    if (cfg.command == "qrep") return cmd_qrep(cfg, out, err);
    return cmd_gauss_verify(cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailed;
  }
}

}  // namespace siegelfc::cli
