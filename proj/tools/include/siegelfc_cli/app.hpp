#pragma once

// Command surface of the siegelfc tool. Commands are plain functions over a
// RunConfig so that tests can drive them without spawning processes.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "siegelfc/halfint.hpp"
#include "siegelfc/jacobi.hpp"
#include "siegelfc/siegel.hpp"

namespace siegelfc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

/// Raised for inconsistent or missing configuration; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Form { chi10, chi12, zero };
enum class OutputFormat { json, csv };
enum class ScanIndex { n, det4 };

struct RunConfig {
  std::string command;
  Form form = Form::chi10;
  std::optional<std::int64_t> disc_bound;
  std::optional<std::int64_t> det4_bound;
  std::optional<std::int64_t> n_max;
  std::int64_t m = 1;              // Fourier-Jacobi index for fj / theta-split
  std::int64_t p = 1;              // index matrix M = (p)
  std::int64_t mu = 0;
  ScanIndex index = ScanIndex::n;
  double x_min = 50.0;
  std::optional<double> x_max;
  double grid_ratio = 1.25;
  std::vector<std::int64_t> matrix;  // doubled Gram matrix, row-major, for qrep
  std::int64_t level = 105;          // N for qrep
  int count = 5;
  std::int64_t search_bound = 500;
  int samples = 200;
  OutputFormat format = OutputFormat::json;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> output;
  std::uint64_t seed = 20240601;

  /// Fills unset bounds from the command and checks mutual consistency;
  /// throws UsageError.
  void resolve();

  /// 4 det T reach needed by the scan or coefficient listing.
  std::int64_t required_det4() const;

  /// Overrides fields present in a JSON object (keys as the long flag names
  /// with '-' replaced by '_').
  void apply_json(const nlohmann::json& j);
};

std::string form_name(Form f);
Form parse_form(const std::string& s);
int form_weight(Form f);

/// Index-1 seed of the chosen form (cached when cache_dir is set).
JacobiTable load_or_build_seed(const RunConfig& cfg, std::int64_t disc_bound, std::ostream& err);
/// Maass lift of the seed (cached when cache_dir is set). A cache file with a
/// foreign format version is rebuilt after a warning on `err`.
SiegelTable load_or_build_siegel(const RunConfig& cfg, std::int64_t det4_bound, std::ostream& err);

/// Random positive-definite primitive doubled Gram matrix of size n.
HalfIntMatrix random_primitive_form(std::mt19937_64& rng, std::size_t n);

int cmd_coeffs(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_fj(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_theta_split(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_qrep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_gauss_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (argv[0] is the program name) and runs the chosen command.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace siegelfc::cli
