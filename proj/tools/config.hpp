#pragma once

// Run configuration shared by the command-line subcommands. A single JSON
// document; command-line flags are merged into it before validation.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "whittaker/bounds.hpp"

namespace wh::cli {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Exit codes of the command-line tool.
enum Exit : int { kPass = 0, kCheckFailed = 1, kConfigError = 2, kChamber = 3, kNotConverged = 4 };

struct RunConfig {
  int n = 2;
  std::vector<cd> v;
  std::vector<int> sigma;
  std::vector<double> m;
  /// "spherical" or "k_finite"; k_finite reads weights (n vectors) and powers.
  std::string vector = "spherical";
  std::vector<std::vector<double>> weights;
  std::vector<int> powers;
  /// Optional X^l applied to the vector.
  std::vector<int> lie;

  std::optional<double> rel_tol, abs_tol;
  std::optional<int> base_panels, max_depth;
  std::optional<long long> max_evals;

  std::vector<std::vector<double>> points;
  std::vector<std::vector<double>> angles;
  GridSpec grid;
  std::vector<std::vector<int>> l;
  std::vector<double> s;
  std::optional<double> epsilon;
  std::vector<double> ray;
  double t = 1.0;
  int pairs = 20;
  unsigned seed = 20240229;
  std::string output;
  int threads = 1;

  /// Keys present in the source document, for suites with defaults.
  json source;

  bool has(const char* key) const { return source.contains(key); }
  SpectralParam param() const;
  WhittakerCharacter character() const;
  BoundaryFunction boundary_function() const;
  /// Jacquet defaults for n with the configured overrides applied.
  QuadratureSpec spec() const;
  QuadratureSpec spec_from(QuadratureSpec base) const;
};

/// Validates the document and fills defaults. Throws ConfigError. The
/// thread count comes from WHITTAKER_THREADS when set.
RunConfig parse_config(const json& doc);

/// O(n) element from the rotation angles in the planes (0,1), (0,2), ...,
/// (n-2,n-1), in the order used by sample_K.
Mat k_from_angles(int n, const std::vector<double>& angles);

}  // namespace wh::cli
