#pragma once

// Line-oriented run configuration: "[section]" headers, "key = value" lines, "#" comments.
// Exact scalars (lattice vectors, group generators, ledger epsilons) are kept as the strings given.

#include <array>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kummer/alemodel.hpp"
#include "kummer/cohomled.hpp"

namespace kummer {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& all_stages() {
  static const std::vector<std::string> s{"classify", "eh", "asd", "gluing", "masolver", "forms", "bubbling", "ledger"};
  return s;
}

/// Default thresholds; every key may be overridden in [tolerances].
const std::map<std::string, double>& default_tolerances();

struct ExpectedPoint {
  std::string point;  // "z, w"
  std::string group;  // "Z4", "BD8", ...
  bool operator==(const ExpectedPoint&) const = default;
};

struct RunConfig {
  std::string name = "default";
  /// Four lattice vectors in C^2, each "z, w".
  std::array<std::string, 4> lattice{"1, 0", "i, 0", "0, 1", "0, i"};
  /// Each "a, b; c, d".
  std::vector<std::string> generators{"-1, 0; 0, -1"};

  double a = 1.0;
  int grid_size = 2048;
  /// 0 means the default range 1e-4 a^2 .. 1e4 a^2.
  double s_min = 0.0, s_max = 0.0;

  std::vector<double> eps_list{0.1, 0.05, 0.02, 0.01};
  std::vector<double> ma_eps_list{0.05, 0.02, 0.01, 0.005};
  std::vector<double> deltas{-1.0, -0.5};
  std::vector<std::string> ledger_eps{"1/2", "1/4", "1/10"};
  /// Empty: integral of omega_0^2 over the quotient torus.
  std::string vol_T;

  std::map<std::string, double> tolerances = default_tolerances();

  std::string out_dir = "out";
  std::vector<std::string> stages = all_stages();
  unsigned seed = 20240607;

  std::optional<int> expect_points, expect_d_gamma, expect_count;
  /// "A1 16": ADE label and multiplicity.
  std::vector<std::string> expect_types;
  std::vector<ExpectedPoint> expect_point;

  bool operator==(const RunConfig&) const = default;

  LatticeGroupPair pair() const;
  std::vector<Rational> ledger_eps_values() const;
  RadialGrid model_grid() const;
  double tolerance(const std::string& key) const;
  bool stage_enabled(const std::string& stage) const;
};

/// Throws ConfigError naming the source and line.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

/// Checks invariants: positive tolerances, decreasing non-empty epsilon lists, known stages.
void validate_config(const RunConfig& config);

/// "0.1, 0.05" -> {0.1, 0.05}.
std::vector<double> parse_double_list(const std::string& text);
std::vector<std::string> split_list(const std::string& text, char sep = ',');

}  // namespace kummer
