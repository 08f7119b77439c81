#pragma once

#include <string>
#include <vector>

namespace kummer {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Standard error of the slope (0 for two points).
  double stderr_slope = 0.0;
  int points = 0;
};

/// Least-squares fit of log y against log x over entries with x, y > 0.
/// Throws std::invalid_argument with fewer than two usable points.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct SweepRow {
  double epsilon = 0.0;
  double value = 0.0;
};

struct SweepReport {
  std::string stage;
  std::vector<SweepRow> rows;
  SlopeFit fit;
  bool fitted = false;
  bool exact_vanishing = false;
  std::vector<std::string> notes;

  std::vector<double> epsilons() const;
  std::vector<double> values() const;
};

/// Fill fit / exact_vanishing from the rows.
void finalize_sweep(SweepReport& report);

/// Decreasing and of the given minimum length; throws std::invalid_argument otherwise.
void require_decreasing(const std::vector<double>& eps, std::size_t min_size);

}  // namespace kummer
