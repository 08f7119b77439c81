#pragma once

// Radial complex Monge-Ampere problem on the glued model: find psi with
// (omega_eps + i ddbar psi)^2 = W omega_0^2, W constant.
//
// Everything is written in t = ln s with the flux P = s Phi'(s). The volume ratio against the flat
// form is 4 P P_t / s^2 = 2 (P^2)_t / s^2, so for delta = s psi'(s) = psi_t the equation has the
// first integral 2 P delta + delta^2 = G(t).

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kummer/gluing.hpp"
#include "kummer/report.hpp"

namespace kummer {

struct MASolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultMATolerance = 1e-10;
inline constexpr int kDefaultMAMaxIter = 50;

/// Composite rule on a log-uniform grid: cell integrals of the local cubic through four nodes.
/// cumulative_integral(v)[i] = integral of v dt from t_0 to t_i.
Eigen::VectorXd cumulative_integral(const Eigen::VectorXd& v, double h);

/// P^2 - s^2/4 for the glued flux; exact constants off the transition region.
double flux_square_offset(const GluedMetric& metric, double s);

/// The omega_eps^2 density in t, e^f s^2, at the grid nodes.
Eigen::VectorXd volume_density(const GluedMetric& metric);

/// Mean in the omega_eps^2 measure over the model domain.
double volume_mean(const GluedMetric& metric, const Eigen::VectorXd& u);

/// Discrete L u = 4 (P u_t)_t / (s^2 e^f) with zero flux at both ends (conservative three-point stencil).
RadialProfile linearized_operator(const GluedMetric& metric, const RadialProfile& u);

/// Weighted inner product matching linearized_operator: sum of u v e^f s^2 with trapezoid weights.
double volume_inner(const GluedMetric& metric, const RadialProfile& u, const RadialProfile& v);

/// Solves L psi = rhs after projecting rhs to mean zero in the omega_eps^2 measure.
/// The result is mean zero in the same measure. Throws MASolverError on a degenerate metric.
RadialProfile linearized_solve(const GluedMetric& metric, const RadialProfile& rhs);

struct MASolution {
  RadialProfile psi;
  /// s psi'(s) at the nodes.
  Eigen::VectorXd delta;
  double volume_constant = 1.0;
  int iterations = 0;
  std::vector<double> contraction_history;
  double final_residual = 0.0;
  /// (k, delta) -> C^k_delta norm of psi.
  std::map<std::pair<int, double>, double> weighted_norms;

  double max_contraction_ratio() const;
};

/// Picard iteration 2 P delta_{n+1} = G - delta_n^2 from psi_0 = 0, gauge psi(s_outer) = 0.
/// Contraction ratios are measured in C^0_{norm_delta}. Stops when the C^0 change drops below tol.
MASolution picard_solve(const GluedMetric& metric, double tol = kDefaultMATolerance,
                        int max_iter = kDefaultMAMaxIter, double norm_delta = -1.0);

/// Cell-averaged volume ratio 4 [P~^2] / [s^2] of the corrected metric, one entry per cell.
Eigen::VectorXd corrected_volume_ratio(const GluedMetric& metric, const MASolution& sol);

/// d/ds and d^2/ds^2 of psi at node i, from delta and the pointwise equation for delta_t.
struct CorrectionSlopes {
  double d1 = 0.0, d2 = 0.0;
};
CorrectionSlopes correction_slopes(const GluedMetric& metric, const MASolution& sol, int i);

struct MASweepRow {
  double epsilon = 0.0;
  int iterations = 0;
  double max_contraction_ratio = 0.0;
  double final_residual = 0.0;
  double norm = 0.0;
};

struct MASweep {
  double delta = 0.0;
  std::vector<MASweepRow> rows;
  SweepReport report;
};

/// ||psi_eps||_{C^0_delta} over a decreasing epsilon list and its log-log slope.
MASweep scaling_exponent_sweep(const ALEModel& model, const std::vector<double>& eps_list, double delta,
                               int n = 2048);

}  // namespace kummer
