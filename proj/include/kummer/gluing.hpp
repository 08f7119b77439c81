#pragma once

// Radial gluing of the rescaled Eguchi-Hanson potential into the flat potential s/2.

#include <stdexcept>
#include <vector>

#include "kummer/alemodel.hpp"
#include "kummer/report.hpp"

namespace kummer {

inline constexpr double kCutoffInner = 1.1;
inline constexpr double kCutoffOuter = 1.9;

/// rho(u) = 1 for u <= 1.1, 0 for u >= 1.9, quintic smoothstep in between (C^2 joins).
template <typename T>
T cutoff_profile(const T& u) {
  if (u <= T(kCutoffInner)) return T(1.0);
  if (u >= T(kCutoffOuter)) return T(0.0);
  const T tau = (u - T(kCutoffInner)) / T(kCutoffOuter - kCutoffInner);
  // 1 - (10 tau^3 - 15 tau^4 + 6 tau^5), factored so it stays in [0, 1].
  const T m = T(1.0) - tau;
  return m * m * m * (T(1.0) + T(3.0) * tau + T(6.0) * tau * tau);
}

/// chi_t(r) = rho(r / t).
double cutoff(double t, double r);

/// chi_{sqrt(eps)} as a function of s = r^2.
template <typename T>
T glue_cutoff(const T& s, double eps) {
  using std::sqrt;
  return cutoff_profile(sqrt(s / T(eps)));
}

struct GluingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// sigma_eps(s) = clamp(sqrt(s), eps, 1).
double weight(double s, double eps);

struct GluedMetric {
  double epsilon = 0.0;
  ALEModel model;
  double s_outer = 1.0;
  RadialGrid grid;
  RadialProfile glued_potential;
  RadialProfile cutoff_record;
  RadialProfile f_profile;

  /// Kahler scale of the rescaled model: eps^2 phi_a(s / eps^2) = phi at c = eps^2 a^2.
  double inner_scale() const { return epsilon * epsilon * model.c(); }

  /// Phi_eps - s/2.
  template <typename T>
  T correction(const T& s) const {
    return glue_cutoff(s, epsilon) * eh_phi_minus_flat(s, inner_scale());
  }
  template <typename T>
  T potential(const T& s) const {
    return s / T(2.0) + correction(s);
  }

  /// P = s Phi'(s), P_t = dP/dt (t = ln s) and their offsets E = P - s/2, E_t = P_t - s/2.
  struct Flux {
    double p = 0, p_t = 0, e = 0, e_t = 0;
  };
  /// Each piece is assembled from terms without cancellation, both in the core and on the annulus.
  Flux flux_data(double s) const;
  double flux(double s) const { return flux_data(s).p; }
  double flux_t(double s) const { return flux_data(s).p_t; }
  /// e^{f_eps} - 1, exactly zero off the transition region of the cutoff.
  double volume_defect(double s) const;
  bool in_transition(double s) const;

  PotentialDerivatives kahler_potential(const Eigen::Vector4d& x) const;
};

/// Grid: n log nodes on [1e-4 a^2 eps^2, s_outer]. Throws GluingError when the metric degenerates.
GluedMetric build_glued_metric(const ALEModel& model, double epsilon, int n = 2048, double s_outer = 1.0);

/// C^k_delta norm of a radial function sampled on the metric grid: max over j <= k and nodes of
/// sigma^{-delta + j} |nabla^j u|_{g_eps}. Supports k <= 2.
double weighted_ck_norm(const RadialProfile& u, const GluedMetric& metric, int k, double delta);

/// sup over s in [eps, 4 eps] of |nabla_0^k (omega_eps - omega_0)| in the flat metric, k <= 1.
double annulus_discrepancy(const ALEModel& model, double epsilon, int k, int samples = 400);

/// Log-log slope of annulus_discrepancy over a decreasing epsilon list (at least 4 values).
SweepReport decay_sweep(const ALEModel& model, const std::vector<double>& eps_list, int k);

}  // namespace kummer
