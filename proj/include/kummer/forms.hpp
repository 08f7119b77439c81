#pragma once

// Glued closed (1,1)-forms on the radial model: the bubble form built from the anti-self-dual
// potential and the torus form extending a constant anti-self-dual form across the annulus.
// Both are i ddbar of F(x) = A(s) q(x) with a cutoff inside A.

#include <string>
#include <vector>

#include "kummer/gluing.hpp"
#include "kummer/masolver.hpp"

namespace kummer {

enum class FormKind { bubble, torus_asd };
enum class BubblingMode { torus_side, bubble_side };

const char* to_string(FormKind k);
const char* to_string(BubblingMode m);

struct GluedForm {
  FormKind kind = FormKind::bubble;
  double epsilon = 0.0;
  /// 1..3 for the torus kind.
  int alpha = 0;
  /// Calibration constant C of the anti-self-dual potential (bubble kind).
  double normalization = 0.0;
  /// Inner coefficient on the metric grid: rescaled psi (bubble) or 2 phi'(s) (torus).
  RadialProfile inner_profile;
  /// The cutoff times the potential being glued.
  RadialProfile annulus_potential;
  /// 0 for the bubble kind, omega_minus(alpha) for the torus kind.
  Vector6d outer_value = Vector6d::Zero();
  GluedMetric metric;

  /// A(s) with F = A(s) q(x).
  template <typename T>
  T coefficient(const T& s) const {
    if (kind == FormKind::bubble) return glue_cutoff(s, epsilon) * inner_coefficient(s);
    return T(1.0) + glue_cutoff(s, epsilon) * (inner_coefficient(s) - T(1.0));
  }
  /// Coefficient of the inner formula, without the cutoff.
  template <typename T>
  T inner_coefficient(const T& s) const {
    const double c = metric.inner_scale();
    if (kind == FormKind::bubble) return asd_psi(s, c, normalization * epsilon * epsilon * epsilon * epsilon);
    return T(1.0) + T(2.0) * eh_dphi_minus_half(s, c);
  }
  QuadraticFactor factor() const;

  /// The assembled form and its first partials at x.
  FormJet jet(const Eigen::Vector4d& x) const;
  /// The inner-region formula at x (no cutoff).
  FormJet inner_jet(const Eigen::Vector4d& x) const;
};

/// Throws std::invalid_argument unless the model is Eguchi-Hanson (gamma_order 2) with a > 0.
GluedForm build_bubble_form(const ALEModel& model, double epsilon, double normalization, int n = 2048);
/// alpha in 1..3; Z_m with m > 2 only supports alpha = 1.
GluedForm build_asd_torus_form(const ALEModel& model, double epsilon, int alpha, int n = 2048);

/// Max over the components of d(form) at x by central differences of step h.
double closedness_residual(const GluedForm& form, const Eigen::Vector4d& x, double h = 1e-4);

/// |nabla^k form|_{g_eps} at x, k in {0, 1}.
double form_norm_at(const GluedForm& form, const Eigen::Vector4d& x, int k);

/// |form ^ omega_eps| / vol_{g_eps} at x.
double wedge_with_metric(const GluedForm& form, const Eigen::Vector4d& x);

struct DecayRow {
  std::string region;
  int k = 0;
  std::string bound;
  std::vector<double> epsilons;
  std::vector<double> sup;
  /// sup of value / bound per epsilon.
  std::vector<double> constants;
  double constant_ratio = 0.0;
  /// The row claims exact vanishing (or exact constancy) rather than a bound.
  bool exact = false;
  /// Reported for comparison only; not part of all_pass().
  bool informational = false;
  bool pass = false;
};

struct DecayTable {
  FormKind kind = FormKind::bubble;
  std::vector<DecayRow> rows;
  /// Log-log slope of the annulus wedge bound (torus kind).
  SweepReport wedge;
  bool all_pass() const;
};

inline constexpr double kMaxConstantRatio = 3.0;

DecayTable bubble_decay_table(const ALEModel& model, const std::vector<double>& eps_list, double normalization,
                              int radial_samples = 96);
DecayTable torus_decay_table(const ALEModel& model, const std::vector<double>& eps_list, int alpha,
                             int radial_samples = 96);

/// Sup discrepancies of the solved Kahler forms against their limits on fixed compact sets:
/// torus side against omega_0 on s in [0.25, 0.5] in g_0, bubble side against eta_EH on s / eps^2 <= 10 in g_EH.
SweepReport bubbling_diagnostic_metric(const ALEModel& model, const std::vector<double>& eps_list,
                                       BubblingMode mode, int n = 2048);

/// The same diagnostic for a family of glued forms, against 0 / omega_minus (torus side) or against the
/// unscaled inner form (bubble side).
SweepReport bubbling_diagnostic_forms(const std::vector<GluedForm>& family, BubblingMode mode);

/// True when the report values are strictly decreasing and the last is below frac of the first.
bool decreasing_to_zero(const SweepReport& report, double frac = 0.1);

struct HarmonicProjection {
  /// G with L G = -2 (F - mean F), F = Xi ^ omega_eps / omega_eps^2.
  RadialProfile potential;
  RadialProfile primitive_defect;
  /// Multiple of omega_eps removed: Xi + i ddbar G - lambda omega_eps is primitive.
  double lambda = 0.0;
  /// Sup of the primitive defect after correction, relative to sup |F|, away from the core.
  double residual = 0.0;
};

/// Bubble kind only: the torus form is not radial, so the radial model cannot carry it.
HarmonicProjection harmonic_projection(const GluedForm& form);

}  // namespace kummer
