#include "kummer/gluing.hpp"

#include <algorithm>
#include <sstream>

namespace kummer {

double cutoff(double t, double r) {
  if (!(t > 0.0)) throw std::invalid_argument("cutoff: t must be positive");
  return cutoff_profile(r / t);
}

double weight(double s, double eps) { return std::clamp(std::sqrt(s), eps, 1.0); }

GluedMetric::Flux GluedMetric::flux_data(double s) const {
  const Jet<3> chi = glue_cutoff(Jet<3>::variable(s), epsilon);
  const double x = chi.value();
  const double x_t = s * chi.derivative(1);
  const double x_tt = s * (chi.derivative(1) + s * chi.derivative(2));
  const double c = inner_scale();
  const double root = std::sqrt(s * s + c * c);
  const double d = eh_phi_minus_flat(s, c);
  const double p_eh = 0.5 * root;
  const double p_eh_t = 0.5 * s * s / root;
  const double p_eh_off = 0.5 * c * c / (root + s);         // P_EH - s/2
  const double p_eh_t_off = -0.5 * s * c * c / (root * (root + s));  // P_EH,t - s/2
  Flux f;
  f.p = x * p_eh + (1.0 - x) * 0.5 * s + x_t * d;
  f.p_t = x * p_eh_t + (1.0 - x) * 0.5 * s + x_tt * d + 2.0 * x_t * p_eh_off;
  f.e = x_t * d + x * p_eh_off;
  f.e_t = x_tt * d + 2.0 * x_t * p_eh_off + x * p_eh_t_off;
  return f;
}

bool GluedMetric::in_transition(double s) const {
  const double lo = kCutoffInner * kCutoffInner * epsilon, hi = kCutoffOuter * kCutoffOuter * epsilon;
  return s > lo && s < hi;
}

double GluedMetric::volume_defect(double s) const {
  if (!in_transition(s)) return 0.0;
  // With P = s/2 + E: e^f - 1 = (2 (E + E_t) s + 4 E E_t) / s^2.
  const Flux f = flux_data(s);
  const double e = f.e, e_t = f.e_t;
  return (2.0 * (e + e_t) * s + 4.0 * e * e_t) / (s * s);
}

PotentialDerivatives GluedMetric::kahler_potential(const Eigen::Vector4d& x) const {
  const auto a = radial_derivatives([this](auto s) { return potential(s); }, x.squaredNorm());
  return product_derivatives(a, QuadraticFactor{}, x);
}

GluedMetric build_glued_metric(const ALEModel& model, double epsilon, int n, double s_outer) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("build_glued_metric: epsilon must be positive");
  if (!(4.0 * epsilon < s_outer)) throw GluingError("build_glued_metric: annulus does not fit inside s_outer");
  GluedMetric m;
  m.epsilon = epsilon;
  m.model = model;
  m.s_outer = s_outer;
  const double a2 = model.a > 0.0 ? model.c() : 1.0;
  m.grid = RadialGrid::log_spaced(1e-4 * a2 * epsilon * epsilon, s_outer, n);
  Eigen::VectorXd phi(n), chi(n), f(n);
  for (int i = 0; i < n; ++i) {
    const double s = m.grid.s[i];
    phi(i) = m.potential(s);
    chi(i) = glue_cutoff(s, epsilon);
    if (!(m.flux(s) > 0.0) || !(m.flux_t(s) > 0.0)) {
      std::ostringstream os;
      os << "glued metric degenerates at s = " << s << "; reduce epsilon";
      throw GluingError(os.str());
    }
    f(i) = std::log1p(m.volume_defect(s));
  }
  m.glued_potential = RadialProfile(m.grid, phi);
  m.cutoff_record = RadialProfile(m.grid, chi);
  m.f_profile = RadialProfile(m.grid, f);
  return m;
}

double weighted_ck_norm(const RadialProfile& u, const GluedMetric& metric, int k, double delta) {
  if (k < 0 || k > 2) throw std::invalid_argument("weighted_ck_norm: only k <= 2 is supported by the stencils");
  if (u.size() != metric.grid.size()) throw std::invalid_argument("weighted_ck_norm: profile not on the metric grid");
  RadialProfile d1, d2;
  if (k >= 1) d1 = u.derivative();
  if (k >= 2) d2 = u.second_derivative();
  double best = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    const double s = u.s(i);
    const double sig = weight(s, metric.epsilon);
    best = std::max(best, std::pow(sig, -delta) * std::abs(u[i]));
    if (k == 0) continue;
    const Eigen::Vector4d x(std::sqrt(s), 0.0, 0.0, 0.0);
    const auto geo = point_geometry(metric.kahler_potential(x));
    const auto du = product_derivatives({u[i], d1[i], k >= 2 ? d2[i] : 0.0, 0.0}, QuadraticFactor{}, x);
    const double g1 = std::sqrt(std::max(0.0, du.gradient.dot(geo.ginv * du.gradient)));
    best = std::max(best, std::pow(sig, -delta + 1) * g1);
    if (k == 1) continue;
    Eigen::Matrix4d hess = du.hessian;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) hess(a, b) -= geo.christoffel[c](a, b) * du.gradient(c);
    const double g2 = std::sqrt(std::max(0.0, (geo.ginv * hess * geo.ginv).cwiseProduct(hess).sum()));
    best = std::max(best, std::pow(sig, -delta + 2) * g2);
  }
  return best;
}

double annulus_discrepancy(const ALEModel& model, double epsilon, int k, int samples) {
  if (k < 0 || k > 1) throw std::invalid_argument("annulus_discrepancy: k must be 0 or 1");
  const double c = epsilon * epsilon * model.c();
  auto corr = [c, epsilon](auto s) { return glue_cutoff(s, epsilon) * eh_phi_minus_flat(s, c); };
  const auto grid = RadialGrid::log_spaced(epsilon, 4.0 * epsilon, samples);
  // The correction is U(2)-invariant, so one ray suffices.
  const Eigen::Vector4d dir = Eigen::Vector4d(1.0, 0.0, 0.0, 0.0);
  const PointGeometry flat = flat_geometry();
  double best = 0.0;
  for (double s : grid.s) {
    const auto f = product_derivatives(radial_derivatives(corr, s), QuadraticFactor{}, point_at(s, dir));
    const FormJet form = ddbar_jet(f);
    const double v = (k == 0) ? form_norm(form.value) : covariant_derivative_norm(form, flat);
    best = std::max(best, v);
  }
  return best;
}

SweepReport decay_sweep(const ALEModel& model, const std::vector<double>& eps_list, int k) {
  require_decreasing(eps_list, 4);
  SweepReport r;
  r.stage = "gluing k=" + std::to_string(k);
  for (double eps : eps_list) r.rows.push_back({eps, annulus_discrepancy(model, eps, k)});
  finalize_sweep(r);
  return r;
}

}  // namespace kummer
