#include "kummer/forms.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace kummer {

namespace {

constexpr double kCompactLo = 0.25;
constexpr double kCompactHi = 0.5;
constexpr double kBubbleRadius = 10.0;

RadialGrid sample_grid(double lo, double hi, int n) { return RadialGrid::log_spaced(lo, hi, n); }

// Directions on S^3 used for forms that are not U(2)-invariant.
const std::vector<Eigen::Vector4d>& directions() {
  static const std::vector<Eigen::Vector4d> dirs = [] {
    std::vector<Eigen::Vector4d> d;
    for (int i = 0; i < 4; ++i) d.push_back(Eigen::Vector4d::Unit(i));
    d.push_back(Eigen::Vector4d(1, 0, 1, 0).normalized());
    d.push_back(Eigen::Vector4d(1, 1, 1, 1).normalized());
    std::mt19937 rng(20240607);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 18; ++i) d.push_back(Eigen::Vector4d(n(rng), n(rng), n(rng), n(rng)).normalized());
    return d;
  }();
  return dirs;
}

std::vector<Eigen::Vector4d> ray_set(const GluedForm& form) {
  if (form.kind == FormKind::bubble) return {Eigen::Vector4d::Unit(0)};
  return directions();
}

FormJet jet_of(const RadialDerivatives& a, const QuadraticFactor& q, const Eigen::Vector4d& x) {
  return ddbar_jet(product_derivatives(a, q, x));
}

Vector6d sub_form(const FormJet& j, const Vector6d& v) { return j.value - v; }

double sigma_bound(double s, double eps, int k) {
  return std::pow(eps, 4) * std::pow(weight(s, eps), -4.0 - k);
}

DecayRow make_row(const char* region, int k, const char* bound, bool exact = false) {
  DecayRow r;
  r.region = region;
  r.k = k;
  r.bound = bound;
  r.exact = exact;
  return r;
}

int component(int i, int j) {
  for (int k = 0; k < 6; ++k)
    if (kTwoFormIndex[k][0] == i && kTwoFormIndex[k][1] == j) return k;
  throw std::logic_error("component: indices must satisfy i < j");
}

void finish_row(DecayRow& row) {
  if (row.exact) {
    row.pass = std::all_of(row.constants.begin(), row.constants.end(), [](double v) { return v <= 1e-12; });
    row.constant_ratio = 0.0;
    return;
  }
  const auto [lo, hi] = std::minmax_element(row.constants.begin(), row.constants.end());
  row.constant_ratio = *lo > 0.0 ? *hi / *lo : INFINITY;
  row.pass = *lo > 0.0 && row.constant_ratio < kMaxConstantRatio;
}

template <typename Value, typename Bound>
double sup_over(const GluedForm& form, double lo, double hi, int samples, Value&& value, Bound&& bound) {
  double best = 0.0;
  const auto rays = ray_set(form);
  for (double s : sample_grid(lo, hi, samples).s)
    for (const auto& d : rays) best = std::max(best, value(point_at(s, d)) / bound(s));
  return best;
}

}  // namespace

const char* to_string(FormKind k) { return k == FormKind::bubble ? "bubble" : "torus_asd"; }
const char* to_string(BubblingMode m) { return m == BubblingMode::torus_side ? "torus_side" : "bubble_side"; }

QuadraticFactor GluedForm::factor() const {
  QuadraticFactor q;
  if (kind == FormKind::torus_asd) {
    q.constant = 0.0;
    q.S = nu0_matrix(alpha);
  }
  return q;
}

FormJet GluedForm::jet(const Eigen::Vector4d& x) const {
  return jet_of(radial_derivatives([this](auto s) { return coefficient(s); }, x.squaredNorm()), factor(), x);
}

FormJet GluedForm::inner_jet(const Eigen::Vector4d& x) const {
  return jet_of(radial_derivatives([this](auto s) { return inner_coefficient(s); }, x.squaredNorm()), factor(), x);
}

GluedForm build_bubble_form(const ALEModel& model, double epsilon, double normalization, int n) {
  if (model.gamma_order != 2) throw std::invalid_argument("build_bubble_form: only Gamma = Z2 is supported");
  if (!(model.a > 0.0)) throw std::invalid_argument("build_bubble_form: a must be positive");
  GluedForm f;
  f.kind = FormKind::bubble;
  f.epsilon = epsilon;
  f.normalization = normalization;
  f.metric = build_glued_metric(model, epsilon, n);
  f.inner_profile = RadialProfile::sample(f.metric.grid, [&](double s) { return f.inner_coefficient(s); });
  f.annulus_potential = RadialProfile::sample(f.metric.grid, [&](double s) { return f.coefficient(s); });
  return f;
}

GluedForm build_asd_torus_form(const ALEModel& model, double epsilon, int alpha, int n) {
  if (alpha < 1 || alpha > 3) throw std::invalid_argument("build_asd_torus_form: alpha must be 1, 2 or 3");
  if (model.gamma_order != 2 && alpha != 1)
    throw std::invalid_argument("build_asd_torus_form: only alpha = 1 is invariant for Z_m with m > 2");
  GluedForm f;
  f.kind = FormKind::torus_asd;
  f.epsilon = epsilon;
  f.alpha = alpha;
  f.outer_value = omega_minus(alpha);
  f.metric = build_glued_metric(model, epsilon, n);
  f.inner_profile = RadialProfile::sample(f.metric.grid, [&](double s) { return f.inner_coefficient(s); });
  f.annulus_potential = RadialProfile::sample(f.metric.grid, [&](double s) {
    return glue_cutoff(s, epsilon) * 2.0 * eh_dphi_minus_half(s, f.metric.inner_scale());
  });
  return f;
}

double closedness_residual(const GluedForm& form, const Eigen::Vector4d& x, double h) {
  std::array<Vector6d, 4> d;
  for (int c = 0; c < 4; ++c) {
    const Eigen::Vector4d e = h * Eigen::Vector4d::Unit(c);
    d[c] = (form.jet(x + e).value - form.jet(x - e).value) / (2.0 * h);
  }
  // (d a)_{ijk} = d_i a_jk - d_j a_ik + d_k a_ij.
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) {
        const double v = d[i](component(j, k)) - d[j](component(i, k)) + d[k](component(i, j));
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

double form_norm_at(const GluedForm& form, const Eigen::Vector4d& x, int k) {
  if (k < 0 || k > 1) throw std::invalid_argument("form_norm_at: k must be 0 or 1");
  const auto geo = point_geometry(form.metric.kahler_potential(x));
  const FormJet j = form.jet(x);
  return k == 0 ? form_norm(j.value, geo.g) : covariant_derivative_norm(j, geo);
}

double wedge_with_metric(const GluedForm& form, const Eigen::Vector4d& x) {
  const auto pot = form.metric.kahler_potential(x);
  const Eigen::Matrix4d g = kahler_metric(pot.hessian);
  return std::abs(wedge<double>(form.jet(x).value, ddbar_form(pot.hessian))) / std::sqrt(g.determinant());
}

bool DecayTable::all_pass() const {
  bool ok = std::all_of(rows.begin(), rows.end(), [](const DecayRow& r) { return r.informational || r.pass; });
  if (kind == FormKind::torus_asd) ok = ok && wedge.fitted && std::abs(wedge.fit.slope - 2.0) <= 0.2;
  return ok;
}

DecayTable bubble_decay_table(const ALEModel& model, const std::vector<double>& eps_list, double normalization,
                              int radial_samples) {
  require_decreasing(eps_list, 3);
  DecayTable table;
  table.kind = FormKind::bubble;
  std::vector<DecayRow> rows(5);
  for (int k : {0, 1}) {
    rows[k] = make_row("inner", k, "eps^4 sigma^(-4-k)");
    rows[2 + k] = make_row("annulus", k, "eps^(2-k/2)");
  }
  rows[4] = make_row("outer", 0, "= 0 (all k)", true);
  for (double eps : eps_list) {
    const GluedForm f = build_bubble_form(model, eps, normalization);
    const double s_min = f.metric.grid.front();
    for (int k : {0, 1}) {
      auto val = [&](const Eigen::Vector4d& x) { return form_norm_at(f, x, k); };
      const double inner = sup_over(f, s_min, eps, radial_samples, val, [&](double s) { return sigma_bound(s, eps, k); });
      const double ann_bound = std::pow(eps, 2.0 - 0.5 * k);
      const double ann = sup_over(f, eps, 4.0 * eps, radial_samples, val, [&](double) { return ann_bound; });
      rows[k].epsilons.push_back(eps);
      rows[k].constants.push_back(inner);
      rows[2 + k].epsilons.push_back(eps);
      rows[2 + k].constants.push_back(ann);
      rows[2 + k].sup.push_back(ann * ann_bound);
    }
    double outer = 0.0;
    for (double s : sample_grid(4.0 * eps, 1.0, radial_samples).s) {
      const FormJet j = f.jet(point_at(s, Eigen::Vector4d::Unit(0)));
      outer = std::max(outer, j.value.cwiseAbs().maxCoeff());
      for (const auto& p : j.partial) outer = std::max(outer, p.cwiseAbs().maxCoeff());
    }
    rows[4].epsilons.push_back(eps);
    rows[4].sup.push_back(outer);
    rows[4].constants.push_back(outer);
  }
  for (auto& r : rows) {
    if (r.sup.empty()) r.sup = r.constants;
    finish_row(r);
  }
  table.rows = std::move(rows);
  return table;
}

DecayTable torus_decay_table(const ALEModel& model, const std::vector<double>& eps_list, int alpha,
                             int radial_samples) {
  require_decreasing(eps_list, 3);
  DecayTable table;
  table.kind = FormKind::torus_asd;
  std::vector<DecayRow> rows;
  rows.push_back(make_row("inner", 0, "eps^4 sigma^-4"));
  rows.push_back(make_row("inner", 1, "eps^4 sigma^-5"));
  rows.push_back(make_row("annulus", 0, "1"));
  rows.push_back(make_row("annulus", 1, "eps^(3/2)"));
  rows.push_back(make_row("outer", 0, "|form| constant", true));
  rows.push_back(make_row("outer", 1, "= 0", true));
  rows.push_back(make_row("annulus wedge", 0, "|form ^ omega_eps| <= eps^2"));
  // The inner k = 0 row cannot hold near s = eps, where the form is close to omega_minus;
  // the bound that does hold there is the annulus one.
  rows.push_back(make_row("inner", 0, "1"));
  rows.back().informational = true;
  table.wedge.stage = "forms wedge alpha=" + std::to_string(alpha);
  const double reference = form_norm(omega_minus(alpha));
  for (double eps : eps_list) {
    const GluedForm f = build_asd_torus_form(model, eps, alpha);
    const double s_min = f.metric.grid.front();
    auto nab = [&](const Eigen::Vector4d& x) { return form_norm_at(f, x, 1); };
    auto val = [&](const Eigen::Vector4d& x) { return form_norm_at(f, x, 0); };
    const double c0 = sup_over(f, s_min, eps, radial_samples, val, [&](double s) { return sigma_bound(s, eps, 0); });
    const double c1 = sup_over(f, s_min, eps, radial_samples, nab, [&](double s) { return sigma_bound(s, eps, 1); });
    const double i0 = sup_over(f, s_min, eps, radial_samples, val, [](double) { return 1.0; });
    const double a0 = sup_over(f, eps, 4.0 * eps, radial_samples, val, [](double) { return 1.0; });
    const double b1 = std::pow(eps, 1.5);
    const double a1 = sup_over(f, eps, 4.0 * eps, radial_samples, nab, [&](double) { return b1; });
    const double w = sup_over(f, eps, 4.0 * eps, radial_samples,
                              [&](const Eigen::Vector4d& x) { return wedge_with_metric(f, x); }, [](double) { return 1.0; });
    double spread = 0.0, grad = 0.0;
    for (double s : sample_grid(4.0 * eps, 1.0, radial_samples).s)
      for (const auto& d : directions()) {
        const Eigen::Vector4d x = point_at(s, d);
        spread = std::max(spread, std::abs(form_norm_at(f, x, 0) - reference));
        grad = std::max(grad, form_norm_at(f, x, 1));
      }
    const double values[8] = {c0, c1, a0, a1, spread, grad, w / (eps * eps), i0};
    const double sups[8] = {c0 * sigma_bound(eps, eps, 0), c1 * sigma_bound(eps, eps, 1), a0, a1 * b1, spread, grad, w, i0};
    for (int r = 0; r < 8; ++r) {
      rows[r].epsilons.push_back(eps);
      rows[r].constants.push_back(values[r]);
      rows[r].sup.push_back(sups[r]);
    }
    table.wedge.rows.push_back({eps, w});
  }
  for (auto& r : rows) finish_row(r);
  finalize_sweep(table.wedge);
  table.rows = std::move(rows);
  return table;
}

bool decreasing_to_zero(const SweepReport& report, double frac) {
  const auto v = report.values();
  if (v.size() < 2) return false;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return v.back() < frac * v.front();
}

SweepReport bubbling_diagnostic_metric(const ALEModel& model, const std::vector<double>& eps_list, BubblingMode mode,
                                       int n) {
  require_decreasing(eps_list, 3);
  SweepReport report;
  report.stage = std::string("bubbling omega ") + to_string(mode);
  const double c = model.c();
  for (double eps : eps_list) {
    const GluedMetric metric = build_glued_metric(model, eps, n);
    const MASolution sol = picard_solve(metric);
    double best = 0.0;
    for (int i = 0; i < metric.grid.size(); ++i) {
      const double s = metric.grid.s[i];
      const bool torus = mode == BubblingMode::torus_side;
      if (torus && (s < kCompactLo || s > kCompactHi)) continue;
      if (!torus && s > kBubbleRadius * eps * eps) continue;
      const CorrectionSlopes ps = correction_slopes(metric, sol, i);
      // Radial potential of omega~_eps minus its limit: the glued correction (zero on the bubble set) plus psi.
      RadialDerivatives diff{0.0, ps.d1, ps.d2, 0.0};
      if (torus) {
        const auto corr = radial_derivatives([&](auto t) { return metric.correction(t); }, s);
        diff.d1 += corr.d1;
        diff.d2 += corr.d2;
      }
      const Eigen::Vector4d x = point_at(s, Eigen::Vector4d::Unit(0));
      const Vector6d form = ddbar_form(product_derivatives(diff, QuadraticFactor{}, x).hessian);
      double v;
      if (torus) {
        v = form_norm(form);
      } else {
        // eps^-2 times the pullback under y -> eps y has the same components at y = x / eps.
        const Eigen::Vector4d y = x / eps;
        const auto eh = radial_derivatives([c](auto t) { return eh_phi(t, c); }, y.squaredNorm());
        v = form_norm(form, kahler_metric(product_derivatives(eh, QuadraticFactor{}, y).hessian));
      }
      best = std::max(best, v);
    }
    report.rows.push_back({eps, best});
  }
  finalize_sweep(report);
  return report;
}

SweepReport bubbling_diagnostic_forms(const std::vector<GluedForm>& family, BubblingMode mode) {
  if (family.size() < 3) throw std::invalid_argument("bubbling_diagnostic_forms: need at least 3 epsilon values");
  SweepReport report;
  report.stage = std::string("bubbling ") + to_string(family.front().kind) + " " + to_string(mode);
  for (const auto& f : family) {
    const double eps = f.epsilon;
    double best = 0.0;
    const bool torus = mode == BubblingMode::torus_side;
    const double lo = torus ? kCompactLo : f.metric.grid.front();
    const double hi = torus ? kCompactHi : kBubbleRadius * eps * eps;
    for (double s : sample_grid(lo, hi, 64).s)
      for (const auto& d : ray_set(f)) {
        const Eigen::Vector4d x = point_at(s, d);
        const Vector6d diff = torus ? sub_form(f.jet(x), f.outer_value) : sub_form(f.jet(x), f.inner_jet(x).value);
        best = std::max(best, form_norm(diff));
      }
    report.rows.push_back({eps, best});
  }
  finalize_sweep(report);
  return report;
}

HarmonicProjection harmonic_projection(const GluedForm& form) {
  if (form.kind != FormKind::bubble)
    throw std::invalid_argument("harmonic_projection: only the radial bubble form is supported on the model");
  const GluedMetric& m = form.metric;
  const int n = m.grid.size();
  Eigen::VectorXd f(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector4d x = point_at(m.grid.s[i], Eigen::Vector4d::Unit(0));
    const Vector6d omega = ddbar_form(m.kahler_potential(x).hessian);
    f(i) = wedge<double>(form.jet(x).value, omega) / wedge<double>(omega, omega);
  }
  HarmonicProjection out;
  out.lambda = volume_mean(m, f);
  out.potential = linearized_solve(m, RadialProfile(m.grid, -2.0 * f));
  // Defect after correction, F + L G / 2 - lambda, with the three-point operator. The core is skipped:
  // there the second difference divided by h^2 s^2 is pure roundoff.
  const RadialProfile lg = linearized_operator(m, out.potential);
  Eigen::VectorXd defect = Eigen::VectorXd::Zero(n);
  double worst = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    defect(i) = f(i) + 0.5 * lg[i] - out.lambda;
    if (m.grid.s[i] >= m.epsilon * m.epsilon) worst = std::max(worst, std::abs(defect(i)));
  }
  out.primitive_defect = RadialProfile(m.grid, defect);
  const double scale = f.cwiseAbs().maxCoeff();
  out.residual = scale > 0.0 ? worst / scale : worst;
  return out;
}

}  // namespace kummer
