#include "kummer/alemodel.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace kummer {

RadialGrid RadialGrid::log_spaced(double s_min, double s_max, int n) {
  if (!(s_min > 0.0) || !(s_max > s_min) || n < 3)
    throw std::invalid_argument("log_spaced: need 0 < s_min < s_max and n >= 3");
  RadialGrid g;
  g.s.resize(n);
  const double t0 = std::log(s_min), t1 = std::log(s_max);
  for (int i = 0; i < n; ++i) g.s[i] = std::exp(t0 + (t1 - t0) * i / (n - 1));
  g.s.front() = s_min;
  g.s.back() = s_max;
  return g;
}

RadialGrid RadialGrid::default_for(double a) {
  const double a2 = a > 0.0 ? a * a : 1.0;
  return log_spaced(1e-4 * a2, 1e4 * a2, 2048);
}

RadialProfile::RadialProfile(RadialGrid grid, Eigen::VectorXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("RadialProfile: size mismatch");
  for (int i = 1; i < grid_.size(); ++i)
    if (!(grid_.s[i] > grid_.s[i - 1])) throw std::invalid_argument("RadialProfile: grid not increasing");
  if (!values_.allFinite()) throw std::invalid_argument("RadialProfile: non-finite values");
}

RadialProfile RadialProfile::derivative() const {
  const int n = size();
  const auto& s = grid_.s;
  const auto& f = values_;
  Eigen::VectorXd d(n);
  for (int i = 1; i + 1 < n; ++i) {
    const double hm = s[i] - s[i - 1], hp = s[i + 1] - s[i];
    d(i) = (hm * hm * f(i + 1) - hp * hp * f(i - 1) + (hp * hp - hm * hm) * f(i)) / (hm * hp * (hm + hp));
  }
  // One-sided second-order ends.
  auto one_sided = [&](int i0, int i1, int i2) {
    const double h1 = s[i1] - s[i0], h2 = s[i2] - s[i0];
    return (-(h1 + h2) / (h1 * h2)) * f(i0) + (h2 / (h1 * (h2 - h1))) * f(i1) - (h1 / (h2 * (h2 - h1))) * f(i2);
  };
  d(0) = one_sided(0, 1, 2);
  d(n - 1) = one_sided(n - 1, n - 2, n - 3);
  return RadialProfile(grid_, d);
}

RadialProfile RadialProfile::second_derivative() const {
  const int n = size();
  const auto& s = grid_.s;
  const auto& f = values_;
  Eigen::VectorXd d(n);
  for (int i = 1; i + 1 < n; ++i) {
    const double hm = s[i] - s[i - 1], hp = s[i + 1] - s[i];
    d(i) = 2.0 * (hm * f(i + 1) - (hm + hp) * f(i) + hp * f(i - 1)) / (hm * hp * (hm + hp));
  }
  d(0) = d(1);
  d(n - 1) = d(n - 2);
  return RadialProfile(grid_, d);
}

double RadialProfile::at(double s) const {
  const auto& g = grid_.s;
  if (s < g.front() || s > g.back()) throw std::out_of_range("RadialProfile::at: s outside grid");
  auto it = std::upper_bound(g.begin(), g.end(), s);
  int i = static_cast<int>(it - g.begin()) - 1;
  i = std::clamp(i, 0, size() - 2);
  const double w = std::log(s / g[i]) / std::log(g[i + 1] / g[i]);
  return (1.0 - w) * values_(i) + w * values_(i + 1);
}

RadialProfile eh_potential(double a, const RadialGrid& grid) {
  if (a < 0.0) throw std::invalid_argument("eh_potential: a must be nonnegative");
  const double c = a * a;
  return RadialProfile::sample(grid, [c](double s) { return eh_phi(s, c); });
}

ALEModel make_eh_model(double a, const RadialGrid& grid) {
  ALEModel m;
  m.a = a;
  m.potential = eh_potential(a, grid);
  return m;
}

ALEModel make_eh_model(double a) { return make_eh_model(a, RadialGrid::default_for(a)); }

double eh_ricci_residual(const ALEModel& model) {
  const double c = model.c();
  double worst = 0.0;
  for (double s : model.potential.grid().s) {
    const Jet<2> p = eh_flux(Jet<2>::variable(s), c);
    const double flux_t = s * p.derivative(1);
    worst = std::max(worst, std::abs(4.0 * (p.value() / s) * (flux_t / s) - 1.0));
  }
  return worst;
}

RadialProfile integrate_radial_ma(double a, const RadialGrid& grid, int substeps) {
  const double c = a * a;
  if (c == 0.0) return RadialProfile::sample(grid, [](double) { return 0.5; });
  // P = s phi' obeys dP/ds = s / (4P), P(0) = c/2.
  auto rhs_s = [](double s, double p) { return s / (4.0 * p); };
  double p = 0.5 * c;
  const int n0 = 256;
  const double h0 = grid.front() / n0;
  for (int k = 0; k < n0; ++k) {
    const double s = k * h0;
    const double k1 = rhs_s(s, p), k2 = rhs_s(s + h0 / 2, p + h0 * k1 / 2), k3 = rhs_s(s + h0 / 2, p + h0 * k2 / 2),
                 k4 = rhs_s(s + h0, p + h0 * k3);
    p += h0 * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
  }
  // Along the grid in t = ln s: dP/dt = e^{2t} / (4P).
  auto rhs_t = [](double t, double q) { return std::exp(2.0 * t) / (4.0 * q); };
  Eigen::VectorXd out(grid.size());
  out(0) = p / grid.front();
  for (int i = 0; i + 1 < grid.size(); ++i) {
    const double t0 = std::log(grid.s[i]), t1 = std::log(grid.s[i + 1]);
    const double h = (t1 - t0) / substeps;
    for (int k = 0; k < substeps; ++k) {
      const double t = t0 + k * h;
      const double k1 = rhs_t(t, p), k2 = rhs_t(t + h / 2, p + h * k1 / 2), k3 = rhs_t(t + h / 2, p + h * k2 / 2),
                   k4 = rhs_t(t + h, p + h * k3);
      p += h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
    }
    out(i + 1) = p / grid.s[i + 1];
  }
  return RadialProfile(grid, out);
}

FlatMoments moment_map_flat(std::complex<double> z, std::complex<double> w) {
  const std::complex<double> zbw = std::conj(z) * w;
  return {0.5 * (std::norm(z) - std::norm(w)), -zbw.imag(), zbw.real()};
}

Eigen::Matrix4d nu0_matrix(int alpha) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  switch (alpha) {
    case 1:
      m.diagonal() << 1, 1, -1, -1;
      break;
    case 2:
      m(0, 3) = m(3, 0) = -1;
      m(1, 2) = m(2, 1) = 1;
      break;
    case 3:
      m(0, 2) = m(2, 0) = 1;
      m(1, 3) = m(3, 1) = 1;
      break;
    default:
      throw std::out_of_range("nu0_matrix: alpha must be 1, 2 or 3");
  }
  return m;
}

double nu0(int alpha, const Eigen::Vector4d& x) { return 0.5 * x.dot(nu0_matrix(alpha) * x); }

Eigen::Vector4d flat_hamiltonian_field(int alpha, const Eigen::Vector4d& x) {
  const Eigen::Matrix4d m0 = to_antisymmetric<double>(omega0());
  return m0 * (nu0_matrix(alpha) * x);
}

double moment_map_eh(const ALEModel& model, const Eigen::Vector4d& x, int alpha) {
  const double s = x.squaredNorm();
  const auto& g = model.potential.grid();
  if (s < g.front() || s > g.back()) throw std::out_of_range("moment_map_eh: point outside model grid");
  return 2.0 * eh_dphi(s, model.c()) * nu0(alpha, x);
}

PotentialDerivatives& PotentialDerivatives::operator+=(const PotentialDerivatives& o) {
  value += o.value;
  gradient += o.gradient;
  hessian += o.hessian;
  for (int c = 0; c < 4; ++c) third[c] += o.third[c];
  return *this;
}

PotentialDerivatives& PotentialDerivatives::operator*=(double k) {
  value *= k;
  gradient *= k;
  hessian *= k;
  for (auto& t : third) t *= k;
  return *this;
}

PotentialDerivatives product_derivatives(const RadialDerivatives& A, const QuadraticFactor& q,
                                         const Eigen::Vector4d& x) {
  const Eigen::Matrix4d id = Eigen::Matrix4d::Identity();
  // G = A(|x|^2)
  const double g0 = A.d0;
  const Eigen::Vector4d g1 = 2.0 * A.d1 * x;
  const Eigen::Matrix4d g2 = 4.0 * A.d2 * x * x.transpose() + 2.0 * A.d1 * id;
  auto g3 = [&](int a, int b, int c) {
    return 8.0 * A.d3 * x(a) * x(b) * x(c) +
           4.0 * A.d2 * ((a == b) * x(c) + (a == c) * x(b) + (b == c) * x(a));
  };
  const double q0 = q.constant + 0.5 * x.dot(q.S * x);
  const Eigen::Vector4d q1 = q.S * x;
  const Eigen::Matrix4d& q2 = q.S;

  PotentialDerivatives f;
  f.value = g0 * q0;
  f.gradient = g0 * q1 + q0 * g1;
  f.hessian = g2 * q0 + g1 * q1.transpose() + q1 * g1.transpose() + g0 * q2;
  for (int c = 0; c < 4; ++c)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        f.third[c](a, b) = g3(a, b, c) * q0 + g2(a, b) * q1(c) + g2(a, c) * q1(b) + g2(b, c) * q1(a) +
                           g1(a) * q2(b, c) + g1(b) * q2(a, c) + g1(c) * q2(a, b);
  return f;
}

Vector6d ddbar_form(const Eigen::Matrix4d& hessian) {
  const Eigen::Matrix4d hj = hessian * complex_structure();
  return from_antisymmetric(Eigen::Matrix4d(-0.5 * (hj - hj.transpose())));
}

Eigen::Matrix4d kahler_metric(const Eigen::Matrix4d& hessian) {
  const Eigen::Matrix4d j = complex_structure();
  return 0.5 * (hessian - j * hessian * j);
}

FormJet ddbar_jet(const PotentialDerivatives& f) {
  FormJet out;
  out.value = ddbar_form(f.hessian);
  for (int c = 0; c < 4; ++c) out.partial[c] = ddbar_form(f.third[c]);
  return out;
}

PointGeometry point_geometry(const PotentialDerivatives& kahler_potential) {
  PointGeometry geo;
  geo.g = kahler_metric(kahler_potential.hessian);
  Eigen::LLT<Eigen::Matrix4d> llt(geo.g);
  if (llt.info() != Eigen::Success || !geo.g.allFinite())
    throw NonPositiveMetric("Kahler metric is not positive definite");
  geo.ginv = llt.solve(Eigen::Matrix4d::Identity());
  std::array<Eigen::Matrix4d, 4> dg;
  for (int c = 0; c < 4; ++c) dg[c] = kahler_metric(kahler_potential.third[c]);
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double acc = 0.0;
        for (int l = 0; l < 4; ++l) acc += geo.ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        geo.christoffel[k](i, j) = 0.5 * acc;
      }
  return geo;
}

PointGeometry flat_geometry() { return PointGeometry{}; }

double covariant_derivative_norm(const FormJet& form, const PointGeometry& geo) {
  const Eigen::Matrix4d a = to_antisymmetric<double>(form.value);
  std::array<Eigen::Matrix4d, 4> n;
  for (int c = 0; c < 4; ++c) {
    Eigen::Matrix4d gc;  // gc(a, k) = Gamma^k_{c a}
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) gc(i, k) = geo.christoffel[k](c, i);
    n[c] = to_antisymmetric<double>(form.partial[c]) - gc * a - a * gc.transpose();
  }
  double total = 0.0;
  for (int c = 0; c < 4; ++c) {
    const Eigen::Matrix4d raised = geo.ginv * n[c] * geo.ginv;
    for (int d = 0; d < 4; ++d) total += geo.ginv(c, d) * 0.5 * raised.cwiseProduct(n[d]).sum();
  }
  return std::sqrt(std::max(0.0, total));
}

double asd_check(const TwoFormAtPoint& form, double floor) {
  const Vector6d sum = hodge_star(form.components, form.metric) + form.components;
  return form_norm(sum, form.metric) / std::max(form_norm(form.components, form.metric), floor);
}

Eigen::Vector4d point_at(double s, const Eigen::Vector4d& direction) {
  return std::sqrt(s) * direction.normalized();
}

RadialProfile asd_potential(const ALEModel& model, double C) {
  if (model.gamma_order != 2) throw std::invalid_argument("asd_potential: only Gamma = Z2 is supported numerically");
  if (!(model.a > 0.0)) throw std::invalid_argument("asd_potential: a must be positive");
  const double c = model.c();
  return RadialProfile::sample(model.potential.grid(), [c, C](double s) { return asd_psi(s, c, C); });
}

double asd_calibration(double a, double l11) { return a * a * std::sqrt(l11 / 2.0); }

double simpson(const Eigen::VectorXd& f, double h) {
  const int m = static_cast<int>(f.size()) - 1;
  if (m < 1) return 0.0;
  if (m == 1) return 0.5 * h * (f(0) + f(1));
  const int even = (m % 2 == 0) ? m : m - 3;
  double total = 0.0;
  for (int i = 0; i + 2 <= even; i += 2) total += h / 3.0 * (f(i) + 4.0 * f(i + 1) + f(i + 2));
  if (even != m) {
    const int i = even;
    total += 3.0 * h / 8.0 * (f(i) + 3.0 * f(i + 1) + 3.0 * f(i + 2) + f(i + 3));
  }
  return total;
}

PairingResult asd_self_pairing(const ALEModel& model, double C) {
  if (!(model.a > 0.0)) throw std::invalid_argument("asd_self_pairing: a must be positive");
  const double c = model.c();
  const auto& grid = model.potential.grid();
  Eigen::VectorXd integrand(grid.size());
  auto w_of = [c, C](double s) {
    const Jet<2> v = Jet<2>::variable(s);
    return v * asd_dpsi(v, c, C);
  };
  for (int i = 0; i < grid.size(); ++i) {
    const double s = grid.s[i];
    const Jet<2> w = w_of(s);
    integrand(i) = w.value() * s * w.derivative(1);
  }
  PairingResult r;
  r.quadrature = simpson(integrand, grid.log_step());
  const double w0 = w_of(grid.front()).value(), w1 = w_of(grid.back()).value();
  r.analytic_window = 0.5 * (w1 * w1 - w0 * w0);
  r.analytic_total = -2.0 * C * C / (c * c);
  return r;
}

}  // namespace kummer
