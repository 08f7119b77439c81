#pragma once

// Eguchi-Hanson model of C^2/Z2 in the radial variable s = |z|^2 + |w|^2, and pointwise
// Kahler geometry of potentials of the form A(s) * q(x).

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Core>

#include "kummer/flatforms.hpp"
#include "kummer/jet.hpp"

namespace kummer {

// ---------------------------------------------------------------------------------------------
// Radial grids

struct RadialGrid {
  std::vector<double> s;

  static RadialGrid log_spaced(double s_min, double s_max, int n);
  /// 2048 nodes on [1e-4 a^2, 1e4 a^2] (a = 0 uses a = 1 for the range).
  static RadialGrid default_for(double a);

  int size() const { return static_cast<int>(s.size()); }
  double front() const { return s.front(); }
  double back() const { return s.back(); }
  /// Uniform step in t = ln s.
  double log_step() const { return std::log(s[1] / s[0]); }
};

/// Sampled function of s with second-order nonuniform difference stencils.
class RadialProfile {
 public:
  RadialProfile() = default;
  RadialProfile(RadialGrid grid, Eigen::VectorXd values);
  template <typename F>
  static RadialProfile sample(const RadialGrid& grid, F&& f) {
    Eigen::VectorXd v(grid.size());
    for (int i = 0; i < grid.size(); ++i) v(i) = f(grid.s[i]);
    return RadialProfile(grid, std::move(v));
  }

  const RadialGrid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  int size() const { return grid_.size(); }
  double s(int i) const { return grid_.s[i]; }
  double operator[](int i) const { return values_(i); }

  /// d/ds and d^2/ds^2 on the grid.
  RadialProfile derivative() const;
  RadialProfile second_derivative() const;
  /// Interpolation linear in ln s; throws std::out_of_range outside the grid.
  double at(double s) const;

 private:
  RadialGrid grid_;
  Eigen::VectorXd values_;
};

// ---------------------------------------------------------------------------------------------
// Closed-form radial functions; c = a^2. Templates accept double or Jet.

/// s * phi'(s) = sqrt(s^2 + c^2) / 2.
template <typename T>
T eh_flux(const T& s, double c) {
  using std::sqrt;
  return sqrt(s * s + T(c * c)) / T(2.0);
}

template <typename T>
T eh_dphi(const T& s, double c) {
  return eh_flux(s, c) / s;
}

/// phi'(s) - 1/2 = c^2 / (2 s (sqrt(s^2 + c^2) + s)).
template <typename T>
T eh_dphi_minus_half(const T& s, double c) {
  using std::sqrt;
  return T(c * c) / (T(2.0) * s * (sqrt(s * s + T(c * c)) + s));
}

/// phi(s) - s/2, normalized to vanish at infinity.
template <typename T>
T eh_phi_minus_flat(const T& s, double c) {
  using std::asinh;
  using std::sqrt;
  if (c == 0.0) return T(0.0);
  return T(0.5) * (T(c * c) / (sqrt(s * s + T(c * c)) + s) - T(c) * asinh(T(c) / s));
}

template <typename T>
T eh_phi(const T& s, double c) {
  return s / T(2.0) + eh_phi_minus_flat(s, c);
}

/// Radial potential of the anti-self-dual form; psi' = 2C / (s sqrt(s^2 + c^2)), c > 0.
template <typename T>
T asd_psi(const T& s, double c, double C) {
  using std::asinh;
  return T(-2.0 * C / c) * asinh(T(c) / s);
}

template <typename T>
T asd_dpsi(const T& s, double c, double C) {
  using std::sqrt;
  return T(2.0 * C) / (s * sqrt(s * s + T(c * c)));
}

// ---------------------------------------------------------------------------------------------
// The model

struct ALEModel {
  double a = 1.0;
  int gamma_order = 2;
  RadialProfile potential;
  /// Volume factor of the quotient C^2 / Gamma relative to C^2.
  double volume_normalization = 0.5;

  double c() const { return a * a; }
};

/// Closed-form potential phi on the grid. Throws std::invalid_argument for a < 0.
RadialProfile eh_potential(double a, const RadialGrid& grid);
ALEModel make_eh_model(double a, const RadialGrid& grid);
ALEModel make_eh_model(double a);

/// sup over the grid of |4 phi'(phi' + s phi'') - 1|, evaluated in flux form.
double eh_ricci_residual(const ALEModel& model);

/// phi' obtained by RK4 integration of ((s phi')^2)' = s/2 from s = 0, on the given grid.
RadialProfile integrate_radial_ma(double a, const RadialGrid& grid, int substeps = 8);

// ---------------------------------------------------------------------------------------------
// Moment maps

struct FlatMoments {
  double mu0 = 0, nu02 = 0, nu03 = 0;
};
FlatMoments moment_map_flat(std::complex<double> z, std::complex<double> w);

/// nu_{0,alpha}(x) = x^T S_alpha x / 2 with i ddbar nu_{0,alpha} = omega_minus(alpha); nu_{0,1} = mu_0.
Eigen::Matrix4d nu0_matrix(int alpha);
double nu0(int alpha, const Eigen::Vector4d& x);

/// Generating vector field of the flat Hamiltonian nu_{0,alpha}: v with d nu0 = i_v omega0.
Eigen::Vector4d flat_hamiltonian_field(int alpha, const Eigen::Vector4d& x);

/// EH Hamiltonian 2 phi'(s) nu_{0,alpha}(x); alpha = 1 is the circle moment map mu.
/// Throws std::out_of_range when s lies outside the model grid.
double moment_map_eh(const ALEModel& model, const Eigen::Vector4d& x, int alpha = 1);

// ---------------------------------------------------------------------------------------------
// Pointwise geometry of F(x) = A(s) q(x), q = constant + x^T S x / 2

struct RadialDerivatives {
  double d0 = 0, d1 = 0, d2 = 0, d3 = 0;
};

template <typename F>
RadialDerivatives radial_derivatives(F&& f, double s) {
  const Jet<4> j = f(Jet<4>::variable(s));
  return {j.derivative(0), j.derivative(1), j.derivative(2), j.derivative(3)};
}

struct QuadraticFactor {
  double constant = 1.0;
  Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
};

struct PotentialDerivatives {
  double value = 0.0;
  Eigen::Vector4d gradient = Eigen::Vector4d::Zero();
  Eigen::Matrix4d hessian = Eigen::Matrix4d::Zero();
  /// third[c](a, b) = d_a d_b d_c F.
  std::array<Eigen::Matrix4d, 4> third{Eigen::Matrix4d::Zero(), Eigen::Matrix4d::Zero(),
                                       Eigen::Matrix4d::Zero(), Eigen::Matrix4d::Zero()};

  PotentialDerivatives& operator+=(const PotentialDerivatives& o);
  PotentialDerivatives& operator*=(double k);
};

PotentialDerivatives product_derivatives(const RadialDerivatives& A, const QuadraticFactor& q,
                                         const Eigen::Vector4d& x);

/// 2-form i ddbar F from the real Hessian.
Vector6d ddbar_form(const Eigen::Matrix4d& hessian);
/// Riemannian metric of the Kahler form i ddbar F (J-invariant part of the Hessian).
Eigen::Matrix4d kahler_metric(const Eigen::Matrix4d& hessian);

/// A 2-form with its first partial derivatives at a point.
struct FormJet {
  Vector6d value = Vector6d::Zero();
  std::array<Vector6d, 4> partial{Vector6d::Zero(), Vector6d::Zero(), Vector6d::Zero(), Vector6d::Zero()};
};
FormJet ddbar_jet(const PotentialDerivatives& f);

/// Metric, inverse and Levi-Civita connection of the Kahler metric of a potential.
struct PointGeometry {
  Eigen::Matrix4d g = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d ginv = Eigen::Matrix4d::Identity();
  /// christoffel[k](i, j) = Gamma^k_ij.
  std::array<Eigen::Matrix4d, 4> christoffel{Eigen::Matrix4d::Zero(), Eigen::Matrix4d::Zero(),
                                             Eigen::Matrix4d::Zero(), Eigen::Matrix4d::Zero()};
};
PointGeometry point_geometry(const PotentialDerivatives& kahler_potential);
PointGeometry flat_geometry();

/// |nabla alpha|_g for the Levi-Civita connection of geo.
double covariant_derivative_norm(const FormJet& form, const PointGeometry& geo);

/// |*a + a| / max(|a|, floor) in the attached metric.
double asd_check(const TwoFormAtPoint& form, double floor = 1e-14);

/// Point of R^4 with |x|^2 = s and direction given by a unit vector.
Eigen::Vector4d point_at(double s, const Eigen::Vector4d& direction);

// ---------------------------------------------------------------------------------------------
// Anti-self-dual generator

/// psi on the model grid; throws std::invalid_argument unless gamma_order == 2 and a > 0.
RadialProfile asd_potential(const ALEModel& model, double C);

/// C giving self-pairing -l11 (l11 = inverse Cartan entry of A1).
double asd_calibration(double a, double l11);

struct PairingResult {
  /// Simpson quadrature of w w' over the grid, w = s psi'.
  double quadrature = 0;
  /// [w^2/2] between the grid limits.
  double analytic_window = 0;
  /// -2 C^2 / a^4, the value over the whole model.
  double analytic_total = 0;
};
/// (1 / 4 pi^2) times the integral of alpha ^ alpha over the model, alpha = i ddbar psi.
PairingResult asd_self_pairing(const ALEModel& model, double C);

/// Composite Simpson rule on uniformly spaced samples (3/8 rule closes an odd interval count).
double simpson(const Eigen::VectorXd& f, double h);

}  // namespace kummer
