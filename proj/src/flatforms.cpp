#include "kummer/flatforms.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace kummer {

Mat4<Cyclotomic> realify(const ExactMatrix& g) {
  if (g.rows() != 2 || g.cols() != 2) throw std::invalid_argument("realify: expected 2x2 matrix");
  Mat4<Cyclotomic> r;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      const Cyclotomic a = g(j, k).real_part(), b = g(j, k).imag_part();
      r(2 * j, 2 * k) = a;
      r(2 * j, 2 * k + 1) = -b;
      r(2 * j + 1, 2 * k) = b;
      r(2 * j + 1, 2 * k + 1) = a;
    }
  return r;
}

Eigen::Matrix4d realify(const Eigen::Matrix2cd& g) {
  Eigen::Matrix4d r;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      const double a = g(j, k).real(), b = g(j, k).imag();
      r(2 * j, 2 * k) = a;
      r(2 * j, 2 * k + 1) = -b;
      r(2 * j + 1, 2 * k) = b;
      r(2 * j + 1, 2 * k + 1) = a;
    }
  return r;
}

Vector6d gamma_pullback(const Vector6d& form, const Eigen::Matrix2cd& g) {
  return pullback<double>(form, realify(g));
}

Eigen::Matrix4d complex_structure() {
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  j(1, 0) = 1;
  j(0, 1) = -1;
  j(3, 2) = 1;
  j(2, 3) = -1;
  return j;
}

namespace {

int levi_civita(int a, int b, int c, int d) {
  const int p[4] = {a, b, c, d};
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) sign = -sign;
    }
  return sign;
}

Eigen::Matrix4d checked_inverse(const Eigen::Matrix4d& metric, double& det) {
  Eigen::LLT<Eigen::Matrix4d> llt(metric);
  if (llt.info() != Eigen::Success || !metric.allFinite())
    throw NonPositiveMetric("metric is not positive definite");
  const auto l = llt.matrixL();
  det = 1.0;
  for (int i = 0; i < 4; ++i) det *= l(i, i) * l(i, i);
  return llt.solve(Eigen::Matrix4d::Identity());
}

}  // namespace

Vector6d hodge_star(const Vector6d& form, const Eigen::Matrix4d& metric) {
  double det = 0.0;
  const Eigen::Matrix4d ginv = checked_inverse(metric, det);
  const Eigen::Matrix4d a = to_antisymmetric<double>(form);
  const Eigen::Matrix4d raised = ginv * a * ginv;
  const double vol = std::sqrt(det);
  Vector6d out;
  for (int k = 0; k < 6; ++k) {
    const auto [i, j] = kTwoFormIndex[k];
    double acc = 0.0;
    for (int c = 0; c < 4; ++c)
      for (int d = 0; d < 4; ++d) acc += raised(c, d) * levi_civita(c, d, i, j);
    out(k) = 0.5 * vol * acc;
  }
  return out;
}

TwoFormAtPoint hodge_star(const TwoFormAtPoint& form) {
  return {hodge_star(form.components, form.metric), form.metric};
}

Vector6d asd_part(const Vector6d& form, const Eigen::Matrix4d& metric) {
  return 0.5 * (form - hodge_star(form, metric));
}

Vector6d type11_part(const Vector6d& form) {
  return 0.5 * (form + pullback<double>(form, complex_structure()));
}

double form_norm(const Vector6d& form, const Eigen::Matrix4d& metric) {
  double det = 0.0;
  const Eigen::Matrix4d ginv = checked_inverse(metric, det);
  const Eigen::Matrix4d a = to_antisymmetric<double>(form);
  return std::sqrt(std::max(0.0, 0.5 * (a.cwiseProduct(ginv * a * ginv)).sum()));
}

double form_norm(const Vector6d& form) { return form.norm(); }

}  // namespace kummer
