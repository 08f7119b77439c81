#pragma once

// Constant 2-forms on R^4 = C^2 with (z, w) = (x1 + i x2, x3 + i x4).
// Component order: dx12, dx13, dx14, dx23, dx24, dx34. Orientation dx1234.

#include <array>
#include <complex>

#include <Eigen/Core>

#include "kummer/exactalg.hpp"

namespace kummer {

template <typename Scalar>
using TwoFormVec = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar>
using Mat4 = Eigen::Matrix<Scalar, 4, 4>;

using Vector6d = Eigen::Matrix<double, 6, 1>;

inline constexpr std::array<std::array<int, 2>, 6> kTwoFormIndex{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

template <typename Scalar>
Mat4<Scalar> to_antisymmetric(const TwoFormVec<Scalar>& a) {
  Mat4<Scalar> m = Mat4<Scalar>::Zero();
  for (int k = 0; k < 6; ++k) {
    const auto [i, j] = kTwoFormIndex[k];
    m(i, j) = a(k);
    m(j, i) = -a(k);
  }
  return m;
}

template <typename Derived>
TwoFormVec<typename Derived::Scalar> from_antisymmetric(const Eigen::MatrixBase<Derived>& m) {
  TwoFormVec<typename Derived::Scalar> a;
  for (int k = 0; k < 6; ++k) a(k) = m(kTwoFormIndex[k][0], kTwoFormIndex[k][1]);
  return a;
}

template <typename Scalar>
TwoFormVec<Scalar> make_form(int a12, int a13, int a14, int a23, int a24, int a34) {
  TwoFormVec<Scalar> v;
  v << Scalar(a12), Scalar(a13), Scalar(a14), Scalar(a23), Scalar(a24), Scalar(a34);
  return v;
}

/// Kahler form (i/2)(dz dzbar + dw dwbar).
template <typename Scalar = double>
TwoFormVec<Scalar> omega0() { return make_form<Scalar>(1, 0, 0, 0, 0, 1); }
/// Real and imaginary parts of dz dw.
template <typename Scalar = double>
TwoFormVec<Scalar> re_omega0() { return make_form<Scalar>(0, 1, 0, 0, -1, 0); }
template <typename Scalar = double>
TwoFormVec<Scalar> im_omega0() { return make_form<Scalar>(0, 0, 1, 1, 0, 0); }

/// Anti-self-dual basis, alpha = 1, 2, 3.
template <typename Scalar = double>
TwoFormVec<Scalar> omega_minus(int alpha) {
  switch (alpha) {
    case 1: return make_form<Scalar>(1, 0, 0, 0, 0, -1);
    case 2: return make_form<Scalar>(0, 1, 0, 0, 1, 0);
    case 3: return make_form<Scalar>(0, 0, 1, -1, 0, 0);
  }
  throw std::out_of_range("omega_minus: alpha must be 1, 2 or 3");
}

/// Coefficient of dx1234 in a ^ b.
template <typename Scalar>
Scalar wedge(const TwoFormVec<Scalar>& a, const TwoFormVec<Scalar>& b) {
  return a(0) * b(5) - a(1) * b(4) + a(2) * b(3) + a(3) * b(2) - a(4) * b(1) + a(5) * b(0);
}

/// Pullback of a constant form under the linear map x -> A x.
template <typename Scalar>
TwoFormVec<Scalar> pullback(const TwoFormVec<Scalar>& form, const Mat4<Scalar>& A) {
  const Mat4<Scalar> m = to_antisymmetric(form);
  return from_antisymmetric(Mat4<Scalar>(A.transpose() * m * A));
}

/// Real 4x4 matrix of a complex 2x2 matrix acting on (z, w).
Mat4<Cyclotomic> realify(const ExactMatrix& g);
Eigen::Matrix4d realify(const Eigen::Matrix2cd& g);

/// Matrix of the pullback on span{omega_minus(1..3)}; column alpha is the image of omega_minus(alpha).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> asd_block(const Mat4<Scalar>& A) {
  Eigen::Matrix<Scalar, 3, 3> rho;
  for (int a = 0; a < 3; ++a) {
    const TwoFormVec<Scalar> img = pullback(omega_minus<Scalar>(a + 1), A);
    for (int b = 0; b < 3; ++b) {
      const TwoFormVec<Scalar> basis = omega_minus<Scalar>(b + 1);
      Scalar dot(0);
      for (int k = 0; k < 6; ++k) dot = dot + img(k) * basis(k);
      rho(b, a) = dot / Scalar(2);
    }
  }
  return rho;
}

template <typename Scalar>
TwoFormVec<Scalar> gamma_pullback(const TwoFormVec<Scalar>& form, const Mat4<Scalar>& g_real) {
  return pullback(form, g_real);
}
Vector6d gamma_pullback(const Vector6d& form, const Eigen::Matrix2cd& g);

/// Complex structure on R^4: J e1 = e2, J e3 = e4.
Eigen::Matrix4d complex_structure();

struct NonPositiveMetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Real 2-form with the metric needed for its Hodge star.
struct TwoFormAtPoint {
  Vector6d components = Vector6d::Zero();
  Eigen::Matrix4d metric = Eigen::Matrix4d::Identity();
};

Vector6d hodge_star(const Vector6d& form, const Eigen::Matrix4d& metric);
TwoFormAtPoint hodge_star(const TwoFormAtPoint& form);

/// Projectors onto anti-self-dual forms and onto J-invariant (type (1,1)) forms.
Vector6d asd_part(const Vector6d& form, const Eigen::Matrix4d& metric);
Vector6d type11_part(const Vector6d& form);

/// Pointwise norm |a|_g with the convention |dx12|_flat = 1.
double form_norm(const Vector6d& form, const Eigen::Matrix4d& metric);
double form_norm(const Vector6d& form);

}  // namespace kummer
