#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include <Eigen/LU>

#include "kummer/flatforms.hpp"

using namespace kummer;

namespace {

Eigen::Matrix4d random_metric(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Matrix4d a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = n(rng);
  return a * a.transpose() + 0.5 * Eigen::Matrix4d::Identity();
}

Vector6d random_form(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector6d v;
  for (int i = 0; i < 6; ++i) v(i) = n(rng);
  return v;
}

Eigen::Matrix2cd random_su2(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::complex<double> a(n(rng), n(rng)), b(n(rng), n(rng));
  const double r = std::sqrt(std::norm(a) + std::norm(b));
  a /= r;
  b /= r;
  Eigen::Matrix2cd g;
  g << a, -std::conj(b), b, std::conj(a);
  return g;
}

}  // namespace

TEST_CASE("hodge star on the flat metric") {
  const Eigen::Matrix4d id = Eigen::Matrix4d::Identity();
  for (int a = 1; a <= 3; ++a) CHECK((hodge_star(omega_minus(a), id) + omega_minus(a)).norm() < 1e-15);
  CHECK((hodge_star(omega0(), id) - omega0()).norm() < 1e-15);
  CHECK((hodge_star(re_omega0(), id) - re_omega0()).norm() < 1e-15);
  CHECK((hodge_star(im_omega0(), id) - im_omega0()).norm() < 1e-15);
  TwoFormAtPoint f{omega_minus(1), id};
  CHECK((hodge_star(f).components + omega_minus(1)).norm() < 1e-15);
}

TEST_CASE("hodge star is an involution and conformally invariant") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Matrix4d g = random_metric(rng);
    const Vector6d a = random_form(rng);
    const Vector6d sa = hodge_star(a, g);
    CHECK((hodge_star(sa, g) - a).norm() < 1e-10 * (1 + a.norm()));
    CHECK((hodge_star(a, 3.7 * g) - sa).norm() < 1e-10 * (1 + sa.norm()));
    CHECK((asd_part(a, 0.2 * g) - asd_part(a, g)).norm() < 1e-10 * (1 + a.norm()));
    // a ^ *a = |a|^2 vol
    CHECK(wedge<double>(a, sa) ==
          doctest::Approx(form_norm(a, g) * form_norm(a, g) * std::sqrt(g.determinant())).epsilon(1e-9));
  }
}

TEST_CASE("non-positive metric is rejected") {
  Eigen::Matrix4d g = Eigen::Matrix4d::Identity();
  g(3, 3) = -1;
  CHECK_THROWS_AS(hodge_star(omega0(), g), NonPositiveMetric);
  g(3, 3) = 0;
  CHECK_THROWS_AS(form_norm(omega0(), g), NonPositiveMetric);
}

TEST_CASE("gamma pullback") {
  const Eigen::Matrix2cd minus_one = -Eigen::Matrix2cd::Identity();
  std::mt19937 rng(11);
  const Vector6d a = random_form(rng);
  CHECK((gamma_pullback(a, minus_one) - a).norm() < 1e-15);

  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = {0, 1};
  d(1, 1) = {0, -1};
  CHECK((gamma_pullback(omega_minus(2), d) + omega_minus(2)).norm() < 1e-14);
  CHECK((gamma_pullback(omega_minus(3), d) + omega_minus(3)).norm() < 1e-14);
  CHECK((gamma_pullback(omega_minus(1), d) - omega_minus(1)).norm() < 1e-14);

  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Matrix2cd g = random_su2(rng);
    CHECK((gamma_pullback(omega0(), g) - omega0()).norm() < 1e-12);
    CHECK((gamma_pullback(re_omega0(), g) - re_omega0()).norm() < 1e-12);
    CHECK((gamma_pullback(im_omega0(), g) - im_omega0()).norm() < 1e-12);
    const Eigen::Matrix3d rho = asd_block<double>(realify(g));
    CHECK((rho.transpose() * rho - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(rho.determinant() == doctest::Approx(1.0));
  }
}

TEST_CASE("exact asd block matches float evaluation") {
  ExactMatrix g(2, 2);
  // Generators from the worked examples and a conductor-8 rotation.
  std::vector<ExactMatrix> gens;
  g << Cyclotomic::i(), 0, 0, -Cyclotomic::i();
  gens.push_back(g);
  g << 0, -1, 1, 0;
  gens.push_back(g);
  g << Cyclotomic::zeta(8), 0, 0, Cyclotomic::zeta(8, 7);
  gens.push_back(g);
  g << Cyclotomic::zeta(3), 0, 0, Cyclotomic::zeta(3, 2);
  gens.push_back(g);
  for (const auto& e : gens) {
    const Mat4<Cyclotomic> r = realify(e);
    const Eigen::Matrix<Cyclotomic, 3, 3> rho = asd_block(r);
    const Eigen::Matrix3d rho_f = asd_block<double>(realify(Eigen::Matrix2cd(embed(e))));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(rho(i, j).embed() - rho_f(i, j)) < 1e-12);
        CHECK(std::abs(rho(i, j).embed().imag()) < 1e-15);
      }
    // Exact orthogonality.
    CHECK(Eigen::Matrix<Cyclotomic, 3, 3>(rho.transpose() * rho) ==
          Eigen::Matrix<Cyclotomic, 3, 3>::Identity());
  }
}

TEST_CASE("pointwise wedge identities") {
  const double w00 = wedge<double>(omega0(), omega0());
  CHECK(w00 == 2.0);
  CHECK(wedge<double>(re_omega0(), re_omega0()) == w00);
  CHECK(wedge<double>(im_omega0(), im_omega0()) == w00);
  CHECK(wedge<double>(omega0(), re_omega0()) == 0.0);
  CHECK(wedge<double>(omega0(), im_omega0()) == 0.0);
  CHECK(wedge<double>(re_omega0(), im_omega0()) == 0.0);
  for (int a = 1; a <= 3; ++a) {
    CHECK(wedge<double>(omega_minus(a), omega_minus(a)) == -w00);
    CHECK(wedge<double>(omega_minus(a), omega0()) == 0.0);
  }
}

TEST_CASE("type (1,1) projector") {
  CHECK((type11_part(omega0()) - omega0()).norm() == 0.0);
  CHECK(type11_part(re_omega0()).norm() == 0.0);
  CHECK(type11_part(im_omega0()).norm() == 0.0);
  CHECK((type11_part(omega_minus(1)) - omega_minus(1)).norm() == 0.0);
  CHECK((type11_part(omega_minus(2)) - omega_minus(2)).norm() == 0.0);
}

TEST_CASE("norms") {
  CHECK(form_norm(omega0()) == doctest::Approx(std::sqrt(2.0)));
  CHECK(form_norm(omega0(), Eigen::Matrix4d::Identity()) == doctest::Approx(std::sqrt(2.0)));
  CHECK(form_norm(omega0(), 4.0 * Eigen::Matrix4d::Identity()) == doctest::Approx(std::sqrt(2.0) / 4.0));
}
