#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/LU>

#include "kummer/cohomled.hpp"

using namespace kummer;

namespace {

const Cyclotomic I = Cyclotomic::i();

ExactMatrix mat2(const Cyclotomic& a, const Cyclotomic& b, const Cyclotomic& c, const Cyclotomic& d) {
  ExactMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

ExactMatrix square_lattice() {
  ExactMatrix b(2, 4);
  b << 1, I, 0, 0, 0, 0, 1, I;
  return b;
}

std::vector<LatticeGroupPair> worked_examples() {
  return {{square_lattice(), {mat2(-1, 0, 0, -1)}},
          {square_lattice(), {mat2(I, 0, 0, -I)}},
          {square_lattice(), {mat2(I, 0, 0, -I), mat2(0, -1, 1, 0)}}};
}

IntersectionData single_a1(const Rational& vol = 1) {
  CohomBasis b;
  b.singular = {DynkinType{'A', 1}};
  return make_intersection_data(b, vol);
}

Eigen::MatrixXd to_double(const RationalMatrix& m) {
  Eigen::MatrixXd d(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) d(i, j) = m(i, j).get_d();
  return d;
}

}  // namespace

TEST_CASE("Dynkin labels") {
  CHECK(DynkinType::parse("A3") == DynkinType{'A', 3});
  CHECK(DynkinType::parse("D4").label() == "D4");
  CHECK(DynkinType::parse("E8").rank == 8);
  for (const char* bad : {"A0", "D3", "E9", "B2", "A", "A1x", ""})
    CHECK_THROWS_AS(DynkinType::parse(bad), std::invalid_argument);
}

TEST_CASE("inverse Cartan matrices") {
  CHECK(cartan_inverse({'A', 1})(0, 0) == Rational(1, 2));
  const RationalMatrix a3 = cartan_inverse({'A', 3});
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) CHECK(a3(i - 1, j - 1) == Rational(std::min(i, j) * (4 - std::max(i, j))) / 4);
  // D4 with central node 1: centre 2, centre-leaf 1, leaf 1, leaf-leaf 1/2.
  const RationalMatrix d4 = cartan_inverse({'D', 4});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Rational expect = (i == 1 || j == 1) ? Rational(1) : (i == j ? Rational(1) : Rational(1, 2));
      if (i == 1 && j == 1) expect = 2;
      CHECK(d4(i, j) == expect);
    }
  // Determinants of the Cartan matrices: n + 1, 4, 3, 2, 1.
  for (int n = 1; n <= 8; ++n) CHECK(exact_determinant(cartan_matrix({'A', n})) == n + 1);
  for (int n = 4; n <= 8; ++n) CHECK(exact_determinant(cartan_matrix({'D', n})) == 4);
  CHECK(exact_determinant(cartan_matrix({'E', 6})) == 3);
  CHECK(exact_determinant(cartan_matrix({'E', 7})) == 2);
  CHECK(exact_determinant(cartan_matrix({'E', 8})) == 1);
}

TEST_CASE("c1 classes dual to the exceptional curves") {
  // Write c1_i = sum_k A_ik PD(E_k) with c1_i . E_j = delta_ij and E_k . E_j = -C_kj, solve for A in double
  // precision and compare c1_i . c1_j = (A (-C) A^T)_ij with -L.
  for (const DynkinType t : {DynkinType{'A', 1}, DynkinType{'A', 4}, DynkinType{'D', 4}, DynkinType{'D', 6},
                             DynkinType{'E', 6}, DynkinType{'E', 7}, DynkinType{'E', 8}}) {
    const Eigen::MatrixXd c = to_double(cartan_matrix(t));
    const Eigen::MatrixXd a = (-c).transpose().lu().solve(Eigen::MatrixXd::Identity(t.rank, t.rank)).transpose();
    const Eigen::MatrixXd pairing = a * (-c) * a.transpose();
    CHECK((pairing + to_double(cartan_inverse(t))).cwiseAbs().maxCoeff() < 1e-12);
  }
  // A1 by hand: c1 = -PD(E)/2, c1^2 = -1/2.
  const auto d = single_a1();
  CHECK(cup_product(d.Q, d.Q, d) == Rational(-1, 2));
}

TEST_CASE("cup product table") {
  CohomBasis b;
  b.d_gamma = 2;
  b.singular = {DynkinType{'A', 1}, DynkinType{'A', 3}, DynkinType{'D', 4}};
  const Rational vol(7, 3);
  const auto d = make_intersection_data(b, vol);
  REQUIRE(b.dimension() == 3 + 2 + 1 + 3 + 4);
  CHECK(b.asd_dimension() == 10);
  auto e = [&](int i) { return basis_vector(b, i); };
  for (int i = 0; i < 3; ++i) CHECK(cup_product(e(i), e(i), d) == vol);
  CHECK(cup_product(e(0), e(1), d) == 0);
  CHECK(cup_product(e(3), e(3), d) == -vol);
  CHECK(cup_product(e(3), e(4), d) == 0);
  // Bubble classes of different points are orthogonal; omega_0 pairs trivially with all of them.
  CHECK(cup_product(e(5), e(6), d) == 0);
  CHECK(cup_product(e(7), e(10), d) == 0);
  for (int i = 5; i < b.dimension(); ++i) {
    CHECK(cup_product(e(0), e(i), d) == 0);
    CHECK(cup_product(e(3), e(i), d) == 0);
  }
  CHECK(cup_product(e(6), e(7), d) == -cartan_inverse({'A', 3})(0, 1));
  CHECK(cup_product(e(10), e(10), d) == -2);
  // Bilinearity and symmetry on mixed classes.
  const CohomClass x = 3 * e(0) - e(6) + Rational(1, 2) * e(10);
  const CohomClass y = e(1) + 2 * e(6) - e(11);
  CHECK(cup_product(x, y, d) == cup_product(y, x, d));
  CHECK(cup_product(x + y, y, d) == cup_product(x, y, d) + cup_product(y, y, d));
  const RationalMatrix m = cup_matrix(d);
  CHECK(cup_product(x, y, d) == (x.transpose() * m * y)(0, 0));
  CHECK_THROWS_AS(cup_product(x, CohomClass::Zero(4), d), std::invalid_argument);
  CHECK(d.Q.segment(6, 3) == RationalVector::Ones(3));
}

TEST_CASE("intersection data validation") {
  CohomBasis b;
  b.singular = {DynkinType{'A', 2}};
  CHECK_THROWS_AS(make_intersection_data(b, 0), LedgerError);
  CHECK_THROWS_AS(make_intersection_data(b, 1, {RationalVector::Ones(3)}), LedgerError);
  CHECK_THROWS_AS(make_intersection_data(b, 1, {RationalVector::Ones(2), RationalVector::Ones(1)}), LedgerError);
  RationalVector eta(2);
  eta << 2, Rational(-1, 3);
  const auto d = make_intersection_data(b, 1, {eta});
  // Q^2 = -eta^T L eta with L = [[2, 1], [1, 2]] / 3.
  CHECK(cup_product(d.Q, d.Q, d) == -(Rational(8, 3) - Rational(4, 9) + Rational(2, 27)));
}

TEST_CASE("volume normalization") {
  const auto single = single_a1();
  CHECK(w_epsilon(single, 0) == 1);
  for (const Rational eps : {Rational(1, 2), Rational(1, 4), Rational(1, 10)}) {
    CHECK(w_epsilon(single, eps) == 1 - eps * eps * eps * eps / 2);
    const auto d = single_a1(5);
    CHECK(1 - w_epsilon(d, eps) == eps * eps * eps * eps * Rational(1, 2) / 5);
  }
}

TEST_CASE("harmonic classes") {
  const auto d = single_a1();
  const auto h0 = harmonic_classes(d, 0);
  CHECK(h0.omega_tilde.cls == basis_vector(d.basis, 0));
  CHECK(h0.omega_tilde.norm_sq == 1);
  CHECK(h0.xi[0] == basis_vector(d.basis, 3));
  CHECK(h0.lambda_xi[0].value == 0);

  const auto h = harmonic_classes(d, Rational(1, 2));
  CHECK(h.xi[0] == basis_vector(d.basis, 3) + Rational(1, 8) * basis_vector(d.basis, 0));
  // [omega_tilde]^2 = vol_T once normalized.
  CHECK(cup_product(h.omega_tilde.cls, h.omega_tilde.cls, d) / h.omega_tilde.norm_sq == d.vol_T);

  CohomBasis b;
  b.d_gamma = 1;
  b.singular = {DynkinType{'A', 3}, DynkinType{'A', 1}, DynkinType{'D', 4}};
  RationalVector eta(3);
  eta << 1, Rational(2, 3), 5;
  const auto g = make_intersection_data(b, 16, {eta, RationalVector::Ones(1), RationalVector::Ones(4)});
  std::vector<CohomClass> minus0;
  for (const Rational eps : {Rational(1, 2), Rational(1, 4), Rational(1, 10)}) {
    const auto hc = harmonic_classes(g, eps);
    if (minus0.empty()) minus0 = hc.omega_minus;
    CHECK(hc.omega_minus == minus0);
    for (const auto& l : hc.lambda_minus) CHECK(l == 0);
    // Anti-self-dual classes pair trivially with the self-dual ones.
    for (const auto& c : hc.asd_classes()) {
      CHECK(cup_product(c, hc.omega_tilde.cls, g) == 0);
      CHECK(cup_product(c, hc.re_omega, g) == 0);
      CHECK(cup_product(c, hc.im_omega, g) == 0);
    }
    CHECK(hc.xi == xi_classes_from_combination(g, eps));
    // lambda sqrt(W) = eps^4 (L eta)_i / vol_T.
    const Rational e4 = eps * eps * eps * eps;
    const RationalVector leta = g.L[0] * eta;
    for (int i = 0; i < 3; ++i) CHECK(hc.lambda_xi[i].value == e4 * leta(i) / 16);
    CHECK(hc.lambda_xi[0].norm_sq == w_epsilon(g, eps));
  }
  // 1 + eps^4 Q^2 / vol_T <= 0.
  CHECK_THROWS_AS(harmonic_classes(single_a1(Rational(1, 32)), Rational(1, 2)), LedgerError);
}

TEST_CASE("Gram matrix") {
  CohomBasis b;
  b.d_gamma = 3;
  b.singular.assign(16, DynkinType{'A', 1});
  const auto d = make_intersection_data(b, 16);
  const RationalMatrix g0 = gram_matrix(d, 0);
  REQUIRE(g0.rows() == 19);
  RationalMatrix block = RationalMatrix::Zero(19, 19);
  for (int i = 0; i < 3; ++i) block(i, i) = 16;
  for (int i = 3; i < 19; ++i) block(i, i) = Rational(1, 2);
  CHECK(g0 == block);
  CHECK(negative_cup_gram(d, 0) == g0);
  for (const Rational eps : {Rational(1, 2), Rational(1, 4), Rational(1, 10)}) {
    const Rational e4 = eps * eps * eps * eps;
    const RationalMatrix g = gram_matrix(d, eps);
    CHECK(g == g.transpose());
    CHECK(exact_positive_definite(g));
    CHECK(g(3, 4) == e4 * Rational(1, 4) / 16);
    CHECK(g(3, 3) == Rational(1, 2) + e4 * Rational(1, 4) / 16);
    for (int a = 0; a < 3; ++a)
      for (int j = 3; j < 19; ++j) CHECK(g(a, j) == 0);
    // The cup pairing of the classes carries the eps^4 term with the opposite sign.
    const RationalMatrix ng = negative_cup_gram(d, eps);
    CHECK(exact_positive_definite(ng));
    CHECK(ng(3, 4) == -g(3, 4));
    CHECK(g - ng == 2 * (g - block));
  }
}

TEST_CASE("worked examples") {
  const auto pairs = worked_examples();
  const std::vector<std::vector<std::string>> types{{"A1"}, {"A3", "A1"}, {"D4", "A3", "A1"}};
  const std::vector<Rational> vols{1, Rational(1, 2), Rational(1, 4)};
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const CohomBasis b = basis_from_orbifold(pairs[k]);
    CHECK(b.dimension() == 22);
    CHECK(b.asd_dimension() == 19);
    for (const auto& t : b.singular) {
      bool known = false;
      for (const auto& s : types[k]) known |= t.label() == s;
      CHECK(known);
    }
    CHECK(default_volume(pairs[k]) == vols[k]);
    const auto d = make_intersection_data(b, 16);
    for (const Rational eps : {Rational(1, 2), Rational(1, 4), Rational(1, 10)}) {
      CHECK(exact_positive_definite(gram_matrix(d, eps)));
      CHECK(sgn(w_epsilon(d, eps)) > 0);
    }
  }
  // Q^2 for the Z4 example: 4 A3 points (eta^T L eta = 5) and 6 A1 points.
  const auto z4 = make_intersection_data(basis_from_orbifold(pairs[1]), 16);
  CHECK(cup_product(z4.Q, z4.Q, z4) == -23);
  // With the lattice volume 1/2 the normalizer is negative at eps = 1/2.
  const auto z4_lattice = make_intersection_data(basis_from_orbifold(pairs[1]), default_volume(pairs[1]));
  CHECK(w_epsilon(z4_lattice, Rational(1, 2)) == Rational(-15, 8));
  CHECK_THROWS_AS(harmonic_classes(z4_lattice, Rational(1, 2)), LedgerError);
}

TEST_CASE("report") {
  const auto d = single_a1();
  CHECK(rational_string(Rational(-3, 4)) == "-3/4");
  CHECK(rational_string(Rational(2)) == "2/1");
  const std::string r = ledger_report(d, {Rational(1, 2)});
  CHECK(r.find("dimension = 4") != std::string::npos);
  CHECK(r.find("W = 31/32") != std::string::npos);
  CHECK(r.find("gram_positive_definite = yes") != std::string::npos);
  CHECK(r == ledger_report(d, {Rational(1, 2)}));
}
