#include "kummer/orbifold.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace kummer {

namespace {

bool lex_less(const RationalVec4& a, const RationalVec4& b) {
  for (int i = 0; i < 4; ++i) {
    const int c = cmp(a(i), b(i));
    if (c != 0) return c < 0;
  }
  return false;
}

struct LexLess {
  bool operator()(const RationalVec4& a, const RationalVec4& b) const { return lex_less(a, b); }
};

bool is_identity(const ExactMatrix& g) { return g == ExactMatrix::Identity(g.rows(), g.cols()); }

int find(const std::vector<ExactMatrix>& set, const ExactMatrix& g) {
  for (std::size_t i = 0; i < set.size(); ++i)
    if (set[i] == g) return static_cast<int>(i);
  return -1;
}

Rational floor_q(const Rational& q) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(f);
}

RationalVec4 apply(const IntegerMat4& g, const RationalVec4& y) {
  RationalVec4 out;
  for (int i = 0; i < 4; ++i) {
    Rational acc = 0;
    for (int j = 0; j < 4; ++j) acc += Rational(g(i, j)) * y(j);
    out(i) = acc;
  }
  return reduce_mod_one(out);
}

std::string describe(const ExactMatrix& g) {
  std::ostringstream os;
  os << "[[" << g(0, 0) << ", " << g(0, 1) << "], [" << g(1, 0) << ", " << g(1, 1) << "]]";
  return os.str();
}

}  // namespace

std::vector<ExactMatrix> generate_group(const std::vector<ExactMatrix>& gens, int order_bound) {
  std::vector<ExactMatrix> elements{ExactMatrix::Identity(2, 2)};
  std::vector<ExactMatrix> frontier = elements;
  int depth = 0;
  while (!frontier.empty()) {
    ++depth;
    std::vector<ExactMatrix> next;
    for (const auto& h : frontier)
      for (const auto& g : gens) {
        ExactMatrix p = g * h;
        if (find(elements, p) >= 0) continue;
        elements.push_back(p);
        next.push_back(std::move(p));
        if (static_cast<int>(elements.size()) > order_bound)
          throw OrbifoldError("group closure exceeded order bound " + std::to_string(order_bound) +
                              " at word length " + std::to_string(depth));
      }
    frontier = std::move(next);
  }
  return elements;
}

bool is_special_unitary(const ExactMatrix& g) {
  if (g.rows() != 2 || g.cols() != 2) return false;
  return ExactMatrix(g * adjoint(g)) == ExactMatrix::Identity(2, 2) && exact_determinant(g) == Cyclotomic(1);
}

int element_order(const ExactMatrix& g, int bound) {
  ExactMatrix p = g;
  for (int k = 1; k <= bound; ++k) {
    if (is_identity(p)) return k;
    p = p * g;
  }
  throw OrbifoldError("element order exceeds bound " + std::to_string(bound));
}

Mat4<Cyclotomic> real_lattice_basis(const ExactMatrix& lattice_basis) {
  if (lattice_basis.rows() != 2 || lattice_basis.cols() != 4)
    throw OrbifoldError("lattice basis must be four vectors in C^2");
  Mat4<Cyclotomic> b;
  for (int j = 0; j < 4; ++j)
    for (int c = 0; c < 2; ++c) {
      b(2 * c, j) = lattice_basis(c, j).real_part();
      b(2 * c + 1, j) = lattice_basis(c, j).imag_part();
    }
  if (exact_rank(b) < 4) throw OrbifoldError("lattice basis has real rank below 4");
  return b;
}

Mat4<Cyclotomic> lattice_action(const Mat4<Cyclotomic>& basis, const ExactMatrix& g) {
  return Mat4<Cyclotomic>(exact_inverse(basis) * realify(g) * basis);
}

bool check_compatibility(const LatticeGroupPair& pair) {
  generate_group(pair.generators);
  const Mat4<Cyclotomic> b = real_lattice_basis(pair.lattice_basis);
  for (const auto& g : pair.generators) {
    const Mat4<Cyclotomic> a = lattice_action(b, g);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (!a(i, j).is_rational()) return false;
        if (a(i, j).to_rational().get_den() != 1) return false;
      }
  }
  return true;
}

std::vector<IntegerMat4> lattice_group(const LatticeGroupPair& pair, const std::vector<ExactMatrix>& group) {
  const Mat4<Cyclotomic> b = real_lattice_basis(pair.lattice_basis);
  std::vector<IntegerMat4> out;
  out.reserve(group.size());
  for (const auto& g : group) {
    const Mat4<Cyclotomic> a = lattice_action(b, g);
    IntegerMat4 m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (!a(i, j).is_rational() || a(i, j).to_rational().get_den() != 1)
          throw OrbifoldError("element " + describe(g) + " does not preserve the lattice");
        m(i, j) = a(i, j).to_rational().get_num();
      }
    out.push_back(m);
  }
  return out;
}

RationalVec4 reduce_mod_one(const RationalVec4& y) {
  RationalVec4 out;
  for (int i = 0; i < 4; ++i) out(i) = y(i) - floor_q(y(i));
  return out;
}

std::vector<RationalVec4> fixed_points(const IntegerMat4& g_lattice) {
  IntegerMatrix m = g_lattice - IntegerMat4::Identity();
  if (is_zero(exact_determinant(RationalMatrix(m.cast<Rational>()))))
    throw OrbifoldError("non-isolated fixed locus");
  const SmithForm sf = smith_normal_form(m);
  // (G - I) y in Z^4 with y = V z reduces to D z in Z^4.
  std::array<long, 4> d{};
  for (int i = 0; i < 4; ++i) d[i] = sf.D(i, i).get_si();
  std::vector<RationalVec4> out;
  std::array<long, 4> k{};
  while (true) {
    RationalVec4 z;
    for (int i = 0; i < 4; ++i) z(i) = Rational(k[i], d[i]);
    RationalVec4 y;
    for (int i = 0; i < 4; ++i) {
      Rational acc = 0;
      for (int j = 0; j < 4; ++j) acc += Rational(sf.V(i, j)) * z(j);
      y(i) = acc;
    }
    for (auto& q : y) q.canonicalize();
    out.push_back(reduce_mod_one(y));
    int i = 0;
    while (i < 4 && ++k[i] == d[i]) k[i++] = 0;
    if (i == 4) break;
  }
  return out;
}

RationalVec4 canonical_representative(const std::vector<IntegerMat4>& group_lattice, const RationalVec4& y) {
  RationalVec4 best = reduce_mod_one(y);
  for (const auto& g : group_lattice) {
    RationalVec4 c = apply(g, y);
    if (lex_less(c, best)) best = c;
  }
  return best;
}

RationalVec4 to_lattice_coords(const LatticeGroupPair& pair, const Eigen::Matrix<Cyclotomic, 2, 1>& point) {
  const Mat4<Cyclotomic> b = real_lattice_basis(pair.lattice_basis);
  Eigen::Matrix<Cyclotomic, 4, 1> x;
  x << point(0).real_part(), point(0).imag_part(), point(1).real_part(), point(1).imag_part();
  const VecX<Cyclotomic> y = exact_inverse(b) * x;
  RationalVec4 out;
  for (int i = 0; i < 4; ++i) {
    if (!y(i).is_rational()) throw OrbifoldError("point has irrational lattice coordinates");
    out(i) = y(i).to_rational();
  }
  return out;
}

StabilizerType classify_su2_subgroup(const std::vector<ExactMatrix>& group) {
  const int m = static_cast<int>(group.size());
  int max_order = 1;
  for (const auto& g : group) max_order = std::max(max_order, element_order(g));
  StabilizerType t;
  t.order = m;
  if (max_order == m) {
    t.kind = StabilizerKind::Cyclic;
    t.ade = "A" + std::to_string(m - 1);
    t.group = "Z" + std::to_string(m);
    t.rank = m - 1;
  } else if (m == 24 && max_order == 6) {
    t = {StabilizerKind::BinaryTetrahedral, m, "E6", "BT", 6};
  } else if (m == 48 && max_order == 8) {
    t = {StabilizerKind::BinaryOctahedral, m, "E7", "BO", 7};
  } else if (m == 120 && max_order == 10) {
    t = {StabilizerKind::BinaryIcosahedral, m, "E8", "BI", 8};
  } else if (m % 4 == 0 && max_order == m / 2) {
    const int k = m / 4;
    t = {StabilizerKind::BinaryDihedral, m, "D" + std::to_string(k + 2), "BD" + std::to_string(m), k + 2};
  } else {
    throw OrbifoldError("group of order " + std::to_string(m) + " is not a finite subgroup of SU(2)");
  }
  return t;
}

std::vector<SingularPoint> enumerate_singular_points(const LatticeGroupPair& pair, int order_bound) {
  for (const auto& g : pair.generators)
    if (!is_special_unitary(g)) throw OrbifoldError("generator " + describe(g) + " is not in SU(2)");
  const auto group = generate_group(pair.generators, order_bound);
  if (group.size() < 2) throw OrbifoldError("Gamma nontrivial required");
  for (const auto& g : pair.generators) {
    LatticeGroupPair single{pair.lattice_basis, {g}};
    if (!check_compatibility(single))
      throw OrbifoldError("generator " + describe(g) + " does not preserve the lattice");
  }
  const auto lat = lattice_group(pair, group);

  std::set<RationalVec4, LexLess> all;
  for (std::size_t i = 1; i < group.size(); ++i)
    for (auto& y : fixed_points(lat[i])) all.insert(y);

  std::vector<SingularPoint> out;
  while (!all.empty()) {
    const RationalVec4 y = *all.begin();
    for (const auto& g : lat) all.erase(apply(g, y));
    SingularPoint p;
    p.lattice_coords = y;
    for (int c = 0; c < 2; ++c) {
      Cyclotomic acc(0);
      for (int j = 0; j < 4; ++j) acc += Cyclotomic(y(j)) * pair.lattice_basis(c, j);
      p.representative(c) = acc;
    }
    for (std::size_t i = 0; i < group.size(); ++i)
      if (apply(lat[i], y) == y) p.stabilizer.push_back(group[i]);
    p.type = classify_su2_subgroup(p.stabilizer);
    out.push_back(std::move(p));
  }
  return out;
}

int invariant_asd_dimension(const std::vector<ExactMatrix>& group) {
  Eigen::Matrix<Cyclotomic, 3, 3> avg = Eigen::Matrix<Cyclotomic, 3, 3>::Zero();
  for (const auto& g : group) avg += asd_block(realify(g));
  avg /= Cyclotomic(static_cast<long>(group.size()));
  return static_cast<int>(exact_rank(avg));
}

int invariant_asd_dimension(const LatticeGroupPair& pair) {
  return invariant_asd_dimension(generate_group(pair.generators));
}

int count_nontrivial_irreps(const std::vector<ExactMatrix>& group) {
  std::vector<bool> seen(group.size(), false);
  int classes = 0;
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (seen[i]) continue;
    ++classes;
    for (const auto& h : group) {
      const int j = find(group, ExactMatrix(h * group[i] * adjoint(h)));
      if (j >= 0) seen[j] = true;
    }
  }
  return classes - 1;
}

K3Count k3_count(const LatticeGroupPair& pair) {
  K3Count c;
  c.d_gamma = invariant_asd_dimension(pair);
  for (const auto& p : enumerate_singular_points(pair)) c.singular_sum += count_nontrivial_irreps(p.stabilizer);
  return c;
}

}  // namespace kummer
