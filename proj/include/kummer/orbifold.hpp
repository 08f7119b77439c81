#pragma once

// Singular set of T^4 / Gamma for a lattice Lambda in C^2 and a finite Gamma in SU(2).

#include <string>
#include <vector>

#include "kummer/exactalg.hpp"
#include "kummer/flatforms.hpp"

namespace kummer {

using RationalVec4 = Eigen::Matrix<Rational, 4, 1>;
using IntegerMat4 = Eigen::Matrix<Integer, 4, 4>;

struct LatticeGroupPair {
  /// 2x4, column j is the j-th basis vector of Lambda in C^2.
  ExactMatrix lattice_basis;
  std::vector<ExactMatrix> generators;
};

struct OrbifoldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultGroupBound = 120;

/// All elements of the group generated by gens (identity first). Throws OrbifoldError
/// when the closure exceeds order_bound, naming the word length reached.
std::vector<ExactMatrix> generate_group(const std::vector<ExactMatrix>& gens,
                                        int order_bound = kDefaultGroupBound);

/// Exact SU(2) membership: unitary with determinant one.
bool is_special_unitary(const ExactMatrix& g);

/// Order of g, searching powers up to bound.
int element_order(const ExactMatrix& g, int bound = kDefaultGroupBound);

/// 4x4 realified basis of Lambda; throws OrbifoldError if the rank is below 4.
Mat4<Cyclotomic> real_lattice_basis(const ExactMatrix& lattice_basis);

/// Matrix of g in lattice coordinates (B^-1 g_R B); entries may be non-integral.
Mat4<Cyclotomic> lattice_action(const Mat4<Cyclotomic>& basis, const ExactMatrix& g);

bool check_compatibility(const LatticeGroupPair& pair);

enum class StabilizerKind { Cyclic, BinaryDihedral, BinaryTetrahedral, BinaryOctahedral, BinaryIcosahedral };

struct StabilizerType {
  StabilizerKind kind = StabilizerKind::Cyclic;
  int order = 1;
  /// ADE label of the resolution graph: A_{m-1}, D_{k+2}, E6, E7, E8.
  std::string ade;
  /// Group label: Z_m, BD_{4k}, BT, BO, BI.
  std::string group;
  int rank = 0;
};

/// Isomorphism type of a finite subgroup of SU(2), from its order and largest element order.
StabilizerType classify_su2_subgroup(const std::vector<ExactMatrix>& group);

struct SingularPoint {
  /// Coordinates in the lattice basis, each in [0, 1).
  RationalVec4 lattice_coords;
  /// The point in C^2, taken mod Lambda.
  Eigen::Matrix<Cyclotomic, 2, 1> representative;
  std::vector<ExactMatrix> stabilizer;
  StabilizerType type;
};

/// Fixed points of one element on T^4, in lattice coordinates. Throws on a non-isolated fixed locus.
std::vector<RationalVec4> fixed_points(const IntegerMat4& g_lattice);

/// Reduce each coordinate into [0, 1).
RationalVec4 reduce_mod_one(const RationalVec4& y);

/// Canonical orbit representative: lexicographically smallest lattice coordinates in the orbit.
RationalVec4 canonical_representative(const std::vector<IntegerMat4>& group_lattice, const RationalVec4& y);

/// Lattice coordinates of a point of C^2.
RationalVec4 to_lattice_coords(const LatticeGroupPair& pair, const Eigen::Matrix<Cyclotomic, 2, 1>& point);

/// Group elements in lattice coordinates; throws OrbifoldError if Gamma does not preserve Lambda.
std::vector<IntegerMat4> lattice_group(const LatticeGroupPair& pair, const std::vector<ExactMatrix>& group);

std::vector<SingularPoint> enumerate_singular_points(const LatticeGroupPair& pair,
                                                     int order_bound = kDefaultGroupBound);

/// Dimension of the Gamma-invariant part of the anti-self-dual constant forms.
int invariant_asd_dimension(const std::vector<ExactMatrix>& group);
int invariant_asd_dimension(const LatticeGroupPair& pair);

/// Number of conjugacy classes minus one.
int count_nontrivial_irreps(const std::vector<ExactMatrix>& group);

struct K3Count {
  int d_gamma = 0;
  int singular_sum = 0;
  int total() const { return d_gamma + singular_sum; }
};
K3Count k3_count(const LatticeGroupPair& pair);

}  // namespace kummer
