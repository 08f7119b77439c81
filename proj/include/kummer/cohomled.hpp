#pragma once

// Exact rational ledger for H^2 of the resolved orbifold: basis, cup products, the Kahler class
// of the Ricci-flat metric, the anti-self-dual classes and their Gram matrix.
//
// Basis order: [omega_0], [Re Omega_0], [Im Omega_0], [omega_minus_alpha] (alpha <= d_gamma),
// then [c1(A_{p,i})] grouped by singular point.

#include <string>
#include <vector>

#include "kummer/exactalg.hpp"
#include "kummer/orbifold.hpp"

namespace kummer {

using RationalVector = VecX<Rational>;

struct DynkinType {
  char family = 'A';
  int rank = 1;

  /// "A1", "A3", "D4", "E6" and so on; throws std::invalid_argument otherwise.
  static DynkinType parse(const std::string& label);
  std::string label() const;
  bool operator==(const DynkinType&) const = default;
};

/// Throws std::invalid_argument for A_0, D_k with k < 4 and E_k outside 6..8.
RationalMatrix cartan_matrix(const DynkinType& type);
/// Exact inverse of the Cartan matrix. With c1 classes dual to the exceptional curves
/// (E_i . E_j = -C_ij) the intersection numbers are c1_i . c1_j = -(C^-1)_ij, so L_p = C^-1.
RationalMatrix cartan_inverse(const DynkinType& type);

struct CohomBasis {
  int d_gamma = 0;
  /// One entry per singular point.
  std::vector<DynkinType> singular;

  int dimension() const;
  /// Index of [c1(A_{p,0})].
  int bubble_offset(int p) const;
  /// Size of the anti-self-dual block: d_gamma + sum of ranks.
  int asd_dimension() const;
  std::vector<std::string> labels() const;
};

using CohomClass = RationalVector;

CohomClass basis_vector(const CohomBasis& basis, int index);

struct IntersectionData {
  CohomBasis basis;
  Rational vol_T;
  std::vector<RationalMatrix> L;
  std::vector<RationalVector> eta;
  CohomClass Q;
};

struct LedgerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// eta empty means all ones. Validates that each L_p is symmetric positive definite and that Q . [omega_0] = 0.
IntersectionData make_intersection_data(const CohomBasis& basis, const Rational& vol_T,
                                        std::vector<RationalVector> eta = {});

/// Basis read off the classified singular points.
CohomBasis basis_from_orbifold(const LatticeGroupPair& pair);
/// Integral of omega_0^2 over T^4 / Gamma: 2 |det B_R| / |Gamma|.
Rational default_volume(const LatticeGroupPair& pair);

/// Bilinear extension of the cup-product table. Throws std::invalid_argument on a dimension mismatch.
Rational cup_product(const CohomClass& x, const CohomClass& y, const IntersectionData& data);
/// cup_product on all pairs of basis vectors.
RationalMatrix cup_matrix(const IntersectionData& data);

/// 1 + eps^4 Q^2 / vol_T.
Rational w_epsilon(const IntersectionData& data, const Rational& eps);

/// class / sqrt(norm_sq), kept unnormalized so everything stays rational.
struct ScaledClass {
  CohomClass cls;
  Rational norm_sq = 1;
};
struct ScaledRational {
  Rational value = 0;
  Rational norm_sq = 1;
  double to_double() const;
};

struct HarmonicClasses {
  Rational epsilon;
  ScaledClass omega_tilde;
  CohomClass re_omega, im_omega;
  std::vector<CohomClass> omega_minus;
  /// One per (p, i), in basis order.
  std::vector<CohomClass> xi;
  /// Multiples of omega_tilde removed from the glued forms (zero for the omega_minus kind).
  std::vector<ScaledRational> lambda_xi;
  std::vector<Rational> lambda_minus;

  /// The anti-self-dual classes in Gram order: omega_minus then xi.
  std::vector<CohomClass> asd_classes() const;
};

/// Throws LedgerError when 1 + eps^4 Q^2 / vol_T <= 0.
HarmonicClasses harmonic_classes(const IntersectionData& data, const Rational& eps);

/// The xi classes rebuilt from the uncorrected classes c1 - mu (omega_0 + eps^2 Q) and the eta-weighted
/// combination, as an independent route to the closed form.
std::vector<CohomClass> xi_classes_from_combination(const IntersectionData& data, const Rational& eps);

/// Gram matrix on the anti-self-dual block from the closed-form inner products.
RationalMatrix gram_matrix(const IntersectionData& data, const Rational& eps);
/// -cup_product on harmonic_classes(eps).asd_classes().
RationalMatrix negative_cup_gram(const IntersectionData& data, const Rational& eps);

/// "num/den".
std::string rational_string(const Rational& q);

/// Structured dump of the basis, the cup table and Gram matrices at the given epsilons.
std::string ledger_report(const IntersectionData& data, const std::vector<Rational>& eps_list);

}  // namespace kummer
