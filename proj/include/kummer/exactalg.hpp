#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <Eigen/Core>

namespace kummer {

using Rational = mpq_class;
using Integer = mpz_class;

/// Raised when an exact operation would leave the configured cyclotomic tower.
struct ConductorOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Process-wide bound on the conductor of any intermediate result (default 24).
int conductor_bound();
void set_conductor_bound(int n);

int euler_phi(int n);
/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
const std::vector<Integer>& cyclotomic_polynomial(int n);

/**
 * Element of Q(zeta_n) in the power basis 1, zeta, ..., zeta^{phi(n)-1}.
 *
 * Mixed-conductor arithmetic lifts both operands to the lcm conductor.
 * The same field element may therefore be stored under different conductors;
 * equality compares after lifting.
 */
class Cyclotomic {
 public:
  Cyclotomic();
  Cyclotomic(long v);  // NOLINT: implicit so Eigen can build zeros and ones
  Cyclotomic(int v) : Cyclotomic(static_cast<long>(v)) {}
  Cyclotomic(const Rational& q);  // NOLINT
  Cyclotomic(int conductor, std::vector<Rational> coeffs);

  /// zeta_n^k.
  static Cyclotomic zeta(int n, long k = 1);
  /// The imaginary unit, zeta_4.
  static Cyclotomic i();

  int conductor() const { return n_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  /// Throws std::domain_error unless the element lies in Q.
  Rational to_rational() const;

  /// Representation in Q(zeta_m); m must be a multiple of the conductor.
  Cyclotomic lift(int m) const;

  Cyclotomic conj() const;
  Cyclotomic inverse() const;
  Cyclotomic real_part() const;
  Cyclotomic imag_part() const;

  std::complex<double> embed() const;

  Cyclotomic& operator+=(const Cyclotomic& o);
  Cyclotomic& operator-=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Cyclotomic& o);
  Cyclotomic& operator/=(const Cyclotomic& o);

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
  friend Cyclotomic operator/(Cyclotomic a, const Cyclotomic& b) { return a /= b; }
  Cyclotomic operator-() const;

  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

  /// Total order used only for canonical sorting; not a field order.
  friend bool canonical_less(const Cyclotomic& a, const Cyclotomic& b);

  std::string str() const;

 private:
  int n_ = 1;
  std::vector<Rational> c_;
};

using ExactScalar = Cyclotomic;

Cyclotomic cyclotomic_mul(const Cyclotomic& a, const Cyclotomic& b);

/// Parse an exact scalar such as "zeta8^2/1", "-3/4", "(1+i)/2", "2*zeta3 - 1".
Cyclotomic parse_exact(std::string_view text);

std::ostream& operator<<(std::ostream& os, const Cyclotomic& x);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(const Integer& z) { return sgn(z) == 0; }
inline bool is_zero(const Cyclotomic& x) { return x.is_zero(); }

inline std::complex<double> to_complex(const Rational& q) { return {q.get_d(), 0.0}; }
inline std::complex<double> to_complex(const Cyclotomic& x) { return x.embed(); }

}  // namespace kummer

namespace Eigen {

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  using Real = mpq_class;
  using NonInteger = mpq_class;
  using Nested = mpq_class;
  using Literal = mpq_class;
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1,
         ReadCost = 6, AddCost = 150, MulCost = 100 };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  using Real = mpz_class;
  using NonInteger = mpq_class;
  using Nested = mpz_class;
  using Literal = mpz_class;
  enum { IsComplex = 0, IsInteger = 1, IsSigned = 1, RequireInitialization = 1,
         ReadCost = 6, AddCost = 100, MulCost = 100 };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<kummer::Cyclotomic> : GenericNumTraits<kummer::Cyclotomic> {
  using Real = kummer::Cyclotomic;
  using NonInteger = kummer::Cyclotomic;
  using Nested = kummer::Cyclotomic;
  using Literal = kummer::Cyclotomic;
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1,
         ReadCost = 8, AddCost = 300, MulCost = 1000 };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace kummer {

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RationalMatrix = MatX<Rational>;
using IntegerMatrix = MatX<Integer>;
using ExactMatrix = MatX<Cyclotomic>;

struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

/// In-place reduced row echelon form over an exact field; returns pivot columns.
template <typename Scalar>
std::vector<Eigen::Index> rref(MatX<Scalar>& a) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Eigen::Index p = row;
    while (p < a.rows() && is_zero(a(p, col))) ++p;
    if (p == a.rows()) continue;
    if (p != row) a.row(p).swap(a.row(row));
    const Scalar inv = Scalar(1) / a(row, col);
    for (Eigen::Index j = col; j < a.cols(); ++j) a(row, j) = a(row, j) * inv;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r == row || is_zero(a(r, col))) continue;
      const Scalar f = a(r, col);
      for (Eigen::Index j = col; j < a.cols(); ++j) a(r, j) = a(r, j) - f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace detail

template <typename Derived>
Eigen::Index exact_rank(const Eigen::MatrixBase<Derived>& m) {
  MatX<typename Derived::Scalar> a = m;
  return static_cast<Eigen::Index>(detail::rref(a).size());
}

template <typename Derived>
typename Derived::Scalar exact_determinant(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  MatX<Scalar> a = m;
  Scalar det(1);
  const Eigen::Index n = a.rows();
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && is_zero(a(p, c))) ++p;
    if (p == n) return Scalar(0);
    if (p != c) {
      a.row(p).swap(a.row(c));
      det = -det;
    }
    det = det * a(c, c);
    const Scalar inv = Scalar(1) / a(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (is_zero(a(r, c))) continue;
      const Scalar f = a(r, c) * inv;
      for (Eigen::Index j = c; j < n; ++j) a(r, j) = a(r, j) - f * a(c, j);
    }
  }
  return det;
}

template <typename Derived>
MatX<typename Derived::Scalar> exact_inverse(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  MatX<Scalar> aug(n, 2 * n);
  aug.leftCols(n) = m;
  aug.rightCols(n) = MatX<Scalar>::Identity(n, n);
  const auto pivots = detail::rref(aug);
  if (static_cast<Eigen::Index>(pivots.size()) < n || pivots[n - 1] >= n)
    throw SingularMatrix("exact_inverse: matrix is singular");
  return aug.rightCols(n);
}

/// Columns form a basis of the right kernel.
template <typename Derived>
MatX<typename Derived::Scalar> exact_kernel(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  MatX<Scalar> a = m;
  const auto pivots = detail::rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Eigen::Index> free;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    if (!is_pivot[j]) free.push_back(j);
  MatX<Scalar> k = MatX<Scalar>::Zero(a.cols(), static_cast<Eigen::Index>(free.size()));
  for (std::size_t f = 0; f < free.size(); ++f) {
    k(free[f], f) = Scalar(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) k(pivots[r], f) = -a(r, free[f]);
  }
  return k;
}

/// Leading-minor test for symmetric positive definiteness over an ordered field.
template <typename Derived>
bool exact_positive_definite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index k = 1; k <= m.rows(); ++k)
    if (sgn(exact_determinant(m.topLeftCorner(k, k))) <= 0) return false;
  return true;
}

template <typename Derived>
Eigen::MatrixXcd embed(const Eigen::MatrixBase<Derived>& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_complex(m(i, j));
  return out;
}

/// Conjugate transpose of an exact matrix.
ExactMatrix adjoint(const ExactMatrix& m);

/// Smith normal form U*m*V = D with U, V unimodular and d1 | d2 | ... (zeros last).
struct SmithForm {
  IntegerMatrix U, D, V;
};
SmithForm smith_normal_form(const IntegerMatrix& m);

}  // namespace kummer
