#include "kummer/exactalg.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

namespace kummer {

namespace {

std::atomic<int> g_conductor_bound{24};

using Poly = std::vector<Rational>;

void check_conductor(int n) {
  if (n > conductor_bound())
    throw ConductorOverflow("conductor " + std::to_string(n) + " exceeds bound " +
                            std::to_string(conductor_bound()));
}

// Reduce a polynomial modulo the monic n-th cyclotomic polynomial.
Poly reduce(Poly p, int n) {
  const auto& phi = cyclotomic_polynomial(n);
  const std::size_t deg = phi.size() - 1;
  for (std::size_t d = p.size(); d-- > deg;) {
    if (is_zero(p[d])) continue;
    const Rational c = p[d];
    for (std::size_t k = 0; k <= deg; ++k) p[d - deg + k] -= c * phi[k];
  }
  p.resize(deg);
  return p;
}

// Substitute x -> x^step and reduce modulo x^m - 1 before reducing modulo Phi_m.
Poly substitute(const Poly& p, long step, int m) {
  Poly q(m, Rational(0));
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (is_zero(p[k])) continue;
    long e = (static_cast<long>(k) * step) % m;
    if (e < 0) e += m;
    q[e] += p[k];
  }
  return reduce(std::move(q), m);
}

}  // namespace

int conductor_bound() { return g_conductor_bound.load(); }
void set_conductor_bound(int n) {
  if (n < 1) throw std::invalid_argument("conductor bound must be positive");
  g_conductor_bound.store(n);
}

int euler_phi(int n) {
  if (n < 1) throw std::invalid_argument("euler_phi of non-positive integer");
  int result = n;
  int m = n;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    result -= result / p;
  }
  if (m > 1) result -= result / m;
  return result;
}

namespace {

const std::vector<Integer>& cyclo_locked(int n, std::map<int, std::vector<Integer>>& cache) {
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  // x^n - 1 divided by Phi_d for every proper divisor d.
  std::vector<Integer> num(n + 1, Integer(0));
  num[0] = -1;
  num[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d) continue;
    const std::vector<Integer>& div = cyclo_locked(d, cache);
    const std::size_t dd = div.size() - 1;
    std::vector<Integer> quot(num.size() - dd, Integer(0));
    for (std::size_t k = num.size(); k-- > dd;) {
      const Integer c = num[k];
      quot[k - dd] = c;
      if (sgn(c) == 0) continue;
      for (std::size_t j = 0; j <= dd; ++j) num[k - dd + j] -= c * div[j];
    }
    num = std::move(quot);
  }
  return cache.emplace(n, std::move(num)).first->second;
}

}  // namespace

const std::vector<Integer>& cyclotomic_polynomial(int n) {
  if (n < 1) throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
  static std::mutex mu;
  static std::map<int, std::vector<Integer>> cache;
  std::lock_guard<std::mutex> lock(mu);
  return cyclo_locked(n, cache);
}

Cyclotomic::Cyclotomic() : n_(1), c_(1, Rational(0)) {}
Cyclotomic::Cyclotomic(long v) : n_(1), c_(1, Rational(v)) {}
Cyclotomic::Cyclotomic(const Rational& q) : n_(1), c_(1, q) {}

Cyclotomic::Cyclotomic(int conductor, std::vector<Rational> coeffs) : n_(conductor) {
  if (conductor < 1) throw std::invalid_argument("conductor must be positive");
  check_conductor(conductor);
  if (coeffs.empty()) coeffs.push_back(Rational(0));
  c_ = reduce(std::move(coeffs), conductor);
}

Cyclotomic Cyclotomic::zeta(int n, long k) {
  if (n < 1) throw std::invalid_argument("zeta: conductor must be positive");
  check_conductor(n);
  Poly p(n, Rational(0));
  long e = k % n;
  if (e < 0) e += n;
  p[e] = 1;
  Cyclotomic out;
  out.n_ = n;
  out.c_ = reduce(std::move(p), n);
  return out;
}

Cyclotomic Cyclotomic::i() { return zeta(4, 1); }

bool Cyclotomic::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

bool Cyclotomic::is_rational() const {
  return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

Rational Cyclotomic::to_rational() const {
  if (!is_rational()) throw std::domain_error("element " + str() + " is not rational");
  return c_[0];
}

Cyclotomic Cyclotomic::lift(int m) const {
  if (m % n_) throw std::invalid_argument("lift: target conductor must be a multiple");
  if (m == n_) return *this;
  check_conductor(m);
  Cyclotomic out;
  out.n_ = m;
  out.c_ = substitute(c_, m / n_, m);
  return out;
}

Cyclotomic Cyclotomic::conj() const {
  Cyclotomic out;
  out.n_ = n_;
  out.c_ = substitute(c_, n_ - 1, n_);
  return out;
}

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  const int d = static_cast<int>(c_.size());
  RationalMatrix aug(d, d + 1);
  for (int j = 0; j < d; ++j) {
    Poly xj(n_, Rational(0));
    xj[j] = 1;
    Cyclotomic basis(n_, xj);
    Cyclotomic col = *this * basis;
    for (int i = 0; i < d; ++i) aug(i, j) = col.c_[i];
  }
  for (int i = 0; i < d; ++i) aug(i, d) = (i == 0) ? 1 : 0;
  detail::rref(aug);
  Poly sol(d);
  for (int i = 0; i < d; ++i) sol[i] = aug(i, d);
  return Cyclotomic(n_, sol);
}

Cyclotomic Cyclotomic::real_part() const { return (*this + conj()) * Cyclotomic(Rational(1, 2)); }

Cyclotomic Cyclotomic::imag_part() const {
  return (*this - conj()) * (Cyclotomic::i() * Cyclotomic(Rational(-1, 2)));
}

std::complex<double> Cyclotomic::embed() const {
  std::complex<double> acc = 0.0;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (sgn(c_[k]) == 0) continue;
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / n_;
    acc += c_[k].get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return acc;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
  const int m = std::lcm(n_, o.n_);
  if (m != n_) *this = lift(m);
  const Cyclotomic b = o.lift(m);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += b.c_[k];
  return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) {
  const int m = std::lcm(n_, o.n_);
  if (m != n_) *this = lift(m);
  const Cyclotomic b = o.lift(m);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= b.c_[k];
  return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) {
  const int m = std::lcm(n_, o.n_);
  const Cyclotomic a = lift(m);
  const Cyclotomic b = o.lift(m);
  Poly prod(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (sgn(a.c_[i]) == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) prod[i + j] += a.c_[i] * b.c_[j];
  }
  n_ = m;
  c_ = reduce(std::move(prod), m);
  return *this;
}

Cyclotomic& Cyclotomic::operator/=(const Cyclotomic& o) { return *this *= o.inverse(); }

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic out = *this;
  for (auto& q : out.c_) q = -q;
  return out;
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
  const int m = std::lcm(a.n_, b.n_);
  return a.lift(m).c_ == b.lift(m).c_;
}

bool canonical_less(const Cyclotomic& a, const Cyclotomic& b) {
  const int m = std::lcm(a.n_, b.n_);
  const auto x = a.lift(m);
  const auto y = b.lift(m);
  return std::lexicographical_compare(x.c_.begin(), x.c_.end(), y.c_.begin(), y.c_.end());
}

std::string Cyclotomic::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (sgn(c_[k]) == 0) continue;
    Rational q = c_[k];
    if (!first) os << (sgn(q) < 0 ? " - " : " + ");
    else if (sgn(q) < 0) os << "-";
    q = abs(q);
    if (k == 0) {
      os << q.get_str();
    } else {
      if (q != 1) os << q.get_str() << "*";
      os << "zeta" << n_;
      if (k > 1) os << "^" << k;
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Cyclotomic& x) { return os << x.str(); }

Cyclotomic cyclotomic_mul(const Cyclotomic& a, const Cyclotomic& b) { return a * b; }

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Cyclotomic parse() {
    Cyclotomic v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("parse_exact: " + msg + " at offset " + std::to_string(pos_) +
                                " in \"" + std::string(s_) + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Integer integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return Integer(std::string(s_.substr(start, pos_ - start)));
  }
  long small_int() {
    bool neg = eat('-');
    Integer z = integer();
    if (!z.fits_slong_p()) fail("exponent too large");
    return neg ? -z.get_si() : z.get_si();
  }
  Cyclotomic expr() {
    Cyclotomic v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }
  Cyclotomic term() {
    Cyclotomic v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) {
        Cyclotomic d = unary();
        if (d.is_zero()) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }
  Cyclotomic unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    Cyclotomic base = primary();
    if (eat('^')) {
      long e = small_int();
      Cyclotomic acc(1);
      Cyclotomic b = e < 0 ? base.inverse() : base;
      for (long k = 0; k < std::labs(e); ++k) acc *= b;
      return acc;
    }
    return base;
  }
  Cyclotomic primary() {
    skip();
    if (eat('(')) {
      Cyclotomic v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (s_.substr(pos_, 4) == "zeta") {
      pos_ += 4;
      Integer n = integer();
      if (!n.fits_sint_p() || sgn(n) <= 0) fail("bad conductor");
      return Cyclotomic::zeta(static_cast<int>(n.get_si()), 1);
    }
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        (pos_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      return Cyclotomic::i();
    }
    return Cyclotomic(Rational(integer()));
  }
};

}  // namespace

Cyclotomic parse_exact(std::string_view text) { return Parser(text).parse(); }

ExactMatrix adjoint(const ExactMatrix& m) {
  ExactMatrix out(m.cols(), m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(j, i) = m(i, j).conj();
  return out;
}

SmithForm smith_normal_form(const IntegerMatrix& m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  IntegerMatrix a = m;
  IntegerMatrix U = IntegerMatrix::Identity(rows, rows);
  IntegerMatrix V = IntegerMatrix::Identity(cols, cols);

  auto row_axpy = [&](Eigen::Index dst, Eigen::Index src, const Integer& q) {
    for (Eigen::Index j = 0; j < cols; ++j) a(dst, j) -= q * a(src, j);
    for (Eigen::Index j = 0; j < rows; ++j) U(dst, j) -= q * U(src, j);
  };
  auto col_axpy = [&](Eigen::Index dst, Eigen::Index src, const Integer& q) {
    for (Eigen::Index i = 0; i < rows; ++i) a(i, dst) -= q * a(i, src);
    for (Eigen::Index i = 0; i < cols; ++i) V(i, dst) -= q * V(i, src);
  };
  auto swap_rows = [&](Eigen::Index x, Eigen::Index y) {
    if (x == y) return;
    a.row(x).swap(a.row(y));
    U.row(x).swap(U.row(y));
  };
  auto swap_cols = [&](Eigen::Index x, Eigen::Index y) {
    if (x == y) return;
    a.col(x).swap(a.col(y));
    V.col(x).swap(V.col(y));
  };

  const Eigen::Index steps = std::min(rows, cols);
  for (Eigen::Index t = 0; t < steps; ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      Eigen::Index pi = -1, pj = -1;
      for (Eigen::Index i = t; i < rows; ++i)
        for (Eigen::Index j = t; j < cols; ++j)
          if (sgn(a(i, j)) != 0 && (pi < 0 || abs(a(i, j)) < abs(a(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) break;
      swap_rows(t, pi);
      swap_cols(t, pj);

      bool clean = true;
      for (Eigen::Index i = t + 1; i < rows; ++i) {
        if (sgn(a(i, t)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        row_axpy(i, t, q);
        if (sgn(a(i, t)) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < cols; ++j) {
        if (sgn(a(t, j)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        col_axpy(j, t, q);
        if (sgn(a(t, j)) != 0) clean = false;
      }
      if (!clean) continue;

      // Enforce divisibility of the trailing block by the pivot.
      Eigen::Index bad = -1;
      for (Eigen::Index i = t + 1; i < rows && bad < 0; ++i)
        for (Eigen::Index j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      row_axpy(t, bad, Integer(-1));
    }
    if (sgn(a(t, t)) < 0) {
      for (Eigen::Index j = 0; j < cols; ++j) a(t, j) = -a(t, j);
      for (Eigen::Index j = 0; j < rows; ++j) U(t, j) = -U(t, j);
    }
  }
  return {U, a, V};
}

}  // namespace kummer
