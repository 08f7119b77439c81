#include "kummer/cohomled.hpp"

#include <sstream>

namespace kummer {

DynkinType DynkinType::parse(const std::string& label) {
  if (label.size() < 2 || (label[0] != 'A' && label[0] != 'D' && label[0] != 'E'))
    throw std::invalid_argument("unsupported Dynkin type '" + label + "'");
  std::size_t used = 0;
  int rank = 0;
  try {
    rank = std::stoi(label.substr(1), &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("unsupported Dynkin type '" + label + "'");
  }
  if (used + 1 != label.size()) throw std::invalid_argument("unsupported Dynkin type '" + label + "'");
  DynkinType t{label[0], rank};
  cartan_matrix(t);  // validates the rank
  return t;
}

std::string DynkinType::label() const { return std::string(1, family) + std::to_string(rank); }

RationalMatrix cartan_matrix(const DynkinType& type) {
  const int n = type.rank;
  const bool ok = (type.family == 'A' && n >= 1) || (type.family == 'D' && n >= 4) ||
                  (type.family == 'E' && n >= 6 && n <= 8);
  if (!ok) throw std::invalid_argument("unsupported Dynkin type " + type.label());
  RationalMatrix c = RationalMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) c(i, i) = 2;
  auto link = [&c](int i, int j) { c(i, j) = c(j, i) = -1; };
  if (type.family == 'A') {
    for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
  } else if (type.family == 'D') {
    // Chain 0..n-2, node n-1 attached to n-3.
    for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
    link(n - 3, n - 1);
  } else {
    // Chain 0..n-2, node n-1 attached to node 2.
    for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
    link(2, n - 1);
  }
  return c;
}

RationalMatrix cartan_inverse(const DynkinType& type) { return exact_inverse(cartan_matrix(type)); }

int CohomBasis::dimension() const { return bubble_offset(static_cast<int>(singular.size())); }

int CohomBasis::bubble_offset(int p) const {
  int off = 3 + d_gamma;
  for (int q = 0; q < p; ++q) off += singular.at(q).rank;
  return off;
}

int CohomBasis::asd_dimension() const { return dimension() - 3; }

std::vector<std::string> CohomBasis::labels() const {
  std::vector<std::string> out{"omega0", "ReOmega0", "ImOmega0"};
  for (int a = 1; a <= d_gamma; ++a) out.push_back("omega_minus" + std::to_string(a));
  for (std::size_t p = 0; p < singular.size(); ++p)
    for (int i = 1; i <= singular[p].rank; ++i)
      out.push_back("c1(p" + std::to_string(p + 1) + "," + std::to_string(i) + ")");
  return out;
}

CohomClass basis_vector(const CohomBasis& basis, int index) {
  CohomClass v = CohomClass::Zero(basis.dimension());
  v(index) = 1;
  return v;
}

IntersectionData make_intersection_data(const CohomBasis& basis, const Rational& vol_T, std::vector<RationalVector> eta) {
  if (sgn(vol_T) <= 0) throw LedgerError("vol_T must be positive");
  if (basis.d_gamma < 0 || basis.d_gamma > 3) throw LedgerError("d_gamma must lie in 0..3");
  IntersectionData d;
  d.basis = basis;
  d.vol_T = vol_T;
  const std::size_t np = basis.singular.size();
  if (eta.empty())
    for (const auto& t : basis.singular) eta.push_back(RationalVector::Ones(t.rank));
  if (eta.size() != np) throw LedgerError("one eta vector per singular point is required");
  d.Q = CohomClass::Zero(basis.dimension());
  for (std::size_t p = 0; p < np; ++p) {
    const RationalMatrix L = cartan_inverse(basis.singular[p]);
    if (L != L.transpose() || !exact_positive_definite(L)) throw LedgerError("L_p is not symmetric positive definite");
    if (eta[p].size() != L.rows()) throw LedgerError("eta vector size does not match the singular point rank");
    d.Q.segment(basis.bubble_offset(static_cast<int>(p)), L.rows()) = eta[p];
    d.L.push_back(L);
  }
  d.eta = std::move(eta);
  if (!is_zero(cup_product(d.Q, basis_vector(basis, 0), d))) throw LedgerError("Q . [omega_0] != 0");
  return d;
}

CohomBasis basis_from_orbifold(const LatticeGroupPair& pair) {
  CohomBasis b;
  b.d_gamma = invariant_asd_dimension(pair);
  for (const auto& p : enumerate_singular_points(pair)) b.singular.push_back(DynkinType::parse(p.type.ade));
  return b;
}

Rational default_volume(const LatticeGroupPair& pair) {
  const Cyclotomic det = exact_determinant(real_lattice_basis(pair.lattice_basis));
  if (!det.is_rational()) throw LedgerError("lattice covolume is irrational; set vol_T explicitly");
  Rational v = det.to_rational();
  if (sgn(v) < 0) v = -v;
  return 2 * v / static_cast<long>(generate_group(pair.generators).size());
}

namespace {

// Table entry for basis vectors i, j.
Rational table_entry(const IntersectionData& d, int i, int j) {
  const int g = d.basis.d_gamma;
  if (i < 3 || j < 3) return i == j ? d.vol_T : Rational(0);
  if (i < 3 + g || j < 3 + g) return i == j ? Rational(-d.vol_T) : Rational(0);
  for (std::size_t p = 0; p < d.basis.singular.size(); ++p) {
    const int off = d.basis.bubble_offset(static_cast<int>(p));
    const int n = d.basis.singular[p].rank;
    const bool in_i = i >= off && i < off + n, in_j = j >= off && j < off + n;
    if (in_i && in_j) return -d.L[p](i - off, j - off);
    if (in_i || in_j) return 0;
  }
  return 0;
}

void check_dimension(const CohomClass& x, const IntersectionData& d) {
  if (x.size() != d.basis.dimension()) throw std::invalid_argument("cohomology class does not match the basis");
}

}  // namespace

RationalMatrix cup_matrix(const IntersectionData& data) {
  const int n = data.basis.dimension();
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = table_entry(data, i, j);
  return m;
}

Rational cup_product(const CohomClass& x, const CohomClass& y, const IntersectionData& data) {
  check_dimension(x, data);
  check_dimension(y, data);
  Rational sum = 0;
  const int n = data.basis.dimension();
  for (int i = 0; i < n; ++i) {
    if (is_zero(x(i))) continue;
    for (int j = 0; j < n; ++j)
      if (!is_zero(y(j))) sum += x(i) * y(j) * table_entry(data, i, j);
  }
  return sum;
}

Rational w_epsilon(const IntersectionData& data, const Rational& eps) {
  const Rational e2 = eps * eps;
  return 1 + e2 * e2 * cup_product(data.Q, data.Q, data) / data.vol_T;
}

double ScaledRational::to_double() const { return value.get_d() / std::sqrt(norm_sq.get_d()); }

std::vector<CohomClass> HarmonicClasses::asd_classes() const {
  std::vector<CohomClass> out = omega_minus;
  out.insert(out.end(), xi.begin(), xi.end());
  return out;
}

HarmonicClasses harmonic_classes(const IntersectionData& data, const Rational& eps) {
  const Rational w = w_epsilon(data, eps);
  if (sgn(w) <= 0) throw LedgerError("degenerate normalizer 1 + eps^4 Q^2 / vol_T <= 0; reduce epsilon");
  const CohomBasis& b = data.basis;
  const Rational e2 = eps * eps;
  const CohomClass omega0 = basis_vector(b, 0);
  HarmonicClasses h;
  h.epsilon = eps;
  h.omega_tilde = {omega0 + e2 * data.Q, w};
  h.re_omega = basis_vector(b, 1);
  h.im_omega = basis_vector(b, 2);
  for (int a = 0; a < b.d_gamma; ++a) {
    h.omega_minus.push_back(basis_vector(b, 3 + a));
    // omega_minus . omega_0 = omega_minus . Q = 0.
    h.lambda_minus.push_back(-cup_product(h.omega_minus.back(), h.omega_tilde.cls, data) / data.vol_T);
  }
  for (std::size_t p = 0; p < b.singular.size(); ++p) {
    const RationalVector leta = data.L[p] * data.eta[p];
    for (int i = 0; i < b.singular[p].rank; ++i) {
      const CohomClass c = basis_vector(b, b.bubble_offset(static_cast<int>(p)) + i);
      h.xi.push_back(c + (e2 * leta(i) / data.vol_T) * omega0);
      // Glued bubble form has class eps^2 c; its pairing with the unnormalized Kahler class over vol_T.
      h.lambda_xi.push_back({-e2 * cup_product(c, h.omega_tilde.cls, data) / data.vol_T, w});
    }
  }
  return h;
}

std::vector<CohomClass> xi_classes_from_combination(const IntersectionData& data, const Rational& eps) {
  const CohomBasis& b = data.basis;
  const Rational e2 = eps * eps, e4 = e2 * e2;
  const Rational q2 = cup_product(data.Q, data.Q, data);
  const CohomClass kahler = basis_vector(b, 0) + e2 * data.Q;
  std::vector<CohomClass> primed, cdotq;
  std::vector<Rational> cq;
  for (std::size_t p = 0; p < b.singular.size(); ++p)
    for (int i = 0; i < b.singular[p].rank; ++i) {
      const CohomClass c = basis_vector(b, b.bubble_offset(static_cast<int>(p)) + i);
      cq.push_back(cup_product(c, data.Q, data));
      primed.push_back(c - (e2 * cq.back() / (data.vol_T + e4 * q2)) * kahler);
    }
  CohomClass weighted = CohomClass::Zero(b.dimension());
  std::size_t k = 0;
  for (std::size_t p = 0; p < b.singular.size(); ++p)
    for (int j = 0; j < b.singular[p].rank; ++j) weighted += data.eta[p](j) * primed[k++];
  std::vector<CohomClass> out;
  for (std::size_t i = 0; i < primed.size(); ++i) out.push_back(primed[i] + (e4 * cq[i] / data.vol_T) * weighted);
  return out;
}

RationalMatrix gram_matrix(const IntersectionData& data, const Rational& eps) {
  const CohomBasis& b = data.basis;
  const int g = b.d_gamma, n = b.asd_dimension();
  const Rational e2 = eps * eps, e4 = e2 * e2;
  RationalMatrix m = RationalMatrix::Zero(n, n);
  for (int a = 0; a < g; ++a) m(a, a) = data.vol_T;
  std::vector<Rational> cq;
  std::vector<int> owner;
  for (std::size_t p = 0; p < b.singular.size(); ++p)
    for (int i = 0; i < b.singular[p].rank; ++i) {
      cq.push_back(cup_product(basis_vector(b, b.bubble_offset(static_cast<int>(p)) + i), data.Q, data));
      owner.push_back(static_cast<int>(p));
    }
  for (std::size_t r = 0; r < cq.size(); ++r)
    for (std::size_t c = 0; c < cq.size(); ++c) {
      Rational v = e4 * cq[r] * cq[c] / data.vol_T;
      if (owner[r] == owner[c]) {
        const int off = b.bubble_offset(owner[r]) - 3 - g;
        v += data.L[owner[r]](static_cast<int>(r) - off, static_cast<int>(c) - off);
      }
      m(g + static_cast<int>(r), g + static_cast<int>(c)) = v;
    }
  return m;
}

RationalMatrix negative_cup_gram(const IntersectionData& data, const Rational& eps) {
  const auto classes = harmonic_classes(data, eps).asd_classes();
  const int n = static_cast<int>(classes.size());
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = -cup_product(classes[i], classes[j], data);
  return m;
}

std::string rational_string(const Rational& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

namespace {

void dump_matrix(std::ostringstream& os, const RationalMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << rational_string(m(i, j));
    os << "\n";
  }
}

}  // namespace

std::string ledger_report(const IntersectionData& data, const std::vector<Rational>& eps_list) {
  std::ostringstream os;
  const auto labels = data.basis.labels();
  os << "[basis]\ndimension = " << data.basis.dimension() << "\nd_gamma = " << data.basis.d_gamma << "\nsingular =";
  for (const auto& t : data.basis.singular) os << " " << t.label();
  os << "\nvol_T = " << rational_string(data.vol_T) << "\nQ^2 = " << rational_string(cup_product(data.Q, data.Q, data))
     << "\nlabels =";
  for (const auto& l : labels) os << " " << l;
  os << "\n[cup]\n";
  dump_matrix(os, cup_matrix(data));
  for (const auto& eps : eps_list) {
    os << "[epsilon " << rational_string(eps) << "]\nW = " << rational_string(w_epsilon(data, eps)) << "\n";
    const RationalMatrix g = gram_matrix(data, eps);
    os << "gram_positive_definite = " << (exact_positive_definite(g) ? "yes" : "no") << "\ngram =\n";
    dump_matrix(os, g);
    const RationalMatrix ng = negative_cup_gram(data, eps);
    os << "negative_cup_gram_matches = " << (ng == g ? "yes" : "no") << "\n";
  }
  return os.str();
}

}  // namespace kummer
