#include "kummer/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace kummer {

// ---------------------------------------------------------------------------------------------
// Measurements

Classification measure_classification(const LatticeGroupPair& pair) {
  Classification c;
  c.points = enumerate_singular_points(pair);
  c.count = k3_count(pair);
  for (const auto& p : c.points) {
    ++c.groups[p.type.group];
    ++c.ade[p.type.ade];
  }
  return c;
}

bool expected_points_match(const LatticeGroupPair& pair, const Classification& c,
                           const std::vector<ExpectedPoint>& expected) {
  if (expected.empty()) return true;
  if (expected.size() != c.points.size()) return false;
  const auto lat = lattice_group(pair, generate_group(pair.generators));
  std::vector<int> hits(c.points.size(), 0);
  for (const auto& e : expected) {
    const auto zw = split_list(e.point);
    if (zw.size() != 2) throw ConfigError("expected point '" + e.point + "' needs two entries");
    Eigen::Matrix<Cyclotomic, 2, 1> pt;
    pt << parse_exact(zw[0]), parse_exact(zw[1]);
    const RationalVec4 rep = canonical_representative(lat, to_lattice_coords(pair, pt));
    bool found = false;
    for (std::size_t i = 0; i < c.points.size(); ++i)
      if (c.points[i].lattice_coords == rep) {
        if (c.points[i].type.group != e.group) return false;
        ++hits[i];
        found = true;
      }
    if (!found) return false;
  }
  for (int h : hits)
    if (h != 1) return false;
  return true;
}

EHMeasure measure_eh(double a, const RadialGrid& grid) {
  EHMeasure m;
  m.nodes = grid.size();
  const RadialProfile dphi = integrate_radial_ma(a, grid);
  const double c = a * a;
  for (int i = 0; i < grid.size(); ++i)
    m.ode_error = std::max(m.ode_error, std::abs(dphi[i] / eh_dphi(grid.s[i], c) - 1.0));
  m.ricci_residual = eh_ricci_residual(make_eh_model(a, grid));
  return m;
}

ASDMeasure measure_asd(double a, int samples, unsigned seed) {
  ASDMeasure m;
  m.samples = samples;
  m.l11 = cartan_inverse({'A', 1})(0, 0).get_d();
  m.calibration = asd_calibration(a, m.l11);
  m.pairing = asd_self_pairing(make_eh_model(a), m.calibration).quadrature;
  const double c = a * a, C = m.calibration;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> logs(std::log(1e-2 * c), std::log(1e2 * c));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < samples; ++t) {
    const Eigen::Vector4d dir = Eigen::Vector4d(normal(rng), normal(rng), normal(rng), normal(rng)).normalized();
    const Eigen::Vector4d x = point_at(std::exp(logs(rng)), dir);
    const auto eta = product_derivatives(radial_derivatives([c](auto s) { return eh_phi(s, c); }, x.squaredNorm()),
                                         QuadraticFactor{}, x);
    const Eigen::Matrix4d g = kahler_metric(eta.hessian);
    const auto psi = radial_derivatives([c, C](auto s) { return asd_psi(s, c, C); }, x.squaredNorm());
    m.pointwise = std::max(m.pointwise, asd_check({ddbar_form(product_derivatives(psi, QuadraticFactor{}, x).hessian), g}));
    const auto nu = radial_derivatives([c](auto s) { return 2.0 * eh_dphi(s, c); }, x.squaredNorm());
    for (int alpha = 1; alpha <= 3; ++alpha) {
      const auto f = product_derivatives(nu, QuadraticFactor{0.0, nu0_matrix(alpha)}, x);
      m.pointwise = std::max(m.pointwise, asd_check({ddbar_form(f.hessian), g}));
    }
  }
  return m;
}

GluingMeasure measure_gluing(const ALEModel& model, const std::vector<double>& eps_list, int n) {
  GluingMeasure m;
  m.k0 = decay_sweep(model, eps_list, 0);
  m.k1 = decay_sweep(model, eps_list, 1);
  double lo = 0.0, hi = 0.0;
  for (double eps : eps_list) {
    const auto g = build_glued_metric(model, eps, n);
    const double r = g.f_profile.values().cwiseAbs().maxCoeff() / (eps * eps);
    m.f_ratio.push_back(r);
    lo = m.f_ratio.size() == 1 ? r : std::min(lo, r);
    hi = std::max(hi, r);
  }
  m.f_spread = lo > 0.0 ? hi / lo : 0.0;
  return m;
}

MAMeasure measure_masolver(const ALEModel& model, const std::vector<double>& eps_list, const std::vector<double>& deltas,
                           int n) {
  MAMeasure m;
  for (double d : deltas) {
    m.sweeps.push_back(scaling_exponent_sweep(model, eps_list, d, n));
    for (const auto& r : m.sweeps.back().rows) {
      m.max_ratio = std::max(m.max_ratio, r.max_contraction_ratio);
      m.max_residual = std::max(m.max_residual, r.final_residual);
    }
  }
  return m;
}

FormsMeasure measure_forms(const ALEModel& model, const std::vector<double>& eps_list) {
  FormsMeasure m;
  m.bubble = bubble_decay_table(model, eps_list, asd_calibration(model.a, cartan_inverse({'A', 1})(0, 0).get_d()));
  for (int alpha = 1; alpha <= 3; ++alpha) m.torus.push_back(torus_decay_table(model, eps_list, alpha));
  return m;
}

BubblingMeasure measure_bubbling(const ALEModel& model, const std::vector<double>& eps_list, int n) {
  return {bubbling_diagnostic_metric(model, eps_list, BubblingMode::torus_side, n),
          bubbling_diagnostic_metric(model, eps_list, BubblingMode::bubble_side, n)};
}

LedgerMeasure measure_ledger(const IntersectionData& data, const std::vector<Rational>& eps_list) {
  LedgerMeasure m;
  const CohomBasis& b = data.basis;
  m.dimension = b.dimension();
  m.asd_dimension = b.asd_dimension();
  const int n = b.dimension(), g = b.d_gamma;

  // The table written out block by block.
  RationalMatrix table = RationalMatrix::Zero(n, n);
  for (int i = 0; i < 3; ++i) table(i, i) = data.vol_T;
  for (int a = 0; a < g; ++a) table(3 + a, 3 + a) = -data.vol_T;
  std::vector<Rational> v;  // c1_i . Q = -(L eta)_i
  Rational q2 = 0;
  int off = 3 + g;
  for (std::size_t p = 0; p < b.singular.size(); ++p) {
    const RationalMatrix L = cartan_inverse(b.singular[p]);
    const int r = static_cast<int>(L.rows());
    table.block(off, off, r, r) = -L;
    const RationalVector leta = L * data.eta[p];
    for (int i = 0; i < r; ++i) v.push_back(-leta(i));
    q2 -= data.eta[p].dot(leta);
    off += r;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (cup_product(basis_vector(b, i), basis_vector(b, j), data) != table(i, j)) m.cup_table = false;

  std::vector<CohomClass> minus0;
  for (const Rational& eps : eps_list) {
    const Rational e4 = eps * eps * eps * eps;
    if (w_epsilon(data, eps) != 1 + e4 * q2 / data.vol_T) m.w_exact = false;
    RationalMatrix expect = RationalMatrix::Zero(b.asd_dimension(), b.asd_dimension());
    for (int a = 0; a < g; ++a) expect(a, a) = data.vol_T;
    expect.bottomRightCorner(v.size(), v.size()) = -table.bottomRightCorner(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) expect(g + i, g + j) += e4 * v[i] * v[j] / data.vol_T;
    const RationalMatrix gram = gram_matrix(data, eps);
    if (gram != expect) m.gram_display = false;
    if (!exact_positive_definite(gram)) m.gram_positive = false;
    try {
      const auto classes = harmonic_classes(data, eps);
      if (minus0.empty()) minus0 = classes.omega_minus;
      if (classes.omega_minus != minus0) m.minus_independent = false;
      if (negative_cup_gram(data, eps) != gram) {
        if (m.gram_negative_cup) m.first_mismatch = rational_string(eps);
        m.gram_negative_cup = false;
      }
    } catch (const LedgerError&) {
      if (m.gram_negative_cup) m.first_mismatch = rational_string(eps) + " (degenerate normalizer)";
      m.gram_negative_cup = false;
      m.minus_independent = false;
    }
  }
  return m;
}

IntersectionData ledger_data(const RunConfig& config) {
  const auto pair = config.pair();
  Rational vol;
  if (config.vol_T.empty()) {
    vol = default_volume(pair);
  } else {
    if (vol.set_str(config.vol_T, 10) != 0) throw ConfigError("vol_T is not a rational");
    vol.canonicalize();
  }
  return make_intersection_data(basis_from_orbifold(pair), vol);
}

// ---------------------------------------------------------------------------------------------
// Formatting

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_text(const CsvTable& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
  return os.str();
}

bool StageResult::pass() const {
  if (!error.empty() || checks.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

std::string num(double v) { return csv_number(v); }
std::string yes(bool b) { return b ? "yes" : "no"; }

CheckRow at_most(const std::string& name, double value, double bound) {
  return {name, num(value), "<= " + num(bound), value <= bound};
}
CheckRow below(const std::string& name, double value, double bound) {
  return {name, num(value), "< " + num(bound), value < bound};
}
CheckRow within(const std::string& name, double value, double target, double tol) {
  return {name, num(value), num(target) + " +- " + num(tol), std::abs(value - target) <= tol};
}
CheckRow at_least(const std::string& name, double value, double bound) {
  return {name, num(value), ">= " + num(bound), value >= bound};
}
CheckRow equals(const std::string& name, long value, long target) {
  return {name, std::to_string(value), std::to_string(target), value == target};
}
CheckRow holds(const std::string& name, bool value) { return {name, yes(value), "yes", value}; }

std::string coords(const RationalVec4& y) {
  std::string s;
  for (int i = 0; i < 4; ++i) s += (i ? " " : "") + y(i).get_str();
  return s;
}

void stage_classify(const RunConfig& cfg, StageResult& r) {
  r.anchor = "singular points of the torus quotient, invariant anti-self-dual forms and the count 19";
  const auto pair = cfg.pair();
  const auto c = measure_classification(pair);
  if (cfg.expect_points) r.checks.push_back(equals("singular points", static_cast<long>(c.points.size()), *cfg.expect_points));
  if (cfg.expect_d_gamma) r.checks.push_back(equals("d_gamma", c.count.d_gamma, *cfg.expect_d_gamma));
  r.checks.push_back(equals("d_gamma + sum N", c.count.total(), cfg.expect_count.value_or(19)));
  for (const auto& t : cfg.expect_types) {
    const auto parts = split_list(t, ' ');
    if (parts.size() != 2) throw ConfigError("expected type '" + t + "' needs 'label count'");
    const auto it = c.ade.find(parts[0]);
    r.checks.push_back(equals("points of type " + parts[0], it == c.ade.end() ? 0 : it->second, std::stol(parts[1])));
  }
  if (!cfg.expect_point.empty())
    r.checks.push_back(holds("listed points and stabilizers", expected_points_match(pair, c, cfg.expect_point)));
  CsvTable t{"singular_points.csv", {"index", "lattice_coords", "group", "ade", "stabilizer_order", "nontrivial_irreps"}, {}};
  int i = 0;
  for (const auto& p : c.points)
    t.rows.push_back({std::to_string(i++), coords(p.lattice_coords), p.type.group, p.type.ade,
                      std::to_string(p.stabilizer.size()), std::to_string(count_nontrivial_irreps(p.stabilizer))});
  r.tables.push_back(t);
  r.notes.push_back("d_gamma = " + std::to_string(c.count.d_gamma) + ", sum N = " + std::to_string(c.count.singular_sum));
}

void stage_eh(const RunConfig& cfg, StageResult& r) {
  r.anchor = "Eguchi-Hanson closed form and its Ricci-flat residual";
  const auto m = measure_eh(cfg.a, cfg.model_grid());
  r.checks.push_back(below("sup relative error of integrated phi'", m.ode_error, cfg.tolerance("eh_ode")));
  r.checks.push_back(below("Ricci-flat residual", m.ricci_residual, cfg.tolerance("eh_ricci")));
}

void stage_asd(const RunConfig& cfg, StageResult& r) {
  r.anchor = "calibrated anti-self-dual generator on Eguchi-Hanson";
  const auto m = measure_asd(cfg.a, 100, cfg.seed);
  r.checks.push_back(within("self-pairing", m.pairing, -m.l11, cfg.tolerance("asd_pairing")));
  r.checks.push_back(below("pointwise ASD residual (100 points)", m.pointwise, cfg.tolerance("asd_pointwise")));
  r.notes.push_back("C = " + num(m.calibration));
}

void stage_gluing(const RunConfig& cfg, StageResult& r) {
  r.anchor = "decay of the glued Kahler form on the annulus";
  const auto m = measure_gluing(make_eh_model(cfg.a), cfg.eps_list, cfg.grid_size);
  if (!m.k0.fitted || !m.k1.fitted) throw std::runtime_error("gluing sweep vanished identically");
  r.checks.push_back(within("slope k=0", m.k0.fit.slope, 2.0, cfg.tolerance("gluing_slope0")));
  r.checks.push_back(within("slope k=1", m.k1.fit.slope, 1.5, cfg.tolerance("gluing_slope1")));
  r.checks.push_back(below("max/min of sup|f|/eps^2", m.f_spread, cfg.tolerance("f_ratio_spread")));
  CsvTable t{"gluing.csv", {"epsilon", "sup_k0", "sup_k1", "sup_f_over_eps2"}, {}};
  for (std::size_t i = 0; i < cfg.eps_list.size(); ++i)
    t.rows.push_back({num(cfg.eps_list[i]), num(m.k0.rows[i].value), num(m.k1.rows[i].value), num(m.f_ratio[i])});
  r.tables.push_back(t);
}

void stage_masolver(const RunConfig& cfg, StageResult& r) {
  r.anchor = "Picard iteration for the complex Monge-Ampere equation and the scaling of its solution";
  const auto m = measure_masolver(make_eh_model(cfg.a), cfg.ma_eps_list, cfg.deltas, cfg.grid_size);
  r.checks.push_back(at_most("max contraction ratio after step 1", m.max_ratio, cfg.tolerance("ma_contraction")));
  r.checks.push_back(below("max final residual", m.max_residual, cfg.tolerance("ma_residual")));
  CsvTable t{"masolver.csv", {"delta", "epsilon", "iterations", "max_contraction_ratio", "final_residual", "norm"}, {}};
  for (const auto& s : m.sweeps) {
    // Bound exponent 3 - delta / 2.
    const double target = 3.0 - s.delta / 2.0 - cfg.tolerance("ma_slope_margin");
    if (s.report.fitted) r.checks.push_back(at_least("slope delta=" + num(s.delta), s.report.fit.slope, target));
    else r.checks.push_back({"slope delta=" + num(s.delta), "exact vanishing", ">= " + num(target), false});
    for (const auto& row : s.rows)
      t.rows.push_back({num(s.delta), num(row.epsilon), std::to_string(row.iterations), num(row.max_contraction_ratio),
                        num(row.final_residual), num(row.norm)});
  }
  r.tables.push_back(t);
}

void add_table_rows(CsvTable& t, const DecayTable& d, int alpha) {
  for (const auto& row : d.rows)
    for (std::size_t i = 0; i < row.epsilons.size(); ++i)
      t.rows.push_back({to_string(d.kind), std::to_string(alpha), row.region, std::to_string(row.k), row.bound,
                        num(row.epsilons[i]), num(row.sup[i]), num(row.constants[i]), row.informational ? "1" : "0"});
}

void stage_forms(const RunConfig& cfg, StageResult& r) {
  r.anchor = "decay tables of the glued anti-self-dual forms";
  const auto m = measure_forms(make_eh_model(cfg.a), cfg.eps_list);
  const double ratio = cfg.tolerance("forms_constant_ratio");
  auto rows = [&](const DecayTable& d, const std::string& tag) {
    for (const auto& row : d.rows) {
      if (row.informational) {
        r.notes.push_back(tag + " " + row.region + " k=" + std::to_string(row.k) + " bound " + row.bound +
                          " (informational): constant ratio " + num(row.constant_ratio));
        continue;
      }
      const std::string name = tag + " " + row.region + " k=" + std::to_string(row.k) + " bound " + row.bound;
      if (row.exact) r.checks.push_back(holds(name + " exact", row.pass));
      else r.checks.push_back(below(name + " constant ratio", row.constant_ratio, ratio));
    }
  };
  rows(m.bubble, "bubble");
  CsvTable t{"forms.csv", {"kind", "alpha", "region", "k", "bound", "epsilon", "sup", "constant", "informational"}, {}};
  add_table_rows(t, m.bubble, 0);
  for (std::size_t a = 0; a < m.torus.size(); ++a) {
    const std::string tag = "torus alpha=" + std::to_string(a + 1);
    rows(m.torus[a], tag);
    const auto& w = m.torus[a].wedge;
    r.checks.push_back(w.fitted ? within(tag + " wedge slope", w.fit.slope, 2.0, cfg.tolerance("forms_wedge_slope"))
                                : CheckRow{tag + " wedge slope", "not fitted", "2", false});
    add_table_rows(t, m.torus[a], static_cast<int>(a + 1));
  }
  r.tables.push_back(t);
}

void stage_bubbling(const RunConfig& cfg, StageResult& r) {
  r.anchor = "bubbling of the Ricci-flat metrics on both sides of the neck";
  const auto m = measure_bubbling(make_eh_model(cfg.a), cfg.eps_list, cfg.grid_size);
  const double frac = cfg.tolerance("bubbling_fraction");
  CsvTable t{"bubbling.csv", {"mode", "epsilon", "value"}, {}};
  for (const auto* rep : {&m.torus, &m.bubble}) {
    const std::string mode = rep == &m.torus ? "torus_side" : "bubble_side";
    r.checks.push_back(holds(mode + " strictly decreasing, last < " + num(frac) + " first", decreasing_to_zero(*rep, frac)));
    for (const auto& row : rep->rows) t.rows.push_back({mode, num(row.epsilon), num(row.value)});
  }
  r.tables.push_back(t);
}

void stage_ledger(const RunConfig& cfg, StageResult& r) {
  r.anchor = "cup products, Kahler class normalization, harmonic classes and their Gram matrix";
  const auto data = ledger_data(cfg);
  const auto eps = cfg.ledger_eps_values();
  const auto m = measure_ledger(data, eps);
  r.checks.push_back(equals("basis dimension", m.dimension, 22));
  r.checks.push_back(equals("anti-self-dual dimension", m.asd_dimension, 19));
  r.checks.push_back(holds("cup products match the table", m.cup_table));
  r.checks.push_back(holds("W_eps = 1 + eps^4 Q^2 / vol_T", m.w_exact));
  r.checks.push_back(holds("Gram matrix matches the closed-form inner products", m.gram_display));
  r.checks.push_back(holds("Gram matrix positive definite", m.gram_positive));
  r.checks.push_back({"Gram matrix equals -cup on the harmonic classes", yes(m.gram_negative_cup) +
                      (m.first_mismatch.empty() ? "" : " (first mismatch at eps = " + m.first_mismatch + ")"), "yes",
                      m.gram_negative_cup});
  r.checks.push_back(holds("omega_minus classes independent of eps", m.minus_independent));
  r.notes.push_back("vol_T = " + rational_string(data.vol_T) + ", Q^2 = " + rational_string(cup_product(data.Q, data.Q, data)));
  CsvTable t{"ledger_gram.csv", {"epsilon", "i", "j", "gram", "negative_cup"}, {}};
  for (const auto& e : eps) {
    const RationalMatrix g = gram_matrix(data, e);
    RationalMatrix ng;
    try {
      ng = negative_cup_gram(data, e);
    } catch (const LedgerError&) {
    }
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index j = i; j < g.cols(); ++j)
        if (!is_zero(g(i, j)) || (ng.size() && !is_zero(ng(i, j))))
          t.rows.push_back({rational_string(e), std::to_string(i), std::to_string(j), rational_string(g(i, j)),
                            ng.size() ? rational_string(ng(i, j)) : "degenerate"});
  }
  r.tables.push_back(t);
}

}  // namespace

StageResult run_stage(const RunConfig& config, const std::string& stage) {
  StageResult r;
  r.stage = stage;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (stage == "classify") stage_classify(config, r);
    else if (stage == "eh") stage_eh(config, r);
    else if (stage == "asd") stage_asd(config, r);
    else if (stage == "gluing") stage_gluing(config, r);
    else if (stage == "masolver") stage_masolver(config, r);
    else if (stage == "forms") stage_forms(config, r);
    else if (stage == "bubbling") stage_bubbling(config, r);
    else if (stage == "ledger") stage_ledger(config, r);
    else throw ConfigError("unknown stage '" + stage + "'");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<StageResult> run_stages(const RunConfig& config) {
  std::vector<StageResult> out;
  for (const auto& s : all_stages())
    if (config.stage_enabled(s)) out.push_back(run_stage(config, s));
  return out;
}

void write_tables(const std::string& dir, const std::vector<StageResult>& results) {
  std::filesystem::create_directories(dir);
  for (const auto& r : results)
    for (const auto& t : r.tables) {
      std::ofstream out(std::filesystem::path(dir) / t.file);
      if (!out) throw std::runtime_error("cannot write " + t.file);
      out << csv_text(t);
    }
}

std::string verification_report(const RunConfig& config, const std::vector<StageResult>& results) {
  std::ostringstream os;
  int failed = 0;
  os << "config = " << config.name << "\n";
  for (const auto& r : results) {
    os << "\n[" << r.stage << "] " << (r.pass() ? "PASS" : "FAIL") << "  (" << std::fixed;
    os.precision(2);
    os << r.seconds << " s)\n";
    os.unsetf(std::ios::floatfield);
    os << "checks: " << r.anchor << "\n";
    if (!r.error.empty()) os << "error: " << r.error << "\n";
    for (const auto& c : r.checks)
      os << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.name << ": " << c.measured << " (target " << c.target << ")\n";
    for (const auto& n : r.notes) os << "  note: " << n << "\n";
    failed += r.pass() ? 0 : 1;
  }
  os << "\nsummary: " << results.size() - failed << " of " << results.size() << " stages passed\n";
  return os.str();
}

}  // namespace kummer
