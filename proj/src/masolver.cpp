#include "kummer/masolver.hpp"

#include <cmath>
#include <sstream>

namespace kummer {

namespace {

void require_positive_flux(const GluedMetric& metric, Eigen::VectorXd& p) {
  const int n = metric.grid.size();
  p.resize(n);
  for (int i = 0; i < n; ++i) {
    p(i) = metric.flux(metric.grid.s[i]);
    if (!(p(i) > 0.0)) {
      std::ostringstream os;
      os << "degenerate metric at s = " << metric.grid.s[i] << ": linear system is singular";
      throw MASolverError(os.str());
    }
  }
}

Eigen::VectorXd squares(const RadialGrid& grid) {
  Eigen::VectorXd q(grid.size());
  for (int i = 0; i < grid.size(); ++i) q(i) = grid.s[i] * grid.s[i];
  return q;
}

// psi with psi_t = delta and psi(s_outer) = 0.
Eigen::VectorXd integrate_from_outer(const Eigen::VectorXd& delta, double h) {
  const Eigen::VectorXd c = cumulative_integral(delta, h);
  return c.array() - c(c.size() - 1);
}

}  // namespace

Eigen::VectorXd cumulative_integral(const Eigen::VectorXd& v, double h) {
  const int n = static_cast<int>(v.size());
  if (n < 4) throw std::invalid_argument("cumulative_integral: need at least 4 nodes");
  Eigen::VectorXd out(n);
  out(0) = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    double cell;
    if (i == 0)
      cell = 9 * v(0) + 19 * v(1) - 5 * v(2) + v(3);
    else if (i == n - 2)
      cell = v(n - 4) - 5 * v(n - 3) + 19 * v(n - 2) + 9 * v(n - 1);
    else
      cell = -v(i - 1) + 13 * v(i) + 13 * v(i + 1) - v(i + 2);
    out(i + 1) = out(i) + cell * h / 24.0;
  }
  return out;
}

double flux_square_offset(const GluedMetric& metric, double s) {
  const double lo = kCutoffInner * kCutoffInner * metric.epsilon;
  const double hi = kCutoffOuter * kCutoffOuter * metric.epsilon;
  if (s <= lo) {
    const double c = metric.inner_scale();
    return 0.25 * c * c;
  }
  if (s >= hi) return 0.0;
  const double e = metric.flux_data(s).e;
  return e * (s + e);
}

Eigen::VectorXd volume_density(const GluedMetric& metric) {
  const int n = metric.grid.size();
  Eigen::VectorXd mu(n);
  for (int i = 0; i < n; ++i) {
    const double s = metric.grid.s[i];
    mu(i) = std::exp(metric.f_profile[i]) * s * s;
  }
  return mu;
}

double volume_mean(const GluedMetric& metric, const Eigen::VectorXd& u) {
  const double h = metric.grid.log_step();
  const Eigen::VectorXd mu = volume_density(metric);
  const Eigen::VectorXd num = cumulative_integral(u.cwiseProduct(mu), h);
  const Eigen::VectorXd den = cumulative_integral(mu, h);
  return num(num.size() - 1) / den(den.size() - 1);
}

RadialProfile linearized_operator(const GluedMetric& metric, const RadialProfile& u) {
  const int n = metric.grid.size();
  if (u.size() != n) throw std::invalid_argument("linearized_operator: profile not on the metric grid");
  const double h = metric.grid.log_step();
  const Eigen::VectorXd mu = volume_density(metric);
  Eigen::VectorXd flux_half(n - 1);
  for (int i = 0; i + 1 < n; ++i)
    flux_half(i) = metric.flux(std::sqrt(metric.grid.s[i] * metric.grid.s[i + 1])) * (u[i + 1] - u[i]) / h;
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    const double right = i + 1 < n ? flux_half(i) : 0.0;
    const double left = i > 0 ? flux_half(i - 1) : 0.0;
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    out(i) = 4.0 * (right - left) / (h * w * mu(i));
  }
  return RadialProfile(metric.grid, out);
}

double volume_inner(const GluedMetric& metric, const RadialProfile& u, const RadialProfile& v) {
  const int n = metric.grid.size();
  const double h = metric.grid.log_step();
  const Eigen::VectorXd mu = volume_density(metric);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += w * h * mu(i) * u[i] * v[i];
  }
  return acc;
}

RadialProfile linearized_solve(const GluedMetric& metric, const RadialProfile& rhs) {
  if (rhs.size() != metric.grid.size()) throw std::invalid_argument("linearized_solve: rhs not on the metric grid");
  if (!rhs.values().allFinite()) throw std::invalid_argument("linearized_solve: rhs is not finite");
  Eigen::VectorXd p;
  require_positive_flux(metric, p);
  const double h = metric.grid.log_step();
  const Eigen::VectorXd mu = volume_density(metric);
  const Eigen::VectorXd r = rhs.values().array() - volume_mean(metric, rhs.values());
  // (P psi_t)_t = r e^f s^2 / 4 with zero flux at s_min.
  const Eigen::VectorXd f = cumulative_integral(0.25 * r.cwiseProduct(mu), h);
  const Eigen::VectorXd delta = f.cwiseQuotient(p);
  Eigen::VectorXd psi = integrate_from_outer(delta, h);
  psi.array() -= volume_mean(metric, psi);
  return RadialProfile(metric.grid, psi);
}

double MASolution::max_contraction_ratio() const {
  double m = 0.0;
  for (double r : contraction_history) m = std::max(m, r);
  return m;
}

MASolution picard_solve(const GluedMetric& metric, double tol, int max_iter, double norm_delta) {
  if (!(tol > 0.0) || max_iter < 1) throw std::invalid_argument("picard_solve: bad tolerance or iteration cap");
  const RadialGrid& grid = metric.grid;
  const int n = grid.size();
  const double h = grid.log_step();
  Eigen::VectorXd p;
  require_positive_flux(metric, p);
  const Eigen::VectorXd sq = squares(grid);

  Eigen::VectorXd k(n);
  for (int i = 0; i < n; ++i) k(i) = flux_square_offset(metric, grid.s[i]);
  const double span = sq(n - 1) - sq(0);
  // Model-domain volume constant: the first integral must vanish at both ends.
  const double w = 1.0 + 4.0 * (k(n - 1) - k(0)) / span;
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) g(i) = (w - 1.0) * (sq(i) - sq(0)) / 4.0 - (k(i) - k(0));
  g(n - 1) = 0.0;

  MASolution sol;
  sol.volume_constant = w;
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(n);
  double prev = 0.0;
  int growing = 0;
  bool converged = false;
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXd next_delta = (g - delta.cwiseProduct(delta)).cwiseQuotient(2.0 * p);
    const Eigen::VectorXd next_psi = integrate_from_outer(next_delta, h);
    if (!next_psi.allFinite()) throw MASolverError("outside contraction regime; reduce epsilon");
    const Eigen::VectorXd diff = next_psi - psi;
    const double change = diff.cwiseAbs().maxCoeff();
    const double weighted = weighted_ck_norm(RadialProfile(grid, diff), metric, 0, norm_delta);
    if (it > 1 && prev > 0.0) {
      const double ratio = weighted / prev;
      sol.contraction_history.push_back(ratio);
      growing = ratio >= 1.0 ? growing + 1 : 0;
      if (growing >= 3) throw MASolverError("outside contraction regime; reduce epsilon");
    }
    prev = weighted;
    delta = next_delta;
    psi = next_psi;
    sol.iterations = it;
    if (change < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "picard_solve: no convergence in " << max_iter << " iterations; reduce epsilon";
    throw MASolverError(os.str());
  }
  sol.psi = RadialProfile(grid, psi);
  sol.delta = delta;

  for (int i = 0; i < n; ++i)
    if (!(p(i) + delta(i) > 0.0)) throw MASolverError("corrected metric is not positive definite");
  const Eigen::VectorXd ratio = corrected_volume_ratio(metric, sol);
  if (!(ratio.minCoeff() > 0.0)) throw MASolverError("corrected metric is not positive definite");
  sol.final_residual = (ratio.array() - w).abs().maxCoeff();
  for (int kk : {0, 1, 2})
    for (double d : {-1.0, -0.5}) sol.weighted_norms[{kk, d}] = weighted_ck_norm(sol.psi, metric, kk, d);
  return sol;
}

Eigen::VectorXd corrected_volume_ratio(const GluedMetric& metric, const MASolution& sol) {
  const RadialGrid& grid = metric.grid;
  const int n = grid.size();
  Eigen::VectorXd k(n), q(n);
  for (int i = 0; i < n; ++i) {
    const double s = grid.s[i];
    const double d = sol.delta(i);
    // P~^2 - s^2/4 = (P^2 - s^2/4) + 2 P delta + delta^2; the two parts are differenced separately.
    k(i) = flux_square_offset(metric, s);
    q(i) = (2.0 * metric.flux(s) + d) * d;
  }
  Eigen::VectorXd out(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    const double ds2 = grid.s[i + 1] * grid.s[i + 1] - grid.s[i] * grid.s[i];
    out(i) = 1.0 + 4.0 * ((k(i + 1) - k(i)) + (q(i + 1) - q(i))) / ds2;
  }
  return out;
}

CorrectionSlopes correction_slopes(const GluedMetric& metric, const MASolution& sol, int i) {
  const double s = metric.grid.s[i];
  const double d = sol.delta(i);
  const auto f = metric.flux_data(s);
  // (2 P delta + delta^2)_t = (W - e^f) s^2 / 2.
  const double g_t = 0.5 * s * s * ((sol.volume_constant - 1.0) - metric.volume_defect(s));
  const double d_t = (g_t - 2.0 * f.p_t * d) / (2.0 * (f.p + d));
  return {d / s, (d_t - d) / (s * s)};
}

MASweep scaling_exponent_sweep(const ALEModel& model, const std::vector<double>& eps_list, double delta, int n) {
  require_decreasing(eps_list, 3);
  MASweep out;
  out.delta = delta;
  out.report.stage = "masolver delta=" + std::to_string(delta);
  for (double eps : eps_list) {
    const GluedMetric metric = build_glued_metric(model, eps, n);
    const MASolution sol = picard_solve(metric);
    MASweepRow row;
    row.epsilon = eps;
    row.iterations = sol.iterations;
    row.max_contraction_ratio = sol.max_contraction_ratio();
    row.final_residual = sol.final_residual;
    row.norm = weighted_ck_norm(sol.psi, metric, 0, delta);
    out.rows.push_back(row);
    out.report.rows.push_back({eps, row.norm});
  }
  finalize_sweep(out.report);
  return out;
}

}  // namespace kummer
