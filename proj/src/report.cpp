#include "kummer/report.hpp"

#include <cmath>
#include <stdexcept>

namespace kummer {

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  const int n = static_cast<int>(lx.size());
  if (n < 2) throw std::invalid_argument("fit_loglog: fewer than 2 valid points");
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog: degenerate abscissae");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = n;
  if (n > 2) {
    double rss = 0;
    for (int i = 0; i < n; ++i) {
      const double r = ly[i] - (f.intercept + f.slope * lx[i]);
      rss += r * r;
    }
    f.stderr_slope = std::sqrt(rss / (n - 2) / sxx);
  }
  return f;
}

std::vector<double> SweepReport::epsilons() const {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.epsilon);
  return v;
}

std::vector<double> SweepReport::values() const {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.value);
  return v;
}

void finalize_sweep(SweepReport& report) {
  bool all_zero = !report.rows.empty();
  for (const auto& r : report.rows) all_zero &= (r.value == 0.0);
  report.exact_vanishing = all_zero;
  report.fitted = false;
  if (all_zero) {
    report.notes.push_back("exact vanishing");
    return;
  }
  report.fit = fit_loglog(report.epsilons(), report.values());
  report.fitted = true;
}

void require_decreasing(const std::vector<double>& eps, std::size_t min_size) {
  if (eps.size() < min_size)
    throw std::invalid_argument("epsilon list needs at least " + std::to_string(min_size) + " values");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw std::invalid_argument("epsilon values must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw std::invalid_argument("epsilon list must be strictly decreasing");
  }
}

}  // namespace kummer
