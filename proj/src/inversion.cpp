#include "freebias/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freebias/parallel.hpp"

namespace freebias {

std::size_t DensityCurve::failures() const {
  return static_cast<std::size_t>(std::count(failed.begin(), failed.end(), true));
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(hi > lo)) throw PreconditionError("uniform grid needs hi > lo and >= 2 points");
  std::vector<double> x(points);
  for (std::size_t i = 0; i < points; ++i)
    x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  x.back() = hi;
  return x;
}

std::vector<double> default_grid(const ProbabilityMeasure& mu, std::size_t points, double pad) {
  const Interval h = support_hull(mu);
  if (!h.bounded()) throw PreconditionError("default grid needs a bounded support hull");
  const Interval p = h.padded(pad);
  return uniform_grid(p.lo, p.hi, points);
}

DensityCurve stieltjes_density(const AnalyticTransform& g, const std::vector<double>& grid,
                               const InversionOptions& opts) {
  const auto& eps = opts.eps_schedule;
  if (eps.size() < 2) throw PreconditionError("epsilon schedule needs at least two entries");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw PreconditionError("epsilon schedule entries must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1]))
      throw PreconditionError("epsilon schedule must be strictly descending");
  }
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw PreconditionError("inversion grid must be ascending");

  const double e1 = eps[eps.size() - 2];
  const double e2 = eps.back();
  const std::size_t n = grid.size();
  std::vector<double> raw(n, 0.0);
  std::vector<char> bad(n, 0);
  parallel_for(n, [&](std::size_t i) {
    try {
      const double r1 = -g(cplx(grid[i], e1)).imag() / kPi;
      const double r2 = -g(cplx(grid[i], e2)).imag() / kPi;
      const double r0 = (e1 * r2 - e2 * r1) / (e1 - e2);
      if (std::isfinite(r0)) raw[i] = r0;
      else bad[i] = 1;
    } catch (const Error&) {
      bad[i] = 1;
    }
  });

  DensityCurve c;
  c.grid = grid;
  c.values.resize(n);
  c.eps_used.assign(n, e2);
  c.failed.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.failed[i] = bad[i] != 0;
    c.min_raw = std::min(c.min_raw, raw[i]);
    if (raw[i] < -opts.negativity_tol) ++c.negative_points;
    c.values[i] = std::max(0.0, raw[i]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    c.mass += 0.5 * (c.values[i] + c.values[i + 1]) * (grid[i + 1] - grid[i]);
  return c;
}

std::vector<Interval> support_detect(const AnalyticTransform& g, Interval scan, double eps,
                                     double threshold, std::size_t scan_points) {
  if (!(eps > 0.0) || !(threshold > 0.0))
    throw PreconditionError("support detection needs eps > 0 and threshold > 0");
  auto inside = [&](double x) {
    try {
      return -g(cplx(x, eps)).imag() / kPi > threshold;
    } catch (const Error&) {
      return false;
    }
  };
  const std::vector<double> x = uniform_grid(scan.lo, scan.hi, scan_points);
  std::vector<char> in(x.size());
  parallel_for(x.size(), [&](std::size_t i) { in[i] = inside(x[i]) ? 1 : 0; });

  auto refine = [&](double out_pt, double in_pt) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (out_pt + in_pt);
      if (std::abs(in_pt - out_pt) <= 1e-12 * std::max(1.0, std::abs(mid))) break;
      if (inside(mid)) in_pt = mid;
      else out_pt = mid;
    }
    return in_pt;
  };

  std::vector<Interval> runs;
  std::size_t i = 0;
  while (i < x.size()) {
    if (!in[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < x.size() && in[j + 1]) ++j;
    const double lo = i == 0 ? x.front() : refine(x[i - 1], x[i]);
    const double hi = j + 1 == x.size() ? x.back() : refine(x[j + 1], x[j]);
    runs.push_back({lo, hi});
    i = j + 1;
  }
  return runs;
}

double curve_moment(const DensityCurve& c, int k) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < c.grid.size(); ++i) {
    const double a = c.grid[i], b = c.grid[i + 1];
    s += 0.5 * (b - a) * (std::pow(a, k) * c.values[i] + std::pow(b, k) * c.values[i + 1]);
  }
  return s;
}

std::function<double(double)> curve_cdf(const DensityCurve& c) {
  std::vector<double> cum(c.grid.size(), 0.0);
  for (std::size_t i = 0; i + 1 < c.grid.size(); ++i)
    cum[i + 1] = cum[i] + 0.5 * (c.values[i] + c.values[i + 1]) * (c.grid[i + 1] - c.grid[i]);
  // Normalized by the curve mass so the result is a distribution function; the mass itself
  // is reported separately and policed by measure_from_curve.
  if (cum.back() > 0.0)
    for (double& v : cum) v /= cum.back();
  std::vector<double> x = c.grid;
  return [x, cum](double t) {
    if (t <= x.front()) return 0.0;
    if (t >= x.back()) return cum.back();
    const auto it = std::upper_bound(x.begin(), x.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - x.begin());
    const std::size_t i = j - 1;
    return cum[i] + (cum[j] - cum[i]) * (t - x[i]) / (x[j] - x[i]);
  };
}

double curve_mass(const DensityCurve& c, double a, double b) {
  if (b <= a) return 0.0;
  auto value_at = [&](double t) {
    if (t <= c.grid.front() || t >= c.grid.back()) {
      if (t == c.grid.front()) return c.values.front();
      if (t == c.grid.back()) return c.values.back();
      return 0.0;
    }
    const auto it = std::upper_bound(c.grid.begin(), c.grid.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - c.grid.begin());
    const std::size_t i = j - 1;
    return c.values[i] + (c.values[j] - c.values[i]) * (t - c.grid[i]) / (c.grid[j] - c.grid[i]);
  };
  // Exact integral of the piecewise-linear interpolant over [a, b].
  std::vector<double> pts{a};
  for (double x : c.grid)
    if (x > a && x < b) pts.push_back(x);
  pts.push_back(b);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = std::max(pts[i], c.grid.front());
    const double hi = std::min(pts[i + 1], c.grid.back());
    if (hi > lo) s += 0.5 * (value_at(lo) + value_at(hi)) * (hi - lo);
  }
  return s;
}

MassDeficit::MassDeficit(double mass, double tol)
    : Error("curve mass " + std::to_string(mass) + " differs from 1 by more than " +
            std::to_string(tol) + " (lost point mass or truncated support)"),
      mass_(mass) {}

ProbabilityMeasure measure_from_curve(const DensityCurve& c, double mass_tol) {
  if (!(std::abs(c.mass - 1.0) <= mass_tol)) throw MassDeficit(c.mass, mass_tol);
  return ProbabilityMeasure::grid_density(c.grid, c.values, mass_tol);
}

}  // namespace freebias
