#pragma once

#include <functional>
#include <vector>

#include "freebias/holomorphic.hpp"
#include "freebias/measure.hpp"

namespace freebias {

struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> values;    // clamped at 0
  std::vector<double> eps_used;  // finest epsilon per point
  std::vector<bool> failed;      // evaluator threw at this point; value set to 0
  double mass = 0.0;             // trapezoid integral
  double min_raw = 0.0;          // most negative extrapolated value before clamping
  std::size_t negative_points = 0;  // points below -negativity_tol before clamping

  [[nodiscard]] std::size_t failures() const;
};

struct InversionOptions {
  std::vector<double> eps_schedule{1e-2, 5e-3};
  double negativity_tol = 1e-8;
};

/// rho(x) ~ -Im G(x + i eps)/pi along the schedule, extrapolated to eps -> 0 linearly through
/// the last two entries (for a halving schedule this is 2 rho_{eps/2} - rho_eps).
DensityCurve stieltjes_density(const AnalyticTransform& g, const std::vector<double>& grid,
                               const InversionOptions& opts = {});

/// `points` uniformly spaced nodes on [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

/// Default inversion grid for a measure: support hull padded by `pad` on each side.
std::vector<double> default_grid(const ProbabilityMeasure& mu, std::size_t points = 2049,
                                 double pad = 0.1);

/// Maximal runs of scan points where -Im g(x + i eps)/pi > threshold, with each endpoint
/// bisected between its last-out and first-in scan points down to 1e-12 relative width.
std::vector<Interval> support_detect(const AnalyticTransform& g, Interval scan, double eps,
                                     double threshold, std::size_t scan_points = 2049);

double curve_moment(const DensityCurve& c, int k);

/// Monotone CDF from the cumulative trapezoid rule divided by the curve mass, linear between
/// nodes, 0 left of the grid and 1 right of it.
std::function<double(double)> curve_cdf(const DensityCurve& c);

/// Integral of the curve over [a, b] (linear interpolation between nodes).
double curve_mass(const DensityCurve& c, double a, double b);

/// Raised when a curve's mass is too far from 1 to be promoted to a measure.
class MassDeficit : public Error {
 public:
  MassDeficit(double mass, double tol);
  [[nodiscard]] double mass() const { return mass_; }

 private:
  double mass_;
};

/// Promotes a curve to a grid measure; |mass - 1| > mass_tol raises MassDeficit.
/// Within tolerance the values are rescaled to unit mass.
ProbabilityMeasure measure_from_curve(const DensityCurve& c, double mass_tol = kDefaultMassTol);

}  // namespace freebias
