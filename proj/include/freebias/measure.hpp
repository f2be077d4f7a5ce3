#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "freebias/core.hpp"

namespace freebias {

class ProbabilityMeasure;

struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

/// Finitely many atoms, sorted by location.
struct Atomic {
  std::vector<Atom> atoms;
};

/// Density sampled on a strictly ascending grid, linearly interpolated, zero outside.
struct GridDensity {
  std::vector<double> grid;
  std::vector<double> values;
};

struct Semicircle {
  double mean = 0.0;
  double variance = 1.0;
};

struct Arcsine {
  double left = -1.0;
  double right = 1.0;
};

/// Free Poisson law with rate lambda and jump size alpha, translated by `shift`.
/// The translation lets centered free Poisson laws stay in closed form.
struct FreePoisson {
  double rate = 1.0;
  double jump = 1.0;
  double shift = 0.0;
};

struct CauchyLaw {
  double location = 0.0;
  double scale = 1.0;
};

struct Mixture {
  std::vector<double> weights;
  std::vector<ProbabilityMeasure> components;
};

/// Immutable probability measure on the real line. Copies share the underlying data.
class ProbabilityMeasure {
 public:
  using Variant =
      std::variant<Atomic, GridDensity, Semicircle, Arcsine, FreePoisson, CauchyLaw, Mixture>;

  static ProbabilityMeasure atomic(std::vector<Atom> atoms);
  static ProbabilityMeasure dirac(double location);
  static ProbabilityMeasure rademacher();
  /// Values are rescaled so the trapezoid mass is exactly 1 once the check passes.
  static ProbabilityMeasure grid_density(std::vector<double> grid, std::vector<double> values,
                                         double mass_tol = kDefaultMassTol);
  static ProbabilityMeasure semicircle(double mean, double variance);
  static ProbabilityMeasure arcsine(double left, double right);
  static ProbabilityMeasure free_poisson(double rate, double jump, double shift = 0.0);
  static ProbabilityMeasure cauchy(double location, double scale);
  static ProbabilityMeasure mixture(std::vector<double> weights,
                                    std::vector<ProbabilityMeasure> components);

  [[nodiscard]] const Variant& variant() const { return *data_; }

  template <class T>
  [[nodiscard]] const T* get_if() const {
    return std::get_if<T>(data_.get());
  }
  template <class T>
  [[nodiscard]] bool is() const {
    return std::holds_alternative<T>(*data_);
  }

 private:
  explicit ProbabilityMeasure(Variant v) : data_(std::make_shared<const Variant>(std::move(v))) {}
  std::shared_ptr<const Variant> data_;
};

struct MomentSummary {
  std::optional<double> mean;
  std::optional<double> variance;
  std::optional<double> second_moment;
  std::optional<double> abs_first_moment;
};

MomentSummary moments(const ProbabilityMeasure& mu);

/// Smallest closed interval containing the support.
Interval support_hull(const ProbabilityMeasure& mu);

/// Law of X + c.
ProbabilityMeasure shift(const ProbabilityMeasure& mu, double c);
/// Law of a X; a = 0 is rejected.
ProbabilityMeasure scale(const ProbabilityMeasure& mu, double a);

/// E[f(X)] for bounded f (or f integrable against mu). Grids use the trapezoid rule on
/// f(x_i) rho_i; named laws use adaptive quadrature in an edge-regularizing parametrization.
double expectation(const ProbabilityMeasure& mu, const std::function<double(double)>& f);

/// P(X <= t).
double cdf(const ProbabilityMeasure& mu, double t);

/// E[X 1{X > t}]; requires a finite first moment.
double upper_partial_moment(const ProbabilityMeasure& mu, double t);

/// Density of the absolutely continuous part at x (atoms are not included).
double density(const ProbabilityMeasure& mu, double x);

/// Total weight of atoms located exactly at x.
double atom_mass(const ProbabilityMeasure& mu, double x);

/// Replace every named component by a grid of `points` samples (atoms are kept as atoms).
/// Grids built from edge-singular laws are renormalized to unit trapezoid mass.
ProbabilityMeasure discretize(const ProbabilityMeasure& mu, int points = 4097);

/// Short human-readable description, e.g. "semicircle(mean=0, variance=1)".
std::string describe(const ProbabilityMeasure& mu);

}  // namespace freebias
