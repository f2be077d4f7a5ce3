#include "freebias/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "freebias/quadrature.hpp"

namespace freebias {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double trapezoid_mass(const std::vector<double>& x, const std::vector<double>& v) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) m += 0.5 * (v[i] + v[i + 1]) * (x[i + 1] - x[i]);
  return m;
}

// Integral over (-inf, t] of the linear interpolant of (x_i, g_i), zero outside the grid.
double interpolant_integral_below(const std::vector<double>& x, const std::vector<double>& g,
                                  double t) {
  if (t <= x.front()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i], b = x[i + 1];
    if (t >= b) {
      acc += 0.5 * (g[i] + g[i + 1]) * (b - a);
      continue;
    }
    const double gt = g[i] + (g[i + 1] - g[i]) * (t - a) / (b - a);
    acc += 0.5 * (g[i] + gt) * (t - a);
    break;
  }
  return acc;
}

double interpolate(const std::vector<double>& x, const std::vector<double>& v, double t) {
  if (t < x.front() || t > x.back()) return 0.0;
  auto it = std::upper_bound(x.begin(), x.end(), t);
  if (it == x.end()) return v.back();
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const std::size_t i = j - 1;
  return v[i] + (v[j] - v[i]) * (t - x[i]) / (x[j] - x[i]);
}

// Compactly supported named laws written as X = c + h cos(theta), theta in [0, pi], with
// theta-density g. The parametrization absorbs square-root and inverse-square-root edges.
struct ThetaLaw {
  double c = 0.0;
  double h = 1.0;
  double mass = 1.0;  // continuous mass (free Poisson with rate < 1 carries an atom)
  std::function<double(double)> g;

  [[nodiscard]] double x(double theta) const { return c + h * std::cos(theta); }
  // theta at which x(theta) = t, clamped to [0, pi].
  [[nodiscard]] double theta_of(double t) const {
    return std::acos(std::clamp((t - c) / h, -1.0, 1.0));
  }
  [[nodiscard]] double integrate(const std::function<double(double)>& f, double ta,
                                 double tb) const {
    if (tb <= ta) return 0.0;
    auto r = quadrature::adaptive([&](double th) { return f(x(th)) * g(th); }, ta, tb, 1e-13,
                                  1e-15);
    return r.value;
  }
};

ThetaLaw theta_law(const Semicircle& s) {
  return {s.mean, 2.0 * std::sqrt(s.variance), 1.0,
          [](double th) { return 2.0 / kPi * std::sin(th) * std::sin(th); }};
}

ThetaLaw theta_law(const Arcsine& a) {
  return {0.5 * (a.left + a.right), 0.5 * (a.right - a.left), 1.0, [](double) { return 1.0 / kPi; }};
}

ThetaLaw theta_law(const FreePoisson& p) {
  const double c0 = (1.0 + p.rate) * p.jump;
  const double h = 2.0 * std::abs(p.jump) * std::sqrt(p.rate);
  const double alpha = p.jump;
  return {c0 + p.shift, h, std::min(p.rate, 1.0), [c0, h, alpha](double th) {
            const double s = std::sin(th);
            const double y = c0 + h * std::cos(th);
            return h * h * s * s / (2.0 * kPi * alpha * y);
          }};
}

std::optional<ThetaLaw> theta_law_of(const ProbabilityMeasure::Variant& v) {
  if (auto* s = std::get_if<Semicircle>(&v)) return theta_law(*s);
  if (auto* a = std::get_if<Arcsine>(&v)) return theta_law(*a);
  if (auto* p = std::get_if<FreePoisson>(&v)) return theta_law(*p);
  return std::nullopt;
}

double free_poisson_atom(const FreePoisson& p) { return p.rate < 1.0 ? 1.0 - p.rate : 0.0; }

double abs_moment_theta(const ThetaLaw& law) {
  auto absf = [](double x) { return std::abs(x); };
  if (std::abs(law.c) >= law.h) return law.integrate(absf, 0.0, kPi);
  const double t0 = law.theta_of(0.0);
  return law.integrate(absf, 0.0, t0) + law.integrate(absf, t0, kPi);
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- constructors

ProbabilityMeasure ProbabilityMeasure::atomic(std::vector<Atom> atoms) {
  if (atoms.empty()) throw InvalidMeasure("atomic measure needs at least one atom");
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.location)) throw InvalidMeasure("atom location must be finite");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw InvalidMeasure("atom weight must be positive, got " + num(a.weight));
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidMeasure("atom weights sum to " + num(total) + ", expected 1");
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    if (atoms[i].location == atoms[i - 1].location)
      throw InvalidMeasure("duplicate atom location " + num(atoms[i].location));
  }
  return ProbabilityMeasure(Atomic{std::move(atoms)});
}

ProbabilityMeasure ProbabilityMeasure::dirac(double location) {
  return atomic({{location, 1.0}});
}

ProbabilityMeasure ProbabilityMeasure::rademacher() { return atomic({{-1.0, 0.5}, {1.0, 0.5}}); }

ProbabilityMeasure ProbabilityMeasure::grid_density(std::vector<double> grid,
                                                    std::vector<double> values, double mass_tol) {
  if (grid.size() != values.size())
    throw InvalidMeasure("grid and values have different lengths");
  if (grid.size() < 8) throw InvalidMeasure("grid density needs at least 8 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(values[i]))
      throw InvalidMeasure("grid density entries must be finite");
    if (values[i] < 0.0) throw InvalidMeasure("grid density values must be nonnegative");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw InvalidMeasure("grid must be strictly ascending");
  }
  const double mass = trapezoid_mass(grid, values);
  if (!(std::abs(mass - 1.0) <= mass_tol))
    throw InvalidMeasure("grid density has trapezoid mass " + num(mass) + ", expected 1 within " +
                         num(mass_tol));
  for (double& v : values) v /= mass;
  return ProbabilityMeasure(GridDensity{std::move(grid), std::move(values)});
}

ProbabilityMeasure ProbabilityMeasure::semicircle(double mean, double variance) {
  if (!std::isfinite(mean) || !(variance > 0.0) || !std::isfinite(variance))
    throw InvalidMeasure("semicircle needs finite mean and variance > 0");
  return ProbabilityMeasure(Semicircle{mean, variance});
}

ProbabilityMeasure ProbabilityMeasure::arcsine(double left, double right) {
  if (!std::isfinite(left) || !std::isfinite(right) || !(left < right))
    throw InvalidMeasure("arcsine needs finite left < right");
  return ProbabilityMeasure(Arcsine{left, right});
}

ProbabilityMeasure ProbabilityMeasure::free_poisson(double rate, double jump, double shift) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidMeasure("free Poisson needs rate > 0");
  if (jump == 0.0 || !std::isfinite(jump)) throw InvalidMeasure("free Poisson needs jump != 0");
  if (!std::isfinite(shift)) throw InvalidMeasure("free Poisson shift must be finite");
  return ProbabilityMeasure(FreePoisson{rate, jump, shift});
}

ProbabilityMeasure ProbabilityMeasure::cauchy(double location, double scale) {
  if (!std::isfinite(location) || !(scale > 0.0) || !std::isfinite(scale))
    throw InvalidMeasure("Cauchy law needs finite location and scale > 0");
  return ProbabilityMeasure(CauchyLaw{location, scale});
}

ProbabilityMeasure ProbabilityMeasure::mixture(std::vector<double> weights,
                                               std::vector<ProbabilityMeasure> components) {
  if (weights.empty() || weights.size() != components.size())
    throw InvalidMeasure("mixture needs matching, nonempty weights and components");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidMeasure("mixture weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidMeasure("mixture weights sum to " + num(total) + ", expected 1");
  return ProbabilityMeasure(Mixture{std::move(weights), std::move(components)});
}

// ---------------------------------------------------------------- statistics

MomentSummary moments(const ProbabilityMeasure& mu) {
  return std::visit(
      Overloaded{
          [](const Atomic& a) {
            double m = 0.0, s = 0.0, ab = 0.0;
            for (const Atom& at : a.atoms) {
              m += at.weight * at.location;
              s += at.weight * at.location * at.location;
              ab += at.weight * std::abs(at.location);
            }
            return MomentSummary{m, std::max(0.0, s - m * m), s, ab};
          },
          [](const GridDensity& g) {
            double m = 0.0, s = 0.0, ab = 0.0;
            for (std::size_t i = 0; i + 1 < g.grid.size(); ++i) {
              const double h = 0.5 * (g.grid[i + 1] - g.grid[i]);
              const double x0 = g.grid[i], x1 = g.grid[i + 1];
              const double r0 = g.values[i], r1 = g.values[i + 1];
              m += h * (x0 * r0 + x1 * r1);
              s += h * (x0 * x0 * r0 + x1 * x1 * r1);
              ab += h * (std::abs(x0) * r0 + std::abs(x1) * r1);
            }
            return MomentSummary{m, std::max(0.0, s - m * m), s, ab};
          },
          [](const Semicircle& sc) {
            return MomentSummary{sc.mean, sc.variance, sc.variance + sc.mean * sc.mean,
                                 abs_moment_theta(theta_law(sc))};
          },
          [](const Arcsine& a) {
            const double m = 0.5 * (a.left + a.right);
            const double v = (a.right - a.left) * (a.right - a.left) / 8.0;
            return MomentSummary{m, v, v + m * m, abs_moment_theta(theta_law(a))};
          },
          [](const FreePoisson& p) {
            const double m = p.rate * p.jump + p.shift;
            const double v = p.rate * p.jump * p.jump;
            double ab;
            if (p.shift == 0.0) {
              ab = std::abs(m);  // single-signed law
            } else {
              ab = abs_moment_theta(theta_law(p)) + free_poisson_atom(p) * std::abs(p.shift);
            }
            return MomentSummary{m, v, v + m * m, ab};
          },
          [](const CauchyLaw&) { return MomentSummary{}; },
          [](const Mixture& mx) {
            double m = 0.0, s = 0.0, ab = 0.0;
            bool defined = true;
            for (std::size_t i = 0; i < mx.weights.size(); ++i) {
              const MomentSummary c = moments(mx.components[i]);
              if (!c.mean || !c.second_moment || !c.abs_first_moment) {
                defined = false;
                break;
              }
              m += mx.weights[i] * *c.mean;
              s += mx.weights[i] * *c.second_moment;
              ab += mx.weights[i] * *c.abs_first_moment;
            }
            if (!defined) return MomentSummary{};
            return MomentSummary{m, std::max(0.0, s - m * m), s, ab};
          },
      },
      mu.variant());
}

Interval support_hull(const ProbabilityMeasure& mu) {
  return std::visit(
      Overloaded{
          [](const Atomic& a) { return Interval{a.atoms.front().location, a.atoms.back().location}; },
          [](const GridDensity& g) {
            const std::size_t n = g.grid.size();
            std::size_t first = 0, last = n - 1;
            while (first < n && g.values[first] <= 0.0) ++first;
            while (last > first && g.values[last] <= 0.0) --last;
            const std::size_t lo = first > 0 ? first - 1 : 0;
            const std::size_t hi = last + 1 < n ? last + 1 : n - 1;
            return Interval{g.grid[lo], g.grid[hi]};
          },
          [](const Semicircle& s) {
            const double r = 2.0 * std::sqrt(s.variance);
            return Interval{s.mean - r, s.mean + r};
          },
          [](const Arcsine& a) { return Interval{a.left, a.right}; },
          [](const FreePoisson& p) {
            const double r = std::sqrt(p.rate);
            double e1 = (1.0 - r) * (1.0 - r) * p.jump + p.shift;
            double e2 = (1.0 + r) * (1.0 + r) * p.jump + p.shift;
            if (e1 > e2) std::swap(e1, e2);
            if (p.rate < 1.0) {
              e1 = std::min(e1, p.shift);
              e2 = std::max(e2, p.shift);
            }
            return Interval{e1, e2};
          },
          [](const CauchyLaw&) { return Interval{-kInf, kInf}; },
          [](const Mixture& mx) {
            Interval out{kInf, -kInf};
            for (const auto& c : mx.components) {
              const Interval h = support_hull(c);
              out.lo = std::min(out.lo, h.lo);
              out.hi = std::max(out.hi, h.hi);
            }
            return out;
          },
      },
      mu.variant());
}

ProbabilityMeasure shift(const ProbabilityMeasure& mu, double c) {
  return std::visit(
      Overloaded{
          [c](const Atomic& a) {
            std::vector<Atom> atoms = a.atoms;
            for (Atom& at : atoms) at.location += c;
            return ProbabilityMeasure::atomic(std::move(atoms));
          },
          [c](const GridDensity& g) {
            std::vector<double> x = g.grid;
            for (double& t : x) t += c;
            return ProbabilityMeasure::grid_density(std::move(x), g.values);
          },
          [c](const Semicircle& s) { return ProbabilityMeasure::semicircle(s.mean + c, s.variance); },
          [c](const Arcsine& a) { return ProbabilityMeasure::arcsine(a.left + c, a.right + c); },
          [c](const FreePoisson& p) {
            return ProbabilityMeasure::free_poisson(p.rate, p.jump, p.shift + c);
          },
          [c](const CauchyLaw& l) { return ProbabilityMeasure::cauchy(l.location + c, l.scale); },
          [c](const Mixture& mx) {
            std::vector<ProbabilityMeasure> comps;
            for (const auto& m : mx.components) comps.push_back(shift(m, c));
            return ProbabilityMeasure::mixture(mx.weights, std::move(comps));
          },
      },
      mu.variant());
}

ProbabilityMeasure scale(const ProbabilityMeasure& mu, double a) {
  if (a == 0.0 || !std::isfinite(a)) throw PreconditionError("scale factor must be nonzero");
  return std::visit(
      Overloaded{
          [a](const Atomic& at) {
            std::vector<Atom> atoms = at.atoms;
            for (Atom& x : atoms) x.location *= a;
            return ProbabilityMeasure::atomic(std::move(atoms));
          },
          [a](const GridDensity& g) {
            std::vector<double> x = g.grid, v = g.values;
            for (double& t : x) t *= a;
            for (double& r : v) r /= std::abs(a);
            if (a < 0) {
              std::reverse(x.begin(), x.end());
              std::reverse(v.begin(), v.end());
            }
            return ProbabilityMeasure::grid_density(std::move(x), std::move(v));
          },
          [a](const Semicircle& s) {
            return ProbabilityMeasure::semicircle(a * s.mean, a * a * s.variance);
          },
          [a](const Arcsine& s) {
            return ProbabilityMeasure::arcsine(std::min(a * s.left, a * s.right),
                                               std::max(a * s.left, a * s.right));
          },
          [a](const FreePoisson& p) {
            return ProbabilityMeasure::free_poisson(p.rate, a * p.jump, a * p.shift);
          },
          [a](const CauchyLaw& l) {
            return ProbabilityMeasure::cauchy(a * l.location, std::abs(a) * l.scale);
          },
          [a](const Mixture& mx) {
            std::vector<ProbabilityMeasure> comps;
            for (const auto& m : mx.components) comps.push_back(scale(m, a));
            return ProbabilityMeasure::mixture(mx.weights, std::move(comps));
          },
      },
      mu.variant());
}

double expectation(const ProbabilityMeasure& mu, const std::function<double(double)>& f) {
  if (auto law = theta_law_of(mu.variant())) {
    double atom = 0.0;
    if (auto* p = mu.get_if<FreePoisson>()) atom = free_poisson_atom(*p) * f(p->shift);
    return law->integrate(f, 0.0, kPi) + atom;
  }
  return std::visit(
      Overloaded{
          [&](const Atomic& a) {
            double s = 0.0;
            for (const Atom& at : a.atoms) s += at.weight * f(at.location);
            return s;
          },
          [&](const GridDensity& g) {
            double s = 0.0;
            for (std::size_t i = 0; i + 1 < g.grid.size(); ++i) {
              s += 0.5 * (g.grid[i + 1] - g.grid[i]) *
                   (f(g.grid[i]) * g.values[i] + f(g.grid[i + 1]) * g.values[i + 1]);
            }
            return s;
          },
          [&](const CauchyLaw& l) {
            auto r = quadrature::adaptive(
                [&](double u) { return f(l.location + l.scale * std::tan(u)) / kPi; },
                -0.5 * kPi, 0.5 * kPi, 1e-12, 1e-15);
            return r.value;
          },
          [&](const Mixture& mx) {
            double s = 0.0;
            for (std::size_t i = 0; i < mx.weights.size(); ++i)
              s += mx.weights[i] * expectation(mx.components[i], f);
            return s;
          },
          [](const auto&) -> double { throw Error("unreachable measure variant"); },
      },
      mu.variant());
}

double cdf(const ProbabilityMeasure& mu, double t) {
  if (auto law = theta_law_of(mu.variant())) {
    double atom = 0.0;
    if (auto* p = mu.get_if<FreePoisson>()) atom = t >= p->shift ? free_poisson_atom(*p) : 0.0;
    const double th = law->theta_of(t);
    return std::clamp(law->integrate([](double) { return 1.0; }, th, kPi) + atom, 0.0, 1.0);
  }
  return std::visit(
      Overloaded{
          [t](const Atomic& a) {
            double s = 0.0;
            for (const Atom& at : a.atoms)
              if (at.location <= t) s += at.weight;
            return s;
          },
          [t](const GridDensity& g) { return interpolant_integral_below(g.grid, g.values, t); },
          [t](const CauchyLaw& l) { return 0.5 + std::atan((t - l.location) / l.scale) / kPi; },
          [t](const Mixture& mx) {
            double s = 0.0;
            for (std::size_t i = 0; i < mx.weights.size(); ++i)
              s += mx.weights[i] * cdf(mx.components[i], t);
            return s;
          },
          [](const auto&) -> double { throw Error("unreachable measure variant"); },
      },
      mu.variant());
}

double upper_partial_moment(const ProbabilityMeasure& mu, double t) {
  if (auto law = theta_law_of(mu.variant())) {
    double atom = 0.0;
    if (auto* p = mu.get_if<FreePoisson>())
      atom = p->shift > t ? free_poisson_atom(*p) * p->shift : 0.0;
    return law->integrate([](double x) { return x; }, 0.0, law->theta_of(t)) + atom;
  }
  return std::visit(
      Overloaded{
          [t](const Atomic& a) {
            double s = 0.0;
            for (const Atom& at : a.atoms)
              if (at.location > t) s += at.weight * at.location;
            return s;
          },
          [t](const GridDensity& g) {
            std::vector<double> xr(g.grid.size());
            for (std::size_t i = 0; i < xr.size(); ++i) xr[i] = g.grid[i] * g.values[i];
            return interpolant_integral_below(g.grid, xr, kInf) -
                   interpolant_integral_below(g.grid, xr, t);
          },
          [](const CauchyLaw&) -> double {
            throw PreconditionError("Cauchy law has no first moment");
          },
          [t](const Mixture& mx) {
            double s = 0.0;
            for (std::size_t i = 0; i < mx.weights.size(); ++i)
              s += mx.weights[i] * upper_partial_moment(mx.components[i], t);
            return s;
          },
          [](const auto&) -> double { throw Error("unreachable measure variant"); },
      },
      mu.variant());
}

double density(const ProbabilityMeasure& mu, double x) {
  return std::visit(
      Overloaded{
          [](const Atomic&) { return 0.0; },
          [x](const GridDensity& g) { return interpolate(g.grid, g.values, x); },
          [x](const Semicircle& s) {
            const double d = 4.0 * s.variance - (x - s.mean) * (x - s.mean);
            return d > 0.0 ? std::sqrt(d) / (2.0 * kPi * s.variance) : 0.0;
          },
          [x](const Arcsine& a) {
            const double d = (x - a.left) * (a.right - x);
            return d > 0.0 ? 1.0 / (kPi * std::sqrt(d)) : 0.0;
          },
          [x](const FreePoisson& p) {
            const double y = x - p.shift;
            const double c0 = (1.0 + p.rate) * p.jump;
            const double d = 4.0 * p.rate * p.jump * p.jump - (y - c0) * (y - c0);
            if (d <= 0.0 || y == 0.0) return 0.0;
            return std::sqrt(d) / (2.0 * kPi * p.jump * y);
          },
          [x](const CauchyLaw& l) {
            const double u = x - l.location;
            return l.scale / (kPi * (u * u + l.scale * l.scale));
          },
          [x](const Mixture& mx) {
            double s = 0.0;
            for (std::size_t i = 0; i < mx.weights.size(); ++i)
              s += mx.weights[i] * density(mx.components[i], x);
            return s;
          },
      },
      mu.variant());
}

double atom_mass(const ProbabilityMeasure& mu, double x) {
  if (auto* a = mu.get_if<Atomic>()) {
    for (const Atom& at : a->atoms)
      if (at.location == x) return at.weight;
    return 0.0;
  }
  if (auto* p = mu.get_if<FreePoisson>()) return p->shift == x ? free_poisson_atom(*p) : 0.0;
  if (auto* mx = mu.get_if<Mixture>()) {
    double s = 0.0;
    for (std::size_t i = 0; i < mx->weights.size(); ++i)
      s += mx->weights[i] * atom_mass(mx->components[i], x);
    return s;
  }
  return 0.0;
}

ProbabilityMeasure discretize(const ProbabilityMeasure& mu, int points) {
  if (points < 8) throw PreconditionError("discretization needs at least 8 points");
  if (mu.is<Atomic>() || mu.is<GridDensity>()) return mu;
  if (mu.is<CauchyLaw>()) throw PreconditionError("Cauchy law has unbounded support; cannot grid it");
  if (auto* mx = mu.get_if<Mixture>()) {
    std::vector<ProbabilityMeasure> comps;
    for (const auto& c : mx->components) comps.push_back(discretize(c, points));
    return ProbabilityMeasure::mixture(mx->weights, std::move(comps));
  }
  const ThetaLaw law = *theta_law_of(mu.variant());
  // Chebyshev–Lobatto nodes cluster where the edge behaviour lives.
  const int n = points;
  std::vector<double> theta(n), x(n), v(n);
  for (int j = 0; j < n; ++j) {
    theta[j] = kPi * (n - 1 - j) / (n - 1);  // ascending x
    x[j] = law.x(theta[j]);
  }
  x.front() = law.c - law.h;
  x.back() = law.c + law.h;
  for (int j = 1; j + 1 < n; ++j) v[j] = density(mu, x[j]) / law.mass;
  // Edge values: match the exact mass of the edge cell (handles singular edges), clamped at 0.
  auto edge = [&](int e, int inner) {
    const double cell = std::abs(x[inner] - x[e]);
    const double m = law.integrate([](double) { return 1.0; }, std::min(theta[e], theta[inner]),
                                   std::max(theta[e], theta[inner])) /
                     law.mass;
    return std::max(0.0, 2.0 * m / cell - v[inner]);
  };
  v.front() = edge(0, 1);
  v.back() = edge(n - 1, n - 2);
  const double mass = trapezoid_mass(x, v);
  for (double& r : v) r /= mass;
  ProbabilityMeasure grid = ProbabilityMeasure::grid_density(std::move(x), std::move(v));
  if (auto* p = mu.get_if<FreePoisson>(); p && p->rate < 1.0) {
    return ProbabilityMeasure::mixture({1.0 - p->rate, p->rate},
                                       {ProbabilityMeasure::dirac(p->shift), grid});
  }
  return grid;
}

std::string describe(const ProbabilityMeasure& mu) {
  return std::visit(
      Overloaded{
          [](const Atomic& a) {
            std::string s = "atomic(";
            for (std::size_t i = 0; i < a.atoms.size(); ++i) {
              if (i) s += ", ";
              s += num(a.atoms[i].weight) + "@" + num(a.atoms[i].location);
            }
            return s + ")";
          },
          [](const GridDensity& g) {
            return "grid(" + std::to_string(g.grid.size()) + " points on [" + num(g.grid.front()) +
                   ", " + num(g.grid.back()) + "])";
          },
          [](const Semicircle& s) {
            return "semicircle(mean=" + num(s.mean) + ", variance=" + num(s.variance) + ")";
          },
          [](const Arcsine& a) {
            return "arcsine(left=" + num(a.left) + ", right=" + num(a.right) + ")";
          },
          [](const FreePoisson& p) {
            std::string s = "free_poisson(lambda=" + num(p.rate) + ", alpha=" + num(p.jump);
            if (p.shift != 0.0) s += ", shift=" + num(p.shift);
            return s + ")";
          },
          [](const CauchyLaw& l) {
            return "cauchy(location=" + num(l.location) + ", scale=" + num(l.scale) + ")";
          },
          [](const Mixture& mx) {
            std::string s = "mixture(";
            for (std::size_t i = 0; i < mx.weights.size(); ++i) {
              if (i) s += ", ";
              s += num(mx.weights[i]) + "*" + describe(mx.components[i]);
            }
            return s + ")";
          },
      },
      mu.variant());
}

}  // namespace freebias
