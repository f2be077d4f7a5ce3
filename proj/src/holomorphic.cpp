#include "freebias/holomorphic.hpp"

#include <algorithm>
#include <cmath>

#include "freebias/parallel.hpp"
#include "freebias/quadrature.hpp"

namespace freebias {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct ValueAndDerivative {
  cplx g;
  cplx dg;
};

// Cells closer to z than this many cell widths use the exact logarithmic primitive.
constexpr double kNearCells = 4.0;

ValueAndDerivative grid_cauchy(const GridDensity& d, cplx z) {
  const quadrature::Rule& rule = quadrature::gauss_legendre(8);
  cplx g{}, dg{};
  for (std::size_t i = 0; i + 1 < d.grid.size(); ++i) {
    const double a = d.grid[i], b = d.grid[i + 1];
    const double va = d.values[i], vb = d.values[i + 1];
    if (va == 0.0 && vb == 0.0) continue;
    const double len = b - a;
    const double q = (vb - va) / len;
    const double x = z.real();
    const double dist = (x >= a && x <= b) ? z.imag() : std::min(std::abs(z - a), std::abs(z - b));
    if (dist < kNearCells * len) {
      // rho(t) = va + q (t - a) = (va + q (z - a)) - q (z - t)
      const cplx za = z - a, zb = z - b;
      const cplx log_ratio = std::log(za) - std::log(zb);  // int_a^b dt / (z - t)
      const cplx lead = va + q * za;
      g += lead * log_ratio - q * len;
      // int rho/(z-t)^2 = lead (1/(z-b) - 1/(z-a)) - q log_ratio; G' is its negative
      dg -= lead * (1.0 / zb - 1.0 / za) - q * log_ratio;
    } else {
      const double mid = 0.5 * (a + b), half = 0.5 * len;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double t = mid + half * rule.nodes[k];
        const double rho = va + q * (t - a);
        const cplx inv = 1.0 / (z - t);
        const double w = rule.weights[k] * half * rho;
        g += w * inv;
        dg -= w * inv * inv;
      }
    }
  }
  return {g, dg};
}

ValueAndDerivative semicircle_g(double mean, double variance, cplx z) {
  const cplx u = z - mean;
  const cplx s = principal_sqrt(u * u - 4.0 * variance);
  // 2/(u + s) equals (u - s)/(2 v) but does not cancel for large |u|.
  const cplx g = 2.0 / (u + s);
  const cplx dg = -g / s;
  return {g, dg};
}

ValueAndDerivative free_poisson_g(const FreePoisson& p, cplx z) {
  const double lam = p.rate, al = p.jump;
  const cplx w = z - p.shift;
  const cplx u = w - (1.0 + lam) * al;
  const cplx s = principal_sqrt(u * u - 4.0 * al * al * lam);
  // Rationalized: (a - s)/(2 alpha w) with a = w + (1 - lambda) alpha equals 2/(a + s).
  const cplx g = 2.0 / (w + (1.0 - lam) * al + s);
  const cplx dg = -0.5 * g * g * (1.0 + u / s);
  return {g, dg};
}

ValueAndDerivative evaluate_measure(const ProbabilityMeasure& mu, cplx z) {
  return std::visit(
      Overloaded{
          [z](const Atomic& a) {
            cplx g{}, dg{};
            for (const Atom& at : a.atoms) {
              const cplx inv = 1.0 / (z - at.location);
              g += at.weight * inv;
              dg -= at.weight * inv * inv;
            }
            return ValueAndDerivative{g, dg};
          },
          [z](const GridDensity& d) { return grid_cauchy(d, z); },
          [z](const Semicircle& s) { return semicircle_g(s.mean, s.variance, z); },
          [z](const Arcsine& a) {
            const cplx g = 1.0 / principal_sqrt((z - a.left) * (z - a.right));
            const cplx dg = -0.5 * (2.0 * z - a.left - a.right) * g * g * g;
            return ValueAndDerivative{g, dg};
          },
          [z](const FreePoisson& p) { return free_poisson_g(p, z); },
          [z](const CauchyLaw& l) {
            const cplx g = 1.0 / (z - l.location + cplx(0.0, l.scale));
            return ValueAndDerivative{g, -g * g};
          },
          [z](const Mixture& mx) {
            cplx g{}, dg{};
            for (std::size_t i = 0; i < mx.weights.size(); ++i) {
              const auto c = evaluate_measure(mx.components[i], z);
              g += mx.weights[i] * c.g;
              dg += mx.weights[i] * c.dg;
            }
            return ValueAndDerivative{g, dg};
          },
      },
      mu.variant());
}

}  // namespace

cplx principal_sqrt(cplx zeta) {
  const double re = zeta.real(), im = zeta.imag();
  if (im > 0.0) return std::sqrt(zeta);
  if (im < 0.0) return -std::sqrt(zeta);
  // On the real axis: theta = 0 for re >= 0, theta = pi for re < 0.
  if (re >= 0.0) return {std::sqrt(re), 0.0};
  return {0.0, std::sqrt(-re)};
}

cplx principal_cbrt(cplx zeta) {
  const double r = std::abs(zeta);
  if (r == 0.0) return {0.0, 0.0};
  double theta = std::arg(zeta);
  if (theta < 0.0) theta += 2.0 * kPi;
  // Real axis from either side: positive reals get theta = 0, negative reals theta = pi.
  if (zeta.imag() == 0.0) theta = zeta.real() > 0.0 ? 0.0 : kPi;
  return std::polar(std::cbrt(r), theta / 3.0);
}

UHPPoint::UHPPoint(cplx z) : z_(z) {
  if (!(z.imag() > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw PreconditionError("point must lie in the open upper half plane");
}

const char* to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::CauchyG: return "CauchyG";
    case TransformKind::ReciprocalF: return "ReciprocalF";
    case TransformKind::Voiculescu: return "Voiculescu";
    case TransformKind::RTransform: return "RTransform";
    case TransformKind::Derived: return "Derived";
  }
  return "?";
}

AnalyticTransform::AnalyticTransform(TransformKind kind, Fn value, std::string provenance,
                                     Fn derivative)
    : kind_(kind),
      value_(std::move(value)),
      derivative_(std::move(derivative)),
      provenance_(std::move(provenance)) {}

cplx AnalyticTransform::operator()(cplx z) const {
#ifndef NDEBUG
  if (!(z.imag() > 0.0)) throw PreconditionError("transform evaluated off the upper half plane");
  const cplx v = value_(z);
  if (kind_ == TransformKind::CauchyG && std::isfinite(v.real()) &&
      (v.imag() > 1e-12 * std::abs(v) || std::abs(v) > (1.0 + 1e-8) / z.imag()))
    throw Error("Cauchy transform postcondition violated for " + provenance_);
  if (kind_ == TransformKind::ReciprocalF && std::isfinite(v.real()) &&
      v.imag() < z.imag() * (1.0 - 1e-8))
    throw Error("reciprocal transform postcondition violated for " + provenance_);
  return v;
#else
  return value_(z);
#endif
}

cplx AnalyticTransform::derivative(cplx z) const {
  if (derivative_) return derivative_(z);
  const double h = 1e-3 * z.imag();
  return (-value_(z + 2.0 * h) + 8.0 * value_(z + h) - 8.0 * value_(z - h) +
          value_(z - 2.0 * h)) /
         (12.0 * h);
}

std::vector<cplx> AnalyticTransform::evaluate(std::span<const cplx> zs) const {
  std::vector<cplx> out(zs.size());
  parallel_for(zs.size(), [&](std::size_t i) { out[i] = (*this)(zs[i]); });
  return out;
}

AnalyticTransform cauchy_transform(const ProbabilityMeasure& mu) {
  return AnalyticTransform(
      TransformKind::CauchyG, [mu](cplx z) { return evaluate_measure(mu, z).g; },
      "G[" + describe(mu) + "]", [mu](cplx z) { return evaluate_measure(mu, z).dg; });
}

AnalyticTransform reciprocal_transform(const AnalyticTransform& g) {
  AnalyticTransform::Fn dfn;
  if (g.has_analytic_derivative()) {
    dfn = [g](cplx z) {
      const cplx v = g(z);
      return -g.derivative(z) / (v * v);
    };
  }
  return AnalyticTransform(
      TransformKind::ReciprocalF, [g](cplx z) { return 1.0 / g(z); }, "1/" + g.provenance(),
      dfn);
}

double tail_normalization_check(const AnalyticTransform& g, double y_max) {
  if (!(y_max >= 100.0)) throw PreconditionError("tail check needs y_max >= 100");
  const cplx iy(0.0, y_max);
  return std::abs(iy * g(iy) - 1.0);
}

AnalyticTransform shift_transform(const AnalyticTransform& g, double c) {
  AnalyticTransform::Fn dfn;
  if (g.has_analytic_derivative()) dfn = [g, c](cplx z) { return g.derivative(z - c); };
  return AnalyticTransform(
      g.kind(), [g, c](cplx z) { return g(z - c); },
      "shift(" + g.provenance() + ", " + std::to_string(c) + ")", dfn);
}

AnalyticTransform scale_transform(const AnalyticTransform& g, double a) {
  if (a == 0.0) throw PreconditionError("scale factor must be nonzero");
  auto value = [g, a](cplx z) {
    const cplx w = z / a;
    if (a > 0) return g(w) / a;
    return std::conj(g(std::conj(w))) / a;
  };
  AnalyticTransform::Fn dfn;
  if (g.has_analytic_derivative()) {
    dfn = [g, a](cplx z) {
      const cplx w = z / a;
      if (a > 0) return g.derivative(w) / (a * a);
      return std::conj(g.derivative(std::conj(w))) / (a * a);
    };
  }
  return AnalyticTransform(g.kind(), value,
                           "scale(" + g.provenance() + ", " + std::to_string(a) + ")", dfn);
}

TransformMoments estimate_moments(const AnalyticTransform& g, double y) {
  auto ab = [&g](double yy) {
    const cplx iy(0.0, yy);
    const cplx u = iy * g(iy) - 1.0;
    return std::pair<double, double>{-yy * u.imag(), -yy * yy * u.real()};
  };
  const auto [a1, b1] = ab(y);
  const auto [a2, b2] = ab(2.0 * y);
  return {(4.0 * a2 - a1) / 3.0, (4.0 * b2 - b1) / 3.0};
}

NewtonResult newton_uhp(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& df,
                        cplx w0, const SolverOptions& opts) {
  cplx w = w0;
  cplx fw = f(w);
  for (int it = 1; it <= opts.max_iter; ++it) {
    const cplx d = df(w);
    if (!std::isfinite(fw.real()) || !std::isfinite(fw.imag()) || d == cplx{})
      return {w, std::abs(fw), it, false};
    const cplx step = fw / d;
    // At the rounding floor the line search below can reject every step; a full Newton step
    // this small already means convergence.
    if (std::abs(step) <= opts.tol * std::max(1.0, std::abs(w)) && (w - step).imag() > 0.0)
      return {w - step, std::abs(fw), it, true};
    double lambda = 1.0;
    cplx next = w - step;
    cplx fnext{};
    bool ok = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      next = w - lambda * step;
      if (next.imag() > 0.0) {
        fnext = f(next);
        const bool finite = std::isfinite(fnext.real()) && std::isfinite(fnext.imag());
        // Accept unless the residual blows up; tiny steps are always accepted.
        if (finite && (std::abs(fnext) <= 2.0 * std::abs(fw) || lambda < 1e-3)) {
          ok = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!ok) return {w, std::abs(fw), it, false};
    const double moved = std::abs(next - w);
    w = next;
    fw = fnext;
    if ((lambda == 1.0 && moved <= opts.tol * std::max(1.0, std::abs(w))) || fw == cplx{}) {
      return {w, std::abs(fw), it, true};
    }
  }
  return {w, std::abs(fw), opts.max_iter, false};
}

}  // namespace freebias
