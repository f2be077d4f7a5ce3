#include "freebias/infdiv.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>

#include "freebias/transforms.hpp"

namespace freebias {
namespace {

void check_triple(const LevyTriple& t) {
  if (!std::isfinite(t.mean)) throw PreconditionError("Lévy triple mean must be finite");
  if (!(t.variance > 0.0) || !std::isfinite(t.variance))
    throw PreconditionError("Lévy triple variance must be positive");
}

// Solves w + phi(w) = z in the upper half plane for one z.
class LevySolver {
 public:
  LevySolver(LevyTriple t, LevySolveOptions opts)
      : t_(std::move(t)), gy_(cauchy_transform(t_.levy)), opts_(opts) {}

  cplx phi(cplx w) const { return t_.mean + t_.variance * gy_(w); }
  cplx dphi(cplx w) const { return t_.variance * gy_.derivative(w); }
  const LevyTriple& triple() const { return t_; }

  cplx solve(cplx z) const {
    cplx w = z;
    double step = 0.0;
    for (int k = 0; k < opts_.plain_iterations; ++k) {
      const cplx next = z - phi(w);
      step = std::abs(next - w);
      w = next;
      if (step < opts_.tol * std::max(1.0, std::abs(w))) return polish(z, w);
    }
    if (auto r = newton(z, w)) return *r;
    // Continuation down from a height where the plain iteration contracts quickly.
    const double top = std::max(8.0 * z.imag(), 4.0 * (1.0 + std::abs(t_.mean) + t_.variance));
    cplx zc{z.real(), top};
    cplx wc = zc;
    for (int k = 0; k < opts_.plain_iterations; ++k) wc = zc - phi(wc);
    double y = top;
    while (y > z.imag()) {
      double step = 0.5 * y;
      for (;;) {
        const double next = std::max(z.imag(), y - step);
        zc = cplx{z.real(), next};
        if (auto r = newton(zc, wc)) {
          wc = *r;
          y = next;
          break;
        }
        step *= 0.25;
        if (step < 1e-9 * y)
          throw SolverError("Lévy–Khintchine solve failed during continuation", wc,
                            std::abs(wc + phi(wc) - zc), opts_.max_iter);
      }
    }
    return wc;
  }

 private:
  std::optional<cplx> newton(cplx z, cplx w0) const {
    auto f = [&](cplx w) { return w + phi(w) - z; };
    auto df = [&](cplx w) { return 1.0 + dphi(w); };
    const NewtonResult r =
        newton_uhp(f, df, w0, SolverOptions{opts_.tol, std::min(opts_.max_iter, 500)});
    if (!r.converged || !(r.root.imag() > 0.0)) return std::nullopt;
    return r.root;
  }

  // One Newton step removes the slack left by the fixed-point stopping rule.
  cplx polish(cplx z, cplx w) const {
    const cplx d = 1.0 + dphi(w);
    if (d == cplx{}) return w;
    const cplx next = w - (w + phi(w) - z) / d;
    return next.imag() > 0.0 ? next : w;
  }

  LevyTriple t_;
  AnalyticTransform gy_;
  LevySolveOptions opts_;
};

}  // namespace

cplx phi_from_levy(const LevyTriple& t, UHPPoint z) {
  return t.mean + t.variance * cauchy_transform(t.levy)(z.value());
}

double lk_residual(const LevyTriple& t, cplx z, cplx g) {
  const cplx gy = cauchy_transform(t.levy)(1.0 / g);
  return std::abs((z - t.mean) * g - 1.0 - t.variance * g * gy);
}

AnalyticTransform cauchy_from_levy(const LevyTriple& t, const LevySolveOptions& opts) {
  check_triple(t);
  auto solver = std::make_shared<const LevySolver>(t, opts);
  // (z - m)G - 1 - s^2 G G_Y(1/G) equals (w + phi(w) - z)/w at w = 1/G.
  auto value = [solver, rtol = opts.residual_tol](cplx z) {
    const cplx w = solver->solve(z);
    const double res = std::abs((w + solver->phi(w) - z) / w);
    if (!(res < rtol))
      throw SolverError("Lévy–Khintchine residual above tolerance", w, res, 0);
    return 1.0 / w;
  };
  auto deriv = [solver](cplx z) {
    const cplx w = solver->solve(z);
    const cplx dw = 1.0 / (1.0 + solver->dphi(w));
    return -dw / (w * w);
  };
  return AnalyticTransform(TransformKind::CauchyG, value,
                           "levy(m=" + std::to_string(t.mean) + ", s2=" +
                               std::to_string(t.variance) + ", " + describe(t.levy) + ")",
                           deriv);
}

AnalyticTransform levy_from_transform(const AnalyticTransform& g, double mean, double variance,
                                      std::span<const cplx> probe_points) {
  if (!(variance > 0.0)) throw PreconditionError("Lévy measure recovery needs variance > 0");
  AnalyticTransform gy(
      TransformKind::CauchyG,
      [g, mean, variance](cplx z) { return (inverse_F(g, z) - z - mean) / variance; },
      "levy_of(" + g.provenance() + ")");
  if (!(tail_normalization_check(gy, 1e3) < 1e-2))
    throw Error("not consistent with free infinite divisibility at tested scale");
  for (const cplx& z : probe_points) {
    const cplx v = gy(z);
    if (v.imag() > 1e-9 * std::max(1.0, std::abs(v)))
      throw Error("not consistent with free infinite divisibility at tested scale "
                  "(recovered G_Y leaves the lower half plane)");
  }
  return gy;
}

AnalyticTransform levy_from_measure(const ProbabilityMeasure& mu,
                                    std::span<const cplx> probe_points) {
  const MomentSummary m = moments(mu);
  if (!m.mean || !m.variance) throw PreconditionError("Lévy measure recovery needs a finite variance");
  return levy_from_transform(cauchy_transform(mu), *m.mean, *m.variance, probe_points);
}

LevyTriple compound_free_poisson(double lambda, const ProbabilityMeasure& jump) {
  if (!(lambda > 0.0)) throw PreconditionError("compound free Poisson rate must be positive");
  const MomentSummary m = moments(jump);
  if (!m.second_moment || !(*m.second_moment > 0.0))
    throw PreconditionError("jump law needs a finite nonzero second moment");
  return {lambda * *m.mean, lambda * *m.second_moment, square_bias(jump)};
}

cplx levy_from_roots(const ProbabilityMeasure& mu, int n, UHPPoint w) {
  if (n < 1) throw PreconditionError("root order must be >= 1");
  const MomentSummary m = moments(mu);
  if (!m.variance || !(*m.variance > 0.0))
    throw PreconditionError("Lévy-from-roots needs a finite positive variance");
  const AnalyticTransform g = cauchy_transform(shift(mu, -*m.mean));
  const cplx f_root = convolution_root_F(g, static_cast<double>(n), w.value());
  const cplx back = inverse_F(g, f_root);
  return w.value() / *m.variance * (back / f_root - 1.0);
}

double gallery_semicircle_levy_density(double variance, double t, double x) {
  const double c = 4.0 * (variance + t);
  if (x * x >= c) return 0.0;
  return variance * std::sqrt(c - x * x) / (2.0 * kPi * (t * x * x + variance * variance));
}

cplx gallery_semicircle_levy_cauchy(double variance, double t, UHPPoint zp) {
  const cplx z = zp.value();
  const double s4 = variance * variance;
  return ((2.0 * t + variance) * z - variance * principal_sqrt(z * z - 4.0 * (variance + t))) /
         (2.0 * (t * z * z + s4));
}

cplx gallery_azadi_cauchy(UHPPoint zp) {
  cplx z = zp.value();
  // The closed form is continuous on the closed first quadrant; the left half follows from
  // the symmetry G(-conj z) = -conj G(z).
  const bool reflect = z.real() < 0.0;
  if (reflect) z = -std::conj(z);
  const cplx q = 1.0 / (4.0 * z * z) - 1.0 / 27.0;  // lies in the closed lower half plane
  const cplx s = cplx{0.0, -1.0} * std::sqrt(-q);
  const cplx r = principal_cbrt(-1.0 / (2.0 * z) + s);
  const cplx g = r + 1.0 / (3.0 * r);
  return reflect ? -std::conj(g) : g;
}

double gallery_azadi_density(double x) {
  if (x == 0.0) throw PreconditionError("Azadi density is singular at 0");
  const double ax = std::abs(x);
  if (ax > azadi_edge()) return 0.0;
  const double a = 1.0 / (2.0 * ax);
  const double b = std::sqrt(std::max(0.0, 1.0 / (4.0 * x * x) - 1.0 / 27.0));
  return std::sqrt(3.0) / (2.0 * kPi) * (std::cbrt(a + b) - std::cbrt(a - b));
}

cplx gallery_cauchy_levy(double variance, UHPPoint zp) {
  const cplx z = zp.value();
  const cplx i{0.0, 1.0};
  return (z - i - principal_sqrt((z + i) * (z + i) - 4.0 * variance)) /
         (2.0 * (variance - i * z));
}

double gallery_cauchy_levy_density(double variance, double x) {
  const double s2 = variance;
  const double u = x * x - 1.0 - 4.0 * s2;
  const double root = std::sqrt(u * u + 4.0 * x * x);
  const double a0 = std::sqrt(std::max(0.0, root + u)) / std::sqrt(2.0);
  const double b0 = std::sqrt(std::max(0.0, root - u)) / std::sqrt(2.0);
  return (std::abs(x) * a0 + s2 * (b0 + 1.0) - x * x) / (2.0 * kPi * (s2 * s2 + x * x));
}

cplx gallery_free_poisson(double lambda, double alpha, UHPPoint zp) {
  const cplx z = zp.value();
  const cplx d = z - (1.0 + lambda) * alpha;
  return (z + (1.0 - lambda) * alpha - principal_sqrt(d * d - 4.0 * alpha * alpha * lambda)) /
         (2.0 * alpha * z);
}

std::size_t polynomial_root_select(const std::vector<std::function<cplx(cplx)>>& candidates,
                                   double threshold) {
  if (candidates.empty()) throw PreconditionError("root selection needs candidates");
  std::vector<std::size_t> close;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const cplx far{0.0, 1e3}, near{0.0, 1e2};
    const double d_far = std::abs(far * candidates[k](far) - 1.0);
    const double d_near = std::abs(near * candidates[k](near) - 1.0);
    // A genuine Cauchy transform also has to be approaching 1, not just passing near it.
    if (d_far < threshold && d_far <= d_near + 1e-12) close.push_back(k);
  }
  if (close.empty())
    throw Error("no candidate root behaves like a Cauchy transform (iy w(iy) not near 1)");
  if (close.size() > 1) throw Error("ambiguous root selection: several candidates near 1");
  return close.front();
}

}  // namespace freebias
