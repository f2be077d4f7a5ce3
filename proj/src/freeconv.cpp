#include "freebias/freeconv.hpp"

#include <algorithm>
#include <cmath>

#include "freebias/transforms.hpp"

namespace freebias {
namespace {

// h = F - id and its derivative F' - 1 = -G'/G^2 - 1.
cplx h_of(const AnalyticTransform& g, cplx w) { return 1.0 / g(w) - w; }
cplx dh_of(const AnalyticTransform& g, cplx w) {
  const cplx v = g(w);
  return -g.derivative(w) / (v * v) - 1.0;
}

}  // namespace

ConeEstimate default_cone(double variance) {
  const double sigma = std::sqrt(std::max(0.0, variance));
  const double beta = std::max(10.0 * sigma, 10.0);
  return {TruncatedCone{1.0, beta},
          "Gamma_{1,beta} with beta = max(10 sigma, 10) from the variance bound "
          "|phi(w)| <= 2 sigma^2 / Im w"};
}

cplx subordinator(const AnalyticTransform& g_mu, const AnalyticTransform& g_nu, cplx z,
                  const SubordinationOptions& opts) {
  if (!(opts.tol > 0.0)) throw PreconditionError("subordinator tolerance must be positive");
  auto K = [&](cplx w) { return z + h_of(g_nu, z + h_of(g_mu, w)); };
  cplx w = z;
  double last_step = 0.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    const cplx next = K(w);
    last_step = std::abs(next - w);
    w = next;
    if (last_step < opts.tol * std::max(1.0, std::abs(w))) return w;
    if (it == opts.plain_iterations) {
      // Slow contraction near the real axis: try Newton on w - K(w) from here.
      auto psi = [&](cplx v) { return v - K(v); };
      auto dpsi = [&](cplx v) {
        const cplx u = z + h_of(g_mu, v);
        return 1.0 - dh_of(g_nu, u) * dh_of(g_mu, v);
      };
      const NewtonResult nr = newton_uhp(psi, dpsi, w, SolverOptions{opts.tol, 100});
      if (nr.converged && nr.root.imag() > 0.0 &&
          std::abs(psi(nr.root)) < 1e3 * opts.tol * std::max(1.0, std::abs(nr.root)))
        return nr.root;
    }
  }
  throw SolverError("subordination fixed point did not converge", w, last_step, opts.max_iter);
}

cplx subordinator(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu, UHPPoint z,
                  double tol) {
  SubordinationOptions opts;
  opts.tol = tol;
  return subordinator(cauchy_transform(mu), cauchy_transform(nu), z.value(), opts);
}

SubordinatorPair subordinator_pair(const AnalyticTransform& g_mu, const AnalyticTransform& g_nu,
                                   const SubordinationOptions& opts) {
  AnalyticTransform left(
      TransformKind::Derived, [=](cplx z) { return subordinator(g_mu, g_nu, z, opts); },
      "omega(" + g_mu.provenance() + ", " + g_nu.provenance() + ")");
  AnalyticTransform right(
      TransformKind::Derived,
      [=](cplx z) { return z + h_of(g_mu, subordinator(g_mu, g_nu, z, opts)); },
      "omega(" + g_nu.provenance() + ", " + g_mu.provenance() + ")");
  return {left, right};
}

AnalyticTransform free_convolve(const AnalyticTransform& g_mu, const AnalyticTransform& g_nu,
                                const SubordinationOptions& opts) {
  auto value = [=](cplx z) { return g_mu(subordinator(g_mu, g_nu, z, opts)); };
  // omega' from the implicit equation omega = z + h_nu(z + h_mu(omega)).
  auto deriv = [=](cplx z) {
    const cplx w = subordinator(g_mu, g_nu, z, opts);
    const cplx u = z + h_of(g_mu, w);
    const cplx hn = dh_of(g_nu, u);
    const cplx dw = (1.0 + hn) / (1.0 - hn * dh_of(g_mu, w));
    return g_mu.derivative(w) * dw;
  };
  return AnalyticTransform(TransformKind::CauchyG, value,
                           "(" + g_mu.provenance() + " boxplus " + g_nu.provenance() + ")", deriv);
}

AnalyticTransform free_convolve(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                const SubordinationOptions& opts) {
  return free_convolve(cauchy_transform(mu), cauchy_transform(nu), opts);
}

AnalyticTransform free_power(const AnalyticTransform& g_mu, int n,
                             const SubordinationOptions& opts) {
  if (n < 1) throw PreconditionError("free power needs n >= 1");
  AnalyticTransform acc = g_mu;
  for (int k = 2; k <= n; ++k) acc = free_convolve(g_mu, acc, opts);
  return acc;
}

cplx convolution_root_F(const AnalyticTransform& g_mu, double n, cplx y, const SolverOptions& opts) {
  if (!(n >= 1.0)) throw PreconditionError("convolution root order must be >= 1");
  if (n == 1.0) return 1.0 / g_mu(y);
  const double a = 1.0 / n, b = 1.0 - 1.0 / n;
  auto phi = [&](cplx z) { return a * z + b / g_mu(z) - y; };
  auto dphi = [&](cplx z) {
    const cplx v = g_mu(z);
    return a - b * g_mu.derivative(z) / (v * v);
  };
  const SolverOptions nopts{opts.tol, std::min(opts.max_iter, 500)};
  NewtonResult r = newton_uhp(phi, dphi, y, nopts);
  if (r.converged && r.root.imag() > 0.0) return 1.0 / g_mu(r.root);

  // Continuation along the vertical line through y: start high enough that z ~ y, then walk
  // down, shortening the step whenever Newton from the previous root fails.
  const double target = y.imag();
  double level = std::max(16.0 * target, 16.0 * (1.0 + std::abs(y.real())));
  cplx yc{y.real(), level};
  auto solve_at = [&](cplx yy, cplx start) {
    auto f = [&](cplx z) { return a * z + b / g_mu(z) - yy; };
    return newton_uhp(f, dphi, start, nopts);
  };
  r = solve_at(yc, yc);
  if (!r.converged) throw SolverError("convolution root continuation could not start", r.root, r.residual, r.iterations);
  cplx z = r.root;
  while (level > target) {
    double step = 0.5 * level;
    for (;;) {
      const double next = std::max(target, level - step);
      const NewtonResult s = solve_at(cplx{y.real(), next}, z);
      if (s.converged && s.root.imag() > 0.0) {
        z = s.root;
        level = next;
        break;
      }
      step *= 0.25;
      if (step < 1e-9 * level)
        throw SolverError("convolution root continuation stalled", s.root, s.residual, s.iterations);
    }
  }
  return 1.0 / g_mu(z);
}

cplx convolution_root_F(const ProbabilityMeasure& mu, double n, UHPPoint y, double tol) {
  return convolution_root_F(cauchy_transform(mu), n, y.value(), SolverOptions{tol, 10000});
}

AnalyticTransform convolution_root(const AnalyticTransform& g_mu, double n,
                                   const SolverOptions& opts) {
  // Checked here as well so a bad order fails before any evaluation is attempted.
  if (!(n >= 1.0)) throw PreconditionError("convolution root order must be >= 1");
  return AnalyticTransform(
      TransformKind::CauchyG, [=](cplx y) { return 1.0 / convolution_root_F(g_mu, n, y, opts); },
      "root(" + g_mu.provenance() + ", n=" + std::to_string(n) + ")");
}

cplx inverse_F(const AnalyticTransform& g, cplx z, const SolverOptions& opts) {
  auto f = [&](cplx w) { return 1.0 / g(w) - z; };
  auto df = [&](cplx w) {
    const cplx v = g(w);
    return -g.derivative(w) / (v * v);
  };
  const NewtonResult r = newton_uhp(f, df, z, SolverOptions{opts.tol, std::min(opts.max_iter, 500)});
  if (!r.converged)
    throw SolverError("inverse of F did not converge", r.root, r.residual, r.iterations);
  return r.root;
}

VoiculescuValue voiculescu_transform(const AnalyticTransform& g, cplx z, const ConeEstimate& cone,
                                     const SolverOptions& opts) {
  if (!(z.imag() > 0.0)) throw PreconditionError("Voiculescu transform needs Im z > 0");
  const cplx w = inverse_F(g, z, opts);
  return {w - z, !cone.cone.contains(z)};
}

VoiculescuValue voiculescu_transform(const ProbabilityMeasure& mu, UHPPoint z) {
  const MomentSummary m = moments(mu);
  const ConeEstimate cone = default_cone(m.variance.value_or(0.0));
  return voiculescu_transform(cauchy_transform(mu), z.value(), cone);
}

VoiculescuValue voiculescu_transform(const ProbabilityMeasure& mu, UHPPoint z,
                                     const ConeEstimate& cone) {
  return voiculescu_transform(cauchy_transform(mu), z.value(), cone);
}

VoiculescuValue r_transform(const AnalyticTransform& g, cplx w, const ConeEstimate& cone,
                            const SolverOptions& opts) {
  if (w == cplx{}) throw PreconditionError("R-transform argument must be nonzero");
  const cplx u = 1.0 / w;
  if (u.imag() > 0.0) return voiculescu_transform(g, u, cone, opts);
  if (u.imag() < 0.0) {
    const VoiculescuValue v = voiculescu_transform(g, std::conj(u), cone, opts);
    return {std::conj(v.value), v.outside_cone};
  }
  throw PreconditionError("R-transform argument must be off the real axis");
}

VoiculescuValue r_transform(const ProbabilityMeasure& mu, cplx w) {
  const MomentSummary m = moments(mu);
  return r_transform(cauchy_transform(mu), w, default_cone(m.variance.value_or(0.0)));
}

Interval root_support_bound(const ProbabilityMeasure& mu) {
  const Interval h = support_hull(mu);
  if (!h.bounded()) throw PreconditionError("root support bound needs compact support");
  const MomentSummary m = moments(mu);
  if (!m.variance) throw PreconditionError("root support bound needs a finite variance");
  const double mean = *m.mean, var = *m.variance;
  const double r = std::max(std::abs(h.lo - mean), std::abs(h.hi - mean));
  return {mean - r - var - 1.0, mean + r + var + 1.0};
}

double replace_one_check(const ProbabilityMeasure& mu, int n, UHPPoint z,
                         const SubordinationOptions& opts) {
  if (n < 2) throw PreconditionError("replace-one check needs n >= 2");
  const MomentSummary m = moments(mu);
  if (!m.variance || !(*m.variance > 0.0))
    throw PreconditionError("replace-one check needs a finite nonzero variance");
  if (std::abs(*m.mean) > 1e-12 * std::max(1.0, std::sqrt(*m.variance)))
    throw PreconditionError("replace-one check needs a centered law");
  const double var = *m.variance;
  const AnalyticTransform g = cauchy_transform(mu);
  const AnalyticTransform rest = free_power(g, n - 1, opts);       // S_n - X_n
  const AnalyticTransform sum = free_convolve(g, rest, opts);      // S_n
  const AnalyticTransform lhs = free_zero_bias(sum, 0.0, n * var);  // S_n°
  const AnalyticTransform xcirc = free_zero_bias(mu);
  const cplx w = subordinator(g, rest, z.value(), opts);
  return std::abs(lhs(z.value()) - xcirc(w));
}

}  // namespace freebias
