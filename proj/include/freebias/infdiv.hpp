#pragma once

#include <functional>
#include <span>
#include <vector>

#include "freebias/freeconv.hpp"
#include "freebias/holomorphic.hpp"
#include "freebias/measure.hpp"

namespace freebias {

/// Finite-variance Lévy triple: phi_X(z) = mean + variance * G_levy(z). The Lévy measure may be
/// any probability law, including ones without moments.
struct LevyTriple {
  double mean = 0.0;
  double variance = 1.0;
  ProbabilityMeasure levy = ProbabilityMeasure::dirac(0.0);
};

cplx phi_from_levy(const LevyTriple& t, UHPPoint z);

struct LevySolveOptions {
  double tol = 1e-12;
  int max_iter = 10000;
  int plain_iterations = 200;
  double residual_tol = 1e-9;  // bound on the Lévy–Khintchine residual at every evaluation
};

/// |(z - m)G - 1 - sigma^2 G G_Y(1/G)| for a candidate value G of G_X(z).
double lk_residual(const LevyTriple& t, cplx z, cplx g);

/// G_X for the triple. Per point: F_X(z) is the fixed point of w -> z - phi(w), found by plain
/// iteration, then damped Newton on w + phi(w) - z, then by continuation in Im z from far up.
AnalyticTransform cauchy_from_levy(const LevyTriple& t, const LevySolveOptions& opts = {});

/// G_Y(z) = (phi_mu(z) - mean)/variance. Fails unless |iy G_Y(iy) - 1| < 1e-2 at y = 1e3 and
/// G_Y stays in the closed lower half plane at every probe point.
AnalyticTransform levy_from_transform(const AnalyticTransform& g, double mean, double variance,
                                      std::span<const cplx> probe_points = {});
AnalyticTransform levy_from_measure(const ProbabilityMeasure& mu,
                                    std::span<const cplx> probe_points = {});

/// (lambda E[U], lambda E[U^2], U^square).
LevyTriple compound_free_poisson(double lambda, const ProbabilityMeasure& jump);

/// G of the square-biased n-th root of the centered law at w:
/// (w / sigma^2) (F_mu^{-1}(F_root(w)) / F_root(w) - 1). Tends to G_Y as n grows.
cplx levy_from_roots(const ProbabilityMeasure& mu, int n, UHPPoint w);

/// Closed forms used as oracles for the generic solver.
double gallery_semicircle_levy_density(double variance, double t, double x);
cplx gallery_semicircle_levy_cauchy(double variance, double t, UHPPoint z);
cplx gallery_azadi_cauchy(UHPPoint z);
double gallery_azadi_density(double x);
inline double azadi_edge() { return 1.5 * std::sqrt(3.0); }
cplx gallery_cauchy_levy(double variance, UHPPoint z);
double gallery_cauchy_levy_density(double variance, double x);
/// G_X of the free Poisson law with rate lambda and jump alpha (mean lambda alpha).
cplx gallery_free_poisson(double lambda, double alpha, UHPPoint z);

/// Index of the unique candidate with iy w(iy) -> 1: the one within `threshold` of 1 at
/// y = 1e3. None or several within threshold raises an error.
std::size_t polynomial_root_select(const std::vector<std::function<cplx(cplx)>>& candidates,
                                   double threshold = 0.1);

}  // namespace freebias
