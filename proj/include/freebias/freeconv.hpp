#pragma once

#include <string>

#include "freebias/holomorphic.hpp"
#include "freebias/measure.hpp"

namespace freebias {

/// Truncated cone together with a note on where its bounds came from.
struct ConeEstimate {
  TruncatedCone cone;
  std::string basis;
};

/// Gamma_{1, beta} with beta = max(10 sigma, 10).
ConeEstimate default_cone(double variance);

/// Options for the subordination fixed point. After `plain_iterations` steps without
/// convergence a damped Newton solve on w - K(w) is attempted from the current iterate; plain
/// iteration resumes if it fails, up to `max_iter` in total.
struct SubordinationOptions {
  double tol = 1e-12;
  int max_iter = 10000;
  int plain_iterations = 500;
};

/// omega_{mu,nu}(z): fixed point of w -> z + h_nu(z + h_mu(w)), h = F - id, from w0 = z.
cplx subordinator(const AnalyticTransform& g_mu, const AnalyticTransform& g_nu, cplx z,
                  const SubordinationOptions& opts = {});
cplx subordinator(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu, UHPPoint z,
                  double tol = 1e-12);

/// Both subordination functions as transforms (kind Derived).
struct SubordinatorPair {
  AnalyticTransform omega_left;   // omega_{mu,nu}
  AnalyticTransform omega_right;  // omega_{nu,mu} = z + h_mu(omega_{mu,nu})
};
SubordinatorPair subordinator_pair(const AnalyticTransform& g_mu, const AnalyticTransform& g_nu,
                                   const SubordinationOptions& opts = {});

/// G_{mu boxplus nu}(z) = G_mu(omega_{mu,nu}(z)).
AnalyticTransform free_convolve(const AnalyticTransform& g_mu, const AnalyticTransform& g_nu,
                                const SubordinationOptions& opts = {});
AnalyticTransform free_convolve(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                                const SubordinationOptions& opts = {});

/// G of mu^{boxplus n} for integer n >= 1 by repeated convolution.
AnalyticTransform free_power(const AnalyticTransform& g_mu, int n,
                             const SubordinationOptions& opts = {});

/// F_nu(y) for nu^{boxplus n} = mu: F_mu(z) where z/n + (1 - 1/n) F_mu(z) = y, by damped
/// Newton from z0 = y.
cplx convolution_root_F(const AnalyticTransform& g_mu, double n, cplx y,
                        const SolverOptions& opts = {});
cplx convolution_root_F(const ProbabilityMeasure& mu, double n, UHPPoint y, double tol = 1e-12);

/// The root's Cauchy transform y -> 1/convolution_root_F(g_mu, n, y).
AnalyticTransform convolution_root(const AnalyticTransform& g_mu, double n,
                                   const SolverOptions& opts = {});

/// w with F(w) = z, by damped Newton from w0 = z.
cplx inverse_F(const AnalyticTransform& g, cplx z, const SolverOptions& opts = {});

struct VoiculescuValue {
  cplx value;
  bool outside_cone = false;  // z outside the cone estimate: analytic extension, not certified
};

/// phi(z) = F^{-1}(z) - z.
VoiculescuValue voiculescu_transform(const AnalyticTransform& g, cplx z, const ConeEstimate& cone,
                                     const SolverOptions& opts = {});
VoiculescuValue voiculescu_transform(const ProbabilityMeasure& mu, UHPPoint z);
VoiculescuValue voiculescu_transform(const ProbabilityMeasure& mu, UHPPoint z,
                                     const ConeEstimate& cone);

/// R(w) = phi(1/w). For 1/w in the lower half plane the reflection phi(conj u) = conj phi(u)
/// is used.
VoiculescuValue r_transform(const AnalyticTransform& g, cplx w, const ConeEstimate& cone,
                            const SolverOptions& opts = {});
VoiculescuValue r_transform(const ProbabilityMeasure& mu, cplx w);

/// [-R - sigma^2 - 1, R + sigma^2 + 1] + mean, where the centered hull lies in [-R, R].
Interval root_support_bound(const ProbabilityMeasure& mu);

/// |G_{S_n°}(z) - G_{X°}(omega_{X, S_{n-1}}(z))| for S_n = mu^{boxplus n}, mu centered.
double replace_one_check(const ProbabilityMeasure& mu, int n, UHPPoint z,
                         const SubordinationOptions& opts = {});

}  // namespace freebias
