#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "freebias/core.hpp"
#include "freebias/measure.hpp"

namespace freebias {

/// sqrt with the argument taken in [0, 2pi): image in the closed upper half plane, cut on [0, inf).
cplx principal_sqrt(cplx zeta);

/// Cube root with the argument taken in [0, 2pi), so cbrt(-d) = e^{i pi/3} d^{1/3} for d > 0.
cplx principal_cbrt(cplx zeta);

/// A point of the open upper half plane.
class UHPPoint {
 public:
  explicit UHPPoint(cplx z);
  UHPPoint(double re, double im) : UHPPoint(cplx{re, im}) {}
  [[nodiscard]] cplx value() const { return z_; }
  [[nodiscard]] double re() const { return z_.real(); }
  [[nodiscard]] double im() const { return z_.imag(); }

 private:
  cplx z_;
};

/// Gamma_{alpha,beta} = {z : alpha Im z > |Re z|, |z| > beta}.
struct TruncatedCone {
  double alpha = 1.0;
  double beta = 10.0;
  [[nodiscard]] bool contains(cplx z) const {
    return alpha * z.imag() > std::abs(z.real()) && std::abs(z) > beta;
  }
};

enum class TransformKind { CauchyG, ReciprocalF, Voiculescu, RTransform, Derived };

const char* to_string(TransformKind kind);

/// Lazily composed holomorphic function on the upper half plane. Evaluators are pure and may be
/// called concurrently. The derivative is analytic when one was supplied, otherwise a
/// fourth-order central difference along the real direction.
class AnalyticTransform {
 public:
  using Fn = std::function<cplx(cplx)>;

  AnalyticTransform(TransformKind kind, Fn value, std::string provenance, Fn derivative = {});

  /// Precondition Im z > 0 (checked in debug builds).
  cplx operator()(cplx z) const;
  cplx operator()(UHPPoint z) const { return (*this)(z.value()); }
  [[nodiscard]] cplx derivative(cplx z) const;
  [[nodiscard]] bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }

  /// Deterministic parallel evaluation; out[i] = (*this)(zs[i]).
  [[nodiscard]] std::vector<cplx> evaluate(std::span<const cplx> zs) const;

  [[nodiscard]] TransformKind kind() const { return kind_; }
  [[nodiscard]] const std::string& provenance() const { return provenance_; }

 private:
  TransformKind kind_;
  Fn value_;
  Fn derivative_;
  std::string provenance_;
};

/// G_mu. Atomic: exact sum. Grid: cellwise integration of the piecewise-linear density
/// (Gauss–Legendre on cells far from z, the exact logarithmic primitive on nearby cells).
/// Named laws: closed forms. Mixtures: weighted sums. The derivative is analytic in all cases.
AnalyticTransform cauchy_transform(const ProbabilityMeasure& mu);

/// F = 1/G.
AnalyticTransform reciprocal_transform(const AnalyticTransform& g);

/// |iy G(iy) - 1| at y = y_max (>= 100).
double tail_normalization_check(const AnalyticTransform& g, double y_max = 1e3);

/// Cauchy transform of X + c given that of X.
AnalyticTransform shift_transform(const AnalyticTransform& g, double c);

/// Cauchy transform of a X given that of X (a != 0). Negative a uses G(conj w) = conj G(w).
AnalyticTransform scale_transform(const AnalyticTransform& g, double a);

/// Mean and second moment read off the expansion iyG(iy) = 1 + m1/(iy) + m2/(iy)^2 + ...
/// with one Richardson step in y. Meaningful for compactly supported laws only.
struct TransformMoments {
  double mean = 0.0;
  double second_moment = 0.0;
  [[nodiscard]] double variance() const { return second_moment - mean * mean; }
};
TransformMoments estimate_moments(const AnalyticTransform& g, double y = 1e3);

/// Damped Newton for f(w) = 0 in the upper half plane: steps are halved while the iterate
/// would leave it. Converged when |step| < tol * max(1, |w|) and |f| is small.
struct NewtonResult {
  cplx root;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};
NewtonResult newton_uhp(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& df,
                        cplx w0, const SolverOptions& opts);

}  // namespace freebias
