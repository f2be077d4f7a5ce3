#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "freebias/holomorphic.hpp"
#include "freebias/measure.hpp"

namespace freebias {

/// Reweight by x^2 / E[X^2]; delta_0 when E[X^2] = 0.
ProbabilityMeasure square_bias(const ProbabilityMeasure& mu);

/// Reweight by x^-2 / E[X^-2]; delta_0 maps to itself.
ProbabilityMeasure inverse_square_bias(const ProbabilityMeasure& mu);

/// G of the square-bias law from G of X and its first two moments:
/// (z^2 G(z) - E[X] - z) / E[X^2].
AnalyticTransform square_bias_transform(const AnalyticTransform& g, double mean,
                                        double second_moment);

/// z -> -sqrt(G(z)/z).
AnalyticTransform el_gordo(const ProbabilityMeasure& mu);
AnalyticTransform el_gordo(const AnalyticTransform& g);

/// z -> sqrt(G_mu(z)) sqrt(G_nu(z)).
AnalyticTransform flat_combine(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu);
AnalyticTransform flat_combine(const AnalyticTransform& g_mu, const AnalyticTransform& g_nu);

/// z -> -sqrt(((z - m) G(z) - 1) / sigma^2), i.e. (X - m)° + m.
AnalyticTransform free_zero_bias(const ProbabilityMeasure& mu);
/// Same map on a bare transform whose mean and variance are supplied by the caller.
AnalyticTransform free_zero_bias(const AnalyticTransform& g, double mean, double variance);

/// z -> -sqrt((z G(z) - E[X]/z - 1) / E[X^2]); differs from free_zero_bias when E[X] != 0.
AnalyticTransform box_flat_raw(const ProbabilityMeasure& mu);

/// Law of U (X - m)^□ + m with U uniform on [0,1]; density E[(X - m) 1{X > t}] / sigma^2.
/// Jumps of the density at atoms are resolved by node pairs a relative 1e-9 apart.
ProbabilityMeasure classical_zero_bias(const ProbabilityMeasure& mu, int points = 4097);

// ------------------------------------------------------------------ bias chains

enum class StepKind {
  SquareBias,
  InverseSquareBias,
  ElGordo,
  FlatCombine,
  FreeZeroBias,
  ClassicalZeroBias,
  Shift,
  Scale
};

struct ChainStep {
  StepKind kind;
  double parameter = 0.0;                     // Shift / Scale
  std::optional<ProbabilityMeasure> partner;  // FlatCombine
  std::string label;                          // as written by the user
};

/// Parses "square_bias", "shift:c", "scale:a", ... ; flat steps need the partner supplied
/// separately, so "flat:<anything>" yields a FlatCombine step with no partner attached.
ChainStep parse_step(const std::string& text);

using ChainValue = std::variant<ProbabilityMeasure, AnalyticTransform>;

/// Turns an intermediate transform into a measure when a step needs one.
using Materializer = std::function<ProbabilityMeasure(const AnalyticTransform&)>;

struct BiasChainRecord {
  ProbabilityMeasure input;
  std::vector<ChainStep> steps;
  ChainValue output;
  std::vector<std::string> notes;  // materializations and moment estimates, in order
};

/// Applies the steps left to right. Transform-valued intermediates stay transforms while the
/// next step has a transform-level form (shift, scale, el_gordo, flat, free_zero_bias with
/// moments estimated from the tail expansion); measure-only steps call `materialize`.
BiasChainRecord apply_chain(const ProbabilityMeasure& input, const std::vector<ChainStep>& steps,
                            const Materializer& materialize);

}  // namespace freebias
