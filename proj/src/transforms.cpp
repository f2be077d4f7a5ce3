#include "freebias/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace freebias {
namespace {

bool is_dirac_at_zero(const ProbabilityMeasure& mu) {
  const auto* a = mu.get_if<Atomic>();
  return a && a->atoms.size() == 1 && a->atoms[0].location == 0.0;
}

double required_second_moment(const ProbabilityMeasure& mu) {
  const MomentSummary m = moments(mu);
  if (!m.second_moment) throw PreconditionError("second moment required");
  return *m.second_moment;
}

std::pair<double, double> mean_and_variance(const ProbabilityMeasure& mu, const char* op) {
  const MomentSummary m = moments(mu);
  if (!m.variance || !m.mean)
    throw PreconditionError(std::string(op) + " requires a finite variance");
  if (!(*m.variance > 0.0))
    throw PreconditionError(std::string(op) + " requires a nonzero variance");
  return {*m.mean, *m.variance};
}

// Collect atom locations (jump points of the zero-bias density), recursing into mixtures.
void collect_atoms(const ProbabilityMeasure& mu, std::set<double>& out) {
  if (auto* a = mu.get_if<Atomic>()) {
    for (const Atom& at : a->atoms) out.insert(at.location);
  } else if (auto* p = mu.get_if<FreePoisson>()) {
    if (p->rate < 1.0) out.insert(p->shift);
  } else if (auto* mx = mu.get_if<Mixture>()) {
    for (const auto& c : mx->components) collect_atoms(c, out);
  }
}

}  // namespace

ProbabilityMeasure square_bias(const ProbabilityMeasure& mu) {
  const double s = required_second_moment(mu);
  if (s == 0.0) return ProbabilityMeasure::dirac(0.0);
  if (auto* a = mu.get_if<Atomic>()) {
    std::vector<Atom> out;
    double total = 0.0;
    for (const Atom& at : a->atoms) total += at.weight * at.location * at.location;
    for (const Atom& at : a->atoms) {
      if (at.location != 0.0) out.push_back({at.location, at.weight * at.location * at.location / total});
    }
    return ProbabilityMeasure::atomic(std::move(out));
  }
  if (auto* g = mu.get_if<GridDensity>()) {
    std::vector<double> v(g->values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = g->grid[i] * g->grid[i] * g->values[i] / s;
    return ProbabilityMeasure::grid_density(g->grid, std::move(v));
  }
  if (auto* mx = mu.get_if<Mixture>()) {
    std::vector<double> w;
    std::vector<ProbabilityMeasure> comps;
    std::vector<double> raw;
    double total = 0.0;
    for (std::size_t i = 0; i < mx->weights.size(); ++i) {
      const double si = required_second_moment(mx->components[i]);
      if (si == 0.0) continue;  // delta_0 components carry no square-bias mass
      raw.push_back(mx->weights[i] * si);
      total += mx->weights[i] * si;
      comps.push_back(square_bias(mx->components[i]));
    }
    for (double r : raw) w.push_back(r / total);
    if (comps.size() == 1) return comps.front();
    return ProbabilityMeasure::mixture(std::move(w), std::move(comps));
  }
  return square_bias(discretize(mu));
}

ProbabilityMeasure inverse_square_bias(const ProbabilityMeasure& mu) {
  if (is_dirac_at_zero(mu)) return mu;
  auto divergent = [] { return PreconditionError("inverse second moment infinite"); };
  if (auto* a = mu.get_if<Atomic>()) {
    double total = 0.0;
    for (const Atom& at : a->atoms) {
      if (at.location == 0.0) throw PreconditionError("inverse second moment infinite (atom at 0)");
      total += at.weight / (at.location * at.location);
    }
    std::vector<Atom> out;
    for (const Atom& at : a->atoms)
      out.push_back({at.location, at.weight / (at.location * at.location) / total});
    return ProbabilityMeasure::atomic(std::move(out));
  }
  if (auto* g = mu.get_if<GridDensity>()) {
    const auto& x = g->grid;
    const auto& v = g->values;
    // The density must vanish on a neighbourhood of 0, else x^-2 rho is not integrable.
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      if (x[i] <= 0.0 && 0.0 <= x[i + 1] && (v[i] > 0.0 || v[i + 1] > 0.0)) throw divergent();
    }
    std::vector<double> w(v.size());
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = x[i] == 0.0 ? 0.0 : v[i] / (x[i] * x[i]);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) total += 0.5 * (w[i] + w[i + 1]) * (x[i + 1] - x[i]);
    for (double& r : w) r /= total;
    return ProbabilityMeasure::grid_density(x, std::move(w));
  }
  if (auto* mx = mu.get_if<Mixture>()) {
    std::vector<double> raw;
    std::vector<ProbabilityMeasure> comps;
    double total = 0.0;
    for (std::size_t i = 0; i < mx->weights.size(); ++i) {
      const auto& c = mx->components[i];
      if (is_dirac_at_zero(c)) throw PreconditionError("inverse second moment infinite (atom at 0)");
      const ProbabilityMeasure ci = inverse_square_bias(c);
      // E[X^-2] of the component, read back from the reweighted law: E_ci[X^2] = 1/E_c[X^-2].
      const double inv = 1.0 / required_second_moment(ci);
      raw.push_back(mx->weights[i] * inv);
      total += mx->weights[i] * inv;
      comps.push_back(ci);
    }
    for (double& r : raw) r /= total;
    return ProbabilityMeasure::mixture(std::move(raw), std::move(comps));
  }
  if (mu.is<CauchyLaw>()) throw divergent();
  const Interval h = support_hull(mu);
  if (h.lo <= 0.0 && 0.0 <= h.hi) throw divergent();
  return inverse_square_bias(discretize(mu));
}

AnalyticTransform square_bias_transform(const AnalyticTransform& g, double mean,
                                        double second_moment) {
  if (!(second_moment > 0.0)) throw PreconditionError("square bias needs E[X^2] > 0");
  auto value = [g, mean, second_moment](cplx z) {
    return (z * z * g(z) - mean - z) / second_moment;
  };
  AnalyticTransform::Fn dfn;
  if (g.has_analytic_derivative()) {
    dfn = [g, second_moment](cplx z) {
      return (2.0 * z * g(z) + z * z * g.derivative(z) - 1.0) / second_moment;
    };
  }
  return AnalyticTransform(TransformKind::CauchyG, value, "square_bias(" + g.provenance() + ")",
                           dfn);
}

AnalyticTransform el_gordo(const ProbabilityMeasure& mu) { return el_gordo(cauchy_transform(mu)); }

AnalyticTransform el_gordo(const AnalyticTransform& g) {
  auto value = [g](cplx z) { return -principal_sqrt(g(z) / z); };
  AnalyticTransform::Fn dfn;
  if (g.has_analytic_derivative()) {
    dfn = [g](cplx z) {
      const cplx gz = g(z);
      const cplx f = -principal_sqrt(gz / z);
      return (g.derivative(z) * z - gz) / (2.0 * z * z * f);
    };
  }
  return AnalyticTransform(TransformKind::CauchyG, value, "el_gordo(" + g.provenance() + ")", dfn);
}

AnalyticTransform flat_combine(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu) {
  return flat_combine(cauchy_transform(mu), cauchy_transform(nu));
}

AnalyticTransform flat_combine(const AnalyticTransform& g_mu, const AnalyticTransform& g_nu) {
  auto value = [g_mu, g_nu](cplx z) { return principal_sqrt(g_mu(z)) * principal_sqrt(g_nu(z)); };
  AnalyticTransform::Fn dfn;
  if (g_mu.has_analytic_derivative() && g_nu.has_analytic_derivative()) {
    dfn = [g_mu, g_nu](cplx z) {
      const cplx a = g_mu(z), b = g_nu(z);
      const cplx f = principal_sqrt(a) * principal_sqrt(b);
      return (g_mu.derivative(z) * b + a * g_nu.derivative(z)) / (2.0 * f);
    };
  }
  return AnalyticTransform(TransformKind::CauchyG, value,
                           "flat(" + g_mu.provenance() + ", " + g_nu.provenance() + ")", dfn);
}

namespace {

// -sqrt(R(z)/sigma^2) where R(z) = E[(X - m)/(z - X)], with R' supplied for the derivative.
AnalyticTransform zero_bias_from_resolvent(std::function<cplx(cplx)> r,
                                           std::function<cplx(cplx)> dr, double variance,
                                           std::string provenance) {
  auto value = [r, variance](cplx z) { return -principal_sqrt(r(z) / variance); };
  AnalyticTransform::Fn dfn;
  if (dr) {
    dfn = [r, dr, variance](cplx z) {
      const cplx f = -principal_sqrt(r(z) / variance);
      return dr(z) / (2.0 * variance * f);
    };
  }
  return AnalyticTransform(TransformKind::CauchyG, value, std::move(provenance), dfn);
}

}  // namespace

AnalyticTransform free_zero_bias(const ProbabilityMeasure& mu) {
  const auto [m, var] = mean_and_variance(mu, "free zero bias");
  const std::string prov = "free_zero_bias(" + describe(mu) + ")";
  if (auto* a = mu.get_if<Atomic>()) {
    // Exact centered resolvent: avoids the cancellation in (z - m) G(z) - 1 at large |z|.
    const std::vector<Atom> atoms = a->atoms;
    auto r = [atoms, m](cplx z) {
      cplx s{};
      for (const Atom& at : atoms) s += at.weight * (at.location - m) / (z - at.location);
      return s;
    };
    auto dr = [atoms, m](cplx z) {
      cplx s{};
      for (const Atom& at : atoms) {
        const cplx inv = 1.0 / (z - at.location);
        s -= at.weight * (at.location - m) * inv * inv;
      }
      return s;
    };
    return zero_bias_from_resolvent(r, dr, var, prov);
  }
  AnalyticTransform zb = free_zero_bias(cauchy_transform(mu), m, var);
  return AnalyticTransform(
      TransformKind::CauchyG, [zb](cplx z) { return zb(z); }, prov,
      [zb](cplx z) { return zb.derivative(z); });
}

AnalyticTransform free_zero_bias(const AnalyticTransform& g, double mean, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw PreconditionError("free zero bias requires a finite nonzero variance");
  auto r = [g, mean](cplx z) { return (z - mean) * g(z) - 1.0; };
  std::function<cplx(cplx)> dr;
  if (g.has_analytic_derivative())
    dr = [g, mean](cplx z) { return g(z) + (z - mean) * g.derivative(z); };
  return zero_bias_from_resolvent(r, dr, variance, "free_zero_bias(" + g.provenance() + ")");
}

AnalyticTransform box_flat_raw(const ProbabilityMeasure& mu) {
  const double s = required_second_moment(mu);
  if (!(s > 0.0)) throw PreconditionError("box_flat_raw requires a nonzero second moment");
  const double m = *moments(mu).mean;
  const AnalyticTransform g = cauchy_transform(mu);
  auto value = [g, m, s](cplx z) { return -principal_sqrt((z * g(z) - m / z - 1.0) / s); };
  auto dfn = [g, m, s](cplx z) {
    const cplx f = -principal_sqrt((z * g(z) - m / z - 1.0) / s);
    const cplx dr = g(z) + z * g.derivative(z) + m / (z * z);
    return dr / (2.0 * s * f);
  };
  return AnalyticTransform(TransformKind::CauchyG, value, "box_flat_raw(" + describe(mu) + ")",
                           dfn);
}

ProbabilityMeasure classical_zero_bias(const ProbabilityMeasure& mu, int points) {
  const auto [m, var] = mean_and_variance(mu, "classical zero bias");
  const Interval hull = support_hull(mu);
  if (!hull.bounded()) throw PreconditionError("classical zero bias needs bounded support");
  const double delta = 1e-9 * std::max(1.0, hull.width());

  std::set<double> jumps;
  collect_atoms(mu, jumps);
  std::vector<double> nodes;
  for (int i = 0; i < points; ++i)
    nodes.push_back(hull.lo + hull.width() * static_cast<double>(i) / (points - 1));
  nodes.back() = hull.hi;
  // Keep uniform nodes away from jump points, then bracket each jump.
  std::vector<double> kept;
  for (double x : nodes) {
    bool near = false;
    for (double b : jumps) near = near || (std::abs(x - b) < 2.0 * delta && x != hull.lo && x != hull.hi);
    if (!near) kept.push_back(x);
  }
  for (double b : jumps) {
    if (b - delta > hull.lo) kept.push_back(b - delta);
    if (b + delta < hull.hi) kept.push_back(b + delta);
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());

  std::vector<double> values(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const double t = kept[i];
    const double centered = upper_partial_moment(mu, t) - m * (1.0 - cdf(mu, t));
    values[i] = std::max(0.0, centered / var);
  }
  return ProbabilityMeasure::grid_density(std::move(kept), std::move(values));
}

// ------------------------------------------------------------------ bias chains

ChainStep parse_step(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ParseError("invalid number in step '" + text + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw ParseError("invalid number in step '" + text + "'");
    return v;
  };
  if (text == "square_bias") return {StepKind::SquareBias, 0.0, std::nullopt, text};
  if (text == "inverse_square_bias") return {StepKind::InverseSquareBias, 0.0, std::nullopt, text};
  if (text == "el_gordo") return {StepKind::ElGordo, 0.0, std::nullopt, text};
  if (text == "free_zero_bias") return {StepKind::FreeZeroBias, 0.0, std::nullopt, text};
  if (text == "classical_zero_bias") return {StepKind::ClassicalZeroBias, 0.0, std::nullopt, text};
  if (text.rfind("shift:", 0) == 0) return {StepKind::Shift, number(text.substr(6)), std::nullopt, text};
  if (text.rfind("scale:", 0) == 0) {
    const double a = number(text.substr(6));
    if (a == 0.0) throw ParseError("scale factor must be nonzero in step '" + text + "'");
    return {StepKind::Scale, a, std::nullopt, text};
  }
  if (text.rfind("flat:", 0) == 0 && text.size() > 5)
    return {StepKind::FlatCombine, 0.0, std::nullopt, text};
  throw ParseError("unknown transform step '" + text + "'");
}

BiasChainRecord apply_chain(const ProbabilityMeasure& input, const std::vector<ChainStep>& steps,
                            const Materializer& materialize) {
  if (steps.empty()) throw PreconditionError("transform chain needs at least one step");
  BiasChainRecord rec{input, steps, input, {}};
  ChainValue cur = input;

  auto as_measure = [&](const std::string& why) -> ProbabilityMeasure {
    if (auto* mu = std::get_if<ProbabilityMeasure>(&cur)) return *mu;
    if (!materialize) throw PreconditionError(why + " needs a measure; no materializer available");
    rec.notes.push_back("materialized transform before " + why);
    return materialize(std::get<AnalyticTransform>(cur));
  };

  for (const ChainStep& step : steps) {
    switch (step.kind) {
      case StepKind::SquareBias: cur = square_bias(as_measure(step.label)); break;
      case StepKind::InverseSquareBias: cur = inverse_square_bias(as_measure(step.label)); break;
      case StepKind::ClassicalZeroBias: cur = classical_zero_bias(as_measure(step.label)); break;
      case StepKind::ElGordo:
        if (auto* mu = std::get_if<ProbabilityMeasure>(&cur)) cur = el_gordo(*mu);
        else cur = el_gordo(std::get<AnalyticTransform>(cur));
        break;
      case StepKind::FlatCombine: {
        if (!step.partner) throw PreconditionError("flat step '" + step.label + "' has no partner");
        const AnalyticTransform partner = cauchy_transform(*step.partner);
        if (auto* mu = std::get_if<ProbabilityMeasure>(&cur)) cur = flat_combine(cauchy_transform(*mu), partner);
        else cur = flat_combine(std::get<AnalyticTransform>(cur), partner);
        break;
      }
      case StepKind::FreeZeroBias:
        if (auto* mu = std::get_if<ProbabilityMeasure>(&cur)) {
          cur = free_zero_bias(*mu);
        } else {
          const AnalyticTransform& g = std::get<AnalyticTransform>(cur);
          const TransformMoments tm = estimate_moments(g);
          rec.notes.push_back("free_zero_bias on a transform: estimated mean " +
                              std::to_string(tm.mean) + ", variance " +
                              std::to_string(tm.variance()));
          cur = free_zero_bias(g, tm.mean, tm.variance());
        }
        break;
      case StepKind::Shift:
        if (auto* mu = std::get_if<ProbabilityMeasure>(&cur)) cur = shift(*mu, step.parameter);
        else cur = shift_transform(std::get<AnalyticTransform>(cur), step.parameter);
        break;
      case StepKind::Scale:
        if (auto* mu = std::get_if<ProbabilityMeasure>(&cur)) cur = scale(*mu, step.parameter);
        else cur = scale_transform(std::get<AnalyticTransform>(cur), step.parameter);
        break;
    }
  }
  rec.output = cur;
  return rec;
}

}  // namespace freebias
