#include "freebias/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>

#include "freebias/freeconv.hpp"
#include "freebias/holomorphic.hpp"
#include "freebias/infdiv.hpp"
#include "freebias/inversion.hpp"
#include "freebias/measure.hpp"
#include "freebias/parallel.hpp"
#include "freebias/quadrature.hpp"
#include "freebias/transforms.hpp"

namespace freebias::verify {
namespace {

std::string fmt(const char* pattern, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

CheckResult below(int id, std::string name, double measured, double required,
                  std::string detail = {}) {
  return {id, std::move(name), measured, required, std::isfinite(measured) && measured < required,
          std::move(detail)};
}

// Deterministic sample of n points with Re in [re_lo, re_hi] and Im in [im_lo, im_hi].
std::vector<cplx> sample_points(std::size_t n, double re_lo, double re_hi, double im_lo,
                                double im_hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(re_lo, re_hi), im(im_lo, im_hi);
  std::vector<cplx> out(n);
  for (auto& z : out) {
    const double x = re(rng);
    z = {x, im(rng)};
  }
  return out;
}

// n points of Gamma_{1,beta}: radius in (beta, 2 beta), argument inside (pi/4, 3pi/4).
std::vector<cplx> cone_points(std::size_t n, double beta, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(1.05 * beta, 2.0 * beta), arg(0.3 * kPi, 0.7 * kPi);
  std::vector<cplx> out(n);
  for (auto& z : out) {
    const double r = rad(rng);
    z = std::polar(r, arg(rng));
  }
  return out;
}

double sup_diff(const std::vector<cplx>& zs, const std::function<cplx(cplx)>& f,
                const std::function<cplx(cplx)>& g) {
  std::vector<double> d(zs.size());
  parallel_for(zs.size(), [&](std::size_t i) { d[i] = std::abs(f(zs[i]) - g(zs[i])); });
  double worst = 0.0;
  for (double v : d) worst = std::max(worst, std::isfinite(v) ? v : kInf);
  return worst;
}

// L-infinity distance between an inverted curve and a reference density over the points that
// `keep` accepts.
double curve_error(const DensityCurve& c, const std::function<double(double)>& exact,
                   const std::function<bool(double)>& keep) {
  double worst = 0.0;
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    if (!keep(c.grid[i])) continue;
    if (c.failed[i]) return kInf;
    worst = std::max(worst, std::abs(c.values[i] - exact(c.grid[i])));
  }
  return worst;
}

// Schedule used wherever the reference density blows up like an inverse square root at the
// ends of the comparison window: the extrapolation error there scales like eps^2 / (1-x^2)^{5/2}.
const InversionOptions kFineInversion{{1e-3, 5e-4}, 1e-8};

double arcsine_density(double x) { return 1.0 / (kPi * std::sqrt(1.0 - x * x)); }
bool inner_window(double x) { return std::abs(x) <= 0.95; }

CheckResult c1() {
  double worst = 0.0;
  const auto zs = sample_points(50, -4.0, 4.0, 0.05, 4.0, 101);
  for (double v : {0.5, 1.0, 2.0}) {
    const auto s = ProbabilityMeasure::semicircle(0.0, v);
    const AnalyticTransform g = cauchy_transform(s);
    const AnalyticTransform gc = free_zero_bias(s);
    worst = std::max(worst, sup_diff(zs, gc, g));
  }
  return below(1, "semicircle_fixed_point", worst, 1e-10, "sigma^2 in {0.5,1,2}, 50 points");
}

CheckResult c2() {
  const AnalyticTransform g = free_zero_bias(ProbabilityMeasure::rademacher());
  const auto c = stieltjes_density(g, uniform_grid(-0.95, 0.95, 761), kFineInversion);
  return below(2, "rademacher_free_zero_bias", curve_error(c, arcsine_density, inner_window), 1e-3,
               "L-inf on [-0.95,0.95], eps {1e-3,5e-4}");
}

CheckResult c3() {
  const auto rec = apply_chain(ProbabilityMeasure::rademacher(),
                               {parse_step("free_zero_bias"), parse_step("free_zero_bias")},
                               [](const AnalyticTransform&) -> ProbabilityMeasure {
                                 throw PreconditionError("unexpected materialization");
                               });
  const auto& g = std::get<AnalyticTransform>(rec.output);
  const auto c = stieltjes_density(g, uniform_grid(-0.95, 0.95, 761), kFineInversion);
  auto exact = [](double x) { return std::sqrt(1.0 + 1.0 / std::sqrt(1.0 - x * x)) / kPi; };
  return below(3, "iterated_free_zero_bias", curve_error(c, exact, inner_window), 1e-3,
               "L-inf on [-0.95,0.95], chain free_zero_bias x2");
}

CheckResult c4() {
  const AnalyticTransform g =
      flat_combine(ProbabilityMeasure::dirac(1.0), ProbabilityMeasure::dirac(-1.0));
  const auto c = stieltjes_density(g, uniform_grid(-0.95, 0.95, 761), kFineInversion);
  return below(4, "geometric_mean_arcsine", curve_error(c, arcsine_density, inner_window), 1e-3,
               "L-inf on [-0.95,0.95]");
}

CheckResult c5() {
  const AnalyticTransform g =
      cauchy_from_levy(compound_free_poisson(1.0, ProbabilityMeasure::dirac(1.0)));
  const auto zs = sample_points(100, -1.0, 5.0, 0.05, 3.0, 105);
  const double d = sup_diff(zs, g, [](cplx z) { return gallery_free_poisson(1.0, 1.0, UHPPoint(z)); });
  return below(5, "free_poisson_solver", d, 1e-8, "100 points");
}

CheckResult c6() {
  double worst = 0.0;
  for (double t : {0.1, 1.0}) {
    const LevyTriple tr{0.0, 1.0, ProbabilityMeasure::semicircle(0.0, t)};
    const double edge = 2.0 * std::sqrt(1.0 + t);
    const auto c = stieltjes_density(cauchy_from_levy(tr), uniform_grid(-edge - 0.5, edge + 0.5, 1201),
                                     kFineInversion);
    const double err = curve_error(
        c, [t](double x) { return gallery_semicircle_levy_density(1.0, t, x); },
        [edge](double x) { return std::abs(std::abs(x) - edge) > 0.05; });
    worst = std::max(worst, err);
  }
  return below(6, "semicircle_levy_density", worst, 1e-3,
               "t in {0.1,1}, points within 0.05 of the edges excluded");
}

double azadi_mass() {
  // x = u^3 removes the |x|^{-1/3} singularity at the origin.
  const double top = std::cbrt(azadi_edge());
  auto f = [](double u) {
    if (u == 0.0) return 0.0;
    return gallery_azadi_density(u * u * u) * 3.0 * u * u;
  };
  return 2.0 * quadrature::adaptive(f, 0.0, top, 1e-13, 1e-15).value;
}

CheckResult c7() {
  const double mass_err = std::abs(azadi_mass() - 1.0);
  const LevyTriple tr{0.0, 1.0, ProbabilityMeasure::rademacher()};
  const double edge = azadi_edge();
  const auto c = stieltjes_density(cauchy_from_levy(tr), uniform_grid(-edge, edge, 1301), kFineInversion);
  const double err = curve_error(
      c, [](double x) { return x == 0.0 ? 0.0 : gallery_azadi_density(x); },
      [edge](double x) { return std::abs(x) > 0.05 && std::abs(x) < edge - 0.05; });
  CheckResult r = below(7, "azadi_tower", err, 1e-3,
                        "mass error " + fmt("%.2e", mass_err) + " (< 1e-6)");
  r.passed = r.passed && mass_err < 1e-6;
  return r;
}

CheckResult c8() {
  const double x = 200.0;
  const double tail = std::abs(std::pow(x, 4) * gallery_cauchy_levy_density(1.0, x) - 1.0 / kPi) * kPi;
  const LevyTriple tr{0.0, 1.0, ProbabilityMeasure::cauchy(0.0, 1.0)};
  const auto zs = sample_points(20, -5.0, 5.0, 0.05, 3.0, 108);
  const double d = sup_diff(zs, cauchy_from_levy(tr),
                            [](cplx z) { return gallery_cauchy_levy(1.0, UHPPoint(z)); });
  CheckResult r = below(8, "cauchy_levy_tail", tail, 0.02,
                        "solver vs closed form " + fmt("%.2e", d) + " (< 1e-6)");
  r.passed = r.passed && d < 1e-6;
  return r;
}

CheckResult c9() {
  std::mt19937_64 rng(109);
  std::uniform_int_distribution<int> count(3, 6);
  std::uniform_real_distribution<double> loc(-3.0, 3.0), wt(0.1, 1.0), unit(0.0, 1.0);
  double worst = -kInf;
  for (int m = 0; m < 50; ++m) {
    const int k = count(rng);
    std::vector<double> xs, ws;
    while (static_cast<int>(xs.size()) < k) {
      const double x = loc(rng);
      bool clash = false;
      for (double y : xs) clash = clash || std::abs(x - y) < 0.05;
      if (!clash) xs.push_back(x);
    }
    double total = 0.0;
    for (int i = 0; i < k; ++i) total += ws.emplace_back(wt(rng));
    double mean = 0.0;
    for (int i = 0; i < k; ++i) mean += xs[i] * ws[i] / total;
    std::vector<Atom> atoms;
    for (int i = 0; i < k; ++i) atoms.push_back({xs[i] - mean, ws[i] / total});
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
    const auto mu = ProbabilityMeasure::atomic(atoms);
    const MomentSummary mom = moments(mu);
    const Interval hull = support_hull(mu);
    const auto c = stieltjes_density(free_zero_bias(mu), uniform_grid(hull.lo - 0.5, hull.hi + 0.5, 12001),
                                     kFineInversion);
    for (int j = 0; j < 20; ++j) {
      double a = hull.lo + (hull.hi - hull.lo) * unit(rng);
      double b = hull.lo + (hull.hi - hull.lo) * unit(rng);
      if (a > b) std::swap(a, b);
      const double mass = curve_mass(c, a, b);
      const double bound = (b - a) / *mom.variance * *mom.abs_first_moment;
      worst = std::max(worst, mass * mass - bound);
    }
  }
  return below(9, "holder_bound", worst, 1e-4,
               "max of mu°([a,b])^2 - (b-a) E|X| / sigma^2 over 50 laws x 20 intervals");
}

CheckResult c10() {
  const LevyTriple tr{0.0, 1.0, ProbabilityMeasure::rademacher()};
  const AnalyticTransform gx = cauchy_from_levy(tr);
  const AnalyticTransform gxc = free_zero_bias(gx, 0.0, 1.0);
  const AnalyticTransform gyb = el_gordo(ProbabilityMeasure::rademacher());
  const auto zs = sample_points(20, -3.0, 3.0, 0.1, 3.0, 110);
  const double d = sup_diff(zs, [&](cplx z) { return 1.0 / gxc(z); },
                            [&](cplx z) { return 1.0 / gyb(1.0 / gx(z)); });
  return below(10, "lk_equivalence", d, 1e-6, "triple (0,1,Rademacher), 20 points");
}

CheckResult c11() {
  const auto zs = sample_points(50, -3.0, 3.0, 0.5, 3.0, 111);
  double worst = 0.0;
  for (int n : {2, 3}) {
    std::vector<double> d(zs.size());
    parallel_for(zs.size(), [&](std::size_t i) {
      d[i] = replace_one_check(ProbabilityMeasure::rademacher(), n, UHPPoint(zs[i]));
    });
    for (double v : d) worst = std::max(worst, v);
  }
  return below(11, "replace_one", worst, 1e-6, "Rademacher, n in {2,3}, 50 points with Im >= 0.5");
}

CheckResult c12() {
  const auto mu = ProbabilityMeasure::free_poisson(1.0, 1.0);
  const std::vector<cplx> ws{{1.0, 2.0}, {-1.0, 2.0}, {0.0, 1.5}, {2.5, 2.0}, {0.5, 3.0}};
  std::vector<double> sup;
  for (int n : {4, 16, 64}) {
    double worst = 0.0;
    for (cplx w : ws)
      worst = std::max(worst, std::abs(levy_from_roots(mu, n, UHPPoint(w)) - 1.0 / (w - 1.0)));
    sup.push_back(worst);
  }
  const bool monotone = sup[1] <= sup[0] && sup[2] <= sup[1];
  CheckResult r = below(12, "levy_from_roots", sup[2], 0.05,
                        "sup at n=4,16,64: " + fmt("%.3e", sup[0]) + ", " + fmt("%.3e", sup[1]) +
                            ", " + fmt("%.3e", sup[2]) + (monotone ? " (nonincreasing)" : " (NOT monotone)"));
  r.passed = r.passed && monotone;
  return r;
}

CheckResult c13() {
  const auto rad = ProbabilityMeasure::rademacher();
  const auto star = classical_zero_bias(rad);
  // Law of X° from its inverted density on a uniform grid.
  const std::size_t n = 4801;
  const double lo = -1.2, hi = 1.2, h = (hi - lo) / static_cast<double>(n - 1);
  const auto c = stieltjes_density(free_zero_bias(rad), uniform_grid(lo, hi, n), {{2e-3, 1e-3}, 1e-8});
  std::vector<double> cum(n, 0.0), q(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cum[i + 1] = cum[i] + 0.5 * h * (c.values[i] + c.values[i + 1]);
    q[i] += 0.5 * h * c.values[i];
    q[i + 1] += 0.5 * h * c.values[i + 1];
  }
  const double total = cum.back();
  for (std::size_t i = 0; i < n; ++i) {
    cum[i] /= total;
    q[i] /= total;
  }
  auto cdf_circ = [&](double t) {
    if (t <= lo) return 0.0;
    if (t >= hi) return 1.0;
    const double s = (t - lo) / h;
    const std::size_t i = std::min(n - 2, static_cast<std::size_t>(s));
    return cum[i] + (cum[i + 1] - cum[i]) * (s - static_cast<double>(i));
  };
  // P(U Y + (1-U) X <= t) = int_0^1 sum_j q_j F((t - (1-u) x_j) / u) du.
  const quadrature::Rule& rule = quadrature::gauss_legendre(32);
  const int panels = 6;
  const std::vector<double> ts = uniform_grid(-1.0, 1.0, 201);
  std::vector<double> dist(ts.size());
  parallel_for(ts.size(), [&](std::size_t k) {
    const double t = ts[k];
    double p = 0.0;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double a = static_cast<double>(pnl) / panels, b = static_cast<double>(pnl + 1) / panels;
      for (std::size_t r = 0; r < rule.nodes.size(); ++r) {
        const double u = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[r];
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          if (q[j] != 0.0) s += q[j] * cdf_circ((t - (1.0 - u) * c.grid[j]) / u);
        p += 0.5 * (b - a) * rule.weights[r] * s;
      }
    }
    dist[k] = std::abs(p - cdf(star, t));
  });
  return below(13, "classical_interpolation", *std::max_element(dist.begin(), dist.end()), 5e-3,
               "Kolmogorov distance on 201 points of [-1,1]");
}

CheckResult c14() {
  std::mt19937_64 rng(114);
  std::uniform_real_distribution<double> loc(-3.0, 3.0), wt(0.1, 1.0);
  const auto zs = sample_points(20, -4.0, 4.0, 0.05, 3.0, 1140);
  double g_err = 0.0, w_err = 0.0;
  for (int m = 0; m < 30; ++m) {
    std::vector<Atom> atoms;
    const int k = 2 + m % 5;
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      double x = loc(rng);
      if (std::abs(x) < 0.05) x += 0.1;
      atoms.push_back({x, wt(rng)});
      total += atoms.back().weight;
    }
    for (auto& a : atoms) a.weight /= total;
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
    atoms.erase(std::unique(atoms.begin(), atoms.end(),
                            [](const Atom& a, const Atom& b) { return a.location == b.location; }),
                atoms.end());
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight;
    for (auto& a : atoms) a.weight /= s;
    const auto mu = ProbabilityMeasure::atomic(atoms);
    const MomentSummary mom = moments(mu);
    const auto formula = square_bias_transform(cauchy_transform(mu), *mom.mean, *mom.second_moment);
    g_err = std::max(g_err, sup_diff(zs, formula, cauchy_transform(square_bias(mu))));
    const ProbabilityMeasure back_law = inverse_square_bias(square_bias(mu));
    const ProbabilityMeasure fwd_law = square_bias(inverse_square_bias(mu));
    const auto* back = back_law.get_if<Atomic>();
    const auto* fwd = fwd_law.get_if<Atomic>();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      w_err = std::max(w_err, std::abs(back->atoms[i].weight - atoms[i].weight));
      w_err = std::max(w_err, std::abs(fwd->atoms[i].weight - atoms[i].weight));
    }
  }
  CheckResult r = below(14, "square_bias_algebra", g_err, 1e-10,
                        "weight round trip " + fmt("%.2e", w_err) + " (< 1e-12)");
  r.passed = r.passed && w_err < 1e-12;
  return r;
}

CheckResult c15() {
  const auto mu = ProbabilityMeasure::rademacher();
  const auto nu = ProbabilityMeasure::semicircle(0.0, 1.0);
  const ConeEstimate cone = default_cone(2.0);
  const AnalyticTransform gm = cauchy_transform(mu), gn = cauchy_transform(nu);
  const AnalyticTransform gs = free_convolve(gm, gn);
  const auto zs = cone_points(10, cone.cone.beta, 115);
  const double d = sup_diff(
      zs, [&](cplx z) { return voiculescu_transform(gs, z, cone).value; },
      [&](cplx z) { return voiculescu_transform(gm, z, cone).value + voiculescu_transform(gn, z, cone).value; });
  return below(15, "voiculescu_additivity", d, 1e-7, "Rademacher + Semicircle(0,1), 10 cone points");
}

CheckResult c16() {
  const auto mu = ProbabilityMeasure::rademacher();
  const Interval bound = root_support_bound(mu);
  const AnalyticTransform root = convolution_root(cauchy_transform(mu), 4.0);
  const std::size_t points = 2401;
  const Interval scan{-6.0, 6.0};
  const auto runs = support_detect(root, scan, 1e-4, 1e-3, points);
  double margin = kInf;
  for (const auto& r : runs) margin = std::min({margin, r.lo - bound.lo, bound.hi - r.hi});
  const double resolution = scan.width() / static_cast<double>(points - 1);
  std::string detail = "bound [" + fmt("%.3f", bound.lo) + ", " + fmt("%.3f", bound.hi) + "], detected";
  for (const auto& r : runs) detail += " [" + fmt("%.4f", r.lo) + ", " + fmt("%.4f", r.hi) + "]";
  if (runs.empty()) detail += " nothing";
  CheckResult res{16, "root_support_bound", -margin, resolution, -margin <= resolution, detail};
  return res;
}

CheckResult c17() {
  const auto zs = sample_points(20, -3.0, 3.0, 0.1, 3.0, 117);
  double worst = 0.0;
  for (const auto& nu : {ProbabilityMeasure::dirac(0.0), ProbabilityMeasure::rademacher()}) {
    const AnalyticTransform half = cauchy_from_levy({0.25, 0.5, nu});
    const AnalyticTransform full = cauchy_from_levy({0.5, 1.0, nu});
    worst = std::max(worst, sup_diff(zs, free_convolve(half, half), full));
  }
  return below(17, "free_divisibility_halving", worst, 1e-6,
               "m = 0.5, sigma^2 = 1, nu in {delta_0, Rademacher}, 20 points");
}

}  // namespace

CheckResult run_criterion(int id) {
  static const std::map<int, CheckResult (*)()> table{
      {1, c1},   {2, c2},   {3, c3},   {4, c4},   {5, c5},   {6, c6},
      {7, c7},   {8, c8},   {9, c9},   {10, c10}, {11, c11}, {12, c12},
      {13, c13}, {14, c14}, {15, c15}, {16, c16}, {17, c17}};
  const auto it = table.find(id);
  if (it == table.end()) throw PreconditionError("no acceptance criterion " + std::to_string(id));
  try {
    return it->second();
  } catch (const Error& e) {
    return {id, "criterion_" + std::to_string(id), kInf, 0.0, false, std::string("error: ") + e.what()};
  }
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"fixed_point", "gallery", "replace_one", "lk_roundtrip",
                                              "holder",      "roots",   "transforms",  "all"};
  return names;
}

std::vector<int> suite_criteria(const std::string& suite) {
  static const std::map<std::string, std::vector<int>> suites{
      {"fixed_point", {1}},
      {"gallery", {5, 6, 7, 8}},
      {"replace_one", {11}},
      {"lk_roundtrip", {10, 12, 17}},
      {"holder", {9}},
      {"roots", {15, 16}},
      {"transforms", {2, 3, 4, 13, 14}},
      {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17}}};
  const auto it = suites.find(suite);
  if (it == suites.end()) throw ParseError("unknown verification suite '" + suite + "'");
  return it->second;
}

std::vector<CheckResult> run_suite(const std::string& suite) {
  std::vector<CheckResult> out;
  for (int id : suite_criteria(suite)) out.push_back(run_criterion(id));
  return out;
}

std::string format_line(const CheckResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "[%s] %2d %s: measured %.3e < %.3e", r.passed ? "PASS" : "FAIL",
                r.id, r.name.c_str(), r.measured, r.required);
  std::string line = buf;
  if (!r.detail.empty()) line += " (" + r.detail + ")";
  return line;
}

}  // namespace freebias::verify
