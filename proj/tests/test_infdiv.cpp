#include <cmath>

#include "doctest.h"
#include "freebias/infdiv.hpp"
#include "freebias/inversion.hpp"
#include "freebias/transforms.hpp"
#include "generators.hpp"

using namespace freebias;

namespace {

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

std::vector<cplx> cone_points(double beta, int n, std::uint64_t seed) {
  gen::Rng rng(seed);
  std::vector<cplx> out;
  for (int k = 0; k < n; ++k) out.push_back(std::polar(rng.uniform(1.05, 2.0) * beta, rng.uniform(0.3, 0.7) * kPi));
  return out;
}

double sup_gap(const AnalyticTransform& a, const std::function<cplx(cplx)>& b, std::uint64_t seed = 1,
               double im_lo = 0.05) {
  gen::Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 40; ++k) {
    const cplx z = gen::uhp_point(rng, -4, 4, im_lo, 4);
    worst = std::max(worst, std::abs(a(z) - b(z)));
  }
  return worst;
}

}  // namespace

TEST_CASE("phi from a Levy triple") {
  const cplx z{0.7, 1.3};
  const double s2 = 2.0;
  CHECK(near(phi_from_levy({0.0, s2, ProbabilityMeasure::dirac(0.0)}, UHPPoint(z)), s2 / z, 1e-15));
  const double lam = 1.5, al = 0.8;
  CHECK(near(phi_from_levy({lam * al, lam * al * al, ProbabilityMeasure::dirac(al)}, UHPPoint(z)),
             lam * al * z / (z - al), 1e-14));
  CHECK(near(phi_from_levy({0.0, 1.0, ProbabilityMeasure::rademacher()}, UHPPoint(z)), z / (z * z - 1.0), 1e-15));
}

TEST_CASE("Levy-Khintchine solver reproduces the closed forms") {
  for (double s2 : {0.5, 1.0, 2.0}) {
    const auto g = cauchy_from_levy({0.0, s2, ProbabilityMeasure::dirac(0.0)});
    const auto exact = cauchy_transform(ProbabilityMeasure::semicircle(0.0, s2));
    CHECK(sup_gap(g, [&](cplx z) { return exact(z); }, 1, 1e-3) < 1e-9);
  }
  const double lam = 2.0, al = 0.5;
  const auto fp = cauchy_from_levy({lam * al, lam * al * al, ProbabilityMeasure::dirac(al)});
  CHECK(sup_gap(fp, [&](cplx z) { return gallery_free_poisson(lam, al, UHPPoint(z)); }, 2, 1e-3) < 1e-9);
  const auto fp_named = cauchy_transform(ProbabilityMeasure::free_poisson(lam, al));
  CHECK(sup_gap(fp, [&](cplx z) { return fp_named(z); }, 3, 1e-3) < 1e-9);
}

TEST_CASE("semicircle Levy measure: density after inversion") {
  for (double t : {0.1, 1.0}) {
    const double edge = 2.0 * std::sqrt(1.0 + t);
    const auto c = stieltjes_density(cauchy_from_levy({0.0, 1.0, ProbabilityMeasure::semicircle(0.0, t)}),
                                     uniform_grid(-edge - 0.5, edge + 0.5, 1201), InversionOptions{{1e-3, 5e-4}});
    double worst = 0.0;
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      if (std::abs(std::abs(c.grid[i]) - edge) < 0.05) continue;
      worst = std::max(worst, std::abs(c.values[i] - gallery_semicircle_levy_density(1.0, t, c.grid[i])));
    }
    CHECK(worst < 1e-3);
    CHECK(c.failures() == 0);
  }
}

TEST_CASE("Levy-Khintchine residual and solver diagnostics") {
  const LevyTriple t{0.3, 1.2, ProbabilityMeasure::rademacher()};
  const auto g = cauchy_from_levy(t);
  gen::Rng rng(61);
  for (int k = 0; k < 30; ++k) {
    const cplx z = gen::uhp_point(rng, -4, 4, 1e-3, 3);
    CHECK(lk_residual(t, z, g(z)) < 1e-9);
  }
  CHECK_THROWS_AS(cauchy_from_levy({0.0, 0.0, ProbabilityMeasure::dirac(0.0)}), PreconditionError);
}

TEST_CASE("Levy measure recovered from a law") {
  const auto cone = default_cone(2.0);
  const auto pts = cone_points(cone.cone.beta, 10, 63);
  const auto gy = levy_from_measure(ProbabilityMeasure::semicircle(0.0, 2.0), pts);
  for (cplx z : pts) CHECK(near(gy(z), 1.0 / z, 1e-12));

  const double lam = 2.0, al = 0.5;
  const auto gp = levy_from_measure(ProbabilityMeasure::free_poisson(lam, al), pts);
  for (cplx z : pts) CHECK(near(gp(z), 1.0 / (z - al), 1e-12));

  CHECK_THROWS_AS(levy_from_measure(ProbabilityMeasure::cauchy(0.0, 1.0)), PreconditionError);
}

TEST_CASE("round trip: triple to law and back") {
  const auto cone = default_cone(1.0);
  const auto pts = cone_points(cone.cone.beta, 10, 65);
  const LevyTriple t{0.0, 1.0, ProbabilityMeasure::rademacher()};
  const auto g = cauchy_from_levy(t);
  const auto back = levy_from_transform(g, 0.0, 1.0, pts);
  const auto rad = cauchy_transform(ProbabilityMeasure::rademacher());
  for (cplx z : pts) CHECK(std::abs(back(z) - rad(z)) < 1e-6);
}

TEST_CASE("round trip through an inverted grid measure") {
  const auto cone = default_cone(1.0);
  const auto pts = cone_points(cone.cone.beta, 10, 67);
  for (const auto& nu : {ProbabilityMeasure::dirac(0.0), ProbabilityMeasure::dirac(1.0), ProbabilityMeasure::rademacher()}) {
    const LevyTriple t{0.0, 1.0, nu};
    const auto g = cauchy_from_levy(t);
    const auto runs = support_detect(g, {-8, 8}, 1e-3, 1e-4);
    REQUIRE_FALSE(runs.empty());
    const Interval range = Interval{runs.front().lo, runs.back().hi}.padded(0.1);
    const auto c = stieltjes_density(g, uniform_grid(range.lo, range.hi, 4097));
    const auto mu = measure_from_curve(c, 1e-3);
    const auto gy = levy_from_measure(mu, pts);
    const auto exact = cauchy_transform(nu);
    for (cplx z : pts) CHECK(std::abs(gy(z) - exact(z)) < 5e-3);
  }
}

TEST_CASE("recovery rejects transforms without the right tail") {
  const AnalyticTransform fake(TransformKind::CauchyG, [](cplx z) { return 0.5 / z + 0.5 / (z - 30.0); }, "fake");
  CHECK_THROWS_AS(levy_from_transform(fake, 15.0, 1.0), Error);
}

TEST_CASE("compound free Poisson triples") {
  const double lam = 3.0, al = 0.7;
  const LevyTriple a = compound_free_poisson(lam, ProbabilityMeasure::dirac(al));
  CHECK(a.mean == doctest::Approx(lam * al));
  CHECK(a.variance == doctest::Approx(lam * al * al));
  CHECK(a.levy.get_if<Atomic>()->atoms[0].location == al);

  const LevyTriple r = compound_free_poisson(1.0, ProbabilityMeasure::rademacher());
  CHECK(r.mean == 0.0);
  CHECK(r.variance == 1.0);
  CHECK(r.levy.get_if<Atomic>()->atoms[0].weight == doctest::Approx(0.5));

  const LevyTriple m = compound_free_poisson(2.0, ProbabilityMeasure::atomic({{1.0, 0.5}, {2.0, 0.5}}));
  CHECK(m.mean == doctest::Approx(3.0));
  CHECK(m.variance == doctest::Approx(5.0));
  const auto& atoms = m.levy.get_if<Atomic>()->atoms;
  CHECK(atoms[0].weight == doctest::Approx(0.2));
  CHECK(atoms[1].weight == doctest::Approx(0.8));

  CHECK_THROWS_AS(compound_free_poisson(1.0, ProbabilityMeasure::dirac(0.0)), PreconditionError);
  CHECK_THROWS_AS(compound_free_poisson(0.0, ProbabilityMeasure::rademacher()), PreconditionError);

  // The triple realizes the free Poisson law.
  const auto g = cauchy_from_levy(a);
  CHECK(sup_gap(g, [&](cplx z) { return gallery_free_poisson(lam, al, UHPPoint(z)); }, 5, 1e-2) < 1e-9);
}

TEST_CASE("Levy measure from roots") {
  const cplx w{1.0, 2.0};
  double prev = kInf;
  for (int n : {4, 16, 64}) {
    const double d = std::abs(levy_from_roots(ProbabilityMeasure::semicircle(0.0, 1.0), n, UHPPoint(w)) - 1.0 / w);
    CHECK(d <= prev);
    prev = d;
  }
  CHECK(prev < 0.05);

  const auto fp = ProbabilityMeasure::free_poisson(1.0, 1.0);
  CHECK(std::abs(levy_from_roots(fp, 64, UHPPoint(w)) - 1.0 / (w - 1.0)) < 0.05);

  // n = 1 reduces to the square-bias transform of the centered law.
  const auto r = ProbabilityMeasure::rademacher();
  const auto sq = cauchy_transform(square_bias(r));
  for (cplx z : {cplx{0.5, 1.0}, cplx{-1.0, 2.0}, cplx{2.0, 0.5}})
    CHECK(std::abs(levy_from_roots(r, 1, UHPPoint(z)) - sq(z)) < 1e-8);
}

TEST_CASE("gallery: semicircle Levy density") {
  CHECK(gallery_semicircle_levy_density(1.0, 0.0, 0.0) == doctest::Approx(1.0 / kPi));
  CHECK(gallery_semicircle_levy_density(1.0, 1.0, 3.0) == 0.0);
  CHECK(gallery_semicircle_levy_density(1.0, 1.0, 0.0) == doctest::Approx(std::sqrt(2.0) / kPi));
  // The closed-form transform inverts to the closed-form density.
  const double t = 0.5;
  const AnalyticTransform g(TransformKind::CauchyG,
                            [t](cplx z) { return gallery_semicircle_levy_cauchy(1.0, t, UHPPoint(z)); }, "sl");
  const auto generic = cauchy_from_levy({0.0, 1.0, ProbabilityMeasure::semicircle(0.0, t)});
  CHECK(sup_gap(g, [&](cplx z) { return generic(z); }, 7, 1e-2) < 1e-9);
}

TEST_CASE("gallery: Azadi tower") {
  CHECK_THROWS_AS(gallery_azadi_density(0.0), PreconditionError);
  CHECK(gallery_azadi_density(3.0) == 0.0);
  CHECK(gallery_azadi_density(0.5) == doctest::Approx(gallery_azadi_density(-0.5)));
  // Density from the closed-form transform agrees with the closed-form density.
  for (double x : {-2.0, -0.7, 0.3, 1.1, 2.4}) {
    const double rho = -gallery_azadi_cauchy(UHPPoint(x, 1e-9)).imag() / kPi;
    CHECK(rho == doctest::Approx(gallery_azadi_density(x)).epsilon(1e-6));
  }
}

TEST_CASE("gallery: Cauchy Levy measure") {
  const double s2 = 1.0;
  const double x = 200.0;
  CHECK(std::abs(std::pow(x, 4) * gallery_cauchy_levy_density(s2, x) / (s2 / kPi) - 1.0) < 0.02);
  const auto generic = cauchy_from_levy({0.0, s2, ProbabilityMeasure::cauchy(0.0, 1.0)});
  const AnalyticTransform g(TransformKind::CauchyG, [s2](cplx z) { return gallery_cauchy_levy(s2, UHPPoint(z)); }, "cl");
  CHECK(sup_gap(g, [&](cplx z) { return generic(z); }, 9, 1e-2) < 1e-9);
  for (double y : {-3.0, 0.0, 1.5}) {
    const double rho = -gallery_cauchy_levy(s2, UHPPoint(y, 1e-9)).imag() / kPi;
    CHECK(rho == doctest::Approx(gallery_cauchy_levy_density(s2, y)).epsilon(1e-6));
  }
}

TEST_CASE("property: symmetric Levy measures give symmetric laws") {
  gen::Rng rng(69);
  for (int trial = 0; trial < 5; ++trial) {
    auto half = gen::atoms(rng, 1, 3, 0.1, 2.0);
    std::vector<Atom> atoms;
    for (const auto& a : half) {
      atoms.push_back({-a.location, a.weight / 2});
      atoms.push_back({a.location, a.weight / 2});
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& p, const Atom& q) { return p.location < q.location; });
    const auto g = cauchy_from_levy({0.0, rng.uniform(0.5, 2.0), ProbabilityMeasure::atomic(atoms)});
    const auto c = stieltjes_density(g, uniform_grid(-5, 5, 501));
    for (std::size_t i = 0; i < c.grid.size(); ++i)
      CHECK(c.values[i] == doctest::Approx(c.values[c.grid.size() - 1 - i]).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("property: halving the triple and convolving twice") {
  gen::Rng rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    const LevyTriple t{rng.uniform(-1, 1), rng.uniform(0.5, 2.0), gen::atomic(rng, 1, 3, -2, 2)};
    const auto whole = cauchy_from_levy(t);
    const auto half = cauchy_from_levy({t.mean / 2, t.variance / 2, t.levy});
    const auto twice = free_convolve(half, half);
    for (int k = 0; k < 20; ++k) {
      const cplx z = gen::uhp_point(rng, -4, 4, 0.1, 3);
      CHECK(std::abs(twice(z) - whole(z)) < 1e-6);
    }
  }
}

TEST_CASE("polynomial root selection") {
  // G^2 - zG + 1 = 0 has roots (z -+ sqrt(z^2 - 4))/2; only the minus branch is a Cauchy transform.
  std::vector<std::function<cplx(cplx)>> roots{
      [](cplx z) { return (z + principal_sqrt(z * z - 4.0)) / 2.0; },
      [](cplx z) { return (z - principal_sqrt(z * z - 4.0)) / 2.0; }};
  CHECK(polynomial_root_select(roots) == 1);

  std::vector<std::function<cplx(cplx)>> none{[](cplx z) { return z; }, [](cplx) { return cplx{1.0, 0.0}; }};
  CHECK_THROWS_AS(polynomial_root_select(none), Error);

  std::vector<std::function<cplx(cplx)>> both{[](cplx z) { return 1.0 / z; }, [](cplx z) { return 1.0 / (z - 1.0); }};
  CHECK_THROWS_AS(polynomial_root_select(both), Error);

  CHECK_THROWS_AS(polynomial_root_select({}), PreconditionError);
}
