#include <cmath>

#include "doctest.h"
#include "freebias/measure.hpp"
#include "generators.hpp"

using namespace freebias;

namespace {
std::vector<double> unit_grid() {
  std::vector<double> x;
  for (int i = 0; i <= 8; ++i) x.push_back(i / 8.0);
  return x;
}
}  // namespace

TEST_CASE("moments of the basic laws") {
  const MomentSummary r = moments(ProbabilityMeasure::rademacher());
  CHECK(*r.mean == 0.0);
  CHECK(*r.variance == 1.0);
  CHECK(*r.abs_first_moment == 1.0);

  const MomentSummary s = moments(ProbabilityMeasure::semicircle(0.0, 2.0));
  CHECK(*s.mean == doctest::Approx(0.0));
  CHECK(*s.variance == doctest::Approx(2.0));

  const MomentSummary c = moments(ProbabilityMeasure::cauchy(0.0, 1.0));
  CHECK_FALSE(c.mean.has_value());
  CHECK_FALSE(c.variance.has_value());

  const MomentSummary a = moments(ProbabilityMeasure::arcsine(-1.0, 1.0));
  CHECK(*a.variance == doctest::Approx(0.5).epsilon(1e-12));

  const MomentSummary p = moments(ProbabilityMeasure::free_poisson(2.0, 1.5));
  CHECK(*p.mean == doctest::Approx(3.0));
  CHECK(*p.variance == doctest::Approx(2.0 * 1.5 * 1.5));
}

TEST_CASE("support hulls") {
  CHECK(support_hull(ProbabilityMeasure::rademacher()) == Interval{-1.0, 1.0});
  CHECK(support_hull(ProbabilityMeasure::semicircle(0.0, 1.0)) == Interval{-2.0, 2.0});
  CHECK(support_hull(ProbabilityMeasure::arcsine(0.0, 3.0)) == Interval{0.0, 3.0});
  CHECK_FALSE(support_hull(ProbabilityMeasure::cauchy(0.0, 1.0)).bounded());
}

TEST_CASE("shift and scale stay in closed form") {
  const auto moved_dirac = shift(ProbabilityMeasure::dirac(0.0), 3.0);
  const auto* d = moved_dirac.get_if<Atomic>();
  REQUIRE(d != nullptr);
  CHECK(d->atoms.size() == 1);
  CHECK(d->atoms[0].location == 3.0);

  const auto scaled = scale(ProbabilityMeasure::semicircle(0.0, 1.0), 2.0);
  const auto* s = scaled.get_if<Semicircle>();
  REQUIRE(s != nullptr);
  CHECK(s->variance == doctest::Approx(4.0));

  const auto moved = shift(ProbabilityMeasure::arcsine(-1.0, 1.0), 1.0);
  const auto* a = moved.get_if<Arcsine>();
  REQUIRE(a != nullptr);
  CHECK(a->left == 0.0);
  CHECK(a->right == 2.0);

  CHECK_THROWS_AS(scale(ProbabilityMeasure::rademacher(), 0.0), PreconditionError);
}

TEST_CASE("constructors reject malformed data") {
  CHECK_THROWS_AS(ProbabilityMeasure::atomic({{-1.0, 0.5}, {1.0, 0.4}}), InvalidMeasure);
  CHECK_THROWS_AS(ProbabilityMeasure::atomic({{-1.0, 1.1}, {1.0, -0.1}}), InvalidMeasure);
  CHECK_THROWS_AS(ProbabilityMeasure::atomic({}), InvalidMeasure);
  CHECK_THROWS_AS(ProbabilityMeasure::semicircle(0.0, 0.0), InvalidMeasure);
  CHECK_THROWS_AS(ProbabilityMeasure::arcsine(1.0, 1.0), InvalidMeasure);
  const std::vector<double> unsorted{0, 1, 2, 3, 5, 4, 6, 7};
  CHECK_THROWS_AS(ProbabilityMeasure::grid_density(unsorted, std::vector<double>(8, 1.0 / 7)), InvalidMeasure);
  CHECK_THROWS_AS(ProbabilityMeasure::grid_density({0, 1, 2}, {0.25, 0.5, 0.25}), InvalidMeasure);
  // Trapezoid mass 0.5 on [0, 1].
  CHECK_THROWS_AS(ProbabilityMeasure::grid_density(unit_grid(), std::vector<double>(9, 0.5)), InvalidMeasure);
  CHECK_THROWS_AS(ProbabilityMeasure::mixture({0.5, 0.4}, {ProbabilityMeasure::dirac(0.0),
                                                          ProbabilityMeasure::dirac(1.0)}),
                  InvalidMeasure);
}

TEST_CASE("grid densities are renormalized within tolerance") {
  const auto g = ProbabilityMeasure::grid_density(unit_grid(), std::vector<double>(9, 1.0 + 1e-7));
  CHECK(expectation(g, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(density(g, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(density(g, 2.0) == 0.0);
}

TEST_CASE("cdf, atoms and partial moments") {
  const auto r = ProbabilityMeasure::rademacher();
  CHECK(cdf(r, -2.0) == 0.0);
  CHECK(cdf(r, 0.0) == 0.5);
  CHECK(cdf(r, 1.0) == 1.0);
  CHECK(atom_mass(r, 1.0) == 0.5);
  CHECK(atom_mass(r, 0.0) == 0.0);
  CHECK(upper_partial_moment(r, 0.0) == doctest::Approx(0.5));
  CHECK(cdf(ProbabilityMeasure::semicircle(0.0, 1.0), 0.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(cdf(ProbabilityMeasure::cauchy(0.0, 1.0), 1.0) == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("discretize keeps the first two moments") {
  for (const auto& mu : {ProbabilityMeasure::semicircle(0.5, 2.0), ProbabilityMeasure::arcsine(-1.0, 3.0),
                         ProbabilityMeasure::free_poisson(2.0, 1.0)}) {
    const MomentSummary a = moments(mu), b = moments(discretize(mu));
    CHECK(*b.mean == doctest::Approx(*a.mean).epsilon(1e-3));
    CHECK(*b.variance == doctest::Approx(*a.variance).epsilon(1e-3));
  }
}

TEST_CASE("describe names the variant") {
  CHECK(describe(ProbabilityMeasure::semicircle(0.0, 1.0)).find("semicircle") != std::string::npos);
  CHECK(describe(ProbabilityMeasure::rademacher()).find("atomic") != std::string::npos);
}

TEST_CASE("property: unit mass, variance scaling and hull translation") {
  gen::Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto mu = gen::atomic(rng, 1, 6, -4.0, 4.0);
    const double a = rng.uniform(0.2, 3.0) * (trial % 2 ? -1.0 : 1.0);
    const double c = rng.uniform(-5.0, 5.0);
    CHECK(expectation(mu, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));
    const double v = *moments(mu).variance;
    CHECK(*moments(scale(mu, a)).variance == doctest::Approx(a * a * v).epsilon(1e-12).scale(1.0));
    const Interval h = support_hull(mu), hs = support_hull(shift(mu, c));
    CHECK(hs.lo == doctest::Approx(h.lo + c));
    CHECK(hs.hi == doctest::Approx(h.hi + c));
  }
  for (const auto& mu : {ProbabilityMeasure::semicircle(1.0, 3.0), ProbabilityMeasure::arcsine(-2.0, 1.0),
                         ProbabilityMeasure::free_poisson(0.5, 2.0)}) {
    CHECK(expectation(mu, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(*moments(scale(mu, -1.5)).variance == doctest::Approx(2.25 * *moments(mu).variance));
  }
}
