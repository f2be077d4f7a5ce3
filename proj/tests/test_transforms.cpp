#include <cmath>

#include "doctest.h"
#include "freebias/inversion.hpp"
#include "freebias/transforms.hpp"
#include "generators.hpp"

using namespace freebias;

namespace {

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

std::vector<Atom> atoms_of(const ProbabilityMeasure& mu) {
  const auto* a = mu.get_if<Atomic>();
  REQUIRE(a != nullptr);
  return a->atoms;
}

void check_atoms(const ProbabilityMeasure& mu, const std::vector<Atom>& expected, double tol = 1e-14) {
  const auto got = atoms_of(mu);
  REQUIRE(got.size() == expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].location == doctest::Approx(expected[i].location).epsilon(tol));
    CHECK(got[i].weight == doctest::Approx(expected[i].weight).epsilon(tol));
  }
}

// Compare two transforms on a fixed set of upper half plane points.
double sup_gap(const AnalyticTransform& a, const std::function<cplx(cplx)>& b, std::uint64_t seed = 1) {
  gen::Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 40; ++k) {
    const cplx z = gen::uhp_point(rng, -4, 4, 0.05, 4);
    worst = std::max(worst, std::abs(a(z) - b(z)));
  }
  return worst;
}

}  // namespace

TEST_CASE("square bias reweights atoms") {
  check_atoms(square_bias(ProbabilityMeasure::rademacher()), {{-1, 0.5}, {1, 0.5}});
  const double a = 1.0, b = 3.0;
  check_atoms(square_bias(ProbabilityMeasure::atomic({{-a, b / (a + b)}, {b, a / (a + b)}})),
              {{-a, a / (a + b)}, {b, b / (a + b)}});
  check_atoms(square_bias(ProbabilityMeasure::atomic({{0.0, 0.7}, {2.5, 0.3}})), {{2.5, 1.0}});
  check_atoms(square_bias(ProbabilityMeasure::dirac(0.0)), {{0.0, 1.0}});
  CHECK_THROWS_AS(square_bias(ProbabilityMeasure::cauchy(0.0, 1.0)), PreconditionError);
}

TEST_CASE("inverse square bias") {
  check_atoms(inverse_square_bias(ProbabilityMeasure::dirac(2.0)), {{2.0, 1.0}});
  check_atoms(inverse_square_bias(ProbabilityMeasure::dirac(0.0)), {{0.0, 1.0}});
  check_atoms(inverse_square_bias(ProbabilityMeasure::rademacher()), {{-1, 0.5}, {1, 0.5}});
  CHECK_THROWS_AS(inverse_square_bias(ProbabilityMeasure::atomic({{0.0, 0.5}, {1.0, 0.5}})),
                  PreconditionError);
  CHECK_THROWS_AS(inverse_square_bias(ProbabilityMeasure::semicircle(0.0, 1.0)), PreconditionError);
}

TEST_CASE("el gordo") {
  const auto fixed = el_gordo(ProbabilityMeasure::dirac(0.0));
  CHECK(sup_gap(fixed, [](cplx z) { return 1.0 / z; }) < 1e-14);
  const double a = 2.0;
  const auto g = el_gordo(ProbabilityMeasure::dirac(a));
  CHECK(sup_gap(g, [a](cplx z) { return 1.0 / principal_sqrt(z * (z - a)); }) < 1e-13);
  // which is the arcsine law on [0, a]
  const auto arc = cauchy_transform(ProbabilityMeasure::arcsine(0.0, a));
  CHECK(sup_gap(g, [&](cplx z) { return arc(z); }) < 1e-13);
}

TEST_CASE("flat combine of two atoms is an arcsine law") {
  const auto g = flat_combine(ProbabilityMeasure::dirac(1.0), ProbabilityMeasure::dirac(-1.0));
  CHECK(sup_gap(g, [](cplx z) { return 1.0 / principal_sqrt(z * z - 1.0); }) < 1e-13);
  const auto h = flat_combine(ProbabilityMeasure::dirac(-0.5), ProbabilityMeasure::dirac(2.0));
  const auto arc = cauchy_transform(ProbabilityMeasure::arcsine(-0.5, 2.0));
  CHECK(sup_gap(h, [&](cplx z) { return arc(z); }) < 1e-13);
}

TEST_CASE("free zero bias examples") {
  const auto r = free_zero_bias(ProbabilityMeasure::rademacher());
  CHECK(sup_gap(r, [](cplx z) { return 1.0 / principal_sqrt(z * z - 1.0); }) < 1e-13);

  for (double v : {0.5, 1.0, 3.0}) {
    const auto mu = ProbabilityMeasure::semicircle(0.0, v);
    const auto g = cauchy_transform(mu);
    CHECK(sup_gap(free_zero_bias(mu), [&](cplx z) { return g(z); }) < 1e-12);
  }

  const double a = 0.5, b = 2.0;
  const auto two = ProbabilityMeasure::atomic({{-a, b / (a + b)}, {b, a / (a + b)}});
  CHECK(sup_gap(free_zero_bias(two), [=](cplx z) { return 1.0 / principal_sqrt((z + a) * (z - b)); }) <
        1e-12);

  CHECK_THROWS_AS(free_zero_bias(ProbabilityMeasure::dirac(1.0)), PreconditionError);
  CHECK_THROWS_AS(free_zero_bias(ProbabilityMeasure::cauchy(0.0, 1.0)), PreconditionError);
}

TEST_CASE("raw box-flat composition on a point mass mixture") {
  const double alpha = 0.3, a = 1.5;
  const auto mu = ProbabilityMeasure::atomic({{0.0, 1.0 - alpha}, {a, alpha}});
  CHECK(sup_gap(box_flat_raw(mu), [=](cplx z) { return 1.0 / principal_sqrt(z * (z - a)); }) < 1e-12);
  CHECK_THROWS_AS(box_flat_raw(ProbabilityMeasure::dirac(0.0)), PreconditionError);
}

TEST_CASE("square bias on transforms matches reweighting") {
  gen::Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mu = gen::atomic(rng, 2, 6, -3, 3);
    const MomentSummary m = moments(mu);
    const auto viaG = square_bias_transform(cauchy_transform(mu), *m.mean, *m.second_moment);
    const auto direct = cauchy_transform(square_bias(mu));
    CHECK(sup_gap(viaG, [&](cplx z) { return direct(z); }, trial) < 1e-10);
  }
}

TEST_CASE("property: square bias of a mixture reweights the components") {
  gen::Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m1 = gen::atomic(rng, 1, 4, -3, 3), m2 = gen::atomic(rng, 1, 4, -3, 3);
    const double p = rng.uniform(0.1, 0.9);
    const auto mix = ProbabilityMeasure::mixture({p, 1 - p}, {m1, m2});
    const double s1 = *moments(m1).second_moment, s2 = *moments(m2).second_moment;
    const double q = p * s1 / (p * s1 + (1 - p) * s2);
    const auto g_expected = cauchy_transform(
        ProbabilityMeasure::mixture({q, 1 - q}, {square_bias(m1), square_bias(m2)}));
    const auto g_got = cauchy_transform(square_bias(mix));
    CHECK(sup_gap(g_got, [&](cplx z) { return g_expected(z); }, trial) < 1e-13);
  }
}

TEST_CASE("property: scaling equivariance of the free zero bias") {
  gen::Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mu = gen::centered_atomic(rng, 2, 6, -2, 2);
    const double alpha = rng.uniform(0.3, 3.0) * (trial % 2 ? -1.0 : 1.0);
    const auto lhs = free_zero_bias(scale(mu, alpha));
    const auto base = free_zero_bias(mu);
    // G_{aX}(z) = G_X(z/a)/a; negative a goes through the conjugate reflection.
    auto rhs = [&](cplx z) {
      const cplx u = z / alpha;
      return alpha > 0 ? base(u) / alpha : std::conj(base(std::conj(u))) / alpha;
    };
    CHECK(sup_gap(lhs, rhs, trial) < 1e-9);
  }
}

TEST_CASE("property: E[X/(z - X)] = sigma^2 G_{X°}(z)^2") {
  gen::Rng rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mu = gen::centered_atomic(rng, 2, 6, -3, 3);
    const double var = *moments(mu).variance;
    const auto g = free_zero_bias(mu);
    for (int k = 0; k < 20; ++k) {
      const cplx z = gen::uhp_point(rng, -4, 4, 0.05, 4);
      cplx lhs{};
      for (const auto& a : atoms_of(mu)) lhs += a.weight * a.location / (z - a.location);
      const cplx gz = g(z);
      CHECK(std::abs(lhs - var * gz * gz) < 1e-9);
    }
  }
}

TEST_CASE("property: symmetric laws have symmetric zero-bias densities") {
  gen::Rng rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    auto half = gen::atoms(rng, 1, 3, 0.2, 3.0);
    std::vector<Atom> atoms;
    for (const auto& a : half) {
      atoms.push_back({-a.location, a.weight / 2});
      atoms.push_back({a.location, a.weight / 2});
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.location < y.location; });
    const auto mu = ProbabilityMeasure::atomic(atoms);
    const auto c = stieltjes_density(free_zero_bias(mu), uniform_grid(-3.5, 3.5, 701));
    for (std::size_t i = 0; i < c.grid.size(); ++i)
      CHECK(c.values[i] == doctest::Approx(c.values[c.grid.size() - 1 - i]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("zero bias is not a fixed point away from the semicircle") {
  for (const auto& mu : {ProbabilityMeasure::rademacher(), ProbabilityMeasure::arcsine(-1.0, 1.0),
                         ProbabilityMeasure::free_poisson(1.0, 1.0, -1.0)}) {
    const auto g = cauchy_transform(mu);
    CHECK(sup_gap(free_zero_bias(mu), [&](cplx z) { return g(z); }) > 1e-3);
  }
}

TEST_CASE("classical zero bias") {
  const auto u = classical_zero_bias(ProbabilityMeasure::rademacher());
  for (double x : {-0.9, -0.5, 0.0, 0.3, 0.8}) CHECK(density(u, x) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(density(u, 1.5) == 0.0);

  // Centered (1 - alpha) delta_0 + alpha delta_a: uniform on [-alpha a, (1 - alpha) a].
  const double alpha = 0.25, a = 2.0;
  const auto mu = ProbabilityMeasure::atomic({{-alpha * a, 1 - alpha}, {(1 - alpha) * a, alpha}});
  const auto z = classical_zero_bias(mu);
  for (double x : {-0.4, 0.0, 0.7, 1.4}) CHECK(density(z, x) == doctest::Approx(1.0 / a).epsilon(1e-9));
  CHECK(density(z, -0.6) == 0.0);
  CHECK(density(z, 1.6) == 0.0);

  CHECK_THROWS_AS(classical_zero_bias(ProbabilityMeasure::dirac(3.0)), PreconditionError);
}

TEST_CASE("step strings") {
  CHECK(parse_step("square_bias").kind == StepKind::SquareBias);
  CHECK(parse_step("free_zero_bias").kind == StepKind::FreeZeroBias);
  const ChainStep s = parse_step("shift:-1.5");
  CHECK(s.kind == StepKind::Shift);
  CHECK(s.parameter == -1.5);
  CHECK(parse_step("scale:2").parameter == 2.0);
  CHECK(parse_step("flat:other.json").kind == StepKind::FlatCombine);
  CHECK_THROWS_AS(parse_step("scale:0"), ParseError);
  CHECK_THROWS_AS(parse_step("shift:abc"), ParseError);
  CHECK_THROWS_AS(parse_step("zero_bias"), ParseError);
  CHECK_THROWS_AS(parse_step("flat:"), ParseError);
}

TEST_CASE("bias chains") {
  auto no_materializer = Materializer{};
  const auto r = ProbabilityMeasure::rademacher();

  const auto rec = apply_chain(r, {parse_step("square_bias")}, no_materializer);
  REQUIRE(std::holds_alternative<ProbabilityMeasure>(rec.output));
  check_atoms(std::get<ProbabilityMeasure>(rec.output), {{-1, 0.5}, {1, 0.5}});

  const auto fixed = apply_chain(ProbabilityMeasure::dirac(0.0), {parse_step("el_gordo")}, no_materializer);
  REQUIRE(std::holds_alternative<AnalyticTransform>(fixed.output));
  CHECK(sup_gap(std::get<AnalyticTransform>(fixed.output), [](cplx z) { return 1.0 / z; }) < 1e-14);

  // Transform-level steps compose without materializing.
  const auto twice = apply_chain(r, {parse_step("free_zero_bias"), parse_step("free_zero_bias")}, no_materializer);
  const auto& g2 = std::get<AnalyticTransform>(twice.output);
  const auto arc = cauchy_transform(ProbabilityMeasure::arcsine(-1.0, 1.0));
  const auto expected = free_zero_bias(arc, 0.0, 0.5);
  CHECK(sup_gap(g2, [&](cplx z) { return expected(z); }) < 1e-6);

  const auto moved = apply_chain(r, {parse_step("shift:2"), parse_step("scale:-1")}, no_materializer);
  check_atoms(std::get<ProbabilityMeasure>(moved.output), {{-3, 0.5}, {-1, 0.5}});

  ChainStep flat = parse_step("flat:x");
  flat.partner = ProbabilityMeasure::dirac(-1.0);
  const auto combined = apply_chain(ProbabilityMeasure::dirac(1.0), {flat}, no_materializer);
  CHECK(sup_gap(std::get<AnalyticTransform>(combined.output), [&](cplx z) { return arc(z); }) < 1e-13);

  // A measure-only step after a transform needs the materializer.
  CHECK_THROWS_AS(apply_chain(r, {parse_step("el_gordo"), parse_step("square_bias")}, no_materializer),
                  PreconditionError);
  CHECK_THROWS_AS(apply_chain(ProbabilityMeasure::atomic({{0.0, 0.5}, {1.0, 0.5}}),
                              {parse_step("inverse_square_bias")}, no_materializer),
                  PreconditionError);
}
