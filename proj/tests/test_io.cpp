#include <cmath>
#include <sstream>

#include "doctest.h"
#include "freebias/io.hpp"

using namespace freebias;
using io::json;

namespace {

std::string parse_error_of(const json& doc) {
  try {
    (void)io::parse_measure(doc);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("every measure type parses") {
  const auto a = io::parse_measure(json::parse(R"({"type":"atomic","atoms":[[-1,0.5],[1,0.5]]})"));
  REQUIRE(a.is<Atomic>());
  CHECK(a.get_if<Atomic>()->atoms.size() == 2);

  const auto g = io::parse_measure(
      json::parse(R"({"type":"grid","grid":[0,1,2,3,4,5,6,7,8],"values":[0,0.0625,0.125,0.1875,0.25,0.1875,0.125,0.0625,0]})"));
  CHECK(g.is<GridDensity>());

  const auto s = io::parse_measure(json::parse(R"({"type":"semicircle","mean":0.5,"variance":2})"));
  CHECK(*moments(s).variance == doctest::Approx(2.0));

  const auto arc = io::parse_measure(json::parse(R"({"type":"arcsine","left":-1,"right":3})"));
  CHECK(support_hull(arc) == Interval{-1.0, 3.0});

  const auto fp = io::parse_measure(json::parse(R"({"type":"free_poisson","lambda":2,"alpha":0.5})"));
  CHECK(*moments(fp).mean == doctest::Approx(1.0));
  const auto fps = io::parse_measure(json::parse(R"({"type":"free_poisson","lambda":2,"alpha":0.5,"shift":-1})"));
  CHECK(*moments(fps).mean == doctest::Approx(0.0));

  CHECK(io::parse_measure(json::parse(R"({"type":"cauchy","location":0,"scale":1})")).is<CauchyLaw>());

  const auto mix = io::parse_measure(json::parse(
      R"({"type":"mixture","weights":[0.25,0.75],"components":[{"type":"atomic","atoms":[[0,1]]},
          {"type":"semicircle","mean":0,"variance":1}]})"));
  CHECK(mix.is<Mixture>());
  CHECK(*moments(mix).second_moment == doctest::Approx(0.75));
}

TEST_CASE("malformed measure documents name the field") {
  CHECK(contains(parse_error_of(json::parse(R"({"type":"semicircle","mean":0,"variance":1,"extra":2})")),
                 "unknown field 'extra'"));
  CHECK(contains(parse_error_of(json::parse(R"({"type":"semicircle","mean":0})")), "missing field 'variance'"));
  CHECK(contains(parse_error_of(json::parse(R"({"type":"semicircle","mean":"0","variance":1})")), "'mean'"));
  CHECK(contains(parse_error_of(json::parse(R"({"type":"banana"})")), "unknown measure type"));
  CHECK(contains(parse_error_of(json::parse(R"({"atoms":[[0,1]]})")), "missing field 'type'"));
  CHECK(contains(parse_error_of(json::parse(R"([1,2])")), "expected an object"));
  CHECK(contains(parse_error_of(json::parse(R"({"type":"atomic","atoms":[[0,0.4],[1,0.5]]})")), "0.9"));
  CHECK_FALSE(parse_error_of(json::parse(R"({"type":"semicircle","mean":0,"variance":-1})")).empty());
  CHECK_FALSE(parse_error_of(json::parse(R"({"type":"arcsine","left":2,"right":1})")).empty());
  CHECK_FALSE(parse_error_of(json::parse(R"({"type":"atomic","atoms":[[0]]})")).empty());
  // Nested errors carry the path to the component.
  CHECK(contains(parse_error_of(json::parse(
                     R"({"type":"mixture","weights":[1],"components":[{"type":"cauchy","location":0}]})")),
                 "scale"));
}

TEST_CASE("mass tolerance is configurable") {
  // Grid densities are checked against mass_tol; atom weights always sum to 1 within 1e-12.
  const auto doc = json::parse(R"({"type":"grid","grid":[0,1,2,3,4,5,6,7,8],"values":[0,0.0625,0.125,0.1875,0.2501,0.1875,0.125,0.0625,0]})");
  CHECK_THROWS_AS(io::parse_measure(doc), ParseError);
  CHECK_NOTHROW(io::parse_measure(doc, 1e-3));
  CHECK_THROWS_AS(io::parse_measure(json::parse(R"({"type":"atomic","atoms":[[0,0.5],[1,0.4999]]})"), 1e-3),
                  ParseError);
}

TEST_CASE("triples") {
  const auto t = io::parse_triple(json::parse(
      R"({"mean":0.5,"variance":2,"levy":{"type":"atomic","atoms":[[1,1]]}})"));
  CHECK(t.mean == 0.5);
  CHECK(t.variance == 2.0);
  CHECK(t.levy.is<Atomic>());
  CHECK_THROWS_AS(io::parse_triple(json::parse(R"({"mean":0,"variance":0,"levy":{"type":"atomic","atoms":[[1,1]]}})")),
                  ParseError);
  CHECK_THROWS_AS(io::parse_triple(json::parse(R"({"mean":0,"variance":1})")), ParseError);
  CHECK_THROWS_AS(
      io::parse_triple(json::parse(R"({"mean":0,"variance":1,"levy":{"type":"atomic","atoms":[[1,1]]},"x":1})")),
      ParseError);
}

TEST_CASE("syntax errors report line and column") {
  try {
    (void)io::parse_text("{\n  \"type\": \"atomic\",\n  \"atoms\": [[0, 1],]\n}", "doc.json");
    FAIL("expected a syntax error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).rfind("doc.json:3:", 0) == 0);
  }
  CHECK_THROWS_AS(io::load_file("/nonexistent/measure.json"), ParseError);
}

TEST_CASE("complex numbers") {
  CHECK(io::parse_complex("1+2i") == cplx{1, 2});
  CHECK(io::parse_complex("1 - 2i") == cplx{1, -2});
  CHECK(io::parse_complex("-0.5i") == cplx{0, -0.5});
  CHECK(io::parse_complex("i") == cplx{0, 1});
  CHECK(io::parse_complex("-i") == cplx{0, -1});
  CHECK(io::parse_complex("3") == cplx{3, 0});
  CHECK(io::parse_complex("1e-3+2e+1i") == cplx{1e-3, 20});
  CHECK_THROWS_AS(io::parse_complex(""), ParseError);
  CHECK_THROWS_AS(io::parse_complex("1+2j"), ParseError);
  CHECK_THROWS_AS(io::parse_complex("abc"), ParseError);

  CHECK(io::format_complex({1.5, -2.0}) == "1.5-2i");
  CHECK(io::format_complex({0.1, 0.25}) == "0.10000000000000001+0.25i");
  for (cplx z : {cplx{0.1, -1e-300}, cplx{-3.25, 7.0 / 3.0}}) CHECK(io::parse_complex(io::format_complex(z)) == z);
}

TEST_CASE("curve CSV and summary") {
  DensityCurve c;
  c.grid = {-1, 0, 1};
  c.values = {0, 1, 0};
  c.eps_used = {5e-3, 5e-3, 5e-3};
  c.failed = {false, true, false};
  c.mass = 1.0;
  std::ostringstream out;
  io::write_curve_csv(out, c);
  CHECK(out.str() == "x,rho,eps\n-1,0,0.0050000000000000001\n0,nan,0.0050000000000000001\n1,0,0.0050000000000000001\n");

  const json s = io::curve_summary(c);
  CHECK(s["failures"] == 1);
  CHECK(s["mass"] == 1.0);
}

TEST_CASE("measure documents round trip") {
  for (const char* text :
       {R"({"type":"atomic","atoms":[[-1,0.25],[2,0.75]]})", R"({"type":"semicircle","mean":0.5,"variance":2})",
        R"({"type":"arcsine","left":-1,"right":3})", R"({"type":"free_poisson","lambda":2,"alpha":0.5,"shift":1})",
        R"({"type":"cauchy","location":1,"scale":0.5})",
        R"({"type":"mixture","weights":[0.5,0.5],"components":[{"type":"atomic","atoms":[[0,1]]},{"type":"cauchy","location":0,"scale":1}]})"}) {
    const json doc = json::parse(text);
    const auto mu = io::parse_measure(doc);
    const json back = io::measure_to_json(mu);
    const auto again = io::parse_measure(back);
    CHECK(io::measure_to_json(again) == back);
    const cplx z{0.3, 0.7};
    CHECK(cauchy_transform(again)(z) == cauchy_transform(mu)(z));
  }
}
