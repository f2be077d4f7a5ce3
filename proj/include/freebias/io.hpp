#pragma once

#include <iosfwd>
#include <string>

#include "freebias/infdiv.hpp"
#include "freebias/inversion.hpp"
#include "freebias/measure.hpp"
#include "json.hpp"

namespace freebias::io {

using json = nlohmann::ordered_json;

/// Measure document: {"type": ..., variant fields}. Unknown fields, missing fields and
/// invalid values raise ParseError naming the offending field.
ProbabilityMeasure parse_measure(const json& doc, double mass_tol = kDefaultMassTol);

/// Lévy triple document: {"mean": m, "variance": s2, "levy": <measure document>}.
LevyTriple parse_triple(const json& doc, double mass_tol = kDefaultMassTol);

/// Parses text as JSON; syntax errors become ParseError with line and column.
json parse_text(const std::string& text, const std::string& origin = "<input>");
json load_file(const std::string& path);

/// Inverse of parse_measure for the variants that round-trip exactly.
json measure_to_json(const ProbabilityMeasure& mu);

/// CSV with header "x,rho,eps", one row per grid point, 17 significant digits.
void write_curve_csv(std::ostream& out, const DensityCurve& c);

/// {mass, mean, variance, support: [lo, hi], min_raw, negative_points, failures}.
json curve_summary(const DensityCurve& c);

/// 17 significant digits, the format used for every number the CLI prints.
std::string format_real(double x);
std::string format_complex(cplx z);

/// Parses "a+bi", "a-bi", "bi", "a" (spaces ignored).
cplx parse_complex(const std::string& text);

}  // namespace freebias::io
