#include "freebias/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace freebias::io {
namespace {

void only_fields(const json& doc, const std::set<std::string>& allowed, const std::string& where) {
  if (!doc.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (!allowed.count(key)) throw ParseError(where + ": unknown field '" + key + "'");
  }
}

const json& field(const json& doc, const std::string& key, const std::string& where) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

double number(const json& doc, const std::string& key, const std::string& where) {
  const json& v = field(doc, key, where);
  if (!v.is_number()) throw ParseError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& doc, const std::string& key, const std::string& where) {
  const json& v = field(doc, key, where);
  if (!v.is_array()) throw ParseError(where + ": field '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ParseError(where + ": field '" + key + "' must hold numbers only");
    out.push_back(e.get<double>());
  }
  return out;
}

ProbabilityMeasure parse_at(const json& doc, double mass_tol, const std::string& where) {
  if (!doc.is_object()) throw ParseError(where + ": expected an object");
  const json& t = field(doc, "type", where);
  if (!t.is_string()) throw ParseError(where + ": field 'type' must be a string");
  const std::string type = t.get<std::string>();
  try {
    if (type == "atomic") {
      only_fields(doc, {"type", "atoms"}, where);
      const json& list = field(doc, "atoms", where);
      if (!list.is_array() || list.empty())
        throw ParseError(where + ": field 'atoms' must be a nonempty array of [location, weight]");
      std::vector<Atom> atoms;
      for (const auto& a : list) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
          throw ParseError(where + ": each atom must be [location, weight]");
        atoms.push_back({a[0].get<double>(), a[1].get<double>()});
      }
      std::stable_sort(atoms.begin(), atoms.end(),
                       [](const Atom& a, const Atom& b) { return a.location < b.location; });
      return ProbabilityMeasure::atomic(std::move(atoms));
    }
    if (type == "grid") {
      only_fields(doc, {"type", "grid", "values"}, where);
      return ProbabilityMeasure::grid_density(numbers(doc, "grid", where),
                                              numbers(doc, "values", where), mass_tol);
    }
    if (type == "semicircle") {
      only_fields(doc, {"type", "mean", "variance"}, where);
      return ProbabilityMeasure::semicircle(number(doc, "mean", where), number(doc, "variance", where));
    }
    if (type == "arcsine") {
      only_fields(doc, {"type", "left", "right"}, where);
      return ProbabilityMeasure::arcsine(number(doc, "left", where), number(doc, "right", where));
    }
    if (type == "free_poisson") {
      only_fields(doc, {"type", "lambda", "alpha", "shift"}, where);
      const double s = doc.contains("shift") ? number(doc, "shift", where) : 0.0;
      return ProbabilityMeasure::free_poisson(number(doc, "lambda", where), number(doc, "alpha", where), s);
    }
    if (type == "cauchy") {
      only_fields(doc, {"type", "location", "scale"}, where);
      return ProbabilityMeasure::cauchy(number(doc, "location", where), number(doc, "scale", where));
    }
    if (type == "mixture") {
      only_fields(doc, {"type", "weights", "components"}, where);
      const std::vector<double> w = numbers(doc, "weights", where);
      const json& comps = field(doc, "components", where);
      if (!comps.is_array()) throw ParseError(where + ": field 'components' must be an array");
      std::vector<ProbabilityMeasure> parts;
      for (std::size_t i = 0; i < comps.size(); ++i)
        parts.push_back(parse_at(comps[i], mass_tol, where + ".components[" + std::to_string(i) + "]"));
      return ProbabilityMeasure::mixture(w, std::move(parts));
    }
  } catch (const InvalidMeasure& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": unknown measure type '" + type + "'");
}

}  // namespace

ProbabilityMeasure parse_measure(const json& doc, double mass_tol) {
  return parse_at(doc, mass_tol, "measure");
}

LevyTriple parse_triple(const json& doc, double mass_tol) {
  only_fields(doc, {"mean", "variance", "levy"}, "triple");
  LevyTriple t{number(doc, "mean", "triple"), number(doc, "variance", "triple"),
               parse_at(field(doc, "levy", "triple"), mass_tol, "triple.levy")};
  if (!(t.variance > 0.0)) throw ParseError("triple: field 'variance' must be positive");
  return t;
}

json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset to line and column for the diagnostic.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": malformed document");
  }
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

json measure_to_json(const ProbabilityMeasure& mu) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          json atoms = json::array();
          for (const auto& a : v.atoms) atoms.push_back({a.location, a.weight});
          return {{"type", "atomic"}, {"atoms", atoms}};
        } else if constexpr (std::is_same_v<T, GridDensity>) {
          return {{"type", "grid"}, {"grid", v.grid}, {"values", v.values}};
        } else if constexpr (std::is_same_v<T, Semicircle>) {
          return {{"type", "semicircle"}, {"mean", v.mean}, {"variance", v.variance}};
        } else if constexpr (std::is_same_v<T, Arcsine>) {
          return {{"type", "arcsine"}, {"left", v.left}, {"right", v.right}};
        } else if constexpr (std::is_same_v<T, FreePoisson>) {
          json j{{"type", "free_poisson"}, {"lambda", v.rate}, {"alpha", v.jump}};
          if (v.shift != 0.0) j["shift"] = v.shift;
          return j;
        } else if constexpr (std::is_same_v<T, CauchyLaw>) {
          return {{"type", "cauchy"}, {"location", v.location}, {"scale", v.scale}};
        } else {
          json comps = json::array();
          for (const auto& c : v.components) comps.push_back(measure_to_json(c));
          return {{"type", "mixture"}, {"weights", v.weights}, {"components", comps}};
        }
      },
      mu.variant());
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(cplx z) {
  const std::string im = format_real(z.imag());
  return format_real(z.real()) + (im.front() == '-' ? "" : "+") + im + "i";
}

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) throw ParseError("empty complex number");
  auto to_double = [&](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw ParseError("malformed complex number '" + text + "'");
    }
    if (used != part.size()) throw ParseError("malformed complex number '" + text + "'");
    return v;
  };
  if (s.back() != 'i') return {to_double(s), 0.0};
  s.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, to_double(s)};
  return {to_double(s.substr(0, split)), to_double(s.substr(split))};
}

void write_curve_csv(std::ostream& out, const DensityCurve& c) {
  out << "x,rho,eps\n";
  for (std::size_t i = 0; i < c.grid.size(); ++i)
    out << format_real(c.grid[i]) << ',' << (c.failed[i] ? std::string("nan") : format_real(c.values[i]))
        << ',' << format_real(c.eps_used[i]) << '\n';
}

json curve_summary(const DensityCurve& c) {
  const double m1 = c.mass > 0.0 ? curve_moment(c, 1) / c.mass : 0.0;
  const double m2 = c.mass > 0.0 ? curve_moment(c, 2) / c.mass : 0.0;
  const double peak = c.values.empty() ? 0.0 : *std::max_element(c.values.begin(), c.values.end());
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    if (c.values[i] > 1e-6 * peak && peak > 0.0) {
      if (!any) lo = c.grid[i];
      hi = c.grid[i];
      any = true;
    }
  }
  json j{{"mass", c.mass}, {"mean", m1}, {"variance", m2 - m1 * m1}};
  j["support"] = any ? json::array({lo, hi}) : json(nullptr);
  j["min_raw"] = c.min_raw;
  j["negative_points"] = c.negative_points;
  j["failures"] = c.failures();
  return j;
}

}  // namespace freebias::io
