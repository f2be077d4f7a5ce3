// Command-line front end: density, transform, infdiv, levy, convolve, root, phi, verify.
// Exit codes: 0 ok, 2 parse, 3 solver, 4 precondition, 5 verification failure.
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "freebias/freeconv.hpp"
#include "freebias/infdiv.hpp"
#include "freebias/inversion.hpp"
#include "freebias/io.hpp"
#include "freebias/transforms.hpp"
#include "freebias/verify.hpp"

namespace fb = freebias;
using fb::cplx;
using json = fb::io::json;

namespace {

// Angles inside the default cone for the Lévy probe points.
double kPiOver(int k) { return fb::kPi * (0.35 + 0.075 * k); }

struct VerificationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int grid_points = 2049;
  std::string eps_text = "1e-2,5e-3";
  std::vector<double> eps_schedule{1e-2, 5e-3};
  double mass_tol = 1e-6;
  double solver_tol = 1e-12;
  int max_iter = 10000;
  double pad_fraction = 0.1;
  std::string output_path;
  std::string format = "both";
  double n = 2.0;
  std::string z_text;
  std::string range_text;
  bool materialize = false;

  void validate() {
    if (grid_points < 9) throw fb::ParseError("--grid must be at least 9");
    eps_schedule.clear();
    std::stringstream ss(eps_text);
    for (std::string part; std::getline(ss, part, ',');) {
      try {
        eps_schedule.push_back(std::stod(part));
      } catch (const std::exception&) {
        throw fb::ParseError("--eps: cannot read '" + part + "'");
      }
    }
    if (eps_schedule.size() < 2) throw fb::ParseError("--eps needs at least two values");
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
      if (!(eps_schedule[i] > 0.0)) throw fb::ParseError("--eps values must be positive");
      if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))
        throw fb::ParseError("--eps must be strictly descending");
    }
    if (!(mass_tol > 0.0) || !(solver_tol > 0.0)) throw fb::ParseError("tolerances must be positive");
    if (max_iter < 1) throw fb::ParseError("--max-iter must be positive");
    if (!(pad_fraction >= 0.0)) throw fb::ParseError("--pad must be nonnegative");
    if (format != "csv" && format != "json" && format != "both")
      throw fb::ParseError("--format must be csv, json or both");
  }

  [[nodiscard]] fb::InversionOptions inversion() const { return {eps_schedule, 1e-8}; }
  [[nodiscard]] fb::SolverOptions solver() const { return {solver_tol, max_iter}; }
  [[nodiscard]] fb::SubordinationOptions subordination() const {
    fb::SubordinationOptions o;
    o.tol = solver_tol;
    o.max_iter = max_iter;
    return o;
  }

  [[nodiscard]] std::optional<fb::Interval> range() const {
    if (range_text.empty()) return std::nullopt;
    const auto comma = range_text.find(',');
    if (comma == std::string::npos) throw fb::ParseError("--range expects lo,hi");
    try {
      const fb::Interval r{std::stod(range_text.substr(0, comma)), std::stod(range_text.substr(comma + 1))};
      if (!(r.hi > r.lo)) throw fb::ParseError("--range needs lo < hi");
      return r;
    } catch (const std::invalid_argument&) {
      throw fb::ParseError("--range expects lo,hi");
    }
  }

  [[nodiscard]] json to_json() const {
    return {{"grid_points", grid_points}, {"eps_schedule", eps_schedule}, {"mass_tol", mass_tol},
            {"solver_tol", solver_tol},   {"max_iter", max_iter},         {"pad_fraction", pad_fraction}};
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fb::PreconditionError("cannot write '" + path + "'");
  out << text;
}

// Sends the CSV and JSON parts wherever --format and --out say.
void emit(const RunConfig& cfg, const std::string& csv, const json& report) {
  const std::string js = report.dump(2) + "\n";
  if (cfg.format == "csv") {
    cfg.output_path.empty() ? void(std::cout << csv) : write_text(cfg.output_path, csv);
  } else if (cfg.format == "json") {
    cfg.output_path.empty() ? void(std::cout << js) : write_text(cfg.output_path, js);
  } else if (cfg.output_path.empty()) {
    std::cout << csv;
    std::cerr << js;
  } else {
    write_text(cfg.output_path + ".csv", csv);
    write_text(cfg.output_path + ".json", js);
  }
}

std::string curve_csv(const fb::DensityCurve& c) {
  std::ostringstream out;
  fb::io::write_curve_csv(out, c);
  return out.str();
}

fb::DensityCurve invert(const fb::AnalyticTransform& g, fb::Interval range, const RunConfig& cfg) {
  return fb::stieltjes_density(g, fb::uniform_grid(range.lo, range.hi, static_cast<std::size_t>(cfg.grid_points)),
                               cfg.inversion());
}

// Range for a transform with no measure at hand: detect where its density lives inside a scan
// built from the tail moments, then pad.
fb::Interval transform_range(const fb::AnalyticTransform& g, const RunConfig& cfg) {
  if (auto r = cfg.range()) return *r;
  const fb::TransformMoments m = fb::estimate_moments(g);
  const double sd = std::sqrt(std::max(0.0, m.variance()));
  const fb::Interval scan{m.mean - 6.0 * sd - 1.0, m.mean + 6.0 * sd + 1.0};
  const auto runs = fb::support_detect(g, scan, 1e-3, 1e-4, 2049);
  if (runs.empty()) return scan;
  return fb::Interval{runs.front().lo, runs.back().hi}.padded(cfg.pad_fraction);
}

fb::Interval measure_range(const fb::ProbabilityMeasure& mu, const RunConfig& cfg) {
  if (auto r = cfg.range()) return *r;
  const fb::Interval h = fb::support_hull(mu);
  if (!h.bounded()) throw fb::PreconditionError("support is unbounded; pass --range lo,hi");
  return h.padded(cfg.pad_fraction);
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

bool point_mode(const RunConfig& cfg, const fb::AnalyticTransform& g) {
  if (cfg.z_text.empty()) return false;
  const fb::UHPPoint z(fb::io::parse_complex(cfg.z_text));
  std::cout << fb::io::format_complex(g(z.value())) << "\n";
  return true;
}

fb::ProbabilityMeasure load_measure(const std::string& path, const RunConfig& cfg) {
  return fb::io::parse_measure(fb::io::load_file(path), cfg.mass_tol);
}

// ---------------------------------------------------------------------------- commands

void cmd_density(const std::string& doc, const RunConfig& cfg) {
  const auto mu = load_measure(doc, cfg);
  const auto g = fb::cauchy_transform(mu);
  if (point_mode(cfg, g)) return;
  const auto c = invert(g, measure_range(mu, cfg), cfg);
  emit(cfg, curve_csv(c),
       {{"command", "density"}, {"input", fb::describe(mu)}, {"config", cfg.to_json()},
        {"curve", fb::io::curve_summary(c)}});
}

void cmd_transform(const std::string& doc, const std::vector<std::string>& chain, const RunConfig& cfg) {
  if (chain.empty()) throw fb::ParseError("transform needs at least one step");
  const auto mu = load_measure(doc, cfg);
  std::vector<fb::ChainStep> steps;
  for (const auto& s : chain) {
    fb::ChainStep step = fb::parse_step(s);
    if (step.kind == fb::StepKind::FlatCombine) step.partner = load_measure(s.substr(s.find(':') + 1), cfg);
    steps.push_back(std::move(step));
  }
  auto materialize = [&](const fb::AnalyticTransform& g) {
    const auto c = invert(g, transform_range(g, cfg), cfg);
    return fb::measure_from_curve(c, cfg.mass_tol);
  };
  const fb::BiasChainRecord rec = fb::apply_chain(mu, steps, materialize);

  json report{{"command", "transform"}, {"input", fb::io::measure_to_json(mu)}, {"config", cfg.to_json()}};
  json labels = json::array();
  for (const auto& s : rec.steps) labels.push_back(s.label);
  report["steps"] = labels;
  report["notes"] = rec.notes;

  std::string csv;
  if (const auto* out = std::get_if<fb::ProbabilityMeasure>(&rec.output)) {
    if (point_mode(cfg, fb::cauchy_transform(*out))) return;
    json o{{"kind", "measure"}, {"description", fb::describe(*out)}};
    if (const auto* at = out->get_if<fb::Atomic>()) {
      o["measure"] = fb::io::measure_to_json(*out);
      csv = "x,weight\n";
      for (const auto& a : at->atoms) csv += fb::io::format_real(a.location) + "," + fb::io::format_real(a.weight) + "\n";
    } else {
      const auto c = invert(fb::cauchy_transform(*out), measure_range(*out, cfg), cfg);
      csv = curve_csv(c);
      report["curve"] = fb::io::curve_summary(c);
    }
    report["output"] = o;
  } else {
    const auto& g = std::get<fb::AnalyticTransform>(rec.output);
    if (point_mode(cfg, g)) return;
    if (cfg.materialize) report["materialized"] = fb::describe(materialize(g));
    // Sample the output next to the input so fixed points are visible in the report.
    const auto g_in = fb::cauchy_transform(mu);
    json samples = json::array();
    bool fixed = true;
    for (cplx z : {cplx{0, 1}, cplx{1, 1}, cplx{-0.5, 2}, cplx{0, 3}}) {
      const cplx v = g(z), w = g_in(z);
      fixed = fixed && std::abs(v - w) <= 1e-12 * std::max(1.0, std::abs(w));
      samples.push_back({{"z", complex_json(z)}, {"G", complex_json(v)}, {"G_input", complex_json(w)}});
    }
    const auto c = invert(g, transform_range(g, cfg), cfg);
    csv = curve_csv(c);
    report["output"] = {{"kind", "transform"}, {"provenance", g.provenance()}, {"samples", samples},
                        {"fixed_point_of_input", fixed}};
    report["curve"] = fb::io::curve_summary(c);
  }
  emit(cfg, csv, report);
}

void cmd_infdiv(const std::string& doc, const RunConfig& cfg) {
  const fb::LevyTriple t = fb::io::parse_triple(fb::io::load_file(doc), cfg.mass_tol);
  fb::LevySolveOptions opts;
  opts.tol = cfg.solver_tol;
  opts.max_iter = cfg.max_iter;
  const auto g = fb::cauchy_from_levy(t, opts);
  if (point_mode(cfg, g)) return;
  fb::Interval range;
  if (auto r = cfg.range()) {
    range = *r;
  } else {
    // Support of the law sits within about m +- (2 sqrt(s2 (1 + E[Y^2])) + R) for |Y| <= R.
    const fb::MomentSummary my = fb::moments(t.levy);
    const fb::Interval hy = fb::support_hull(t.levy);
    if (my.second_moment && hy.bounded()) {
      const double r = std::max(std::abs(hy.lo), std::abs(hy.hi));
      const double half = 2.0 * std::sqrt(t.variance * (1.0 + *my.second_moment)) + r + 1.0;
      range = {t.mean - half, t.mean + half};
    } else {
      const double half = 20.0 * (1.0 + std::sqrt(t.variance));
      range = {t.mean - half, t.mean + half};
    }
  }
  const auto c = invert(g, range, cfg);
  double worst = 0.0, total = 0.0;
  std::size_t counted = 0;
  const double eps = cfg.eps_schedule.back();
  for (std::size_t i = 0; i < c.grid.size(); i += std::max<std::size_t>(1, c.grid.size() / 256)) {
    const cplx z{c.grid[i], eps};
    const double r = fb::lk_residual(t, z, g(z));
    worst = std::max(worst, r);
    total += r;
    ++counted;
  }
  emit(cfg, curve_csv(c),
       {{"command", "infdiv"},
        {"triple", {{"mean", t.mean}, {"variance", t.variance}, {"levy", fb::io::measure_to_json(t.levy)}}},
        {"config", cfg.to_json()},
        {"curve", fb::io::curve_summary(c)},
        {"solver_residual", {{"max", worst}, {"mean", counted ? total / counted : 0.0}, {"samples", counted}}}});
}

// G_Y is recovered through F^{-1}, which is only certified on the cone, so this command
// tabulates cone points rather than inverting near the real axis.
void cmd_levy(const std::string& doc, const RunConfig& cfg) {
  const auto mu = load_measure(doc, cfg);
  const fb::MomentSummary m = fb::moments(mu);
  const auto cone = fb::default_cone(m.variance.value_or(0.0));
  std::vector<cplx> probes;
  for (int k = 0; k < 5; ++k) probes.push_back(std::polar(1.5 * cone.cone.beta, kPiOver(k)));
  const auto gy = fb::levy_from_measure(mu, probes);
  if (point_mode(cfg, gy)) return;
  std::string csv = "re,im,gy_re,gy_im,outside_cone\n";
  json rows = json::array();
  for (int k = 0; k < 10; ++k) {
    const double radius = cone.cone.beta * (1.05 + 0.1 * k);
    const cplx z = std::polar(radius, fb::kPi * (0.3 + 0.04 * k));
    const cplx v = gy(z);
    csv += fb::io::format_real(z.real()) + "," + fb::io::format_real(z.imag()) + "," +
           fb::io::format_real(v.real()) + "," + fb::io::format_real(v.imag()) + "," +
           (cone.cone.contains(z) ? "0" : "1") + "\n";
    rows.push_back({{"z", complex_json(z)}, {"G_Y", complex_json(v)}});
  }
  emit(cfg, csv,
       {{"command", "levy"}, {"input", fb::describe(mu)}, {"config", cfg.to_json()},
        {"mean", *m.mean}, {"variance", *m.variance},
        {"tail_check", fb::tail_normalization_check(gy, 1e3)},
        {"cone", {{"alpha", cone.cone.alpha}, {"beta", cone.cone.beta}, {"basis", cone.basis}}},
        {"values", rows}});
}

void cmd_convolve(const std::string& doc_a, const std::string& doc_b, const RunConfig& cfg) {
  const auto mu = load_measure(doc_a, cfg);
  const auto nu = load_measure(doc_b, cfg);
  const auto g = fb::free_convolve(mu, nu, cfg.subordination());
  if (point_mode(cfg, g)) return;
  fb::Interval range;
  if (auto r = cfg.range()) {
    range = *r;
  } else {
    const fb::Interval a = fb::support_hull(mu), b = fb::support_hull(nu);
    if (!a.bounded() || !b.bounded()) throw fb::PreconditionError("support is unbounded; pass --range lo,hi");
    range = fb::Interval{a.lo + b.lo, a.hi + b.hi}.padded(cfg.pad_fraction);
  }
  const auto c = invert(g, range, cfg);
  const fb::MomentSummary ma = fb::moments(mu), mb = fb::moments(nu);
  json report{{"command", "convolve"},   {"inputs", {fb::describe(mu), fb::describe(nu)}},
              {"config", cfg.to_json()}, {"curve", fb::io::curve_summary(c)}};
  if (ma.variance && mb.variance) report["variance_expected"] = *ma.variance + *mb.variance;
  emit(cfg, curve_csv(c), report);
}

void cmd_root(const std::string& doc, const RunConfig& cfg) {
  const auto mu = load_measure(doc, cfg);
  const auto g = fb::convolution_root(fb::cauchy_transform(mu), cfg.n, cfg.solver());
  if (point_mode(cfg, g)) return;
  const fb::Interval bound = fb::root_support_bound(mu);
  const auto c = invert(g, cfg.range().value_or(bound), cfg);
  emit(cfg, curve_csv(c),
       {{"command", "root"}, {"input", fb::describe(mu)}, {"n", cfg.n}, {"config", cfg.to_json()},
        {"support_bound", {bound.lo, bound.hi}}, {"curve", fb::io::curve_summary(c)}});
}

void cmd_phi(const std::string& doc, const RunConfig& cfg) {
  const auto mu = load_measure(doc, cfg);
  const fb::MomentSummary m = fb::moments(mu);
  const auto cone = fb::default_cone(m.variance.value_or(0.0));
  const auto g = fb::cauchy_transform(mu);
  if (!cfg.z_text.empty()) {
    const auto v = fb::voiculescu_transform(g, fb::io::parse_complex(cfg.z_text), cone, cfg.solver());
    std::cout << fb::io::format_complex(v.value) << (v.outside_cone ? "  (outside cone)" : "") << "\n";
    return;
  }
  std::string csv = "re,im,phi_re,phi_im,outside_cone\n";
  json rows = json::array();
  for (int k = 0; k < 9; ++k) {
    const cplx z = std::polar(1.5 * cone.cone.beta, fb::kPi * (0.3 + 0.05 * k));
    const auto v = fb::voiculescu_transform(g, z, cone, cfg.solver());
    csv += fb::io::format_real(z.real()) + "," + fb::io::format_real(z.imag()) + "," +
           fb::io::format_real(v.value.real()) + "," + fb::io::format_real(v.value.imag()) + "," +
           (v.outside_cone ? "1" : "0") + "\n";
    rows.push_back({{"z", complex_json(z)}, {"phi", complex_json(v.value)}});
  }
  emit(cfg, csv,
       {{"command", "phi"}, {"input", fb::describe(mu)},
        {"cone", {{"alpha", cone.cone.alpha}, {"beta", cone.cone.beta}, {"basis", cone.basis}}},
        {"values", rows}});
}

void cmd_verify(const std::string& suite, const RunConfig& cfg) {
  const auto ids = fb::verify::suite_criteria(suite);
  json checks = json::array();
  std::string failures;
  for (int id : ids) {
    const auto r = fb::verify::run_criterion(id);
    std::cerr << fb::verify::format_line(r) << "\n";
    checks.push_back({{"id", r.id}, {"name", r.name}, {"measured", r.measured}, {"required", r.required},
                      {"passed", r.passed}, {"detail", r.detail}});
    if (!r.passed) failures += fb::verify::format_line(r) + "\n";
  }
  const json report{{"suite", suite}, {"passed", failures.empty()}, {"checks", checks}};
  const std::string js = report.dump(2) + "\n";
  cfg.output_path.empty() ? void(std::cout << js) : write_text(cfg.output_path, js);
  if (!failures.empty()) throw VerificationFailed(failures);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free zero bias, free convolution and free Lévy–Khintchine toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--grid", cfg.grid_points, "inversion grid points (>= 9)");
    sub->add_option("--eps", cfg.eps_text, "descending epsilon schedule, e.g. 1e-2,5e-3");
    sub->add_option("--tol", cfg.solver_tol, "solver tolerance");
    sub->add_option("--max-iter", cfg.max_iter, "solver iteration cap");
    sub->add_option("--mass-tol", cfg.mass_tol, "mass tolerance for grid measures");
    sub->add_option("--pad", cfg.pad_fraction, "support padding fraction for default grids");
    sub->add_option("--range", cfg.range_text, "inversion range lo,hi");
    sub->add_option("--out", cfg.output_path, "output path (prefix when --format both)");
    sub->add_option("--format", cfg.format, "csv, json or both");
    sub->add_option("--z", cfg.z_text, "evaluate at a single point a+bi and print the value");
  };

  std::string doc, doc_b, suite;
  std::vector<std::string> chain;

  auto* density = app.add_subcommand("density", "invert the Cauchy transform of a measure");
  density->add_option("doc", doc, "measure document")->required();
  add_common(density);

  auto* transform = app.add_subcommand("transform", "apply a chain of bias transforms");
  transform->add_option("doc", doc, "measure document")->required();
  transform->add_option("steps", chain, "steps: square_bias, inverse_square_bias, el_gordo, free_zero_bias, "
                                        "classical_zero_bias, shift:c, scale:a, flat:<doc>")
      ->required();
  transform->add_flag("--materialize", cfg.materialize,
                       "promote a transform-valued result to a grid measure (checks its mass)");
  add_common(transform);

  auto* infdiv = app.add_subcommand("infdiv", "law of a Lévy triple");
  infdiv->add_option("doc", doc, "triple document")->required();
  add_common(infdiv);

  auto* levy = app.add_subcommand("levy", "Lévy measure of a freely infinitely divisible law");
  levy->add_option("doc", doc, "measure document")->required();
  add_common(levy);

  auto* convolve = app.add_subcommand("convolve", "free additive convolution of two measures");
  convolve->add_option("doc", doc, "first measure document")->required();
  convolve->add_option("doc2", doc_b, "second measure document")->required();
  add_common(convolve);

  auto* root = app.add_subcommand("root", "n-th free convolution root");
  root->add_option("doc", doc, "measure document")->required();
  root->add_option("--n", cfg.n, "root order (>= 1)");
  add_common(root);

  auto* phi = app.add_subcommand("phi", "Voiculescu transform on the default cone");
  phi->add_option("doc", doc, "measure document")->required();
  add_common(phi);

  auto* verify = app.add_subcommand("verify", "run an acceptance suite");
  verify->add_option("suite", suite, "fixed_point, gallery, replace_one, lk_roundtrip, holder, roots, "
                                     "transforms or all")
      ->required();
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.validate();
    if (*density) cmd_density(doc, cfg);
    else if (*transform) cmd_transform(doc, chain, cfg);
    else if (*infdiv) cmd_infdiv(doc, cfg);
    else if (*levy) cmd_levy(doc, cfg);
    else if (*convolve) cmd_convolve(doc, doc_b, cfg);
    else if (*root) cmd_root(doc, cfg);
    else if (*phi) cmd_phi(doc, cfg);
    else if (*verify) cmd_verify(suite, cfg);
  } catch (const VerificationFailed& e) {
    std::cerr << "verification failed:\n" << e.what();
    return 5;
  } catch (const fb::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const fb::InvalidMeasure& e) {
    std::cerr << "invalid measure: " << e.what() << "\n";
    return 2;
  } catch (const fb::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 4;
  } catch (const fb::Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
