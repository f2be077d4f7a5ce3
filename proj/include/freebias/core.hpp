#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace freebias {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultMassTol = 1e-6;

/// Closed real interval; endpoints may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] bool contains(double x) const { return lo <= x && x <= hi; }
  [[nodiscard]] bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  [[nodiscard]] Interval shifted(double c) const { return {lo + c, hi + c}; }
  /// Widen both ends by `fraction` of the width (a degenerate interval is widened by `fraction`).
  [[nodiscard]] Interval padded(double fraction) const {
    const double w = width() > 0.0 ? width() : 1.0;
    return {lo - fraction * w, hi + fraction * w};
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed measure data (bad weights, unsorted grid, ...).
class InvalidMeasure : public Error {
 public:
  using Error::Error;
};

/// Unparsable user input (documents, step strings, flags).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain (zero variance, atom at 0 for inverse bias, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver or quadrature failed to meet its tolerance.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, cplx last_iterate, double residual, int iterations)
      : Error(what + " (last iterate " + format(last_iterate) + ", residual " +
              std::to_string(residual) + ", iterations " + std::to_string(iterations) + ")"),
        last_iterate_(last_iterate),
        residual_(residual),
        iterations_(iterations) {}

  [[nodiscard]] cplx last_iterate() const { return last_iterate_; }
  [[nodiscard]] double residual() const { return residual_; }
  [[nodiscard]] int iterations() const { return iterations_; }

 private:
  static std::string format(cplx z) {
    return std::to_string(z.real()) + (z.imag() < 0 ? "" : "+") + std::to_string(z.imag()) + "i";
  }
  cplx last_iterate_;
  double residual_;
  int iterations_;
};

struct SolverOptions {
  double tol = 1e-12;
  int max_iter = 10000;
};

}  // namespace freebias
