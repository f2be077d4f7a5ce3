#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace freebias::quadrature {

/// Gauss–Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule, 1 <= n <= 64.
const Rule& gauss_legendre(int n);

template <class F>
auto fixed(F&& f, double a, double b, const Rule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  decltype(f(a)) sum{};
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
  }
  return sum * half;
}

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  bool converged = false;
  int segments = 0;
};

/// Globally adaptive bisection: the segment with the largest error estimate is split until
/// the summed estimate is below max(abs_tol, rel_tol * |value|). Error on a segment is
/// |I_10(whole) - (I_10(left) + I_10(right))|.
template <class F>
auto adaptive(F&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 1e-14,
              int max_segments = 4000) -> Result<decltype(f(a))> {
  using T = decltype(f(a));
  const Rule& rule = gauss_legendre(10);
  struct Segment {
    double a, b;
    T value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
  };
  auto make = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const T whole = fixed(f, lo, hi, rule);
    const T halves = fixed(f, lo, mid, rule) + fixed(f, mid, hi, rule);
    return Segment{lo, hi, halves, std::abs(halves - whole)};
  };

  std::vector<Segment> heap{make(a, b)};
  T total = heap.front().value;
  double err = heap.front().error;
  auto resum = [&] {
    total = T{};
    err = 0.0;
    for (const Segment& s : heap) {
      total += s.value;
      err += s.error;
    }
  };
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) &&
         static_cast<int>(heap.size()) < max_segments) {
    std::pop_heap(heap.begin(), heap.end());
    Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {  // exhausted in floating point
      worst.error = 0.0;
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end());
    } else {
      for (Segment s : {make(worst.a, mid), make(mid, worst.b)}) {
        heap.push_back(s);
        std::push_heap(heap.begin(), heap.end());
      }
    }
    // Full resummation keeps the running totals free of cancellation drift.
    resum();
  }
  const int count = static_cast<int>(heap.size());
  return Result<T>{total, err, err <= std::max(abs_tol, rel_tol * std::abs(total)), count};
}

}  // namespace freebias::quadrature
