#include "freebias/quadrature.hpp"

#include <array>
#include <stdexcept>

#include "freebias/core.hpp"

namespace freebias::quadrature {
namespace {

constexpr int kMaxRule = 64;

// Newton on the Legendre recurrence, seeded at Chebyshev-like guesses.
Rule build(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static const std::array<Rule, kMaxRule + 1> rules = [] {
    std::array<Rule, kMaxRule + 1> all;
    all[1] = Rule{{0.0}, {2.0}};
    for (int k = 2; k <= kMaxRule; ++k) all[k] = build(k);
    return all;
  }();
  if (n < 1 || n > kMaxRule) throw std::out_of_range("Gauss-Legendre order out of range");
  return rules[n];
}

}  // namespace freebias::quadrature
