#include "dgac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dgac {

LegendreValue legendre(int n, double x) {
  if (n < 0) throw std::invalid_argument("legendre: negative degree");
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0;
  double p = x;
  double dp_prev = 0.0;
  double dp = 1.0;
  for (int m = 2; m <= n; ++m) {
    const double p_next = ((2.0 * m - 1.0) * x * p - (m - 1.0) * p_prev) / m;
    // P'_m = P'_{m-2} + (2m - 1) P_{m-1}
    const double dp_next = dp_prev + (2.0 * m - 1.0) * p;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
  }
  return {p, dp};
}

QuadratureRule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point, got " + std::to_string(n));
  QuadratureRule1D rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).derivative;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // roots come out in decreasing order; store increasing on [0,1]
    rule.points[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

QuadratureRule1D gauss_legendre_for_degree(int degree) {
  return gauss_legendre(std::max(1, (degree + 2) / 2));
}

std::vector<double> right_radau_points(int n) {
  if (n < 1) throw std::invalid_argument("right_radau_points: need at least one point");
  // Interior nodes are the roots of P_{n-1} - P_n on (-1, 1); x = 1 is the fixed node.
  auto q = [n](double x) { return legendre(n - 1, x).value - legendre(n, x).value; };
  std::vector<double> roots;
  const int samples = 4000 * n;
  double x_prev = -1.0;
  double q_prev = q(x_prev);
  for (int s = 1; s <= samples && static_cast<int>(roots.size()) < n - 1; ++s) {
    const double x = -1.0 + 2.0 * s / samples * (1.0 - 1e-9);
    const double qx = q(x);
    if (q_prev == 0.0) {
      roots.push_back(x_prev);
    } else if (q_prev * qx < 0.0) {
      double lo = x_prev;
      double hi = x;
      double qlo = q_prev;
      for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double qm = q(mid);
        if (qm * qlo <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          qlo = qm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x_prev = x;
    q_prev = qx;
  }
  if (static_cast<int>(roots.size()) != n - 1) {
    throw std::runtime_error("right_radau_points: root isolation failed for n = " + std::to_string(n));
  }
  std::vector<double> nodes;
  nodes.reserve(n);
  for (double r : roots) nodes.push_back(0.5 * (r + 1.0));
  nodes.push_back(1.0);
  return nodes;
}

TriangleRule triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: negative degree");
  // x = u, y = v (1 - u); Jacobian (1 - u) raises the u-degree by one.
  const auto ru = gauss_legendre_for_degree(degree + 1);
  const auto rv = gauss_legendre_for_degree(degree);
  TriangleRule rule;
  for (int a = 0; a < ru.size(); ++a) {
    for (int b = 0; b < rv.size(); ++b) {
      const double u = ru.points[a];
      const double v = rv.points[b];
      rule.points.push_back({u, v * (1.0 - u)});
      rule.weights.push_back(ru.weights[a] * rv.weights[b] * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace dgac
