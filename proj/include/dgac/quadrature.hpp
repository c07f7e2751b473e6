#pragma once

#include <array>
#include <vector>

namespace dgac {

/// Quadrature rule on the reference interval [0, 1]; weights sum to 1.
struct QuadratureRule1D {
  std::vector<double> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Quadrature rule on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
struct TriangleRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Legendre polynomial P_n on [-1, 1] together with its derivative.
struct LegendreValue {
  double value;
  double derivative;
};
LegendreValue legendre(int n, double x);

/// n-point Gauss-Legendre rule mapped to [0, 1]; exact for degree 2n - 1.
QuadratureRule1D gauss_legendre(int n);

/// Smallest Gauss-Legendre rule exact for polynomials of the given degree.
QuadratureRule1D gauss_legendre_for_degree(int degree);

/// n right-Radau points on [0, 1] in increasing order; the last point is 1.
std::vector<double> right_radau_points(int n);

/// Collapsed (Duffy) Gauss rule on the reference triangle exact for the given
/// polynomial degree.
TriangleRule triangle_rule(int degree);

}  // namespace dgac
