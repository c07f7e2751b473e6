#include "dgac/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dgac {

Vector PointwiseForcing::load(double t, const SpatialOperators& ops) const {
  const CellQuadrature& quad = ops.quadrature();
  Vector vals(quad.total_points());
  for (int p = 0; p < quad.total_points(); ++p) vals[p] = f_(t, quad.point(p));
  return quad.load(vals);
}

void ProblemSpec::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("ProblemSpec: epsilon must be positive");
  if (!(final_time > 0.0)) throw std::invalid_argument("ProblemSpec: final time must be positive");
  if (!initial_data) throw std::invalid_argument("ProblemSpec: missing initial data");
  if (!forcing) throw std::invalid_argument("ProblemSpec: missing forcing");
}

ScalarField manufactured_forcing(const ManufacturedSolution& u, double epsilon) {
  const double inv_eps2 = 1.0 / (epsilon * epsilon);
  return [u, inv_eps2](double t, const Point& x) {
    const double v = u.value(t, x);
    return u.time_derivative(t, x) - u.laplacian(t, x) + inv_eps2 * (v * v * v - v);
  };
}

ProblemSpec make_manufactured_problem(const ManufacturedSolution& u, double epsilon, double final_time) {
  ProblemSpec p;
  p.epsilon = epsilon;
  p.final_time = final_time;
  p.initial_data = [u](const Point& x) { return u.value(0.0, x); };
  p.forcing = std::make_shared<PointwiseForcing>(manufactured_forcing(u, epsilon));
  p.exact = u;
  p.validate();
  return p;
}

ProblemSpec make_unforced_problem(std::function<double(const Point&)> u0, double epsilon, double final_time) {
  ProblemSpec p;
  p.epsilon = epsilon;
  p.final_time = final_time;
  p.initial_data = std::move(u0);
  p.validate();
  return p;
}

ManufacturedSolution expsine_1d() {
  using std::numbers::pi;
  ManufacturedSolution u;
  u.id = "expsine";
  u.dimension = 1;
  u.value = [](double t, const Point& x) { return std::exp(-t) * std::sin(pi * x[0]); };
  u.time_derivative = [](double t, const Point& x) { return -std::exp(-t) * std::sin(pi * x[0]); };
  u.gradient = [](double t, const Point& x) { return std::array<double, 2>{pi * std::exp(-t) * std::cos(pi * x[0]), 0.0}; };
  u.laplacian = [](double t, const Point& x) { return -pi * pi * std::exp(-t) * std::sin(pi * x[0]); };
  return u;
}

ManufacturedSolution expsine_2d() {
  using std::numbers::pi;
  ManufacturedSolution u;
  u.id = "expsine2d";
  u.dimension = 2;
  u.value = [](double t, const Point& x) { return std::exp(-t) * std::sin(pi * x[0]) * std::sin(pi * x[1]); };
  u.time_derivative = [](double t, const Point& x) { return -std::exp(-t) * std::sin(pi * x[0]) * std::sin(pi * x[1]); };
  u.gradient = [](double t, const Point& x) {
    const double e = pi * std::exp(-t);
    return std::array<double, 2>{e * std::cos(pi * x[0]) * std::sin(pi * x[1]), e * std::sin(pi * x[0]) * std::cos(pi * x[1])};
  };
  u.laplacian = [](double t, const Point& x) {
    return -2.0 * pi * pi * std::exp(-t) * std::sin(pi * x[0]) * std::sin(pi * x[1]);
  };
  return u;
}

std::function<double(const Point&)> interface_profile(double epsilon) {
  const double scale = 1.0 / (std::sqrt(2.0) * epsilon);
  return [scale](const Point& x) { return std::tanh((x[0] - 0.5) * scale); };
}

bool is_manufactured_id(const std::string& id) { return id == "expsine" || id == "expsine2d"; }

bool is_initial_profile_id(const std::string& id) { return id == "interface" || id == "zero" || id == "smallsine"; }

ManufacturedSolution manufactured_by_id(const std::string& id) {
  if (id == "expsine") return expsine_1d();
  if (id == "expsine2d") return expsine_2d();
  throw std::invalid_argument("unknown manufactured solution id '" + id + "'");
}

std::function<double(const Point&)> initial_profile_by_id(const std::string& id, double epsilon) {
  if (id == "interface") return interface_profile(epsilon);
  if (id == "zero") return [](const Point&) { return 0.0; };
  if (id == "smallsine") return [](const Point& x) { return 0.1 * std::sin(std::numbers::pi * x[0]); };
  throw std::invalid_argument("unknown initial profile id '" + id + "'");
}

}  // namespace dgac
