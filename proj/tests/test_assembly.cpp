#include <doctest.h>

#include <cmath>
#include <memory>

#include "dgac/assembly.hpp"

using namespace dgac;

namespace {

std::shared_ptr<const SpatialOperators> ops_1d(int n, int l) {
  auto m = std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, n));
  return std::make_shared<const SpatialOperators>(build_space(m, l));
}

std::shared_ptr<const SpatialOperators> ops_2d(int n, int l) {
  auto m = std::make_shared<const Mesh>(build_square_mesh(n));
  return std::make_shared<const SpatialOperators>(build_space(m, l));
}

}  // namespace

TEST_CASE("P1 mass and stiffness on a uniform interval mesh") {
  const auto ops = ops_1d(5, 1);
  const double h = 0.2;
  for (int i = 0; i < ops->size(); ++i) {
    const int gi = ops->space().free_dof(i);
    for (int j = 0; j < ops->size(); ++j) {
      const int gj = ops->space().free_dof(j);
      const int d = std::abs(gi - gj);
      const double m = d == 0 ? 4.0 * h / 6.0 : d == 1 ? h / 6.0 : 0.0;
      const double a = d == 0 ? 2.0 / h : d == 1 ? -1.0 / h : 0.0;
      CHECK(ops->mass().at(i, j) == doctest::Approx(m).epsilon(1e-14));
      CHECK(ops->stiffness().at(i, j) == doctest::Approx(a).epsilon(1e-14));
    }
  }
}

TEST_CASE("P2 reproduces quadratic and biquadratic bubbles") {
  {
    const auto ops = ops_1d(3, 2);
    const Vector u = interpolate(ops->space(), [](const Point& x) { return x[0] * (1.0 - x[0]); });
    CHECK(ops->mass_inner(u, u) == doctest::Approx(1.0 / 30.0).epsilon(1e-13));
    CHECK(ops->stiffness_inner(u, u) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  }
  {
    // interpolant of the first Dirichlet eigenfunction, loose tolerance
    const auto ops = ops_2d(4, 2);
    const Vector u = interpolate(ops->space(), [](const Point& x) { return std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]); });
    CHECK(ops->mass_inner(u, u) == doctest::Approx(0.25).epsilon(2e-2));
    CHECK(ops->stiffness_inner(u, u) == doctest::Approx(M_PI * M_PI / 2.0).epsilon(5e-2));
  }
}

TEST_CASE("mass and stiffness are symmetric, mass is positive, stiffness is definite") {
  for (const auto& ops : {ops_1d(7, 1), ops_1d(5, 2), ops_2d(3, 1), ops_2d(3, 2)}) {
    const SparseMatrix& m = ops->mass();
    const SparseMatrix& a = ops->stiffness();
    CHECK(m.row_ptr() == a.row_ptr());
    CHECK(m.col_idx() == a.col_idx());
    for (int i = 0; i < m.rows(); ++i)
      for (int p = m.row_ptr()[i]; p < m.row_ptr()[i + 1]; ++p) {
        const int j = m.col_idx()[p];
        CHECK(m.values()[p] == doctest::Approx(m.at(j, i)).epsilon(1e-14));
        CHECK(a.values()[p] == doctest::Approx(a.at(j, i)).epsilon(1e-14));
      }
    Vector ones(ops->size(), 1.0);
    CHECK(ops->mass_inner(ones, ones) > 0.0);
    CHECK(ops->stiffness_inner(ones, ones) > 0.0);
  }
}

TEST_CASE("weighted mass with unit weight is the mass matrix") {
  const auto ops = ops_2d(3, 2);
  const Vector w(ops->quadrature().total_points(), 1.0);
  const auto vals = ops->weighted_mass_values(w);
  REQUIRE(vals.size() == ops->mass().values().size());
  for (std::size_t p = 0; p < vals.size(); ++p) CHECK(vals[p] == doctest::Approx(ops->mass().values()[p]).epsilon(1e-13));
}

TEST_CASE("load of a discrete function equals M times its coefficients") {
  for (const auto& ops : {ops_1d(6, 2), ops_2d(4, 1)}) {
    Vector u(ops->size());
    for (int i = 0; i < ops->size(); ++i) u[i] = std::cos(0.7 * i);
    const Vector lhs = ops->quadrature().load(ops->quadrature().values(u));
    const Vector rhs = ops->mass().multiply(u);
    for (int i = 0; i < ops->size(); ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-13));
    const Vector gl = ops->quadrature().load_gradient(ops->quadrature().gradients(u));
    const Vector ar = ops->stiffness().multiply(u);
    for (int i = 0; i < ops->size(); ++i) CHECK(gl[i] == doctest::Approx(ar[i]).epsilon(1e-12));
    const Vector back = ops->solve_mass(rhs);
    for (int i = 0; i < ops->size(); ++i) CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-12));
  }
}

TEST_CASE("quadrature integrates the domain measure") {
  const auto ops = ops_2d(5, 1);
  CHECK(ops->quadrature().integrate(Vector(ops->quadrature().total_points(), 1.0)) == doctest::Approx(1.0));
  const auto o1 = ops_1d(4, 2);
  CHECK(o1->quadrature().integrate(o1->quadrature().sample([](const Point& x) { return x[0] * x[0]; })) ==
        doctest::Approx(1.0 / 3.0));
}
