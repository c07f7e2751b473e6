#include <doctest.h>

#include <cmath>
#include <memory>

#include "dense_oracle.hpp"
#include "dgac/companion.hpp"
#include "dgac/forward_solver.hpp"

using namespace dgac;
using oracle::DenseOracle;

namespace {

std::shared_ptr<const Discretization> interval_disc(int cells, int l, int k, double T, int slabs) {
  auto mesh = std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, cells));
  auto ops = std::make_shared<const SpatialOperators>(build_space(mesh, l));
  return make_discretization(ops, TimePartition::uniform(T, slabs), make_time_basis(k));
}

std::shared_ptr<const Discretization> square_disc(int n, int l, int k, double T, int slabs) {
  auto mesh = std::make_shared<const Mesh>(build_square_mesh(n));
  auto ops = std::make_shared<const SpatialOperators>(build_space(mesh, l));
  return make_discretization(ops, TimePartition::uniform(T, slabs), make_time_basis(k));
}

// Node-major coefficients of every slab in the oracle's vertex ordering (P1).
std::vector<Eigen::VectorXd> to_oracle(const DgSolution& sol, const DenseOracle& o) {
  const FeSpace& space = sol.discretization().space->space();
  std::vector<Eigen::VectorXd> out;
  for (int s = 1; s <= sol.slab_count(); ++s) {
    Eigen::VectorXd v(o.nt() * o.m);
    for (int j = 0; j < o.nt(); ++j)
      for (int vtx = 1; vtx < o.n; ++vtx) v[j * o.m + vtx - 1] = sol.slab(s).coefficients[j][space.free_index(vtx)];
    out.push_back(v);
  }
  return out;
}

double max_diff(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
  double d = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) d = std::max(d, (a[s] - b[s]).cwiseAbs().maxCoeff());
  return d;
}

auto bump = [](const Point& x) { return 4.0 * x[0] * (1.0 - x[0]); };

// u = (1 + t) x (1 - x), inside dG(k >= 1) x P2.
ManufacturedSolution quadratic_in_space() {
  ManufacturedSolution u;
  u.id = "quadratic";
  u.dimension = 1;
  u.value = [](double t, const Point& x) { return (1.0 + t) * x[0] * (1.0 - x[0]); };
  u.time_derivative = [](double, const Point& x) { return x[0] * (1.0 - x[0]); };
  u.gradient = [](double t, const Point& x) { return std::array<double, 2>{(1.0 + t) * (1.0 - 2.0 * x[0]), 0.0}; };
  u.laplacian = [](double t, const Point&) { return -2.0 * (1.0 + t); };
  return u;
}

}  // namespace

TEST_CASE("backward dual agrees with a dense reference") {
  const int cells = 8;
  const double eps = 0.3, T = 0.2;
  const auto disc = interval_disc(cells, 1, 1, T, 2);
  const ProblemSpec p = make_unforced_problem(bump, eps, T);
  const DgSolution u = solve_forward(p, disc, NewtonConfig{});
  const BackwardDualSolution dual = solve_backward_dual(u, p);

  const DenseOracle o(cells, eps, disc->basis->nodes());
  const auto uo = to_oracle(u, o);
  const auto ref = o.solve_backward(
      [&](int sl, double s) { return o.weighted_mass(o.eval(uo[sl], s), [&](double v) { return (v * v + 1.0) / (eps * eps); }); },
      uo, T);
  CHECK(max_diff(to_oracle(dual.phi, o), ref) < 1e-11);
  CHECK(dual.phi.direction() == TimeDirection::backward);
  CHECK(dual.phi.chaining_defect() == 0.0);
}

TEST_CASE("backward psi with u_ref = 1 agrees with a dense reference") {
  const int cells = 4;
  const double eps = 0.5, T = 0.3;
  for (int k : {0, 1}) {
    const auto disc = interval_disc(cells, 1, k, T, 2);
    const ProblemSpec p = make_unforced_problem(bump, eps, T);
    const DgSolution e = solve_forward(p, disc, NewtonConfig{});
    const PsiSolution psi = solve_backward_psi(e, [](double, const Point&) { return 1.0; }, p);
    const DenseOracle o(cells, eps, disc->basis->nodes());
    const auto ref = o.solve_backward([&](int, double) -> Eigen::MatrixXd { return (2.0 / (eps * eps)) * o.M; },
                                      to_oracle(e, o), T);
    CHECK(max_diff(to_oracle(psi.psi, o), ref) < 1e-12);
    CHECK(psi.laplacian_defect < 1e-10);
  }
}

TEST_CASE("duality identity holds to roundoff") {
  SUBCASE("1d interface, k = 1, P2") {
    const auto disc = interval_disc(16, 2, 1, 0.1, 4);
    const ProblemSpec p = make_unforced_problem(interface_profile(0.2), 0.2, 0.1);
    const DgSolution u = solve_forward(p, disc, NewtonConfig{});
    CHECK(duality_identity(solve_backward_dual(u, p), p).residual < 1e-12);
  }
  SUBCASE("2d manufactured with forcing, k = 2") {
    const auto disc = square_disc(4, 1, 2, 0.2, 2);
    const ProblemSpec p = make_manufactured_problem(expsine_2d(), 0.5, 0.2);
    const DgSolution u = solve_forward(p, disc, NewtonConfig{});
    const IdentityReport r = duality_identity(solve_backward_dual(u, p), p);
    CHECK(r.residual < 1e-12);
    CHECK(r.lhs > 0.0);
  }
  SUBCASE("k = 0") {
    const auto disc = interval_disc(32, 1, 0, 0.5, 5);
    const ProblemSpec p = make_unforced_problem(bump, 0.3, 0.5);
    const DgSolution u = solve_forward(p, disc, NewtonConfig{});
    CHECK(duality_identity(solve_backward_dual(u, p), p).residual < 1e-12);
  }
}

TEST_CASE("dual stability bound has non-negative slack") {
  for (double eps : {1.0, 0.3, 0.1}) {
    CAPTURE(eps);
    const auto disc = interval_disc(32, 1, 1, 0.2, 4);
    const ProblemSpec p = make_unforced_problem(interface_profile(eps), eps, 0.2);
    const DgSolution u = solve_forward(p, disc, NewtonConfig{});
    const DualStabilityReport r = dual_stability(solve_backward_dual(u, p), p);
    CHECK(r.lhs > 0.0);
    CHECK(r.slack >= -1e-12 * r.bound);
  }
}

TEST_CASE("psi chain inequality per slab") {
  const double eps = 0.1;
  const auto disc = interval_disc(64, 1, 1, 0.02, 4);
  const ProblemSpec p = make_unforced_problem(interface_profile(eps), eps, 0.02);
  const DgSolution e = solve_forward(p, disc, NewtonConfig{});
  const auto prof = interface_profile(eps);
  const ScalarField u_ref = [&](double, const Point& x) { return prof(x); };
  const PsiSolution psi = solve_backward_psi(e, u_ref, p);
  const auto chain = psi_spectral_chain(psi, e, u_ref, p);
  REQUIRE(chain.size() == 4);
  for (const auto& c : chain) {
    CAPTURE(c.slab);
    CHECK(c.lhs <= c.rhs + 1e-10 * (1.0 + std::abs(c.rhs)));
  }
}

TEST_CASE("solutions on different discretizations are rejected") {
  const auto d1 = interval_disc(8, 1, 1, 0.1, 2);
  const auto d2 = interval_disc(8, 1, 1, 0.1, 2);
  const ProblemSpec p = make_unforced_problem(bump, 0.5, 0.1);
  const DgSolution a = solve_forward(p, d1, NewtonConfig{});
  const DgSolution b = solve_forward(p, d2, NewtonConfig{});
  CHECK_THROWS_AS(solve_backward_psi(a, b, p), std::invalid_argument);
  const BackwardDualSolution dual = solve_backward_dual(a, p);
  CHECK_THROWS_AS(solve_backward_dual(dual.phi, p), std::invalid_argument);
}

TEST_CASE("parabolic projection reproduces a function in the discrete space") {
  const ManufacturedSolution u = quadratic_in_space();
  const auto disc = interval_disc(4, 2, 1, 0.5, 2);
  const DgSolution up = solve_parabolic_projection(u, disc);
  for (int n = 1; n <= 2; ++n)
    for (double s : {0.0, 0.5, 1.0}) {
      const double t = disc->partition.start(n) + s * disc->partition.tau(n);
      const Vector v = up.value(n, s);
      const FeSpace& sp = disc->space->space();
      for (int i = 0; i < disc->free_dofs(); ++i) CHECK(v[i] == doctest::Approx(u.value(t, sp.dof_coordinates()[sp.free_dof(i)])).epsilon(1e-12));
    }
  CHECK(parabolic_orthogonality_residual(up, u) < 1e-12);
}

TEST_CASE("parabolic projection is Galerkin orthogonal for smooth u") {
  for (int k : {0, 1, 2}) {
    const auto disc = interval_disc(8, 1, k, 0.5, 3);
    const DgSolution up = solve_parabolic_projection(expsine_1d(), disc);
    CHECK(parabolic_orthogonality_residual(up, expsine_1d()) < 1e-11);
  }
  const auto d2 = square_disc(3, 2, 1, 0.5, 2);
  CHECK(parabolic_orthogonality_residual(solve_parabolic_projection(expsine_2d(), d2), expsine_2d()) < 1e-11);
}

TEST_CASE("local projection") {
  const ManufacturedSolution q = quadratic_in_space();
  SUBCASE("reproduces discrete functions") {
    const auto disc = interval_disc(4, 2, 1, 0.5, 2);
    const DgSolution w = local_projection_all(q.value, disc);
    const FeSpace& sp = disc->space->space();
    for (int n = 1; n <= 2; ++n)
      for (double s : {0.1, 0.9}) {
        const double t = disc->partition.start(n) + s * disc->partition.tau(n);
        const Vector v = w.value(n, s);
        for (int i = 0; i < disc->free_dofs(); ++i)
          CHECK(v[i] == doctest::Approx(q.value(t, sp.dof_coordinates()[sp.free_dof(i)])).epsilon(1e-12));
      }
  }
  SUBCASE("defining conditions for smooth w") {
    for (int k : {0, 1, 3}) {
      const auto disc = square_disc(3, 1, k, 1.0, 3);
      const ScalarField w = [](double t, const Point& x) { return std::exp(-t) * std::sin(3.0 * x[0] + t) * x[1] * (1 - x[1]); };
      for (int n = 1; n <= 3; ++n) CHECK(local_projection_defect(w, n, *disc, local_projection(w, n, *disc)) < 1e-12);
    }
  }
  SUBCASE("k = 0 right value is the L2 projection at t^n") {
    const auto disc = interval_disc(8, 1, 0, 1.0, 2);
    const auto c = local_projection(q.value, 2, *disc);
    const Vector ref = l2_project(*disc->space, [&](const Point& x) { return q.value(1.0, x); });
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(c[0][i] == doctest::Approx(ref[i]).epsilon(1e-13));
  }
  SUBCASE("a wrong coefficient is detected") {
    const auto disc = interval_disc(8, 1, 2, 1.0, 2);
    auto c = local_projection(q.value, 1, *disc);
    c[0][3] += 1e-3;
    CHECK(local_projection_defect(q.value, 1, *disc, c) > 1e-6);
  }
}
