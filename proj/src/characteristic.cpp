#include "dgac/characteristic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "dgac/quadrature.hpp"

namespace dgac {

namespace {

double eval_monomial(const std::vector<double>& c, double s) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
  return v;
}

double shifted_legendre(int m, double s) { return legendre(m, 2.0 * s - 1.0).value; }

// Gauss rule on [a, b].
QuadratureRule1D mapped_rule(int points, double a, double b) {
  QuadratureRule1D r = gauss_legendre(points);
  for (int q = 0; q < r.size(); ++q) {
    r.points[q] = a + (b - a) * r.points[q];
    r.weights[q] *= (b - a);
  }
  return r;
}

double sup_norm(const std::vector<double>& c, int samples) {
  double m = 0.0;
  for (int i = 0; i < samples; ++i) m = std::max(m, std::abs(eval_monomial(c, static_cast<double>(i) / (samples - 1))));
  return m;
}

// Orthonormal basis of P_{k-1} under (p, q) = int_0^1 s p q ds, as monomial
// coefficient vectors, by modified Gram-Schmidt with one re-orthogonalization pass.
std::vector<std::vector<double>> weighted_orthonormal_basis(int k) {
  const QuadratureRule1D rule = gauss_legendre(k + 2);
  auto inner = [&](const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
      const double x = rule.points[i];
      s += rule.weights[i] * x * eval_monomial(p, x) * eval_monomial(q, x);
    }
    return s;
  };
  std::vector<std::vector<double>> basis;
  for (int d = 0; d < k; ++d) {
    std::vector<double> v(k, 0.0);
    v[d] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double proj = inner(v, b);
        for (int a = 0; a < k; ++a) v[a] -= proj * b[a];
      }
    }
    const double nrm = std::sqrt(inner(v, v));
    for (double& x : v) x /= nrm;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

double CharacteristicPoly::operator()(double s) const { return eval_monomial(coefficients, s); }

CharacteristicPoly discrete_characteristic(int k, double t_hat, CharacteristicMethod method) {
  if (k < 0) throw std::invalid_argument("discrete_characteristic: degree must be non-negative");
  if (!(t_hat >= 0.0 && t_hat <= 1.0)) throw std::invalid_argument("discrete_characteristic: t_hat must lie in [0, 1]");
  CharacteristicPoly rho;
  rho.degree = k;
  rho.cut_fraction = t_hat;
  rho.coefficients.assign(k + 1, 0.0);
  rho.coefficients[0] = 1.0;

  if (method == CharacteristicMethod::weighted_basis) {
    // rho(s) = 1 + s sum_i c_i p_i(s), c_i = -int_{t_hat}^1 p_i
    const auto basis = weighted_orthonormal_basis(k);
    for (const auto& p : basis) {
      double c = 0.0;
      for (int a = 0; a < k; ++a) c -= p[a] * (1.0 - std::pow(t_hat, a + 1)) / (a + 1);
      for (int a = 0; a < k; ++a) rho.coefficients[a + 1] += c * p[a];
    }
  } else if (k > 0) {
    DenseMatrix sys(k + 1, k + 1);
    Vector rhs(k + 1, 0.0);
    sys(0, 0) = 1.0;
    rhs[0] = 1.0;
    const QuadratureRule1D full = gauss_legendre(k + 1);
    const QuadratureRule1D part = mapped_rule(k + 1, 0.0, t_hat);
    for (int m = 0; m < k; ++m) {
      for (int a = 0; a <= k; ++a) {
        double s = 0.0;
        for (int q = 0; q < full.size(); ++q) s += full.weights[q] * std::pow(full.points[q], a) * shifted_legendre(m, full.points[q]);
        sys(m + 1, a) = s;
      }
      double r = 0.0;
      for (int q = 0; q < part.size(); ++q) r += part.weights[q] * shifted_legendre(m, part.points[q]);
      rhs[m + 1] = r;
    }
    rho.coefficients = DenseLU(std::move(sys)).solve(std::move(rhs));
  }
  rho.sup_norm_estimate = sup_norm(rho.coefficients, 1001);
  return rho;
}

double moment_defect(const CharacteristicPoly& rho) {
  const int k = rho.degree;
  double worst = std::abs(rho(0.0) - 1.0);
  const QuadratureRule1D full = gauss_legendre(k + 1);
  const QuadratureRule1D part = mapped_rule(k + 1, 0.0, rho.cut_fraction);
  for (int m = 0; m < k; ++m) {
    double lhs = 0.0;
    double rhs = 0.0;
    for (int q = 0; q < full.size(); ++q) lhs += full.weights[q] * rho(full.points[q]) * shifted_legendre(m, full.points[q]);
    for (int q = 0; q < part.size(); ++q) rhs += part.weights[q] * shifted_legendre(m, part.points[q]);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

DenseMatrix characteristic_transform(const TimeBasis& basis, double t_hat) {
  if (!(t_hat >= 0.0 && t_hat <= 1.0)) throw std::invalid_argument("characteristic_transform: t_hat must lie in [0, 1]");
  const int k = basis.degree();
  const int nt = k + 1;
  DenseMatrix sys(nt, nt);
  DenseMatrix rhs(nt, nt);
  const QuadratureRule1D full = gauss_legendre(k + 1);
  const QuadratureRule1D part = mapped_rule(k + 1, 0.0, t_hat);
  for (int j = 0; j < nt; ++j) {
    sys(0, j) = basis.value(j, 0.0);
    rhs(0, j) = basis.value(j, 0.0);
  }
  for (int m = 0; m < k; ++m) {
    for (int j = 0; j < nt; ++j) {
      double s = 0.0;
      for (int q = 0; q < full.size(); ++q) s += full.weights[q] * basis.value(j, full.points[q]) * shifted_legendre(m, full.points[q]);
      sys(m + 1, j) = s;
      double r = 0.0;
      for (int q = 0; q < part.size(); ++q) r += part.weights[q] * basis.value(j, part.points[q]) * shifted_legendre(m, part.points[q]);
      rhs(m + 1, j) = r;
    }
  }
  const DenseLU lu(sys);
  DenseMatrix r(nt, nt);
  for (int i = 0; i < nt; ++i) {
    Vector col(nt);
    for (int row = 0; row < nt; ++row) col[row] = rhs(row, i);
    const Vector x = lu.solve(std::move(col));
    for (int m = 0; m < nt; ++m) r(m, i) = x[m];
  }
  return r;
}

std::vector<Vector> characteristic_apply(const TimeBasis& basis, const std::vector<Vector>& slab, double t_hat) {
  const int nt = basis.size();
  if (static_cast<int>(slab.size()) != nt) throw std::invalid_argument("characteristic_apply: slab must hold k+1 coefficient vectors");
  const DenseMatrix r = characteristic_transform(basis, t_hat);
  const std::size_t n = slab.front().size();
  std::vector<Vector> out(nt, Vector(n, 0.0));
  for (int m = 0; m < nt; ++m)
    for (int i = 0; i < nt; ++i)
      for (std::size_t d = 0; d < n; ++d) out[m][d] += r(m, i) * slab[i][d];
  return out;
}

SupNormScan sup_norm_scan(int k, int grid, int s_samples) {
  if (grid < 2) throw std::invalid_argument("sup_norm_scan: grid must be at least 2");
  if (s_samples < 2) throw std::invalid_argument("sup_norm_scan: need at least two s samples");
  SupNormScan scan;
  scan.degree = k;
  for (int g = 0; g < grid; ++g) {
    const double t_hat = static_cast<double>(g) / (grid - 1);
    const CharacteristicPoly rho = discrete_characteristic(k, t_hat);
    const double sup = sup_norm(rho.coefficients, s_samples);
    scan.cut_fractions.push_back(t_hat);
    scan.sup_norms.push_back(sup);
    scan.constant = std::max(scan.constant, sup);
  }
  return scan;
}

void write_constant_table(const std::vector<SupNormScan>& scans, std::ostream& os) {
  os << "k,C_k\n" << std::setprecision(17);
  for (const auto& s : scans) os << s.degree << ',' << s.constant << '\n';
}

}  // namespace dgac
