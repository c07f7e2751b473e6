#pragma once

#include <iosfwd>
#include <vector>

#include "dgac/dense.hpp"
#include "dgac/time_basis.hpp"

namespace dgac {

/// Polynomial rho in P_k[0, 1] approximating the cutoff chi_[0, t_hat):
/// rho(0) = 1 and int_0^1 rho q = int_0^t_hat q for all q in P_{k-1}.
struct CharacteristicPoly {
  int degree = 0;
  double cut_fraction = 1.0;
  std::vector<double> coefficients;  // monomial coefficients, rho(s) = sum c_m s^m
  double sup_norm_estimate = 1.0;    // max |rho| on a 1001-point grid of [0, 1]

  double operator()(double s) const;
};

enum class CharacteristicMethod {
  weighted_basis,  // closed form through an orthonormal basis of P_{k-1} in L^2 with weight s
  moment_system,   // direct (k+1) x (k+1) solve of the defining conditions
};

CharacteristicPoly discrete_characteristic(int k, double t_hat,
                                           CharacteristicMethod method = CharacteristicMethod::weighted_basis);

/// Largest violation of rho(0) = 1 and of the k moment conditions, each
/// integrated exactly by Gauss quadrature.
double moment_defect(const CharacteristicPoly& rho);

/// Matrix R with R(m, i) = p~_i(node_m), where p~_i is the discrete cutoff of
/// the nodal basis function chi_i. Applying R to slab coefficients gives the
/// coefficients of u~.
DenseMatrix characteristic_transform(const TimeBasis& basis, double t_hat);

/// u~ = sum_i p~_i(t) u_i for slab coefficients u_i (one vector per time node).
std::vector<Vector> characteristic_apply(const TimeBasis& basis, const std::vector<Vector>& slab, double t_hat);

struct SupNormScan {
  int degree = 0;
  std::vector<double> cut_fractions;
  std::vector<double> sup_norms;
  double constant = 0.0;  // empirical C_k = max over the scan
};

/// Tabulate max_s |rho(s; t_hat)| over a uniform grid of `grid` cut fractions,
/// sampling s on `s_samples` uniform points of [0, 1].
SupNormScan sup_norm_scan(int k, int grid, int s_samples = 2001);

/// CSV with columns k, C_k.
void write_constant_table(const std::vector<SupNormScan>& scans, std::ostream& os);

}  // namespace dgac
