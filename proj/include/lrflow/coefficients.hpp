#pragma once

#include "lrflow/grid.hpp"
#include "lrflow/lowrank_state.hpp"

#include <array>

namespace lrflow {

/// Number of separated terms in the small-velocity expansion of the
/// Maxwellian in two dimensions.
inline constexpr int kMaxwellTerms = 6;

/// One r x r matrix per spatial direction.
struct DirectionalPair {
  Matrix x1;
  Matrix x2;
  const Matrix& operator[](int dir) const { return dir == 0 ? x1 : x2; }
};

/// The separated expansion h_eq(x, v) ~ g(v) sum_k hX_k(x) hV_k(v) with
/// hX = {1 - u^2/2, u1, u2, u1^2/2, u1 u2, u2^2/2},
/// hV = {1, v1, v2, v1^2, v1 v2, v2^2} and g the unit Maxwellian.
struct MaxwellianPairs {
  Basis hX;  // n_x^2 x 6
};

MaxwellianPairs maxwellian_pairs(const MomentFields& moments);

/// rho * hX_k evaluated from (rho, rho u1, rho u2); n_x^2 x 6.
Basis weighted_pairs(const Field& rho, const Field& mom1, const Field& mom2);

/// g(v) hV_k(v) on the velocity grid with g = discrete_gaussian; n_v^2 x 6.
Basis gaussian_monomials(const VelocityGrid& grid);

/// c1_jl = (v V_j, V_l) per direction, symmetrized.
DirectionalPair compute_c1(const VelocityGrid& grid, const Basis& V);

/// d1_il = (X_i, d X_l) per direction, antisymmetrized.
DirectionalPair compute_d1(const SpatialGrid& grid, const Basis& X, DerivativeMethod method);

/// I1_jk = (V_j, g hV_k); r x 6.
Matrix compute_I1(const VelocityGrid& grid, const Basis& V);
/// c3_j(x) = sum_k hX_k(x) I1_jk; n_x^2 x r.
Basis compute_c3(const MaxwellianPairs& pairs, const Matrix& I1);

/// I2_ik = (X_i, rho hX_k); r x 6.
Matrix compute_I2(const SpatialGrid& grid, const Basis& X, const Field& rho, const MaxwellianPairs& pairs);
/// d3_i(v) = g(v) sum_k hV_k(v) I2_ik; n_v^2 x r.
Basis compute_d3(const VelocityGrid& grid, const Matrix& I2);

/// e_ij = (X_i, rho c3_j).
Matrix compute_e(const SpatialGrid& grid, const Basis& X, const Field& rho, const Basis& c3);

/// All substep coefficients for one (X, V, moments) configuration.
struct CoefficientSet {
  DirectionalPair c1;
  DirectionalPair d1;
  Matrix I1;
  Matrix I2;
  Basis c3;
  Basis d3;
  Matrix e;
};

CoefficientSet compute_coefficients(const PhaseGrids& grids, const LowRankState& state,
                                    DerivativeMethod method);

/// Projected equilibrium e(S) for fixed X and V, viewed as a function of S.
///
/// e(S) depends on S only through rho = X S m0 and rho u = X S m1, X S m2,
/// which makes both the value and its derivative cheap: e = I2(S) I1^T.
class EquilibriumProjection {
 public:
  EquilibriumProjection(const SpatialGrid& grid, const Basis& X, const VelocityMoments& moments,
                        const Matrix& I1);

  Matrix operator()(const Matrix& S) const;

  /// Jacobian of vec(e) with respect to vec(S) (column-major), r^2 x r^2.
  Matrix jacobian(const Matrix& S) const;

 private:
  SpatialGrid grid_;
  Basis X_;
  VelocityMoments m_;
  Matrix I1_;
};

}  // namespace lrflow
