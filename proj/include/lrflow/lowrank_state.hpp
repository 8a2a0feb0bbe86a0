#pragma once

#include "lrflow/grid.hpp"

#include <cstdint>
#include <random>

namespace lrflow {

/// f(x, v) = sum_ij X_i(x) S_ij V_j(v) with X and V orthonormal under the
/// grids' quadrature.
struct LowRankState {
  Basis X;  // spatial basis, n_x^2 x r
  Matrix S; // coupling, r x r
  Basis V;  // velocity basis, n_v^2 x r

  int rank() const { return static_cast<int>(S.rows()); }
};

struct MomentFields {
  Field rho;
  Field mom1;
  Field mom2;
  Field u1;
  Field u2;
};

struct QrResult {
  Basis Q;
  Matrix R;
};

using Rng = std::mt19937_64;

/// Velocity moments of each basis function: m0_j = (V_j, 1), m1_j = (V_j, v1),
/// m2_j = (V_j, v2).
struct VelocityMoments {
  Eigen::VectorXd m0;
  Eigen::VectorXd m1;
  Eigen::VectorXd m2;
};

VelocityMoments velocity_moments(const VelocityGrid& grid, const Basis& V);

/// Weighted QR of the columns of F: F = Q R with Q^T (w I) Q = I.
///
/// Modified Gram-Schmidt with one re-orthogonalization pass. The diagonal of
/// R is non-negative. Columns that are numerically dependent on earlier ones
/// get R_jj = 0 and a random unit column orthogonal to the previous ones.
QrResult qr_orthonormalize(const Basis& F, double weight, Rng& rng);
QrResult qr_orthonormalize(const SpatialGrid& grid, const Basis& F, Rng& rng);
QrResult qr_orthonormalize(const VelocityGrid& grid, const Basis& F, Rng& rng);

/// The Maxwellian (2 pi)^-1 exp(-v^2/2).
double gaussian(double v1, double v2);

/// The Maxwellian sampled on the velocity grid and rescaled so that its
/// quadrature sum is exactly one. On the truncated grid the plain samples
/// miss the tail mass (about 4e-9 at v_max = 6), which a stiff collision
/// operator would otherwise drain from the solution every relaxation time.
Field discrete_gaussian(const VelocityGrid& grid);

/// Rank-r state from the six-term small-velocity expansion of the local
/// Maxwellian with density rho0 and velocity (u1, u2). Needs r >= 6.
LowRankState init_equilibrium(const PhaseGrids& grids, const Field& rho0, const Field& u1,
                              const Field& u2, int r, Rng& rng);

/// Rank-r state from a truncated weighted SVD of the exact Maxwellian on the
/// full phase-space grid. Dense, so only meant for small grids.
LowRankState init_equilibrium_svd(const PhaseGrids& grids, const Field& rho0, const Field& u1,
                                  const Field& u2, int r);

/// rho(x), rho u(x) and u(x). Throws if u is requested where rho <= 0.
MomentFields moments(const PhaseGrids& grids, const LowRankState& state);

double total_mass(const PhaseGrids& grids, const LowRankState& state);
std::pair<double, double> total_momentum(const PhaseGrids& grids, const LowRankState& state);

/// f at spatial node ix and velocity node iv.
double evaluate_f(const LowRankState& state, Eigen::Index ix, Eigen::Index iv);

/// Dense n_x^2 x n_v^2 reconstruction X S V^T.
Matrix dense_f(const LowRankState& state);

/// max |A^T (w I) A - I|.
double orthonormality_residual(const Basis& A, double weight);

double smallest_singular_value(const Matrix& S);

void check_state(const PhaseGrids& grids, const LowRankState& state);

}  // namespace lrflow
