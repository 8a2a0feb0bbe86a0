#pragma once

#include "lrflow/grid.hpp"

namespace lrflow {

/// Exact solver for dK/dt = -(d1 K) c1x - (d2 K) c1y with constant symmetric
/// c1x, c1y, applied mode by mode in Fourier space.
///
/// For wavevector k the mode row evolves as K^(t) = K^(0) exp(-i t M(k)) with
/// M(k) = k1 c1x + k2 c1y; M is diagonalized once at construction.
class SpectralAdvection {
 public:
  SpectralAdvection(const SpatialGrid& grid, const Matrix& c1x, const Matrix& c1y);

  Basis apply(const Basis& K, double t) const;

 private:
  SpatialGrid grid_;
  Eigen::Index r_;
  Matrix Q_;       // r x (r * modes), one eigenvector block per mode
  Matrix lambda_;  // r x modes
};

/// Dimension-split semi-Lagrangian solver for the same system.
///
/// Each c1 matrix is diagonalized as Q diag(s) Q^T; in the rotated fields
/// K Q every column is a constant-speed translation, evaluated with periodic
/// cubic B-spline interpolation. The x1 and x2 sweeps are composed
/// symmetrically (half, full, half).
class SemiLagrangianAdvection {
 public:
  SemiLagrangianAdvection(const SpatialGrid& grid, const Matrix& c1x, const Matrix& c1y);

  Basis apply(const Basis& K, double t) const;

 private:
  Basis sweep(const Basis& K, int dir, double t) const;

  SpatialGrid grid_;
  Matrix Q_[2];
  Eigen::VectorXd speed_[2];
};

/// f translated by `cells` grid cells along dir (f(x) -> f(x - cells h)),
/// using periodic cubic B-spline interpolation. Integer shifts are exact.
Field shift_periodic(const SpatialGrid& grid, const Field& f, int dir, double cells);

/// Advection right-hand side -(d1 K) c1x - (d2 K) c1y.
Basis advection_rhs(const SpatialGrid& grid, const Basis& K, const Matrix& c1x, const Matrix& c1y,
                    DerivativeMethod method);

/// Largest |eigenvalue| over both c1 matrices.
double max_speed(const Matrix& c1x, const Matrix& c1y);

}  // namespace lrflow
