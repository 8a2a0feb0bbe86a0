#include "lrflow/coefficients.hpp"

#include <stdexcept>

namespace lrflow {

Basis weighted_pairs(const Field& rho, const Field& mom1, const Field& mom2) {
  const Eigen::Index n = rho.size();
  if (mom1.size() != n || mom2.size() != n) throw std::invalid_argument("weighted_pairs: size mismatch");
  Basis q(n, kMaxwellTerms);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = rho[i];
    if (!(r > 0.0)) throw std::runtime_error("equilibrium target: vanishing or negative density");
    const double a = mom1[i];
    const double b = mom2[i];
    const double inv = 1.0 / r;
    q(i, 0) = r - 0.5 * (a * a + b * b) * inv;
    q(i, 1) = a;
    q(i, 2) = b;
    q(i, 3) = 0.5 * a * a * inv;
    q(i, 4) = a * b * inv;
    q(i, 5) = 0.5 * b * b * inv;
  }
  return q;
}

MaxwellianPairs maxwellian_pairs(const MomentFields& m) {
  const Eigen::Index n = m.rho.size();
  if (m.rho.minCoeff() <= 0.0) throw std::runtime_error("maxwellian_pairs: vanishing or negative density");
  const Field u1 = m.mom1.cwiseQuotient(m.rho);
  const Field u2 = m.mom2.cwiseQuotient(m.rho);
  MaxwellianPairs p{Basis(n, kMaxwellTerms)};
  p.hX.col(0) = (1.0 - 0.5 * (u1.array().square() + u2.array().square())).matrix();
  p.hX.col(1) = u1;
  p.hX.col(2) = u2;
  p.hX.col(3) = 0.5 * u1.cwiseAbs2();
  p.hX.col(4) = u1.cwiseProduct(u2);
  p.hX.col(5) = 0.5 * u2.cwiseAbs2();
  return p;
}

Basis gaussian_monomials(const VelocityGrid& grid) {
  const Field gd = discrete_gaussian(grid);
  Basis G(grid.size(), kMaxwellTerms);
  for (int j2 = 0; j2 < grid.n(); ++j2) {
    for (int j1 = 0; j1 < grid.n(); ++j1) {
      const double a = grid.node(j1);
      const double b = grid.node(j2);
      const Eigen::Index i = grid.index(j1, j2);
      const double g = gd[i];
      G(i, 0) = g;
      G(i, 1) = a * g;
      G(i, 2) = b * g;
      G(i, 3) = a * a * g;
      G(i, 4) = a * b * g;
      G(i, 5) = b * b * g;
    }
  }
  return G;
}

DirectionalPair compute_c1(const VelocityGrid& grid, const Basis& V) {
  if (V.rows() != grid.size()) throw std::invalid_argument("compute_c1: basis/grid mismatch");
  const double w = grid.weight();
  auto one = [&](const Field& v) {
    Matrix c = w * (V.transpose() * v.asDiagonal() * V);
    return Matrix(0.5 * (c + c.transpose()));
  };
  return {one(grid.v1()), one(grid.v2())};
}

DirectionalPair compute_d1(const SpatialGrid& grid, const Basis& X, DerivativeMethod method) {
  if (X.rows() != grid.size()) throw std::invalid_argument("compute_d1: basis/grid mismatch");
  auto one = [&](int dir) {
    Matrix d = gram(grid, X, derivative_columns(grid, X, dir, method));
    return Matrix(0.5 * (d - d.transpose()));
  };
  return {one(0), one(1)};
}

Matrix compute_I1(const VelocityGrid& grid, const Basis& V) {
  return gram(grid, V, gaussian_monomials(grid));
}

Basis compute_c3(const MaxwellianPairs& pairs, const Matrix& I1) {
  if (I1.cols() != kMaxwellTerms) throw std::invalid_argument("compute_c3: I1 must have 6 columns");
  return pairs.hX * I1.transpose();
}

Matrix compute_I2(const SpatialGrid& grid, const Basis& X, const Field& rho, const MaxwellianPairs& pairs) {
  if (rho.size() != grid.size() || pairs.hX.rows() != grid.size())
    throw std::invalid_argument("compute_I2: field/grid mismatch");
  return gram(grid, X, rho.asDiagonal() * pairs.hX);
}

Basis compute_d3(const VelocityGrid& grid, const Matrix& I2) {
  if (I2.cols() != kMaxwellTerms) throw std::invalid_argument("compute_d3: I2 must have 6 columns");
  return gaussian_monomials(grid) * I2.transpose();
}

Matrix compute_e(const SpatialGrid& grid, const Basis& X, const Field& rho, const Basis& c3) {
  if (rho.size() != grid.size()) throw std::invalid_argument("compute_e: field/grid mismatch");
  return gram(grid, X, rho.asDiagonal() * c3);
}

CoefficientSet compute_coefficients(const PhaseGrids& grids, const LowRankState& state,
                                    DerivativeMethod method) {
  const MomentFields m = moments(grids, state);
  const MaxwellianPairs pairs = maxwellian_pairs(m);
  CoefficientSet c;
  c.c1 = compute_c1(grids.v, state.V);
  c.d1 = compute_d1(grids.x, state.X, method);
  c.I1 = compute_I1(grids.v, state.V);
  c.I2 = compute_I2(grids.x, state.X, m.rho, pairs);
  c.c3 = compute_c3(pairs, c.I1);
  c.d3 = compute_d3(grids.v, c.I2);
  c.e = compute_e(grids.x, state.X, m.rho, c.c3);
  return c;
}

// ---------------------------------------------------------------------------
// EquilibriumProjection

EquilibriumProjection::EquilibriumProjection(const SpatialGrid& grid, const Basis& X,
                                             const VelocityMoments& moments, const Matrix& I1)
    : grid_(grid), X_(X), m_(moments), I1_(I1) {
  if (X.rows() != grid.size()) throw std::invalid_argument("EquilibriumProjection: basis/grid mismatch");
}

Matrix EquilibriumProjection::operator()(const Matrix& S) const {
  const Field rho = X_ * (S * m_.m0);
  const Field mom1 = X_ * (S * m_.m1);
  const Field mom2 = X_ * (S * m_.m2);
  const Matrix I2 = gram(grid_, X_, weighted_pairs(rho, mom1, mom2));
  return I2 * I1_.transpose();
}

Matrix EquilibriumProjection::jacobian(const Matrix& S) const {
  const Eigen::Index r = S.rows();
  const Field rho = X_ * (S * m_.m0);
  const Field u1 = (X_ * (S * m_.m1)).cwiseQuotient(rho);
  const Field u2 = (X_ * (S * m_.m2)).cwiseQuotient(rho);
  if (rho.minCoeff() <= 0.0) throw std::runtime_error("EquilibriumProjection: non-positive density");

  // d(rho hX_k) = a_k drho + b_k dm1 + c_k dm2 at every node
  const Eigen::Index n = rho.size();
  std::array<std::array<Field, kMaxwellTerms>, 3> coef;
  for (auto& s : coef)
    for (auto& f : s) f = Field::Zero(n);
  coef[0][0] = (1.0 + 0.5 * (u1.array().square() + u2.array().square())).matrix();
  coef[1][0] = -u1;
  coef[2][0] = -u2;
  coef[1][1].setOnes();
  coef[2][2].setOnes();
  coef[0][3] = -0.5 * u1.cwiseAbs2();
  coef[1][3] = u1;
  coef[0][4] = -u1.cwiseProduct(u2);
  coef[1][4] = u2;
  coef[2][4] = u1;
  coef[0][5] = -0.5 * u2.cwiseAbs2();
  coef[2][5] = u2;

  // G[s][k] = X^T W diag(coef[s][k]) X
  std::array<std::array<Matrix, kMaxwellTerms>, 3> G;
  for (int s = 0; s < 3; ++s)
    for (int k = 0; k < kMaxwellTerms; ++k) G[s][k] = gram(grid_, X_, coef[s][k].asDiagonal() * X_);

  const std::array<const Eigen::VectorXd*, 3> mom{&m_.m0, &m_.m1, &m_.m2};
  Matrix J(r * r, r * r);
  Matrix dI2(r, kMaxwellTerms);
  for (Eigen::Index q = 0; q < r; ++q) {
    for (Eigen::Index p = 0; p < r; ++p) {
      for (int k = 0; k < kMaxwellTerms; ++k) {
        dI2.col(k) = G[0][k].col(p) * (*mom[0])[q] + G[1][k].col(p) * (*mom[1])[q] +
                     G[2][k].col(p) * (*mom[2])[q];
      }
      const Matrix de = dI2 * I1_.transpose();
      J.col(p + r * q) = Eigen::Map<const Eigen::VectorXd>(de.data(), r * r);
    }
  }
  return J;
}

}  // namespace lrflow
