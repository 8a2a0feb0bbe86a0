#include "lrflow/lowrank_state.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lrflow {

VelocityMoments velocity_moments(const VelocityGrid& grid, const Basis& V) {
  if (V.rows() != grid.size()) throw std::invalid_argument("velocity_moments: basis/grid mismatch");
  const double w = grid.weight();
  VelocityMoments m;
  m.m0 = w * V.colwise().sum().transpose();
  m.m1 = w * (V.transpose() * grid.v1());
  m.m2 = w * (V.transpose() * grid.v2());
  return m;
}

// ---------------------------------------------------------------------------
// QR

namespace {

Field random_unit_field(Eigen::Index n, double weight, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Field f(n);
  for (Eigen::Index i = 0; i < n; ++i) f[i] = normal(rng);
  return f / std::sqrt(weight * f.squaredNorm());
}

}  // namespace

QrResult qr_orthonormalize(const Basis& F, double weight, Rng& rng) {
  const Eigen::Index n = F.rows();
  const Eigen::Index r = F.cols();
  if (r == 0) throw std::invalid_argument("qr_orthonormalize: need at least one field");
  if (r > n) throw std::invalid_argument("qr_orthonormalize: more fields than grid nodes");
  if (!(weight > 0.0)) throw std::invalid_argument("qr_orthonormalize: weight must be positive");

  double scale = 0.0;
  for (Eigen::Index j = 0; j < r; ++j) scale = std::max(scale, std::sqrt(weight * F.col(j).squaredNorm()));
  const double drop_tol = 1e-12 * scale;

  QrResult out{Basis(n, r), Matrix::Zero(r, r)};
  for (Eigen::Index j = 0; j < r; ++j) {
    Field q = F.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const double c = weight * out.Q.col(i).dot(q);
        out.R(i, j) += c;
        q -= c * out.Q.col(i);
      }
    }
    const double norm = std::sqrt(weight * q.squaredNorm());
    if (norm > drop_tol && norm > 0.0) {
      out.R(j, j) = norm;
      out.Q.col(j) = q / norm;
      continue;
    }
    // Dependent column: keep the projections, fill the direction with noise.
    Field filler = random_unit_field(n, weight, rng);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) filler -= (weight * out.Q.col(i).dot(filler)) * out.Q.col(i);
    }
    out.Q.col(j) = filler / std::sqrt(weight * filler.squaredNorm());
  }
  return out;
}

QrResult qr_orthonormalize(const SpatialGrid& grid, const Basis& F, Rng& rng) {
  if (F.rows() != grid.size()) throw std::invalid_argument("qr_orthonormalize: basis/grid mismatch");
  return qr_orthonormalize(F, grid.weight(), rng);
}

QrResult qr_orthonormalize(const VelocityGrid& grid, const Basis& F, Rng& rng) {
  if (F.rows() != grid.size()) throw std::invalid_argument("qr_orthonormalize: basis/grid mismatch");
  return qr_orthonormalize(F, grid.weight(), rng);
}

// ---------------------------------------------------------------------------
// Initialization

double gaussian(double v1, double v2) {
  return std::exp(-0.5 * (v1 * v1 + v2 * v2)) / (2.0 * std::numbers::pi);
}

Field discrete_gaussian(const VelocityGrid& grid) {
  Field g = grid.sample([](double a, double b) { return gaussian(a, b); });
  return g / (grid.weight() * g.sum());
}

namespace {

void check_fluid_input(const PhaseGrids& grids, const Field& rho0, const Field& u1, const Field& u2) {
  const Eigen::Index n = grids.x.size();
  if (rho0.size() != n || u1.size() != n || u2.size() != n)
    throw std::invalid_argument("init_equilibrium: fluid fields do not match the spatial grid");
  if (rho0.minCoeff() <= 0.0) throw std::invalid_argument("init_equilibrium: density must be positive");
}

}  // namespace

LowRankState init_equilibrium(const PhaseGrids& grids, const Field& rho0, const Field& u1,
                              const Field& u2, int r, Rng& rng) {
  if (r < 6) throw std::invalid_argument("init_equilibrium: rank must be at least 6, got " + std::to_string(r));
  check_fluid_input(grids, rho0, u1, u2);

  const Eigen::Index nx = grids.x.size();
  const Eigen::Index nv = grids.v.size();
  Basis A = Basis::Zero(nx, r);
  const Field usq = u1.cwiseAbs2() + u2.cwiseAbs2();
  A.col(0) = rho0.cwiseProduct((1.0 - 0.5 * usq.array()).matrix());
  A.col(1) = rho0.cwiseProduct(u1);
  A.col(2) = rho0.cwiseProduct(u2);
  A.col(3) = 0.5 * rho0.cwiseProduct(u1.cwiseAbs2());
  A.col(4) = rho0.cwiseProduct(u1.cwiseProduct(u2));
  A.col(5) = 0.5 * rho0.cwiseProduct(u2.cwiseAbs2());

  Basis B = Basis::Zero(nv, r);
  const Field g = discrete_gaussian(grids.v);
  const Field v1 = grids.v.v1();
  const Field v2 = grids.v.v2();
  B.col(0) = g;
  B.col(1) = v1.cwiseProduct(g);
  B.col(2) = v2.cwiseProduct(g);
  B.col(3) = v1.cwiseProduct(v1).cwiseProduct(g);
  B.col(4) = v1.cwiseProduct(v2).cwiseProduct(g);
  B.col(5) = v2.cwiseProduct(v2).cwiseProduct(g);

  QrResult qa = qr_orthonormalize(grids.x, A, rng);
  QrResult qb = qr_orthonormalize(grids.v, B, rng);
  return LowRankState{std::move(qa.Q), qa.R * qb.R.transpose(), std::move(qb.Q)};
}

LowRankState init_equilibrium_svd(const PhaseGrids& grids, const Field& rho0, const Field& u1,
                                  const Field& u2, int r) {
  check_fluid_input(grids, rho0, u1, u2);
  const Eigen::Index nx = grids.x.size();
  const Eigen::Index nv = grids.v.size();
  if (r < 1 || r > std::min(nx, nv)) throw std::invalid_argument("init_equilibrium_svd: invalid rank");

  const Field v1 = grids.v.v1();
  const Field v2 = grids.v.v2();
  Matrix f(nx, nv);
  for (Eigen::Index ix = 0; ix < nx; ++ix)
    for (Eigen::Index iv = 0; iv < nv; ++iv)
      f(ix, iv) = rho0[ix] * gaussian(v1[iv] - u1[ix], v2[iv] - u2[ix]);

  const double sx = std::sqrt(grids.x.weight());
  const double sv = std::sqrt(grids.v.weight());
  Eigen::BDCSVD<Matrix> svd(sx * sv * f, Eigen::ComputeThinU | Eigen::ComputeThinV);
  LowRankState out;
  out.X = svd.matrixU().leftCols(r) / sx;
  out.V = svd.matrixV().leftCols(r) / sv;
  out.S = svd.singularValues().head(r).asDiagonal();
  return out;
}

// ---------------------------------------------------------------------------
// Moments and diagnostics

MomentFields moments(const PhaseGrids& grids, const LowRankState& state) {
  const VelocityMoments m = velocity_moments(grids.v, state.V);
  const Matrix XS = state.X * state.S;
  MomentFields out;
  out.rho = XS * m.m0;
  out.mom1 = XS * m.m1;
  out.mom2 = XS * m.m2;
  if (out.rho.minCoeff() <= 0.0) throw std::runtime_error("moments: non-positive density, velocity undefined");
  out.u1 = out.mom1.cwiseQuotient(out.rho);
  out.u2 = out.mom2.cwiseQuotient(out.rho);
  return out;
}

double total_mass(const PhaseGrids& grids, const LowRankState& state) {
  const VelocityMoments m = velocity_moments(grids.v, state.V);
  return grids.x.weight() * state.X.colwise().sum().dot(state.S * m.m0);
}

std::pair<double, double> total_momentum(const PhaseGrids& grids, const LowRankState& state) {
  const VelocityMoments m = velocity_moments(grids.v, state.V);
  const Eigen::RowVectorXd xs = grids.x.weight() * state.X.colwise().sum();
  return {xs.dot(state.S * m.m1), xs.dot(state.S * m.m2)};
}

double evaluate_f(const LowRankState& state, Eigen::Index ix, Eigen::Index iv) {
  if (ix < 0 || ix >= state.X.rows() || iv < 0 || iv >= state.V.rows())
    throw std::out_of_range("evaluate_f: node index out of range");
  return state.X.row(ix).dot(state.S * state.V.row(iv).transpose());
}

Matrix dense_f(const LowRankState& state) { return state.X * state.S * state.V.transpose(); }

double orthonormality_residual(const Basis& A, double weight) {
  const Matrix G = weight * (A.transpose() * A) - Matrix::Identity(A.cols(), A.cols());
  return G.cwiseAbs().maxCoeff();
}

double smallest_singular_value(const Matrix& S) {
  Eigen::JacobiSVD<Matrix> svd(S);
  return svd.singularValues().minCoeff();
}

void check_state(const PhaseGrids& grids, const LowRankState& state) {
  const int r = state.rank();
  if (state.S.cols() != r || state.X.cols() != r || state.V.cols() != r)
    throw std::invalid_argument("LowRankState: inconsistent rank");
  if (state.X.rows() != grids.x.size() || state.V.rows() != grids.v.size())
    throw std::invalid_argument("LowRankState: basis does not match the grids");
}

}  // namespace lrflow
