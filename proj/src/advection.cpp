#include "lrflow/advection.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace lrflow {

namespace {

void check_pair(const Matrix& c1x, const Matrix& c1y) {
  if (c1x.rows() != c1x.cols() || c1y.rows() != c1y.cols() || c1x.rows() != c1y.rows())
    throw std::invalid_argument("advection: c1 matrices must be square and of equal size");
}

Eigen::SelfAdjointEigenSolver<Matrix> diagonalize(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
  if (eig.info() != Eigen::Success) throw std::runtime_error("advection: eigendecomposition did not converge");
  return eig;
}

}  // namespace

double max_speed(const Matrix& c1x, const Matrix& c1y) {
  check_pair(c1x, c1y);
  const double a = diagonalize(c1x).eigenvalues().cwiseAbs().maxCoeff();
  const double b = diagonalize(c1y).eigenvalues().cwiseAbs().maxCoeff();
  return std::max(a, b);
}

Basis advection_rhs(const SpatialGrid& grid, const Basis& K, const Matrix& c1x, const Matrix& c1y,
                    DerivativeMethod method) {
  check_pair(c1x, c1y);
  return -(derivative_columns(grid, K, 0, method) * c1x) - derivative_columns(grid, K, 1, method) * c1y;
}

// ---------------------------------------------------------------------------
// Spectral

SpectralAdvection::SpectralAdvection(const SpatialGrid& grid, const Matrix& c1x, const Matrix& c1y)
    : grid_(grid), r_(c1x.rows()) {
  check_pair(c1x, c1y);
  const Fft2d& fft = grid.require_fft();
  const Eigen::Index modes = fft.spectrum_size();
  Q_.resize(r_, r_ * modes);
  lambda_.resize(r_, modes);
  const int half = fft.half();
  for (int k2 = 0; k2 < fft.n(); ++k2) {
    for (int k1 = 0; k1 < half; ++k1) {
      const Eigen::Index m = k1 + static_cast<Eigen::Index>(half) * k2;
      const auto eig = diagonalize(fft.wavenumber1(k1) * c1x + fft.wavenumber2(k2) * c1y);
      Q_.middleCols(m * r_, r_) = eig.eigenvectors();
      lambda_.col(m) = eig.eigenvalues();
    }
  }
}

Basis SpectralAdvection::apply(const Basis& K, double t) const {
  if (K.rows() != grid_.size() || K.cols() != r_) throw std::invalid_argument("SpectralAdvection: shape mismatch");
  const Fft2d& fft = grid_.require_fft();
  const Eigen::Index modes = fft.spectrum_size();
  Eigen::MatrixXcd hat(modes, r_);
  for (Eigen::Index j = 0; j < r_; ++j) fft.forward(K.col(j).data(), hat.col(j).data());

  Eigen::RowVectorXcd y(r_);
  for (Eigen::Index m = 0; m < modes; ++m) {
    const auto Q = Q_.middleCols(m * r_, r_);
    y.noalias() = hat.row(m) * Q;
    for (Eigen::Index j = 0; j < r_; ++j) y[j] *= std::polar(1.0, -t * lambda_(j, m));
    hat.row(m).noalias() = y * Q.transpose();
  }

  Basis out(K.rows(), r_);
  for (Eigen::Index j = 0; j < r_; ++j) fft.backward(hat.col(j).data(), out.col(j).data());
  return out;
}

// ---------------------------------------------------------------------------
// Semi-Lagrangian

namespace {

// Interpolation coefficients of the periodic cubic B-spline through the n
// samples line[0], line[stride], ...: solves the circulant system
// (c[i-1] + 4 c[i] + c[i+1]) / 6 = s[i] with the exact periodic recursive filter.
void bspline_prefilter(double* line, Eigen::Index stride, int n) {
  const double z = std::sqrt(3.0) - 2.0;
  const double zn = std::pow(z, n);
  auto at = [&](int i) -> double& { return line[static_cast<Eigen::Index>(i) * stride]; };

  double sum = 0.0;
  double zk = 1.0;
  for (int k = 0; k < n; ++k) {
    sum += zk * at((n - k) % n);
    zk *= z;
  }
  at(0) = sum / (1.0 - zn);
  for (int i = 1; i < n; ++i) at(i) += z * at(i - 1);

  sum = 0.0;
  zk = 1.0;
  for (int k = 0; k < n; ++k) {
    sum += zk * at((n - 1 + k) % n);
    zk *= z;
  }
  at(n - 1) = -z * sum / (1.0 - zn);
  for (int i = n - 2; i >= 0; --i) at(i) = z * (at(i + 1) - at(i));
  for (int i = 0; i < n; ++i) at(i) *= 6.0;
}

}  // namespace

Field shift_periodic(const SpatialGrid& grid, const Field& f, int dir, double cells) {
  if (f.size() != grid.size()) throw std::invalid_argument("shift_periodic: field/grid mismatch");
  if (dir != 0 && dir != 1) throw std::invalid_argument("shift_periodic: direction must be 0 or 1");
  const int n = grid.n();
  const Eigen::Index stride = dir == 0 ? 1 : n;
  const Eigen::Index line_step = dir == 0 ? n : 1;

  // sample point of node i is i - cells = i + m + theta
  const double p = -cells;
  const double fm = std::floor(p);
  const double theta = p - fm;
  const int m = static_cast<int>(std::fmod(fm, static_cast<double>(n)));
  const double w0 = (1.0 - theta) * (1.0 - theta) * (1.0 - theta) / 6.0;
  const double w1 = (3.0 * theta * theta * theta - 6.0 * theta * theta + 4.0) / 6.0;
  const double w2 = (-3.0 * theta * theta * theta + 3.0 * theta * theta + 3.0 * theta + 1.0) / 6.0;
  const double w3 = theta * theta * theta / 6.0;

  Field coef = f;
  Field out(f.size());
  std::vector<double> c(static_cast<std::size_t>(n));
  for (int line = 0; line < n; ++line) {
    double* base = coef.data() + line * line_step;
    bspline_prefilter(base, stride, n);
    for (int i = 0; i < n; ++i) c[i] = base[i * stride];
    for (int i = 0; i < n; ++i) {
      const int j = i + m;
      auto wrap = [n](int k) { return ((k % n) + n) % n; };
      out[line * line_step + i * stride] =
          w0 * c[wrap(j - 1)] + w1 * c[wrap(j)] + w2 * c[wrap(j + 1)] + w3 * c[wrap(j + 2)];
    }
  }
  return out;
}

SemiLagrangianAdvection::SemiLagrangianAdvection(const SpatialGrid& grid, const Matrix& c1x, const Matrix& c1y)
    : grid_(grid) {
  check_pair(c1x, c1y);
  const Matrix* c[2] = {&c1x, &c1y};
  for (int d = 0; d < 2; ++d) {
    const auto eig = diagonalize(*c[d]);
    Q_[d] = eig.eigenvectors();
    speed_[d] = eig.eigenvalues();
  }
}

Basis SemiLagrangianAdvection::sweep(const Basis& K, int dir, double t) const {
  Basis rotated = K * Q_[dir];
  for (Eigen::Index j = 0; j < rotated.cols(); ++j)
    rotated.col(j) = shift_periodic(grid_, rotated.col(j), dir, speed_[dir][j] * t / grid_.h());
  return rotated * Q_[dir].transpose();
}

Basis SemiLagrangianAdvection::apply(const Basis& K, double t) const {
  if (K.rows() != grid_.size() || K.cols() != Q_[0].rows())
    throw std::invalid_argument("SemiLagrangianAdvection: shape mismatch");
  return sweep(sweep(sweep(K, 0, 0.5 * t), 1, t), 0, 0.5 * t);
}

}  // namespace lrflow
