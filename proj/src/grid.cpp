#include "lrflow/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lrflow {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// ---------------------------------------------------------------------------
// Fft2d

Fft2d::Fft2d(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("Fft2d: size must be at least 2");
  std::vector<double> real(static_cast<std::size_t>(n) * n);
  std::vector<fftw_complex> spec(static_cast<std::size_t>(n) * (n / 2 + 1));
  // ESTIMATE keeps plans (and therefore results) identical from run to run.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_r2c_2d(n, n, real.data(), spec.data(), flags);
  backward_plan_ = fftw_plan_dft_c2r_2d(n, n, spec.data(), real.data(), flags | FFTW_DESTROY_INPUT);
  if (!forward_plan_ || !backward_plan_) throw std::runtime_error("Fft2d: FFTW planning failed");
}

Fft2d::~Fft2d() {
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

void Fft2d::forward(const double* in, Complex* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void Fft2d::backward(const Complex* in, double* out) const {
  // c2r overwrites its input
  std::vector<Complex> scratch(in, in + spectrum_size());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(backward_plan_),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out);
  const double scale = 1.0 / (static_cast<double>(n_) * n_);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n_) * n_; ++i) out[i] *= scale;
}

Eigen::VectorXcd Fft2d::forward(const Field& f) const {
  if (f.size() != static_cast<Eigen::Index>(n_) * n_)
    throw std::invalid_argument("Fft2d::forward: field size does not match the grid");
  Eigen::VectorXcd out(spectrum_size());
  forward(f.data(), out.data());
  return out;
}

Field Fft2d::backward(const Eigen::VectorXcd& spectrum) const {
  if (spectrum.size() != spectrum_size())
    throw std::invalid_argument("Fft2d::backward: spectrum size does not match the grid");
  Field out(static_cast<Eigen::Index>(n_) * n_);
  backward(spectrum.data(), out.data());
  return out;
}

double Fft2d::wavenumber1(int k1) const {
  if (2 * k1 == n_) return 0.0;
  return 2.0 * std::numbers::pi * k1;
}

double Fft2d::wavenumber2(int k2) const {
  if (2 * k2 == n_) return 0.0;
  const int k = (2 * k2 < n_) ? k2 : k2 - n_;
  return 2.0 * std::numbers::pi * k;
}

// ---------------------------------------------------------------------------
// Grids

SpatialGrid::SpatialGrid(int n) : n_(n) {
  if (n < 4) throw std::invalid_argument("SpatialGrid: need at least 4 points per direction");
  if (is_power_of_two(n)) fft_ = std::make_shared<const Fft2d>(n);
}

Eigen::Index SpatialGrid::index(int i1, int i2) const {
  i1 %= n_;
  i2 %= n_;
  if (i1 < 0) i1 += n_;
  if (i2 < 0) i2 += n_;
  return i1 + static_cast<Eigen::Index>(n_) * i2;
}

Field SpatialGrid::x1() const {
  return sample([](double a, double) { return a; });
}

Field SpatialGrid::x2() const {
  return sample([](double, double b) { return b; });
}

const Fft2d& SpatialGrid::require_fft() const {
  if (!fft_)
    throw std::invalid_argument("spectral operations need a power-of-two grid, got n_x = " +
                                std::to_string(n_));
  return *fft_;
}

VelocityGrid::VelocityGrid(int n, double v_max) : n_(n), v_max_(v_max) {
  if (n < 2) throw std::invalid_argument("VelocityGrid: need at least 2 points per direction");
  if (!(v_max > 0.0)) throw std::invalid_argument("VelocityGrid: v_max must be positive");
}

Field VelocityGrid::v1() const {
  return sample([](double a, double) { return a; });
}

Field VelocityGrid::v2() const {
  return sample([](double, double b) { return b; });
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

void check_size(Eigen::Index expected, Eigen::Index got, const char* what) {
  if (expected != got)
    throw std::invalid_argument(std::string(what) + ": field has " + std::to_string(got) +
                                " values, grid has " + std::to_string(expected) + " nodes");
}

}  // namespace

double inner_product(const SpatialGrid& grid, const Field& a, const Field& b) {
  check_size(grid.size(), a.size(), "inner_product");
  check_size(grid.size(), b.size(), "inner_product");
  return grid.weight() * a.dot(b);
}

double inner_product(const VelocityGrid& grid, const Field& a, const Field& b) {
  check_size(grid.size(), a.size(), "inner_product");
  check_size(grid.size(), b.size(), "inner_product");
  return grid.weight() * a.dot(b);
}

Matrix gram(const SpatialGrid& grid, const Basis& a, const Basis& b) {
  check_size(grid.size(), a.rows(), "gram");
  check_size(grid.size(), b.rows(), "gram");
  return grid.weight() * (a.transpose() * b);
}

Matrix gram(const VelocityGrid& grid, const Basis& a, const Basis& b) {
  check_size(grid.size(), a.rows(), "gram");
  check_size(grid.size(), b.rows(), "gram");
  return grid.weight() * (a.transpose() * b);
}

// ---------------------------------------------------------------------------
// Derivatives

namespace {

Field centered_derivative(const SpatialGrid& grid, const Field& f, int dir) {
  const int n = grid.n();
  const double scale = 0.5 / grid.h();
  Field out(f.size());
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      const Eigen::Index plus = dir == 0 ? grid.index(i1 + 1, i2) : grid.index(i1, i2 + 1);
      const Eigen::Index minus = dir == 0 ? grid.index(i1 - 1, i2) : grid.index(i1, i2 - 1);
      out[i1 + static_cast<Eigen::Index>(n) * i2] = scale * (f[plus] - f[minus]);
    }
  }
  return out;
}

Field spectral_derivative(const SpatialGrid& grid, const Field& f, int dir) {
  const Fft2d& fft = grid.require_fft();
  Eigen::VectorXcd spec = fft.forward(f);
  const int n = grid.n();
  const int half = fft.half();
  for (int k2 = 0; k2 < n; ++k2) {
    for (int k1 = 0; k1 < half; ++k1) {
      const double k = dir == 0 ? fft.wavenumber1(k1) : fft.wavenumber2(k2);
      spec[k1 + static_cast<Eigen::Index>(half) * k2] *= Complex(0.0, k);
    }
  }
  return fft.backward(spec);
}

}  // namespace

Field derivative(const SpatialGrid& grid, const Field& f, int dir, DerivativeMethod method) {
  check_size(grid.size(), f.size(), "derivative");
  if (dir != 0 && dir != 1) throw std::invalid_argument("derivative: direction must be 0 or 1");
  return method == DerivativeMethod::spectral ? spectral_derivative(grid, f, dir)
                                              : centered_derivative(grid, f, dir);
}

Basis derivative_columns(const SpatialGrid& grid, const Basis& f, int dir, DerivativeMethod method) {
  Basis out(f.rows(), f.cols());
  for (Eigen::Index j = 0; j < f.cols(); ++j) out.col(j) = derivative(grid, Field(f.col(j)), dir, method);
  return out;
}

std::pair<Field, Field> gradient_x(const SpatialGrid& grid, const Field& f, DerivativeMethod method) {
  return {derivative(grid, f, 0, method), derivative(grid, f, 1, method)};
}

}  // namespace lrflow
