#pragma once

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <utility>
#include <vector>

namespace lrflow {

/// Values of a scalar function, one entry per grid node.
using Field = Eigen::VectorXd;
/// A family of fields sharing one grid, stored one field per column.
using Basis = Eigen::MatrixXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;

enum class DerivativeMethod { centered2, spectral };

bool is_power_of_two(int n);

/// Real-to-complex 2D FFT on an n x n periodic grid (FFTW backed).
///
/// Node (i1, i2) is stored at i1 + n * i2, so i1 is the contiguous index.
/// The half spectrum holds k1 in [0, n/2] (contiguous) and k2 in [0, n).
/// forward() is unnormalized; backward() divides by n^2 so that
/// backward(forward(f)) == f.
class Fft2d {
 public:
  explicit Fft2d(int n);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  int n() const { return n_; }
  int half() const { return n_ / 2 + 1; }
  Eigen::Index spectrum_size() const { return static_cast<Eigen::Index>(n_) * half(); }

  void forward(const double* in, Complex* out) const;
  void backward(const Complex* in, double* out) const;

  Eigen::VectorXcd forward(const Field& f) const;
  Field backward(const Eigen::VectorXcd& spectrum) const;

  /// Angular wavenumber of half-spectrum column k1; the Nyquist column maps to 0.
  double wavenumber1(int k1) const;
  /// Angular wavenumber of spectrum row k2; the Nyquist row maps to 0.
  double wavenumber2(int k2) const;

 private:
  int n_;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Periodic grid on [0,1)^2 with n nodes per direction, x_i = i h.
class SpatialGrid {
 public:
  explicit SpatialGrid(int n);

  int n() const { return n_; }
  double h() const { return 1.0 / n_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(n_) * n_; }
  double weight() const { return h() * h(); }
  double coord(int i) const { return i * h(); }

  Eigen::Index index(int i1, int i2) const;
  Field x1() const;
  Field x2() const;

  template <class F>
  Field sample(F&& f) const {
    Field out(size());
    for (int i2 = 0; i2 < n_; ++i2)
      for (int i1 = 0; i1 < n_; ++i1) out[i1 + n_ * i2] = f(coord(i1), coord(i2));
    return out;
  }

  /// Shared FFT plan; null unless n is a power of two.
  const Fft2d* fft() const { return fft_.get(); }
  const Fft2d& require_fft() const;

 private:
  int n_;
  std::shared_ptr<const Fft2d> fft_;
};

/// Truncated velocity domain [-v_max, v_max)^2 with cell-centered nodes.
class VelocityGrid {
 public:
  explicit VelocityGrid(int n, double v_max = 6.0);

  int n() const { return n_; }
  double v_max() const { return v_max_; }
  double h() const { return 2.0 * v_max_ / n_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(n_) * n_; }
  double weight() const { return h() * h(); }
  double node(int i) const { return -v_max_ + (i + 0.5) * h(); }

  Eigen::Index index(int j1, int j2) const { return j1 + static_cast<Eigen::Index>(n_) * j2; }
  Field v1() const;
  Field v2() const;

  template <class F>
  Field sample(F&& f) const {
    Field out(size());
    for (int j2 = 0; j2 < n_; ++j2)
      for (int j1 = 0; j1 < n_; ++j1) out[j1 + n_ * j2] = f(node(j1), node(j2));
    return out;
  }

 private:
  int n_;
  double v_max_;
};

struct PhaseGrids {
  SpatialGrid x;
  VelocityGrid v;
};

double inner_product(const SpatialGrid& grid, const Field& a, const Field& b);
double inner_product(const VelocityGrid& grid, const Field& a, const Field& b);

/// Weighted Gram matrix A^T W B.
Matrix gram(const SpatialGrid& grid, const Basis& a, const Basis& b);
Matrix gram(const VelocityGrid& grid, const Basis& a, const Basis& b);

/// Partial derivative along x1 (dir 0) or x2 (dir 1).
Field derivative(const SpatialGrid& grid, const Field& f, int dir, DerivativeMethod method);
/// Applies derivative() to every column.
Basis derivative_columns(const SpatialGrid& grid, const Basis& f, int dir, DerivativeMethod method);

std::pair<Field, Field> gradient_x(const SpatialGrid& grid, const Field& f, DerivativeMethod method);

}  // namespace lrflow
