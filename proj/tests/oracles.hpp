#pragma once

// Slow reference computations used only by the tests. They evaluate the
// defining integrals node by node and never go through the I1/I2 fast path.

#include "lrflow/coefficients.hpp"
#include "lrflow/lowrank_state.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace oracle {

using lrflow::Basis;
using lrflow::Field;
using lrflow::Matrix;
using lrflow::PhaseGrids;

// exp(-v^2/2) normalized to unit quadrature sum
inline Field unit_gaussian(const lrflow::VelocityGrid& g) {
  Field out(g.size());
  double sum = 0.0;
  for (int j2 = 0; j2 < g.n(); ++j2)
    for (int j1 = 0; j1 < g.n(); ++j1) {
      const double a = g.node(j1), b = g.node(j2);
      out[j1 + g.n() * j2] = std::exp(-0.5 * (a * a + b * b));
      sum += out[j1 + g.n() * j2];
    }
  return out / (sum * g.weight());
}

// Truncated equilibrium h(x, v) = g(v) [1 - u^2/2 + u.v + (u.v)^2/2] for
// node x with velocity (a, b); the six-term expansion in expanded form.
inline double h_trunc(double g, double a, double b, double u1, double u2) {
  const double uv = u1 * a + u2 * b;
  return g * (1.0 - 0.5 * (u1 * u1 + u2 * u2) + uv + 0.5 * uv * uv);
}

inline Basis c3(const PhaseGrids& G, const Basis& V, const Field& u1, const Field& u2) {
  const Field g = unit_gaussian(G.v);
  const double wv = G.v.weight();
  Basis out = Basis::Zero(G.x.size(), V.cols());
  for (Eigen::Index x = 0; x < G.x.size(); ++x)
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
      double s = 0.0;
      for (int j2 = 0; j2 < G.v.n(); ++j2)
        for (int j1 = 0; j1 < G.v.n(); ++j1) {
          const Eigen::Index iv = j1 + G.v.n() * j2;
          s += wv * V(iv, j) * h_trunc(g[iv], G.v.node(j1), G.v.node(j2), u1[x], u2[x]);
        }
      out(x, j) = s;
    }
  return out;
}

inline Basis d3(const PhaseGrids& G, const Basis& X, const Field& rho, const Field& u1, const Field& u2) {
  const Field g = unit_gaussian(G.v);
  const double wx = G.x.weight();
  Basis out = Basis::Zero(G.v.size(), X.cols());
  for (int j2 = 0; j2 < G.v.n(); ++j2)
    for (int j1 = 0; j1 < G.v.n(); ++j1) {
      const Eigen::Index iv = j1 + G.v.n() * j2;
      for (Eigen::Index i = 0; i < X.cols(); ++i) {
        double s = 0.0;
        for (Eigen::Index x = 0; x < G.x.size(); ++x)
          s += wx * X(x, i) * rho[x] * h_trunc(g[iv], G.v.node(j1), G.v.node(j2), u1[x], u2[x]);
        out(iv, i) = s;
      }
    }
  return out;
}

// Full four-dimensional quadrature of X_i rho V_j h.
inline Matrix e(const PhaseGrids& G, const Basis& X, const Basis& V, const Field& rho, const Field& u1,
                const Field& u2) {
  const Field g = unit_gaussian(G.v);
  const double w = G.x.weight() * G.v.weight();
  Matrix out = Matrix::Zero(X.cols(), V.cols());
  for (Eigen::Index x = 0; x < G.x.size(); ++x)
    for (int j2 = 0; j2 < G.v.n(); ++j2)
      for (int j1 = 0; j1 < G.v.n(); ++j1) {
        const Eigen::Index iv = j1 + G.v.n() * j2;
        const double h = w * rho[x] * h_trunc(g[iv], G.v.node(j1), G.v.node(j2), u1[x], u2[x]);
        for (Eigen::Index i = 0; i < X.cols(); ++i)
          for (Eigen::Index j = 0; j < V.cols(); ++j) out(i, j) += X(x, i) * V(iv, j) * h;
      }
  return out;
}

inline Matrix c1(const lrflow::VelocityGrid& G, const Basis& V, int dir) {
  Matrix out = Matrix::Zero(V.cols(), V.cols());
  for (int j2 = 0; j2 < G.n(); ++j2)
    for (int j1 = 0; j1 < G.n(); ++j1) {
      const Eigen::Index iv = j1 + G.n() * j2;
      const double v = dir == 0 ? G.node(j1) : G.node(j2);
      for (Eigen::Index a = 0; a < V.cols(); ++a)
        for (Eigen::Index b = 0; b < V.cols(); ++b) out(a, b) += G.weight() * v * V(iv, a) * V(iv, b);
    }
  return out;
}

// Spectral derivative by explicit discrete Fourier sums, O(n^4).
inline Field dft_derivative(const lrflow::SpatialGrid& G, const Field& f, int dir) {
  const int n = G.n();
  const double two_pi = 2.0 * std::numbers::pi;
  Field out = Field::Zero(f.size());
  for (int line = 0; line < n; ++line) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = -n / 2 + 1; k < n / 2; ++k) {
        std::complex<double> c = 0.0;
        for (int j = 0; j < n; ++j) {
          const double val = dir == 0 ? f[j + n * line] : f[line + n * j];
          c += val * std::polar(1.0, -two_pi * k * j / n);
        }
        s += (std::complex<double>(0.0, two_pi * k) * c * std::polar(1.0, two_pi * k * i / n)).real() / n;
      }
      if (dir == 0) out[i + n * line] = s;
      else out[line + n * i] = s;
    }
  }
  return out;
}

// Orthonormal (under weight w) random basis with r columns.
inline Basis random_orthonormal(Eigen::Index n, Eigen::Index r, double w, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Basis A(n, r);
  for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = N(rng);
  Eigen::HouseholderQR<Matrix> qr(A);
  return Matrix(qr.householderQ() * Matrix::Identity(n, r)) / std::sqrt(w);
}

// Random smooth periodic field: a few low Fourier modes with random phases.
inline Field random_smooth(const lrflow::SpatialGrid& G, double amplitude, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 2.0 * std::numbers::pi);
  const double p1 = U(rng), p2 = U(rng), p3 = U(rng);
  const Field raw = G.sample([&](double x, double y) {
    return std::sin(2.0 * std::numbers::pi * x + p1) + std::cos(2.0 * std::numbers::pi * y + p2) +
           0.5 * std::sin(2.0 * std::numbers::pi * (x + 2.0 * y) + p3);
  });
  return amplitude * raw / raw.cwiseAbs().maxCoeff();
}

}  // namespace oracle
