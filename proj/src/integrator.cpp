#include "lrflow/integrator.hpp"

#include "lrflow/advection.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrflow {

// ---------------------------------------------------------------------------
// Config

SplittingOrder parse_order(const std::string& s) {
  if (s == "lie") return SplittingOrder::lie;
  if (s == "strang") return SplittingOrder::strang;
  throw std::invalid_argument("unknown splitting order '" + s + "' (expected lie or strang)");
}

AdvectionBackend parse_backend(const std::string& s) {
  if (s == "fd_rk4") return AdvectionBackend::fd_rk4;
  if (s == "spectral") return AdvectionBackend::spectral;
  if (s == "semi_lagrangian") return AdvectionBackend::semi_lagrangian;
  throw std::invalid_argument("unknown backend '" + s + "' (expected fd_rk4, spectral or semi_lagrangian)");
}

DerivativeMethod parse_derivative(const std::string& s) {
  if (s == "centered2") return DerivativeMethod::centered2;
  if (s == "spectral") return DerivativeMethod::spectral;
  throw std::invalid_argument("unknown derivative method '" + s + "' (expected centered2 or spectral)");
}

std::string to_string(SplittingOrder o) { return o == SplittingOrder::lie ? "lie" : "strang"; }

std::string to_string(AdvectionBackend b) {
  switch (b) {
    case AdvectionBackend::fd_rk4: return "fd_rk4";
    case AdvectionBackend::spectral: return "spectral";
    case AdvectionBackend::semi_lagrangian: return "semi_lagrangian";
  }
  return "?";
}

std::string to_string(DerivativeMethod m) { return m == DerivativeMethod::spectral ? "spectral" : "centered2"; }

double SplittingConfig::inv_epsilon() const { return std::isinf(epsilon) ? 0.0 : 1.0 / epsilon; }

double SplittingConfig::substep() const {
  if (collision_substep) return *collision_substep;
  return std::min(0.5 * epsilon, 0.1 * tau);
}

DerivativeMethod SplittingConfig::derivative_method() const {
  if (derivative) return *derivative;
  return backend == AdvectionBackend::fd_rk4 ? DerivativeMethod::centered2 : DerivativeMethod::spectral;
}

void SplittingConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive and finite");
  if (!(advection_cfl > 0.0 && advection_cfl < 1.0))
    throw std::invalid_argument("advection_cfl must lie in (0, 1)");
  if (collision_substep && !(*collision_substep > 0.0))
    throw std::invalid_argument("collision_substep must be positive");
}

// ---------------------------------------------------------------------------
// Helpers

namespace {

template <class T, class F>
T rk4_step(const T& y, double h, F&& f) {
  const T k1 = f(y);
  const T k2 = f(T(y + 0.5 * h * k1));
  const T k3 = f(T(y + 0.5 * h * k2));
  const T k4 = f(T(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

int count_steps(double duration, double max_step) {
  return std::max(1, static_cast<int>(std::ceil(duration / max_step - 1e-12)));
}

void require_finite(const Matrix& A, const char* phase, int substep) {
  if (!A.allFinite())
    throw IntegrationError(std::string(phase) + ": non-finite values after sub-step " + std::to_string(substep));
}

double spectral_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(A).singularValues()[0];
}

// The equilibrium target needs a positive density; losing it mid-step is an
// integration failure rather than bad input.
Basis target_pairs(const Field& rho, const Field& mom1, const Field& mom2, const char* phase) {
  try {
    return weighted_pairs(rho, mom1, mom2);
  } catch (const std::runtime_error& e) {
    throw IntegrationError(std::string(phase) + ": " + e.what());
  }
}

// Collision target c3(K) rho(K) for the K-phase.
struct KTarget {
  VelocityMoments m;
  Matrix I1;

  Basis operator()(const Basis& K) const {
    return target_pairs(K * m.m0, K * m.m1, K * m.m2, "K-step") * I1.transpose();
  }
};

// Collision target d3(L) for the L-phase.
struct LTarget {
  const SpatialGrid& grid;
  const Basis& X;
  Basis Gv;
  Field w0, w1, w2;  // quadrature weight times 1, v1, v2

  LTarget(const PhaseGrids& g, const Basis& X_)
      : grid(g.x), X(X_), Gv(gaussian_monomials(g.v)) {
    const double w = g.v.weight();
    w0 = Field::Constant(g.v.size(), w);
    w1 = w * g.v.v1();
    w2 = w * g.v.v2();
  }

  Basis operator()(const Basis& L) const {
    const Field rho = X * (L.transpose() * w0);
    const Field mom1 = X * (L.transpose() * w1);
    const Field mom2 = X * (L.transpose() * w2);
    return Gv * gram(grid, X, target_pairs(rho, mom1, mom2, "L-step")).transpose();
  }
};

Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

// Below this value of duration / epsilon the S-step is resolved with small
// sub-steps; above it every adjoint sub-step spans at least this many
// relaxation times so that the reversed relaxation is damped.
constexpr double kStiffSpan = 3.0;

}  // namespace

// ---------------------------------------------------------------------------
// ProjectorSplitting

ProjectorSplitting::ProjectorSplitting(PhaseGrids grids, SplittingConfig cfg, std::uint64_t seed)
    : grids_(std::move(grids)), cfg_(cfg), rng_(seed) {
  cfg_.validate();
  if ((cfg_.backend == AdvectionBackend::spectral || cfg_.derivative_method() == DerivativeMethod::spectral) &&
      !grids_.x.fft())
    grids_.x.require_fft();
}

Basis ProjectorSplitting::collision_flow_k(const Basis& K, const Basis& V, double duration) const {
  const double inv = cfg_.inv_epsilon();
  if (duration <= 0.0 || inv == 0.0) return K;
  const KTarget target{velocity_moments(grids_.v, V), compute_I1(grids_.v, V)};
  const int n = count_steps(duration, cfg_.substep());
  const double h = duration / n;
  auto f = [&](const Basis& y) { return Basis(-inv * (y - target(y))); };
  Basis y = K;
  for (int i = 0; i < n; ++i) {
    y = rk4_step(y, h, f);
    require_finite(y, "collision flow (K)", i);
  }
  return y;
}

Basis ProjectorSplitting::collision_flow_l(const Basis& L, const Basis& X, double duration) const {
  const double inv = cfg_.inv_epsilon();
  if (duration <= 0.0 || inv == 0.0) return L;
  const LTarget target(grids_, X);
  const int n = count_steps(duration, cfg_.substep());
  const double h = duration / n;
  auto f = [&](const Basis& y) { return Basis(-inv * (y - target(y))); };
  Basis y = L;
  for (int i = 0; i < n; ++i) {
    y = rk4_step(y, h, f);
    require_finite(y, "collision flow (L)", i);
  }
  return y;
}

Basis ProjectorSplitting::k_step(const Basis& K, const Basis& V, double duration, int* substeps) const {
  if (substeps) *substeps = 0;
  if (duration <= 0.0) return K;
  const double inv = cfg_.inv_epsilon();
  const bool adv = cfg_.advection;
  if (!adv) {
    if (substeps) *substeps = inv == 0.0 ? 0 : count_steps(duration, cfg_.substep());
    return collision_flow_k(K, V, duration);
  }
  const DirectionalPair c1 = compute_c1(grids_.v, V);
  const KTarget target{velocity_moments(grids_.v, V), compute_I1(grids_.v, V)};
  const SpatialGrid& g = grids_.x;

  if (cfg_.backend == AdvectionBackend::fd_rk4) {
    double dt = cfg_.substep();
    const double speed = max_speed(c1.x1, c1.x2);
    if (speed > 0.0) dt = std::min(dt, cfg_.advection_cfl * g.h() / speed);
    const int n = count_steps(duration, dt);
    const double h = duration / n;
    const DerivativeMethod method = cfg_.derivative_method();
    auto f = [&](const Basis& y) {
      Basis out = advection_rhs(g, y, c1.x1, c1.x2, method);
      if (inv != 0.0) out -= inv * (y - target(y));
      return out;
    };
    Basis y = K;
    for (int i = 0; i < n; ++i) {
      y = rk4_step(y, h, f);
      require_finite(y, "K-step", i);
    }
    if (substeps) *substeps = n;
    return y;
  }

  // Spectral and semi-Lagrangian: Strang splitting of advection and
  // collision inside every collision sub-step; adjacent advection halves
  // are merged.
  const int n = count_steps(duration, cfg_.substep());
  const double h = duration / n;
  auto collide = [&](const Basis& y) {
    if (inv == 0.0) return y;
    return rk4_step(y, h, [&](const Basis& z) { return Basis(-inv * (z - target(z))); });
  };
  auto run = [&](const auto& advect) {
    Basis y = advect.apply(K, 0.5 * h);
    for (int i = 0; i < n; ++i) {
      y = collide(y);
      y = advect.apply(y, i + 1 < n ? h : 0.5 * h);
      require_finite(y, "K-step", i);
    }
    return y;
  };
  if (substeps) *substeps = n;
  if (cfg_.backend == AdvectionBackend::spectral) {
    if (inv == 0.0) return SpectralAdvection(g, c1.x1, c1.x2).apply(K, duration);
    return run(SpectralAdvection(g, c1.x1, c1.x2));
  }
  return run(SemiLagrangianAdvection(g, c1.x1, c1.x2));
}

Matrix ProjectorSplitting::s_step(const Matrix& S, const Basis& X, const Basis& V, double duration,
                                  int* substeps) const {
  if (substeps) *substeps = 0;
  if (duration <= 0.0) return S;
  const double inv = cfg_.inv_epsilon();
  const bool adv = cfg_.advection;
  if (!adv && inv == 0.0) return S;

  const Eigen::Index r = S.rows();
  const DirectionalPair c1 = compute_c1(grids_.v, V);
  const DirectionalPair d1 = compute_d1(grids_.x, X, cfg_.derivative_method());
  const EquilibriumProjection projection(grids_.x, X, velocity_moments(grids_.v, V), compute_I1(grids_.v, V));
  auto eproj = [&](const Matrix& y) -> Matrix {
    try {
      return projection(y);
    } catch (const std::runtime_error& e) {
      throw IntegrationError(std::string("S-step: ") + e.what());
    }
  };

  auto advect = [&](const Matrix& y) -> Matrix {
    if (!adv) return Matrix::Zero(y.rows(), y.cols());
    return d1.x1 * y * c1.x1 + d1.x2 * y * c1.x2;
  };
  const double normB =
      adv ? spectral_norm(d1.x1) * spectral_norm(c1.x1) + spectral_norm(d1.x2) * spectral_norm(c1.x2) : 0.0;
  const double s0 = std::max(S.norm(), std::numeric_limits<double>::min());
  auto check = [&](const Matrix& y, int i) {
    require_finite(y, "S-step", i);
    if (y.norm() > 1e6 * s0)
      throw IntegrationError("S-step: |S| grew by more than 1e6 within one macro step at sub-step " +
                             std::to_string(i) + " (stiff reversed relaxation, epsilon = " +
                             std::to_string(cfg_.epsilon) + ")");
  };

  if (cfg_.s_scheme == SStepScheme::explicit_rk4) {
    int n = count_steps(duration, cfg_.substep());
    if (normB > 0.0) n = std::max(n, count_steps(duration, 2.0 / normB));
    const double h = duration / n;
    auto f = [&](const Matrix& y) {
      Matrix out = advect(y);
      if (inv != 0.0) out += inv * (y - eproj(y));
      return out;
    };
    Matrix y = S;
    for (int i = 0; i < n; ++i) {
      y = rk4_step(y, h, f);
      check(y, i);
    }
    if (substeps) *substeps = n;
    return y;
  }

  // Adjoint RK4: each sub-step solves Psi_h(Y) = S_prev, where Psi_h is one
  // RK4 step of the time-reversed equation dY/dt = -B(Y) - (Y - e(Y))/eps.
  const double span = duration * inv;
  const int n_acc = normB > 0.0 ? count_steps(duration, 0.25 / normB) : 1;
  int n;
  if (span <= kStiffSpan) {
    n = inv > 0.0 ? std::max(n_acc, count_steps(duration, cfg_.substep())) : n_acc;
  } else {
    n = std::max(1, std::min(n_acc, static_cast<int>(std::floor(span / kStiffSpan))));
  }
  const double h = duration / n;

  auto reversed = [&](const Matrix& y) {
    Matrix out = -advect(y);
    if (inv != 0.0) out -= inv * (y - eproj(y));
    return out;
  };

  const Eigen::Index m = r * r;
  Matrix J = Matrix::Zero(m, m);
  if (adv) J -= kron(c1.x1, d1.x1) + kron(c1.x2, d1.x2);
  if (inv != 0.0) J -= inv * (Matrix::Identity(m, m) - projection.jacobian(S));
  const Matrix hJ = h * J;
  const Matrix I = Matrix::Identity(m, m);
  const Matrix A = I + hJ * (I + 0.5 * hJ * (I + (1.0 / 3.0) * hJ * (I + 0.25 * hJ)));
  const Eigen::PartialPivLU<Matrix> lu(A);

  Matrix y = S;
  for (int i = 0; i < n; ++i) {
    const Matrix prev = y;
    double last = std::numeric_limits<double>::infinity();
    bool done = false;
    for (int it = 0; it < 50 && !done; ++it) {
      const Matrix res = rk4_step(y, h, reversed) - prev;
      const Eigen::VectorXd dy = lu.solve(Eigen::Map<const Eigen::VectorXd>(res.data(), m));
      y -= Eigen::Map<const Matrix>(dy.data(), r, r);
      require_finite(y, "S-step", i);
      const double step = dy.norm();
      const double scale = std::max(y.norm(), std::numeric_limits<double>::min());
      if (step <= 1e-14 * scale) done = true;
      else if (step > 0.5 * last && step <= 1e-10 * scale) done = true;  // stagnated at rounding level
      last = step;
    }
    if (!done)
      throw IntegrationError("S-step: adjoint RK4 iteration did not converge at sub-step " + std::to_string(i));
    check(y, i);
  }
  if (substeps) *substeps = n;
  return y;
}

Basis ProjectorSplitting::l_step(const Basis& L, const Basis& X, double duration, int* substeps) const {
  if (substeps) *substeps = 0;
  if (duration <= 0.0) return L;
  const double inv = cfg_.inv_epsilon();
  const bool adv = cfg_.advection;
  if (!adv) {
    if (substeps) *substeps = inv == 0.0 ? 0 : count_steps(duration, cfg_.substep());
    return collision_flow_l(L, X, duration);
  }
  const DirectionalPair d1 = compute_d1(grids_.x, X, cfg_.derivative_method());
  const LTarget target(grids_, X);
  const Field v1 = grids_.v.v1();
  const Field v2 = grids_.v.v2();

  double dt = inv == 0.0 ? std::numeric_limits<double>::infinity() : cfg_.substep();
  const double vmax = grids_.v.v_max() - 0.5 * grids_.v.h();
  const double omega = vmax * (spectral_norm(d1.x1) + spectral_norm(d1.x2));
  if (omega > 0.0) dt = std::min(dt, 2.0 / omega);
  if (!std::isfinite(dt)) dt = duration;
  const int n = count_steps(duration, dt);
  const double h = duration / n;
  const Matrix d1xT = d1.x1.transpose();
  const Matrix d1yT = d1.x2.transpose();
  auto f = [&](const Basis& y) {
    Basis out = -(v1.asDiagonal() * (y * d1xT)) - v2.asDiagonal() * (y * d1yT);
    if (inv != 0.0) out -= inv * (y - target(y));
    return out;
  };
  Basis y = L;
  for (int i = 0; i < n; ++i) {
    y = rk4_step(y, h, f);
    require_finite(y, "L-step", i);
  }
  if (substeps) *substeps = n;
  return y;
}

void ProjectorSplitting::k_phase(LowRankState& s, double duration, StepReport& rep) {
  int n = 0;
  const Basis K = k_step(s.X * s.S, s.V, duration, &n);
  rep.k_substeps += n;
  QrResult qr = qr_orthonormalize(grids_.x, K, rng_);
  s.X = std::move(qr.Q);
  s.S = std::move(qr.R);
}

void ProjectorSplitting::s_phase(LowRankState& s, double duration, StepReport& rep) {
  int n = 0;
  s.S = s_step(s.S, s.X, s.V, duration, &n);
  rep.s_substeps += n;
}

void ProjectorSplitting::l_phase(LowRankState& s, double duration, StepReport& rep) {
  int n = 0;
  const Basis L = l_step(s.V * s.S.transpose(), s.X, duration, &n);
  rep.l_substeps += n;
  QrResult qr = qr_orthonormalize(grids_.v, L, rng_);
  s.V = std::move(qr.Q);
  s.S = qr.R.transpose();
}

StepReport ProjectorSplitting::step(LowRankState& state) { return step(state, cfg_.tau); }

StepReport ProjectorSplitting::step(LowRankState& state, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("step: step length must be positive");
  check_state(grids_, state);
  const double mass0 = total_mass(grids_, state);
  const auto mom0 = total_momentum(grids_, state);

  StepReport rep;
  if (cfg_.order == SplittingOrder::lie) {
    k_phase(state, tau, rep);
    s_phase(state, tau, rep);
    l_phase(state, tau, rep);
  } else {
    k_phase(state, 0.5 * tau, rep);
    s_phase(state, 0.5 * tau, rep);
    l_phase(state, tau, rep);
    s_phase(state, 0.5 * tau, rep);
    k_phase(state, 0.5 * tau, rep);
  }

  const auto mom1 = total_momentum(grids_, state);
  rep.mass_drift = total_mass(grids_, state) - mass0;
  rep.mom1_drift = mom1.first - mom0.first;
  rep.mom2_drift = mom1.second - mom0.second;
  rep.smin = smallest_singular_value(state.S);
  rep.orthonormality_x = orthonormality_residual(state.X, grids_.x.weight());
  rep.orthonormality_v = orthonormality_residual(state.V, grids_.v.weight());
  return rep;
}

}  // namespace lrflow
