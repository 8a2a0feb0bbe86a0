#pragma once

#include "lrflow/coefficients.hpp"
#include "lrflow/grid.hpp"
#include "lrflow/lowrank_state.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace lrflow {

enum class SplittingOrder { lie, strang };
enum class AdvectionBackend { fd_rk4, spectral, semi_lagrangian };

/// How the reversed-sign S-step is integrated.
///
/// explicit_rk4 runs classical RK4 forward in time with the collision
/// sub-step. Its exact flow amplifies departures from equilibrium by
/// exp(duration / epsilon), so it is only usable when that stays moderate.
/// adjoint_rk4 takes each sub-step as the inverse of one RK4 step of the
/// time-reversed (relaxing) equation. It is fourth order and keeps the
/// stiff part bounded.
enum class SStepScheme { adjoint_rk4, explicit_rk4 };

SplittingOrder parse_order(const std::string& s);
AdvectionBackend parse_backend(const std::string& s);
DerivativeMethod parse_derivative(const std::string& s);
std::string to_string(SplittingOrder o);
std::string to_string(AdvectionBackend b);
std::string to_string(DerivativeMethod m);

struct SplittingConfig {
  double epsilon = 1e-3;  // +inf switches collisions off
  double tau = 0.1;
  SplittingOrder order = SplittingOrder::strang;
  AdvectionBackend backend = AdvectionBackend::fd_rk4;
  std::optional<double> collision_substep;
  double advection_cfl = 0.45;
  std::optional<DerivativeMethod> derivative;  // default: centered2 for fd_rk4, spectral otherwise
  bool advection = true;                       // off only in fixed-point studies
  SStepScheme s_scheme = SStepScheme::adjoint_rk4;

  double inv_epsilon() const;
  /// The collision sub-step, min(epsilon/2, tau/10) unless set explicitly.
  double substep() const;
  DerivativeMethod derivative_method() const;
  void validate() const;
};

struct StepReport {
  double mass_drift = 0.0;
  double mom1_drift = 0.0;
  double mom2_drift = 0.0;
  double smin = 0.0;
  double orthonormality_x = 0.0;
  double orthonormality_v = 0.0;
  int k_substeps = 0;
  int s_substeps = 0;
  int l_substeps = 0;
};

/// Error raised when a phase produces non-finite values or diverges.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Projector-splitting (K, S, L) integrator for the BGK equation.
class ProjectorSplitting {
 public:
  ProjectorSplitting(PhaseGrids grids, SplittingConfig cfg, std::uint64_t seed = 1);

  const PhaseGrids& grids() const { return grids_; }
  const SplittingConfig& config() const { return cfg_; }

  /// One macro step of length cfg.tau.
  StepReport step(LowRankState& state);
  /// One macro step of the given length; the collision sub-step still
  /// derives from cfg.tau.
  StepReport step(LowRankState& state, double tau);

  /// K = X S with V frozen.
  Basis k_step(const Basis& K, const Basis& V, double duration, int* substeps = nullptr) const;
  /// S with X and V frozen; the reversed-sign substep.
  Matrix s_step(const Matrix& S, const Basis& X, const Basis& V, double duration,
                int* substeps = nullptr) const;
  /// L = V S^T with X frozen.
  Basis l_step(const Basis& L, const Basis& X, double duration, int* substeps = nullptr) const;

  /// Collision-only flow of K (target c3 rho) with V frozen.
  Basis collision_flow_k(const Basis& K, const Basis& V, double duration) const;
  /// Collision-only flow of L (target d3) with X frozen.
  Basis collision_flow_l(const Basis& L, const Basis& X, double duration) const;

 private:
  void k_phase(LowRankState& s, double duration, StepReport& rep);
  void s_phase(LowRankState& s, double duration, StepReport& rep);
  void l_phase(LowRankState& s, double duration, StepReport& rep);

  PhaseGrids grids_;
  SplittingConfig cfg_;
  Rng rng_;
};

}  // namespace lrflow
