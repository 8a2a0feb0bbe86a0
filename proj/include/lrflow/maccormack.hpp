#pragma once

#include "lrflow/grid.hpp"

#include <utility>

namespace lrflow {

/// Conservative variables of the isothermal (p = rho) Navier-Stokes system.
struct FluidState {
  Field rho;
  Field mom1;
  Field mom2;
  double time = 0.0;
};

struct ViscosityParams {
  double mu = 0.0;
  double lambda = 0.0;
};

/// mu = epsilon, lambda = -2 epsilon / d.
ViscosityParams viscosity_from_epsilon(double epsilon, int d = 2);

FluidState make_fluid_state(const Field& rho, const Field& u1, const Field& u2);

/// cfl h / max(|u1| + |u2| + 1).
double cfl_dt(const SpatialGrid& grid, const FluidState& state, double cfl);

/// One MacCormack step, dimensionally split as x(dt/2) y(dt) x(dt/2). Each
/// sweep is a forward-difference predictor, backward-difference corrector and
/// average; viscous terms use centered differences in both stages.
FluidState maccormack_step(const SpatialGrid& grid, const FluidState& state, const ViscosityParams& visc,
                           double dt);

double fluid_mass(const SpatialGrid& grid, const FluidState& state);
std::pair<double, double> fluid_momentum(const SpatialGrid& grid, const FluidState& state);

}  // namespace lrflow
