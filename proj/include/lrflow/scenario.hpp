#pragma once

#include "lrflow/integrator.hpp"
#include "lrflow/maccormack.hpp"
#include "lrflow/snapshot.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lrflow {

struct ScenarioConfig {
  std::string scenario = "sound_wave";  // sound_wave | shear_flow | custom
  std::string solver = "lowrank";       // lowrank | maccormack | both
  int n_x = 128;
  int n_v = 32;
  int rank = 10;
  double v_max = 6.0;
  std::optional<double> epsilon;
  std::optional<double> reynolds;
  double v0 = 0.1;
  double shear_width = 1.0 / 30.0;
  std::optional<double> amplitude;  // 1e-3 for waves, 5e-3 for the shear flow
  int kx = 0;                       // custom plane wave wavenumbers
  int ky = 1;
  double tau = 0.2;
  std::string order = "strang";
  std::string backend = "fd_rk4";
  std::optional<std::string> derivative;
  std::optional<double> collision_substep;
  double advection_cfl = 0.45;
  double cfl = 0.9;
  double t_end = 1.0;
  std::vector<double> snapshot_times;  // default {t_end}
  std::vector<std::string> snapshot_fields{"rho", "u1", "u2", "vorticity"};
  std::string out_dir = "out";
  std::uint64_t seed = 1;

  double resolved_epsilon() const;
  double resolved_amplitude() const;
  std::vector<double> resolved_snapshot_times() const;
  SplittingConfig splitting() const;
  DerivativeMethod derivative_method() const;
};

/// Sets one key; throws std::invalid_argument on unknown keys or bad values.
void apply_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value);
/// Flat "key = value" text; '#' starts a comment.
ScenarioConfig parse_config(std::istream& in, const std::string& source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);
/// Rejects inconsistent combinations with a message naming the offending keys.
void validate(const ScenarioConfig& cfg);

struct FluidInit {
  Field rho;
  Field u1;
  Field u2;
};

FluidInit init_sound_wave(const SpatialGrid& grid, double amplitude);
/// rho = 1 + a sin(2 pi (kx x + ky y)), u = a k/|k| sin(...): a plane sound
/// wave travelling along k.
FluidInit init_plane_wave(const SpatialGrid& grid, double amplitude, int kx, int ky);
FluidInit init_shear_flow(const SpatialGrid& grid, double v0, double width, double amplitude);
FluidInit initial_condition(const SpatialGrid& grid, const ScenarioConfig& cfg);

Field vorticity(const SpatialGrid& grid, const Field& u1, const Field& u2, DerivativeMethod method);

/// Primitive fields at one instant.
struct FieldSet {
  double time = 0.0;
  Field rho;
  Field u1;
  Field u2;
  Field vorticity;
};

struct ComparisonRow {
  double time = 0.0;
  double err_rho = 0.0;  // |rho_lr - rho_mc| / |rho_mc - mean(rho_mc)|
  double err_u = 0.0;
  double err_u1 = 0.0;
  double err_u2 = 0.0;
  double err_vorticity = 0.0;
};

ComparisonRow compare_fields(const FieldSet& lowrank, const FieldSet& reference);

struct SimulationResult {
  std::vector<DiagnosticsRow> lowrank;
  std::vector<DiagnosticsRow> maccormack;
  std::vector<StepReport> reports;
  std::vector<double> maccormack_mass_steps;  // |mass change| of every MacCormack step
  std::vector<FieldSet> lowrank_snapshots;
  std::vector<FieldSet> maccormack_snapshots;
  std::vector<ComparisonRow> comparison;
  int lowrank_steps = 0;
  int maccormack_steps = 0;
};

/// Runs the configured solver(s) to t_end. With write_files the outputs go
/// to cfg.out_dir: diagnostics.csv and snapshots for a single solver; with
/// solver = both the low-rank series is diagnostics.csv (with error columns),
/// snapshots live in lowrank/ and maccormack/, MacCormack diagnostics in
/// maccormack/diagnostics.csv and per-snapshot differences in comparison.csv.
SimulationResult run(const ScenarioConfig& cfg, bool write_files = true, std::ostream* log = nullptr);

}  // namespace lrflow
