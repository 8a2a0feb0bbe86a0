#include "lrflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lrflow {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config

double ScenarioConfig::resolved_epsilon() const {
  if (epsilon) return *epsilon;
  if (reynolds) return v0 / *reynolds;
  return 1e-3;
}

double ScenarioConfig::resolved_amplitude() const {
  if (amplitude) return *amplitude;
  return scenario == "shear_flow" ? 5e-3 : 1e-3;
}

std::vector<double> ScenarioConfig::resolved_snapshot_times() const {
  std::vector<double> t = snapshot_times.empty() ? std::vector<double>{t_end} : snapshot_times;
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

DerivativeMethod ScenarioConfig::derivative_method() const { return splitting().derivative_method(); }

SplittingConfig ScenarioConfig::splitting() const {
  SplittingConfig s;
  s.epsilon = resolved_epsilon();
  s.tau = tau;
  s.order = parse_order(order);
  s.backend = parse_backend(backend);
  s.collision_substep = collision_substep;
  s.advection_cfl = advection_cfl;
  if (derivative) s.derivative = parse_derivative(*derivative);
  return s;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (const std::logic_error&) {
  }
  throw std::invalid_argument("config key '" + key + "': '" + v + "' is not a number");
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (trim(v.substr(pos)).empty()) return static_cast<int>(x);
  } catch (const std::logic_error&) {
  }
  throw std::invalid_argument("config key '" + key + "': '" + v + "' is not an integer");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

void apply_config_value(ScenarioConfig& c, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string v = trim(value_in);
  if (key == "scenario") c.scenario = v;
  else if (key == "solver") c.solver = v;
  else if (key == "n_x") c.n_x = to_int(key, v);
  else if (key == "n_v") c.n_v = to_int(key, v);
  else if (key == "rank") c.rank = to_int(key, v);
  else if (key == "v_max") c.v_max = to_double(key, v);
  else if (key == "epsilon") c.epsilon = to_double(key, v);
  else if (key == "reynolds") c.reynolds = to_double(key, v);
  else if (key == "v0") c.v0 = to_double(key, v);
  else if (key == "shear_width") c.shear_width = to_double(key, v);
  else if (key == "amplitude") c.amplitude = to_double(key, v);
  else if (key == "kx") c.kx = to_int(key, v);
  else if (key == "ky") c.ky = to_int(key, v);
  else if (key == "tau") c.tau = to_double(key, v);
  else if (key == "order") c.order = v;
  else if (key == "backend") c.backend = v;
  else if (key == "derivative") c.derivative = v;
  else if (key == "collision_substep") c.collision_substep = to_double(key, v);
  else if (key == "advection_cfl") c.advection_cfl = to_double(key, v);
  else if (key == "cfl") c.cfl = to_double(key, v);
  else if (key == "t_end") c.t_end = to_double(key, v);
  else if (key == "snapshot_times") {
    c.snapshot_times.clear();
    for (const auto& s : split_list(v)) c.snapshot_times.push_back(to_double(key, s));
  } else if (key == "snapshot_fields") c.snapshot_fields = split_list(v);
  else if (key == "out_dir") c.out_dir = v;
  else if (key == "seed") {
    const int s = to_int(key, v);
    if (s < 0) throw std::invalid_argument("config key 'seed' must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
  ScenarioConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second)
      throw std::invalid_argument(source + ":" + std::to_string(lineno) + ": key '" + key + "' given twice");
    try {
      apply_config_value(cfg, key, line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

ScenarioConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  return parse_config(in, path.string());
}

void validate(const ScenarioConfig& c) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (c.scenario != "sound_wave" && c.scenario != "shear_flow" && c.scenario != "custom")
    fail("scenario must be sound_wave, shear_flow or custom, got '" + c.scenario + "'");
  if (c.solver != "lowrank" && c.solver != "maccormack" && c.solver != "both")
    fail("solver must be lowrank, maccormack or both, got '" + c.solver + "'");
  if (c.n_x < 8) fail("n_x must be at least 8");
  if (c.n_v < 2) fail("n_v must be at least 2");
  if (!(c.v_max > 0.0)) fail("v_max must be positive");
  if (c.rank < 6) fail("rank must be at least 6 (the equilibrium expansion has six terms)");
  if (c.rank > std::min(c.n_x * c.n_x, c.n_v * c.n_v)) fail("rank exceeds the number of grid nodes");
  if (c.epsilon && c.reynolds) fail("give either epsilon or reynolds, not both");
  if (c.epsilon && !(*c.epsilon > 0.0)) fail("epsilon must be positive");
  if (c.reynolds && !(*c.reynolds > 0.0)) fail("reynolds must be positive");
  if (!(c.v0 > 0.0)) fail("v0 must be positive");
  if (!(c.shear_width > 0.0)) fail("shear_width must be positive");
  if (!(c.resolved_amplitude() > 0.0)) fail("amplitude must be positive");
  if (c.scenario == "custom" && c.kx == 0 && c.ky == 0) fail("custom plane wave needs kx or ky nonzero");
  if (!(c.tau > 0.0)) fail("tau must be positive");
  if (!(c.t_end > 0.0)) fail("t_end must be positive");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) fail("cfl must lie in (0, 1]");
  if (c.collision_substep && !(*c.collision_substep > 0.0)) fail("collision_substep must be positive");
  if (!(c.advection_cfl > 0.0 && c.advection_cfl < 1.0)) fail("advection_cfl must lie in (0, 1)");
  parse_order(c.order);
  const AdvectionBackend b = parse_backend(c.backend);
  const DerivativeMethod d = c.derivative ? parse_derivative(*c.derivative) : c.derivative_method();
  if ((b == AdvectionBackend::spectral || d == DerivativeMethod::spectral) && !is_power_of_two(c.n_x))
    fail("backend/derivative 'spectral' needs n_x to be a power of two, got n_x = " + std::to_string(c.n_x) +
         " (use backend = fd_rk4 with derivative = centered2)");
  for (double t : c.snapshot_times)
    if (!(t >= 0.0 && t <= c.t_end)) fail("snapshot time " + format_time(t) + " lies outside [0, t_end]");
  for (const auto& f : c.snapshot_fields)
    if (f != "rho" && f != "u1" && f != "u2" && f != "vorticity")
      fail("unknown snapshot field '" + f + "' (expected rho, u1, u2, vorticity)");
}

// ---------------------------------------------------------------------------
// Initial data

FluidInit init_plane_wave(const SpatialGrid& grid, double amplitude, int kx, int ky) {
  if (kx == 0 && ky == 0) throw std::invalid_argument("init_plane_wave: zero wavevector");
  const double two_pi = 2.0 * std::numbers::pi;
  const double norm = std::hypot(static_cast<double>(kx), static_cast<double>(ky));
  const Field s = grid.sample([&](double x, double y) { return std::sin(two_pi * (kx * x + ky * y)); });
  return {Field((1.0 + amplitude * s.array()).matrix()), Field(amplitude * kx / norm * s),
          Field(amplitude * ky / norm * s)};
}

FluidInit init_sound_wave(const SpatialGrid& grid, double amplitude) {
  if (!(amplitude > 0.0)) throw std::invalid_argument("init_sound_wave: amplitude must be positive");
  return init_plane_wave(grid, amplitude, 0, 1);
}

FluidInit init_shear_flow(const SpatialGrid& grid, double v0, double width, double amplitude) {
  const double two_pi = 2.0 * std::numbers::pi;
  FluidInit out;
  out.rho = Field::Ones(grid.size());
  out.u1 = grid.sample([&](double, double y) {
    return y <= 0.5 ? v0 * std::tanh((y - 0.25) / width) : v0 * std::tanh((0.75 - y) / width);
  });
  out.u2 = grid.sample([&](double x, double) { return amplitude * std::sin(two_pi * x); });
  return out;
}

FluidInit initial_condition(const SpatialGrid& grid, const ScenarioConfig& cfg) {
  if (cfg.scenario == "sound_wave") return init_sound_wave(grid, cfg.resolved_amplitude());
  if (cfg.scenario == "shear_flow") return init_shear_flow(grid, cfg.v0, cfg.shear_width, cfg.resolved_amplitude());
  return init_plane_wave(grid, cfg.resolved_amplitude(), cfg.kx, cfg.ky);
}

Field vorticity(const SpatialGrid& grid, const Field& u1, const Field& u2, DerivativeMethod method) {
  return derivative(grid, u2, 0, method) - derivative(grid, u1, 1, method);
}

ComparisonRow compare_fields(const FieldSet& a, const FieldSet& b) {
  auto rel = [](const Field& x, const Field& ref) {
    const double d = ref.norm();
    return d > 0.0 ? (x - ref).norm() / d : (x - ref).norm();
  };
  ComparisonRow c;
  c.time = a.time;
  const Field fluct = (b.rho.array() - b.rho.mean()).matrix();
  c.err_rho = fluct.norm() > 0.0 ? (a.rho - b.rho).norm() / fluct.norm() : (a.rho - b.rho).norm();
  const double du = std::sqrt((a.u1 - b.u1).squaredNorm() + (a.u2 - b.u2).squaredNorm());
  const double nu = std::sqrt(b.u1.squaredNorm() + b.u2.squaredNorm());
  c.err_u = nu > 0.0 ? du / nu : du;
  c.err_u1 = rel(a.u1, b.u1);
  c.err_u2 = rel(a.u2, b.u2);
  c.err_vorticity = rel(a.vorticity, b.vorticity);
  return c;
}

// ---------------------------------------------------------------------------
// Driver

namespace {

double max_speed_of(const Field& u1, const Field& u2) {
  return (u1.cwiseAbs2() + u2.cwiseAbs2()).cwiseSqrt().maxCoeff();
}

FieldSet fields_of(const SpatialGrid& g, double t, const Field& rho, const Field& u1, const Field& u2,
                   DerivativeMethod method) {
  return {t, rho, u1, u2, vorticity(g, u1, u2, method)};
}

void write_fields(const fs::path& dir, const FieldSet& f, int nx, const std::vector<std::string>& names) {
  for (const auto& name : names) {
    const Field& v = name == "rho" ? f.rho : name == "u1" ? f.u1 : name == "u2" ? f.u2 : f.vorticity;
    write_snapshot(dir, Snapshot{nx, f.time, name, v});
  }
}

bool reached(double t, double target) { return t >= target - 1e-12 * std::max(1.0, std::abs(target)); }

class LowrankRunner {
 public:
  LowrankRunner(const ScenarioConfig& cfg, const FluidInit& init)
      : grids_{SpatialGrid(cfg.n_x), VelocityGrid(cfg.n_v, cfg.v_max)},
        tau_(cfg.tau),
        method_(cfg.derivative_method()),
        integ_(grids_, cfg.splitting(), cfg.seed * 2 + 1) {
    Rng rng(cfg.seed * 2);
    state_ = init_equilibrium(grids_, init.rho, init.u1, init.u2, cfg.rank, rng);
    mass0_ = total_mass(grids_, state_);
  }

  DiagnosticsRow row() const {
    const MomentFields m = moments(grids_, state_);
    const auto mom = total_momentum(grids_, state_);
    DiagnosticsRow r;
    r.time = t_;
    r.mass = total_mass(grids_, state_);
    r.mom1 = mom.first;
    r.mom2 = mom.second;
    r.mass_drift = r.mass - mass0_;
    r.max_u = max_speed_of(m.u1, m.u2);
    r.smin = smallest_singular_value(state_.S);
    return r;
  }

  FieldSet fields() const {
    const MomentFields m = moments(grids_, state_);
    return fields_of(grids_.x, t_, m.rho, m.u1, m.u2, method_);
  }

  // Advances to `target`, calling on_step after every macro step.
  template <class F>
  void advance(double target, F&& on_step) {
    while (!reached(t_, target)) {
      double dt = std::min(tau_, target - t_);
      const bool last = reached(t_ + dt, target);
      StepReport rep = integ_.step(state_, dt);
      t_ = last ? target : t_ + dt;
      ++steps_;
      on_step(rep);
    }
  }

  double time() const { return t_; }
  int steps() const { return steps_; }

 private:
  PhaseGrids grids_;
  double tau_;
  DerivativeMethod method_;
  ProjectorSplitting integ_;
  LowRankState state_;
  double mass0_ = 0.0;
  double t_ = 0.0;
  int steps_ = 0;
};

class MacCormackRunner {
 public:
  MacCormackRunner(const ScenarioConfig& cfg, const FluidInit& init)
      : grid_(cfg.n_x),
        visc_(viscosity_from_epsilon(cfg.resolved_epsilon())),
        cfl_(cfg.cfl),
        method_(cfg.derivative_method()),
        state_(make_fluid_state(init.rho, init.u1, init.u2)) {
    mass0_ = fluid_mass(grid_, state_);
  }

  DiagnosticsRow row() const {
    const auto mom = fluid_momentum(grid_, state_);
    DiagnosticsRow r;
    r.time = state_.time;
    r.mass = fluid_mass(grid_, state_);
    r.mom1 = mom.first;
    r.mom2 = mom.second;
    r.mass_drift = r.mass - mass0_;
    r.max_u = max_speed_of(state_.mom1.cwiseQuotient(state_.rho), state_.mom2.cwiseQuotient(state_.rho));
    return r;
  }

  FieldSet fields() const {
    return fields_of(grid_, state_.time, state_.rho, state_.mom1.cwiseQuotient(state_.rho),
                     state_.mom2.cwiseQuotient(state_.rho), method_);
  }

  template <class F>
  void advance(double target, F&& on_step) {
    while (!reached(state_.time, target)) {
      double dt = cfl_dt(grid_, state_, cfl_);
      const bool last = reached(state_.time + dt, target);
      if (last) dt = target - state_.time;
      const double m_before = fluid_mass(grid_, state_);
      state_ = maccormack_step(grid_, state_, visc_, dt);
      if (last) state_.time = target;
      ++steps_;
      on_step(std::abs(fluid_mass(grid_, state_) - m_before));
    }
  }

  double time() const { return state_.time; }
  int steps() const { return steps_; }

 private:
  SpatialGrid grid_;
  ViscosityParams visc_;
  double cfl_;
  DerivativeMethod method_;
  FluidState state_;
  double mass0_ = 0.0;
  int steps_ = 0;
};

}  // namespace

SimulationResult run(const ScenarioConfig& cfg, bool write_files, std::ostream* log) {
  validate(cfg);
  const SpatialGrid grid(cfg.n_x);
  const FluidInit init = initial_condition(grid, cfg);
  const bool use_lr = cfg.solver != "maccormack";
  const bool use_mc = cfg.solver != "lowrank";
  const bool both = use_lr && use_mc;
  const fs::path out(cfg.out_dir);
  const fs::path lr_dir = both ? out / "lowrank" : out;
  const fs::path mc_dir = both ? out / "maccormack" : out;

  std::vector<double> snaps = cfg.resolved_snapshot_times();
  std::vector<double> sync = snaps;
  sync.push_back(cfg.t_end);
  std::sort(sync.begin(), sync.end());
  sync.erase(std::unique(sync.begin(), sync.end()), sync.end());
  auto is_snapshot = [&](double t) { return std::find(snaps.begin(), snaps.end(), t) != snaps.end(); };

  SimulationResult res;
  std::optional<LowrankRunner> lr;
  std::optional<MacCormackRunner> mc;
  std::optional<DiagnosticsWriter> lr_csv, mc_csv;
  std::optional<std::ofstream> cmp_csv;
  if (write_files) fs::create_directories(out);
  if (use_lr) {
    lr.emplace(cfg, init);
    if (write_files) lr_csv.emplace(out / "diagnostics.csv");
  }
  if (use_mc) {
    mc.emplace(cfg, init);
    if (write_files) mc_csv.emplace(both ? mc_dir / "diagnostics.csv" : out / "diagnostics.csv");
  }
  if (both && write_files) {
    cmp_csv.emplace(out / "comparison.csv");
    *cmp_csv << "time,err_rho,err_u,err_u1,err_u2,err_vorticity\n";
  }

  auto emit_lr = [&](DiagnosticsRow r) {
    res.lowrank.push_back(r);
    if (lr_csv) lr_csv->write(r);
  };
  auto emit_mc = [&](DiagnosticsRow r) {
    res.maccormack.push_back(r);
    if (mc_csv) mc_csv->write(r);
  };

  // Rows at sync times are emitted once both solvers have arrived there.
  auto sync_point = [&](double t) {
    std::optional<FieldSet> a, b;
    if (lr) a = lr->fields();
    if (mc) b = mc->fields();
    DiagnosticsRow lr_row, mc_row;
    if (lr) lr_row = lr->row();
    if (mc) mc_row = mc->row();
    if (both) {
      const ComparisonRow c = compare_fields(*a, *b);
      lr_row.err_rho = c.err_rho;
      lr_row.err_u = c.err_u;
      if (is_snapshot(t)) {
        res.comparison.push_back(c);
        if (cmp_csv)
          *cmp_csv << format_double(c.time) << ',' << format_double(c.err_rho) << ',' << format_double(c.err_u)
                   << ',' << format_double(c.err_u1) << ',' << format_double(c.err_u2) << ','
                   << format_double(c.err_vorticity) << std::endl;
      }
    }
    if (lr) emit_lr(lr_row);
    if (mc) emit_mc(mc_row);
    if (is_snapshot(t)) {
      if (a) {
        res.lowrank_snapshots.push_back(*a);
        if (write_files) write_fields(lr_dir, *a, cfg.n_x, cfg.snapshot_fields);
      }
      if (b) {
        res.maccormack_snapshots.push_back(*b);
        if (write_files) write_fields(mc_dir, *b, cfg.n_x, cfg.snapshot_fields);
      }
    }
    if (log) {
      *log << "t = " << format_time(t);
      if (lr) *log << "  lowrank steps " << lr->steps() << " mass drift " << format_double(lr_row.mass_drift);
      if (mc) *log << "  maccormack steps " << mc->steps();
      if (both) *log << "  err_rho " << format_double(lr_row.err_rho) << " err_u " << format_double(lr_row.err_u);
      *log << "\n";
    }
  };

  sync_point(0.0);
  for (double target : sync) {
    if (target <= 0.0) continue;
    if (lr) {
      lr->advance(target, [&](const StepReport& rep) {
        res.reports.push_back(rep);
        if (!reached(lr->time(), target)) emit_lr(lr->row());
      });
    }
    if (mc) {
      mc->advance(target, [&](double dm) {
        res.maccormack_mass_steps.push_back(dm);
        if (!reached(mc->time(), target)) emit_mc(mc->row());
      });
    }
    sync_point(target);
  }
  if (lr) res.lowrank_steps = lr->steps();
  if (mc) res.maccormack_steps = mc->steps();
  return res;
}

}  // namespace lrflow
