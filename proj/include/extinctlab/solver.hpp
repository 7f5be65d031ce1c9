#pragma once

// Radial finite-volume solver for u_t - Delta u + a0(|x|) |u|^{q-1} u = 0 on
// the ball B_R with homogeneous Neumann data.
//
// One step is a Lie splitting: the absorption u <- u / (1 + dt a |u|^{q-1})
// (exact sign, never crosses zero) followed by backward Euler diffusion,
// a single tridiagonal solve. Mass is conserved to round-off when a0 = 0.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "extinctlab/grid.hpp"
#include "extinctlab/kernels.hpp"
#include "extinctlab/profiles.hpp"

namespace extinctlab {

enum class PotentialKind { profile, constant, zero };

enum class InitialKind { constant, table, random };

struct InitialData {
  InitialKind kind = InitialKind::constant;
  double value = 1.0;               // constant level, or amplitude for random
  std::vector<double> table_r;      // radial profile samples (linear interp.)
  std::vector<double> table_u;
  std::uint64_t seed = 42;
};

struct ProblemSpec {
  int N = 1;
  double R = 1.0;
  double q = 0.5;
  PotentialKind potential = PotentialKind::zero;
  std::optional<PotentialField> field;  // used when potential == profile
  double epsilon = 1.0;                 // used when potential == constant
  InitialData u0;
  double nu = 0.0;  // declared positivity floor, must not exceed min u0

  void validate() const;
};

struct SolverOptions {
  std::size_t cells = 400;
  double dt = 1e-3;
  double horizon = 10.0;
  double threshold_rel = 1e-10;  // extinction when ||u||_inf < threshold_rel ||u0||_inf
  std::size_t max_snapshots = 2000;
  bool stop_on_extinction = true;
  /// Steps kept after extinction (so ledgers see the zero state).
  std::size_t steps_after_extinction = 0;
  kernels::Backend backend = kernels::Backend::omp;
};

struct Snapshot {
  double t = 0.0;
  std::vector<double> u;
};

struct SolutionTrajectory {
  RadialGrid grid;
  std::vector<double> a;  // potential at cell centres
  double q = 0.5;
  double dt = 0.0;
  std::vector<double> times;  // one entry per step (plus t = 0)
  std::vector<double> mass, l2sq, linf, min_u;
  std::vector<Snapshot> snapshots;  // decimated states, always includes t = 0
  std::optional<double> extinction_time;
  double threshold = 0.0;
  bool nan_abort = false;
  std::string diagnostic;
  std::size_t steps = 0;

  double y0() const { return l2sq.empty() ? 0.0 : l2sq.front(); }
};

/// Potential sampled at the cell centres.
std::vector<double> sample_potential(const ProblemSpec& spec, const RadialGrid& grid);

std::vector<double> initial_state(const ProblemSpec& spec, const RadialGrid& grid);

/// Reusable stepper for a fixed grid, potential and dt.
class Stepper {
 public:
  Stepper(RadialGrid grid, std::vector<double> a, double q, double dt,
          kernels::Backend backend = kernels::Backend::omp);

  /// Advances u by one step in place. Throws NumericError on breakdown.
  void step(std::vector<double>& u) const;

  const RadialGrid& grid() const { return grid_; }
  double dt() const { return dt_; }

 private:
  RadialGrid grid_;
  std::vector<double> a_;
  double q_;
  double dt_;
  kernels::Backend backend_;
  std::vector<double> lower_, diag_, upper_;
};

/// Runs to the horizon (or extinction). NaNs stop the run with nan_abort set.
SolutionTrajectory run(const ProblemSpec& spec, const SolverOptions& opts);

/// T0 = (1 - q)^{-1} eps^{-1} sup|u0|^{1-q}, the extinction time of the ODE
/// u' = -eps u^q started at sup|u0|.
double ode_extinction_time(double eps, double q, double u0_sup);

struct PositivityReport {
  std::vector<double> times;
  std::vector<double> min_u;
  double decay_rate = 0.0;  // fitted -d ln(min u)/dt
  double final_min = 0.0;
  bool collapsed = false;   // min u fell below the extinction threshold
};

PositivityReport positivity_probe(const ProblemSpec& spec, const SolverOptions& opts);
PositivityReport positivity_from_trajectory(const SolutionTrajectory& traj);

}  // namespace extinctlab
