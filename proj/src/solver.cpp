#include "extinctlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "extinctlab/error.hpp"
#include "extinctlab/numerics.hpp"

namespace extinctlab {

void ProblemSpec::validate() const {
  if (N < 1 || N > 3) throw InvalidInput("problem: N must be 1, 2 or 3");
  if (!(R > 0.0)) throw InvalidInput("problem: R must be > 0");
  if (!(q > 0.0 && q < 1.0)) throw InvalidInput("problem: q must lie in (0, 1)");
  if (potential == PotentialKind::profile && !field) {
    throw InvalidInput("problem: profile potential requested without a profile");
  }
  if (potential == PotentialKind::constant && !(epsilon >= 0.0)) {
    throw InvalidInput("problem: epsilon must be >= 0");
  }
  if (nu < 0.0) throw InvalidInput("problem: nu must be >= 0");
  if (u0.kind == InitialKind::table &&
      (u0.table_r.size() != u0.table_u.size() || u0.table_r.size() < 2)) {
    throw InvalidInput("problem: initial table needs matching r/u columns");
  }
}

std::vector<double> sample_potential(const ProblemSpec& spec, const RadialGrid& grid) {
  std::vector<double> a(grid.size(), 0.0);
  switch (spec.potential) {
    case PotentialKind::zero: break;
    case PotentialKind::constant: std::fill(a.begin(), a.end(), spec.epsilon); break;
    case PotentialKind::profile:
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = spec.field->value(grid.centers[i]);
      break;
  }
  return a;
}

std::vector<double> initial_state(const ProblemSpec& spec, const RadialGrid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> u(n, spec.u0.value);
  if (spec.u0.kind == InitialKind::table) {
    const auto& xr = spec.u0.table_r;
    const auto& xu = spec.u0.table_u;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = grid.centers[i];
      if (r <= xr.front()) {
        u[i] = xu.front();
      } else if (r >= xr.back()) {
        u[i] = xu.back();
      } else {
        const auto k = static_cast<std::size_t>(
            std::upper_bound(xr.begin(), xr.end(), r) - xr.begin());
        const double w = (r - xr[k - 1]) / (xr[k] - xr[k - 1]);
        u[i] = (1.0 - w) * xu[k - 1] + w * xu[k];
      }
    }
  } else if (spec.u0.kind == InitialKind::random) {
    std::mt19937_64 rng(spec.u0.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    constexpr int modes = 6;
    double b[modes];
    for (double& x : b) x = U(rng) / modes;
    for (std::size_t i = 0; i < n; ++i) {
      double v = 1.5;
      for (int k = 0; k < modes; ++k) {
        v += b[k] * std::cos((k + 1) * std::numbers::pi * grid.centers[i] / spec.R);
      }
      u[i] = spec.u0.value * v;
    }
  }
  return u;
}

Stepper::Stepper(RadialGrid grid, std::vector<double> a, double q, double dt,
                 kernels::Backend backend)
    : grid_(std::move(grid)), a_(std::move(a)), q_(q), dt_(dt), backend_(backend) {
  if (!(dt > 0.0)) throw InvalidInput("stepper: dt must be > 0");
  if (a_.size() != grid_.size()) throw InvalidInput("stepper: potential size mismatch");
  const std::size_t n = grid_.size();
  lower_.assign(n, 0.0);
  upper_.assign(n, 0.0);
  diag_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double wl = grid_.coupling[i];
    const double wr = grid_.coupling[i + 1];
    lower_[i] = -dt * wl;
    upper_[i] = -dt * wr;
    diag_[i] = grid_.volumes[i] + dt * (wl + wr);
  }
}

void Stepper::step(std::vector<double>& u) const {
  kernels::absorb(backend_, u, a_, q_, dt_);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] *= grid_.volumes[i];
  solve_tridiagonal(lower_, diag_, upper_, u);
}

SolutionTrajectory run(const ProblemSpec& spec, const SolverOptions& opts) {
  spec.validate();
  if (!(opts.horizon >= 0.0)) throw InvalidInput("run: horizon must be >= 0");
  SolutionTrajectory tr;
  tr.grid = make_radial_grid(spec.N, spec.R, opts.cells);
  tr.a = sample_potential(spec, tr.grid);
  tr.q = spec.q;
  tr.dt = opts.dt;
  auto u = initial_state(spec, tr.grid);
  const double u0_min = *std::min_element(u.begin(), u.end());
  if (spec.nu > u0_min) {
    throw InvalidInput("problem: declared floor nu exceeds min u0");
  }
  const Stepper stepper(tr.grid, tr.a, spec.q, opts.dt, opts.backend);

  const auto n_steps = static_cast<std::size_t>(std::ceil(opts.horizon / opts.dt - 1e-9));
  const std::size_t stride =
      std::max<std::size_t>(1, (n_steps + opts.max_snapshots - 1) / std::max<std::size_t>(1, opts.max_snapshots));

  auto record = [&](double t) {
    const auto m = kernels::moments(opts.backend, u, tr.grid.volumes);
    tr.times.push_back(t);
    tr.mass.push_back(m.mass);
    tr.l2sq.push_back(m.l2sq);
    tr.linf.push_back(m.linf);
    tr.min_u.push_back(m.min);
    return m;
  };

  const auto m0 = record(0.0);
  tr.snapshots.push_back({0.0, u});
  tr.threshold = opts.threshold_rel * m0.linf;
  if (m0.linf <= tr.threshold) tr.extinction_time = 0.0;

  std::size_t after = 0;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * opts.dt;
    try {
      stepper.step(u);
    } catch (const NumericError& e) {
      tr.nan_abort = true;
      tr.diagnostic = e.what();
    }
    const auto m = record(t);
    tr.steps = k;
    if (!tr.nan_abort && !(std::isfinite(m.l2sq) && std::isfinite(m.linf))) {
      tr.nan_abort = true;
      std::ostringstream os;
      os << "non-finite state at t=" << t;
      tr.diagnostic = os.str();
    }
    if (tr.nan_abort) {
      tr.snapshots.push_back({t, u});
      break;
    }
    const bool extinct_now = m.linf < tr.threshold;
    if (extinct_now && !tr.extinction_time) tr.extinction_time = t;
    const bool done = k == n_steps ||
                      (opts.stop_on_extinction && tr.extinction_time &&
                       after++ >= opts.steps_after_extinction);
    if (k % stride == 0 || done) tr.snapshots.push_back({t, u});
    if (done) break;
  }
  return tr;
}

double ode_extinction_time(double eps, double q, double u0_sup) {
  if (!(eps > 0.0)) throw InvalidInput("ode_extinction_time: eps must be > 0");
  if (!(q > 0.0 && q < 1.0)) throw InvalidInput("ode_extinction_time: q must lie in (0,1)");
  if (u0_sup < 0.0) throw InvalidInput("ode_extinction_time: negative sup");
  return std::pow(u0_sup, 1.0 - q) / (eps * (1.0 - q));
}

PositivityReport positivity_from_trajectory(const SolutionTrajectory& traj) {
  PositivityReport rep;
  const std::size_t n = traj.times.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 1000);
  std::vector<double> ts, ls;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = traj.min_u[i];
    if (m < traj.threshold) rep.collapsed = true;
    if (i % stride == 0 || i + 1 == n) {
      rep.times.push_back(traj.times[i]);
      rep.min_u.push_back(m);
      if (m > 0.0) {
        ts.push_back(traj.times[i]);
        ls.push_back(std::log(m));
      }
    }
  }
  rep.final_min = n ? traj.min_u.back() : 0.0;
  if (ts.size() >= 2 && ts.back() > ts.front()) rep.decay_rate = -num::ls_slope(ts, ls);
  if (rep.decay_rate == 0.0) rep.decay_rate = 0.0;  // no -0 in reports
  return rep;
}

PositivityReport positivity_probe(const ProblemSpec& spec, const SolverOptions& opts) {
  auto o = opts;
  o.stop_on_extinction = false;
  return positivity_from_trajectory(run(spec, o));
}

}  // namespace extinctlab
