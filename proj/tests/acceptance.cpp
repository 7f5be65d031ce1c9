// Acceptance run: one line per criterion, nonzero exit when any fails.
// Each check measures its own wall time against the budget in the table.

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "extinctlab/analysis.hpp"
#include "extinctlab/cli.hpp"
#include "extinctlab/energy.hpp"
#include "extinctlab/grid.hpp"
#include "extinctlab/numerics.hpp"
#include "extinctlab/odi.hpp"
#include "extinctlab/solver.hpp"
#include "extinctlab/spectral.hpp"

using namespace extinctlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

std::string format(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

struct Family {
  const char* name;
  OmegaProfile w;
  Verdict expected;
};

std::vector<Family> family() {
  return {
      {"s^0.5", OmegaProfile::power(0.5), Verdict::convergent},
      {"s^1", OmegaProfile::power(1.0), Verdict::convergent},
      {"s^1.5", OmegaProfile::power(1.5), Verdict::convergent},
      {"log^-0.5", OmegaProfile::log_power(0.5), Verdict::divergent},
      {"log^-1", OmegaProfile::log_power(1.0), Verdict::divergent},
      {"log^-1.5", OmegaProfile::log_power(1.5), Verdict::convergent},
      {"log^-2", OmegaProfile::log_power(2.0), Verdict::convergent},
      {"log^-3", OmegaProfile::log_power(3.0), Verdict::convergent},
      {"const", OmegaProfile::constant(1.0), Verdict::divergent},
  };
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / "extinctlab_acceptance" / name;
  fs::remove_all(p);
  return p;
}

// 1
Outcome constant_potential() {
  ProblemSpec s;
  s.potential = PotentialKind::constant;
  s.epsilon = 1.0;
  s.u0.value = 1.0;
  SolverOptions o;
  o.horizon = 4.0;
  o.cells = 100;
  o.dt = 2e-3;
  const double coarse = run(s, o).extinction_time.value_or(NAN);
  o.cells = 200;
  o.dt = 1e-3;
  const double fine = run(s, o).extinction_time.value_or(NAN);
  const double err = std::abs(fine - 2.0) / 2.0;
  return {err <= 0.01, format("T coarse %.4f, refined %.4f, rel. error %.2e", coarse, fine, err)};
}

// 2
Outcome mass_conservation() {
  ProblemSpec s;
  s.potential = PotentialKind::zero;
  s.u0.kind = InitialKind::random;
  s.u0.value = 1.0;
  SolverOptions o;
  o.cells = 400;
  o.dt = 1e-3;
  o.horizon = 10.0;
  const auto tr = run(s, o);
  double worst = 0.0;
  for (double m : tr.mass) worst = std::max(worst, std::abs(m - tr.mass.front()) / std::abs(tr.mass.front()));
  return {tr.steps >= 10000 && worst <= 1e-10, format("%zu steps, worst relative mass drift %.2e", tr.steps, worst)};
}

// 3
Outcome dini_closed_form() {
  const auto r = dini_integral(OmegaProfile::log_power(2.0), std::exp(-1.0), 1e-10);
  const double err = std::abs(r.value - 1.0);
  return {err <= 1e-6 && r.verdict == Verdict::convergent,
          format("integral %.12f, |error| %.2e, %s", r.value, err, to_string(r.verdict).c_str())};
}

// 4
Outcome equivalence() {
  int ok = 0, n = 0;
  std::string bad;
  for (const auto& f : family()) {
    ++n;
    const auto e = equivalence_check(f.w);
    if (e.agree && e.integral.verdict == f.expected) ++ok;
    else bad += std::string(" ") + f.name;
  }
  return {ok == n, format("%d/%d profiles agree with each other and the expected verdict%s", ok, n,
                          bad.empty() ? "" : (";" + bad).c_str())};
}

// 5
Outcome kv_series() {
  const auto kv = kv_criterion(RadialPotential::constant(1.0), 20);
  const double s = kv.partial_sums.back(), err = std::abs(s - 2 * std::log(2.0));
  return {err <= 1e-3, format("sum to n = 20: %.8f, 2 ln 2 = %.8f, |error| %.2e", s, 2 * std::log(2.0), err)};
}

// 6
Outcome spectral_oracle() {
  struct Pair {
    RadialPotential a;
    double h;
  };
  const auto b2 = RadialPotential::profile(PotentialField(1.0, OmegaProfile::log_power(2.0)));
  const auto lin = RadialPotential::profile(PotentialField(1.0, OmegaProfile::power(1.0)));
  const auto b15 = RadialPotential::profile(PotentialField(2.0, OmegaProfile::log_power(1.5)));
  const std::vector<Pair> pairs = {
      {RadialPotential::constant(1.0), 0.1}, {RadialPotential::constant(0.0), 0.1},
      {RadialPotential::constant(3.0), 0.02}, {b2, 0.1},  {b2, 0.01},
      {b2, 0.001}, {lin, 0.1}, {lin, 0.01}, {b15, 0.05}, {b15, 0.002}};
  SpectralOptions opts;
  opts.cells = 200;
  double worst = 0.0;
  for (const auto& p : pairs) {
    const double lw = -2.0 * std::log(p.h);
    const auto g = make_radial_grid_from_faces(1, knee_faces(p.a, lw, opts.cells));
    const auto T = spectral_matrix(g, p.a, lw);
    const auto n = static_cast<Eigen::Index>(T.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      A(i, i) = T.d[i];
      if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = T.e[i];
    }
    const double ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A, Eigen::EigenvaluesOnly).eigenvalues()(0);
    const double got = lambda1(p.a, p.h, opts).lambda;
    worst = std::max(worst, std::abs(got - ref) / std::max(1.0, std::abs(ref)));
  }
  return {worst <= 1e-8, format("%zu pairs, worst |lambda - dense| / max(1, lambda) = %.2e", pairs.size(), worst)};
}

// 7
Outcome sandwich() {
  const PotentialField f(1.0, OmegaProfile::log_power(2.0));
  const auto r = verify_ground_state_sandwich(f, num::logspace(1e-3, 1e-1, 9));
  return {r.width_decades <= 2.0 && r.worst_refine_change < 0.05,
          format("ratios in [%.3g, %.3g], width %.3f decades, worst refinement change %.2e",
                 1.0 / r.C, r.C, r.width_decades, r.worst_refine_change)};
}

// 8
Outcome rho_inverse() {
  const PotentialField f(1.0, OmegaProfile::log_power(2.0));
  const auto r = verify_rho_inverse_estimate(f, 1e-12, 1e-6, 1.0);
  return {r.violations == 0, format("%zu samples, %zu violations", r.rows.size(), r.violations)};
}

// 9
Outcome laplace() {
  const auto ex = make_exponents(0.5, 1);
  bool ok = true;
  std::string d;
  for (const auto& [name, w] : {std::pair{"s", OmegaProfile::power(1.0)},
                                std::pair{"log^-2", OmegaProfile::log_power(2.0)}}) {
    const auto t = laplace_ratio(w, 5.0, -2.0, 1.0 - ex.theta2, num::logspace(0.01, 0.1, 21));
    ok = ok && t.min_ratio >= 0.1 && t.max_ratio <= 10.0;
    d += format("%s: [%.3g, %.3g] ", name, t.min_ratio, t.max_ratio);
  }
  return {ok, d + "over tau in [0.01, 0.1]"};
}

// 10
Outcome odi_machinery() {
  namespace ode = boost::numeric::odeint;
  const auto ex = make_exponents(0.5, 1);
  const PotentialField f(1.0, OmegaProfile::power(1.0));
  double worst_jump = 0.0, worst_ode = 0.0, bc_lo = 1e300, bc_hi = 0.0;
  bool mono = true;
  for (double y0 : {1e-3, 1e-4}) {
    OdiConfig c(ex, f);
    c.y0 = y0;
    const auto cur = build_curve(c);
    mono = mono && cur.monotone;
    worst_jump = std::max({worst_jump, cur.jump_at_prime, cur.jump_at_dprime});
    bc_lo = std::min(bc_lo, cur.dprime.bracket_constant);
    bc_hi = std::max(bc_hi, cur.dprime.bracket_constant);

    using State = std::array<double, 1>;
    const double k = 1.0 / (1.0 + ex.lambda2);
    auto rhs = [&](const State& y, State& dy, double t) {
      const double psi2 = std::pow(f(t), 1 - ex.theta2) * s_ramp(f.omega(), t).ds;
      dy[0] = -psi2 * std::pow(std::max(y[0], 0.0) / (3 * c.c0), k);
    };
    State y = {y0};
    double t = cur.tau_prime;
    const double t_end = cur.dprime.tau > t ? cur.dprime.tau : t + 0.05;
    for (int i = 1; i <= 10; ++i) {
      const double t1 = cur.tau_prime + (t_end - cur.tau_prime) * i / 10.0;
      ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-13, 1e-13), rhs, y, t,
                              t1, 1e-5);
      t = t1;
      const double closed = curve_y2(c, cur.tau_prime, t1);
      if (y[0] > 0.0) worst_ode = std::max(worst_ode, std::abs(closed - y[0]) / y[0]);
    }
  }
  const bool ok = mono && worst_jump <= 1e-10 && worst_ode <= 1e-3 && bc_hi / bc_lo < 2.0;
  return {ok, format("jumps %.1e, monotone %s, Y2 vs ODE %.1e, bracket drift %.3f", worst_jump,
                     mono ? "yes" : "no", worst_ode, bc_hi / bc_lo)};
}

// 11
Outcome bound_coherence() {
  const auto ex = make_exponents(0.5, 1);
  int ok = 0, n = 0;
  for (const auto& f : family()) {
    ++n;
    OdiConfig c(ex, PotentialField(1.0, f.w));
    c.y0 = 0.5;
    const auto d = dini_integral(f.w, f.w.s0(), 1e-8).verdict;
    const auto r = extinction_iteration(c, 65536, d);
    if ((r.verdict == BoundVerdict::finite) == (d == Verdict::convergent) &&
        r.verdict != BoundVerdict::inconclusive)
      ++ok;
  }
  // omega = r with u0 = 1/2, so y0 = int u0^2 = 1/2 on (-1, 1)
  ProblemSpec s;
  s.potential = PotentialKind::profile;
  s.field = PotentialField(1.0, OmegaProfile::power(1.0));
  s.u0.value = 0.5;
  SolverOptions o;
  o.horizon = 60.0;
  const auto tr = run(s, o);
  OdiConfig c(ex, *s.field);
  c.y0 = tr.y0();
  const auto rep = extinction_iteration(c, 65536, Verdict::convergent);
  const double T = tr.extinction_time.value_or(INFINITY);
  return {ok == n && T <= 10.0 * rep.R,
          format("%d/%d profiles coherent; omega = r: T = %.3f, R = %.3f, 10 R = %.2f", ok, n, T, rep.R,
                 10 * rep.R)};
}

// 12
Outcome comparison() {
  ProblemSpec s;
  s.potential = PotentialKind::profile;
  s.field = PotentialField(1.0, OmegaProfile::power(1.0));
  s.u0.value = 0.01;
  SolverOptions o;
  o.horizon = 40.0;
  const auto tr = run(s, o);
  const auto L = compute_ledger(tr, num::linspace(0.0, 1.0, 41), &s.field->omega());
  const auto ex = make_exponents(0.5, 1);
  const auto res = ode_inequality_residual(L, *s.field, ex);
  OdiConfig c(ex, *s.field);
  c.y0 = L.y0;
  c.c0 = res.c0;
  const auto cur = build_curve(c);
  const double tol = verify_global_estimate(L).tolerance;
  std::size_t bad = 0;
  double worst = -INFINITY;
  for (std::size_t j = 0; j < L.taus.size(); ++j) {
    const double Y = cur.value(c, L.taus[j]);
    const double gap = L.y[j] - Y;
    worst = std::max(worst, gap);
    if (gap > tol) ++bad;
  }
  return {bad == 0 && res.finite,
          format("c0 fitted %.4g, %zu radii, %zu above the curve, max(y - Ytilde) %.2e, tol %.1e", res.c0,
                 L.taus.size(), bad, worst, tol)};
}

// 13
Outcome positivity_contrast() {
  auto cfg = parse_config(
      "[profile]\nkind = singular\nscale = 4\n[problem]\nu0 = 0.5\nhorizon = 50\n");
  const auto a = cmd_simulate(cfg, scratch("singular"));
  cfg = parse_config("[profile]\nkind = power\nalpha = 1\n[problem]\nu0 = 0.5\nhorizon = 50\n");
  const auto b = cmd_simulate(cfg, scratch("linear"));
  const std::string va = a.summary["verdict"], vb = b.summary["verdict"];
  const double m = a.summary["min_u_final"].is_number() ? a.summary["min_u_final"].get<double>() : 0.0;
  return {va == "positivity-persisted" && vb == "extinct" && m > 1e-6,
          format("singular: %s (min u %.3g at t = 50); omega = r: %s", va.c_str(), m, vb.c_str())};
}

}  // namespace

int main() {
  const std::vector<Criterion> all = {
      {1, "constant-potential extinction time", 30, constant_potential},
      {2, "mass conservation without absorption", 30, mass_conservation},
      {3, "Dini integral closed form", 1, dini_closed_form},
      {4, "integral and series verdicts agree", 10, equivalence},
      {5, "KV series for a = 1", 10, kv_series},
      {6, "inverse iteration against dense eigensolver", 10, spectral_oracle},
      {7, "ground state sandwich", 120, sandwich},
      {8, "rho inverse estimate", 10, rho_inverse},
      {9, "Laplace-type ratio bracket", 30, laplace},
      {10, "dominating curve machinery", 30, odi_machinery},
      {11, "extinction bound coherence", 120, bound_coherence},
      {12, "ledger energy below the dominating curve", 60, comparison},
      {13, "positivity versus extinction", 120, positivity_contrast},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt <= c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %2d %s  %s: %s [%.2f s / %.0f s%s]\n", c.id, pass ? "PASS" : "FAIL", c.title,
                o.detail.c_str(), dt, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
