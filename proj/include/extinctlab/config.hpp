#pragma once

// Run configuration read from a flat INI file.
//
//   [run]      seed
//   [profile]  kind, alpha, beta, s0, omega0, scale, delta, table, d0
//   [problem]  N, R, q, potential, epsilon, u0, u0_kind, nu, horizon, cells,
//              dt, max_snapshots, backend, ledger_taus
//   [odi]      gamma, c0, c4, c7, cbar, y0, tau_max, rounds, scale_factor,
//              simulation
//   [spectral] potential, constant, h_min, h_max, h_count, K, q, n_lo, n_hi,
//              kv_n_max, cells, s_lo, s_hi, alpha
//
// Every key has a default; a missing section means all defaults.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "extinctlab/kernels.hpp"
#include "extinctlab/profiles.hpp"
#include "extinctlab/solver.hpp"

namespace extinctlab {

struct ProfileSection {
  std::string kind = "log_power";
  double alpha = 1.0;
  double beta = 2.0;
  std::optional<double> s0;
  double omega0 = 1.0;
  double scale = 4.0;
  double delta = 0.5;
  std::string table;  // CSV path for kind = table
  double d0 = 1.0;

  OmegaProfile omega() const;
  PotentialField field() const { return PotentialField(d0, omega()); }
};

struct ProblemSection {
  int N = 1;
  double R = 1.0;
  double q = 0.5;
  std::string potential = "profile";  // profile | constant | zero
  double epsilon = 1.0;
  double u0 = 1.0;
  std::string u0_kind = "constant";   // constant | random
  double nu = 0.0;
  double horizon = 20.0;
  std::size_t cells = 400;
  double dt = 1e-3;
  std::size_t max_snapshots = 2000;
  std::string backend = "omp";
  std::size_t ledger_taus = 41;
};

struct OdiSection {
  double gamma = 1.0;
  double c0 = 1.0;
  double c4 = 1.0;
  double c7 = 1.0;
  double cbar = 1.0;
  std::optional<double> y0;  // default: int u0^2 from [problem]
  double tau_max = 100.0;
  std::size_t rounds = 65536;
  double scale_factor = 10.0;
  std::string simulation;    // summary.json of a simulate run to check against
};

struct SpectralSection {
  std::string potential = "profile";  // profile | constant
  double constant = 1.0;
  double h_min = 1e-3;
  double h_max = 1e-1;
  std::size_t h_count = 9;
  double K = 1.0;
  std::optional<double> q;  // default: [problem] q
  std::size_t n_lo = 2;
  std::size_t n_hi = 40;
  std::size_t kv_n_max = 20;
  std::size_t cells = 400;
  double s_lo = 1e-12;
  double s_hi = 1e-6;
  double alpha = 1.0;
};

struct RunConfig {
  std::uint64_t seed = 42;
  ProfileSection profile;
  ProblemSection problem;
  OdiSection odi;
  SpectralSection spectral;
  std::filesystem::path source;

  ProblemSpec problem_spec() const;
  SolverOptions solver_options() const;
  kernels::Backend backend() const;
  double problem_q() const { return problem.q; }
  double spectral_q() const { return spectral.q.value_or(problem.q); }
};

/// Throws InvalidInput with the offending key on any parse error.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

}  // namespace extinctlab
