#pragma once

// Energy functionals of a computed trajectory on the outer regions
// Omega(tau) = {|x| > tau}, and empirical probes of the inequalities they
// satisfy (global estimate, the four-term relation, the interpolation
// inequality and the ODI for y(tau)).

#include <optional>
#include <string>
#include <vector>

#include "extinctlab/kernels.hpp"
#include "extinctlab/profiles.hpp"
#include "extinctlab/solver.hpp"

namespace extinctlab {

struct ExponentPack {
  double q = 0.5;
  int N = 1;
  double theta1 = 0.0, theta2 = 0.0;
  double lambda0 = 0.0, lambda1 = 0.0, lambda2 = 0.0;

  /// lambda_i / (1 + lambda_i), the power that linearises Y_i.
  double kappa(int i) const;
  double lambda(int i) const;
};

ExponentPack make_exponents(double q, int N);

struct EnergyLedger {
  std::vector<double> taus;
  std::vector<double> times;  // snapshot times
  // [snapshot][tau]
  std::vector<std::vector<double>> H, E, Jdens;
  std::vector<double> s_of_tau;  // lower time limit s(tau)
  std::vector<double> I;         // I_{s(tau)}^T(tau)
  std::vector<double> J;         // J_{s(tau)}^T(tau)
  std::vector<double> y;         // = I
  // whole-domain columns (tau = 0)
  std::vector<double> H0, E0;
  double y0 = 0.0;
  double T = 0.0;
  std::vector<std::string> warnings;

  /// H(t, tau_j) and E(t, tau_j), linear in t between snapshots.
  double H_at(double t, std::size_t j) const;
  double E_at(double t, std::size_t j) const;
  /// int_s^T f(t, tau_j) dt for f = E (dissipation) or Jdens (surface flux).
  double I_between(double s, double T, std::size_t j) const;
  double J_between(double s, double T, std::size_t j) const;
};

/// Builds the ledger on the given radii. When omega is given, y uses the
/// time ramp s(tau) = tau^4/omega(tau); otherwise s = 0. Radii outside
/// [0, R] are clipped with a warning.
EnergyLedger compute_ledger(const SolutionTrajectory& traj, std::vector<double> taus,
                            const OmegaProfile* omega,
                            kernels::Backend backend = kernels::Backend::omp);

struct GlobalEstimateReport {
  std::vector<double> t, H, I, slack;
  double min_slack = 0.0;
  double tolerance = 0.0;  // time-quadrature error estimate
  bool holds = false;
};

/// y0 - H(t,0) - I_0^t(0) >= -tolerance at every snapshot time.
GlobalEstimateReport verify_global_estimate(const EnergyLedger& ledger);

struct LocalEnergyRow {
  double tau = 0.0;
  double lhs = 0.0;
  double terms[4] = {0, 0, 0, 0};
  double ratio = 0.0;  // lhs / sum(terms)
  bool skipped = false;
};

struct LocalEnergyReport {
  std::vector<LocalEnergyRow> rows;
  double c_hat = 0.0;  // minimal uniform constant
  std::vector<std::string> warnings;
};

/// H(T,tau) + I_s^T(tau) against the four right-hand terms with unit constants.
LocalEnergyReport probe_local_energy(const EnergyLedger& ledger, const ExponentPack& ex,
                                      const PotentialField& field, double s, double T);

struct InterpolationCorpusItem {
  std::string label;
  std::vector<double> v;  // cell values
};

/// Constants, Gaussian bumps and seeded random cosine sums on the grid.
std::vector<InterpolationCorpusItem> interpolation_corpus(const RadialGrid& g,
                                                          std::size_t n_random,
                                                          std::uint64_t seed);

struct InterpolationReport {
  double c2_min = 0.0;  // |Omega|^{1/2} / |Omega_0|^{1/lambda}
  double c2 = 0.0;      // the value used when fitting c1
  double c1 = 0.0;      // minimal c1 over the corpus for that c2
  std::string c1_witness;
  double c1_outside = 0.0;  // largest ||v||/||grad v|| among v vanishing on Omega_0
  std::size_t corpus_size = 0;
};

/// Fits the constants of ||v|| <= c1 ||grad v|| + c2 ||v||_{L^lambda(Omega_0)}
/// with Omega_0 = {r0_lo < |x| < r0_hi}. c2 is set to 2 c2_min.
InterpolationReport probe_interpolation(const RadialGrid& g, double r0_lo, double r0_hi,
                                        double lambda,
                                        const std::vector<InterpolationCorpusItem>& corpus);

struct OdiResidualRow {
  double tau = 0.0;
  double y = 0.0;
  double dy = 0.0;
  double sum = 0.0;  // sum_i (-y'/psi_i)^{1+lambda_i}
  double residual = 0.0;
  bool clipped = false;
};

struct OdiResidualReport {
  std::vector<OdiResidualRow> rows;
  double c0 = 0.0;  // minimal constant with y <= c0 * sum
  bool finite = true;
  std::vector<std::string> warnings;
};

/// psi_0 = a s', psi_1 = a^{1-theta1}, psi_2 = a^{1-theta2} s'.
struct PsiValues {
  double psi[3] = {0, 0, 0};
};
PsiValues psi_functions(const PotentialField& field, const ExponentPack& ex, double tau);

OdiResidualReport ode_inequality_residual(const EnergyLedger& ledger,
                                          const PotentialField& field,
                                          const ExponentPack& ex);

}  // namespace extinctlab
