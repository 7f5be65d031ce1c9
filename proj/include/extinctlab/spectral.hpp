#pragma once

// Ground states of -Delta + W a(|x|) on the unit ball with Neumann boundary,
// the sequences mu(alpha), mu_n built from them and the checks of the
// semiclassical estimates.
//
// Weights W are passed as ln W so that 2^n and n^{Kn(1-q)} stay finite; the
// potential enters the matrix as exp(ln W + ln a) per cell.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "extinctlab/analysis.hpp"
#include "extinctlab/grid.hpp"
#include "extinctlab/kernels.hpp"
#include "extinctlab/profiles.hpp"

namespace extinctlab {

/// a(r): a constant (zero included) or d0 exp(-omega(r)/r^2).
class RadialPotential {
 public:
  static RadialPotential constant(double c);
  static RadialPotential profile(PotentialField field);

  bool is_constant() const { return !field_; }
  double constant_value() const { return c_; }
  const std::optional<PotentialField>& field() const { return field_; }
  double log_value(double r) const;
  std::string name() const;

 private:
  double c_ = 0.0;
  std::optional<PotentialField> field_;
};

/// Symmetric tridiagonal matrix: diag d, off-diagonal e (size n-1).
struct SymTridiag {
  std::vector<double> d, e;
  std::size_t size() const { return d.size(); }
  /// Number of eigenvalues below x.
  std::size_t sturm_count(double x) const;
  /// Gershgorin bounds on the spectrum.
  double lower_bound() const;
  double upper_bound() const;
};

/// Faces on [0, 1] concentrated at the knee r_k where W a(r_k) = 1:
/// 40% of the cells below 0.8 r_k, 30% in [0.8, 1.2] r_k, the rest above.
/// Uniform when the knee is missing.
std::vector<double> knee_faces(const RadialPotential& a, double log_weight, std::size_t cells);

/// M^{-1/2}(K + W P)M^{-1/2} on the grid: M cell volumes, K the Neumann
/// stiffness, P the potential mass.
SymTridiag spectral_matrix(const RadialGrid& grid, const RadialPotential& a, double log_weight);

struct GroundState {
  double lambda = 0.0;
  std::vector<double> v;       // unit eigenvector of the symmetric matrix
  std::vector<double> u;       // cell values M^{-1/2} v
  double residual = 0.0;       // ||T v - lambda v|| / max(1, lambda)
  std::size_t iterations = 0;
  bool fallback = false;       // Sturm bisection used
  std::size_t cells = 0;
};

/// Smallest eigenvalue and eigenvector of T. Shifted inverse iteration from
/// the Gershgorin bound, accepted when the Sturm count confirms it is the
/// lowest; otherwise Sturm bisection and a few inverse steps for the vector.
GroundState lowest_eigenpair(const SymTridiag& T);

struct SpectralOptions {
  std::size_t cells = 400;
  int N = 1;
  kernels::Backend backend = kernels::Backend::omp;
};

GroundState ground_state(const RadialPotential& a, double log_weight,
                         const SpectralOptions& opts = {});
/// lambda_1(h): weight h^{-2}.
GroundState lambda1(const RadialPotential& a, double h, const SpectralOptions& opts = {});
/// mu(alpha) = lambda_1(alpha^{(1-q)/2}), alpha given as ln alpha.
GroundState mu_of_log_alpha(const RadialPotential& a, double q, double log_alpha,
                            const SpectralOptions& opts = {});
GroundState mu_of_alpha(const RadialPotential& a, double q, double alpha,
                        const SpectralOptions& opts = {});

struct SpectralScan {
  std::vector<double> x;        // h values or n indices
  std::vector<double> lambda;   // lambda_1(h) or mu_n
  std::vector<double> residual;
  std::vector<std::size_t> iterations;
  std::vector<bool> fallback;
};

/// lambda_1 over a list of h, one independent solve per entry.
SpectralScan scan_lambda1(const RadialPotential& a, const std::vector<double>& hs,
                          const SpectralOptions& opts = {});

/// mu_n with weight 2^n, n = 0..n_max.
SpectralScan mu_n_sequence(const RadialPotential& a, std::size_t n_max,
                           const SpectralOptions& opts = {});

struct SeriesTerm {
  std::size_t n = 0;
  double log_alpha = 0.0;
  double mu = 0.0;
  double addends[3] = {0, 0, 0};  // ln mu, ln(alpha_n/alpha_{n+1}), 1
  double log_term = 0.0;
  bool flagged = false;           // mu <= 1
};

struct CriterionReport {
  std::vector<SeriesTerm> terms;
  std::vector<double> partial_sums;
  SeriesDiagnosis diagnosis;  // slope of the computed terms
  /// Weighted series only: condensation test on the tail, with mu extended past
  /// n_hi by C h^{-2} rho^{-1}(h^2) and C fitted on the computed terms.
  std::optional<SeriesDiagnosis> tail;
  double semiclassical_constant = 0.0;
  double semiclassical_spread = 0.0;  // max/min of the fitted ratios
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> warnings;
};

/// ln(h^{-2} rho^{-1}(h^2)) for ln h^{-2} = exp(log_lw), with the parts
/// needed to form ln(n a_n) without cancellation: the value equals
/// log_lw + eps - log_omega.
struct SemiclassicalLog {
  double log_r = 0.0;      // knee ln r with a(r) r^2 = h^2
  double log_omega = 0.0;  // ln omega(r)
  double eps = 0.0;
  double value = 0.0;
};
SemiclassicalLog semiclassical_log(const PotentialField& field, double log_lw);

/// Weighted ground-state series with alpha_n = n^{-Kn}, n in [n_lo, n_hi]. The verdict
/// is the tail test.
CriterionReport ground_state_series(const RadialPotential& a, double q, double K, std::size_t n_lo,
                                 std::size_t n_hi, const SpectralOptions& opts = {});

/// KV series on mu_n for weights 2^n.
CriterionReport kv_criterion(const RadialPotential& a, std::size_t n_max,
                             const SpectralOptions& opts = {});

struct SandwichRow {
  double h = 0.0;
  double lambda = 0.0;
  double rho_inv = 0.0;  // rho^{-1}(h^2)
  double ratio = 0.0;    // lambda h^2 / rho^{-1}(h^2)
  double ratio_fine = 0.0;
  double refine_change = 0.0;
};

struct SandwichReport {
  std::vector<SandwichRow> rows;
  double C = 0.0;              // ratios lie in [1/C, C]
  double width_decades = 0.0;  // log10(max/min)
  double worst_refine_change = 0.0;
  std::vector<std::string> warnings;
};

/// Ratios lambda_1(h) h^2 / rho^{-1}(h^2) on opts.cells and 2 opts.cells.
SandwichReport verify_ground_state_sandwich(const PotentialField& field, const std::vector<double>& hs,
                               const SpectralOptions& opts = {});

struct RhoInverseRow {
  double s = 0.0;
  double lower = 0.0, rho_inv = 0.0, upper = 0.0;
  bool ok = false;
};

struct RhoInverseReport {
  std::vector<RhoInverseRow> rows;
  std::size_t violations = 0;
  double threshold = 0.0;  // every s at or below passes
  std::size_t r_bracket_violations = 0;  // (1/ln 1/z)^{1/delta} <= r(z) <= (omega0/ln 1/z)^{1/2}
  std::size_t rho_inv_below_s = 0;       // samples with rho^{-1}(s) < s
  std::vector<std::string> warnings;
};

RhoInverseReport verify_rho_inverse_estimate(const PotentialField& field, double s_lo, double s_hi,
                               double alpha, std::size_t samples = 61);

}  // namespace extinctlab
