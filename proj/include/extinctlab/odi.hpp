#pragma once

// The dominating curve for the energy ODI and the round-by-round extinction
// time bound built on top of it.
//
// Ytilde is a plateau y0 up to tau', then the explicit solution Y2 of
// Y' = -psi_2 (Y/3c0)^{1/(1+lambda_2)} up to tau'', then the explicit Y1
// (psi_1, lambda_1) until it reaches zero.

#include <optional>
#include <string>
#include <vector>

#include "extinctlab/analysis.hpp"
#include "extinctlab/energy.hpp"
#include "extinctlab/profiles.hpp"

namespace extinctlab {

struct OdiConfig {
  ExponentPack ex;
  PotentialField field;
  double c0 = 1.0;
  double c4 = 1.0;
  double c7 = 1.0;
  double cbar = 1.0;  // Poincare rate; 1/R^2 for the unit ball
  double gamma = 1.0;
  double y0 = 1e-4;
  double tau_max = 100.0;  // largest radius searched

  OdiConfig(ExponentPack e, PotentialField f) : ex(e), field(std::move(f)) {}
  void validate() const;
};

struct RootResult {
  double tau = 0.0;
  double residual = 0.0;  // relative residual of the defining equation
};

/// tau' from y0 = 3 c0 a(tau')^{2/(1-q)}, i.e.
/// tau^2/omega(tau) = (2/(1-q)) / (ln 3c0 + (2/(1-q)) ln d0 - ln y0).
/// Throws DomainError when y0 is too large for a plateau.
RootResult solve_tau_prime(const OdiConfig& cfg);

/// int_{t0}^{t1} a(r)^{1-theta2} s'(r) dr.
double psi2_integral(const OdiConfig& cfg, double t0, double t1);
/// int_{t0}^{t1} a(r)^{1-theta1} dr.
double psi1_integral(const OdiConfig& cfg, double t0, double t1);

/// Y2(tau) for tau >= tau', clamped at zero past its root.
double curve_y2(const OdiConfig& cfg, double tau_prime, double tau);
/// Y1(tau) for tau >= tau'' started from y_start = Y2(tau'').
double curve_y1(const OdiConfig& cfg, double tau_dprime, double y_start, double tau);

/// ln of 3 c0 a^{2/(1-q)} s'^{2/((1-q)(theta1-theta2))}, the lower boundary
/// of the middle region.
double log_boundary_b1(const OdiConfig& cfg, double tau);
/// ln of 3 c0 a^{2/(1-q)}.
double log_boundary_b0(const OdiConfig& cfg, double tau);

struct TauDoublePrime {
  double tau = 0.0;
  double residual = 0.0;
  bool degenerate = false;      // Y2 starts at or below the boundary: tau'' = tau'
  bool region2_skipped = false; // no crossing below tau_max
  /// a(tau'')^{1-theta2} s'(tau'')^2 / y0^{(1-theta2)(1-q)/2}
  double bracket_constant = 0.0;
};

TauDoublePrime solve_tau_double_prime(const OdiConfig& cfg, double tau_prime);

struct TauTriplePrime {
  std::optional<double> y1_zero;  // where Y1 reaches 0
  std::optional<double> direct;   // a^{1-theta2} s'^2 = c4 y0^{kappa2}
  double tau_bar = 0.0;           // tau^2/omega(tau) = c7 / ln(1/y0)
  double tau = 0.0;               // end of the curve
  bool bumped = false;            // raised to 2 tau''
};

TauTriplePrime solve_tau_triple_prime(const OdiConfig& cfg, double tau_dprime,
                                      double y2_at_dprime);

/// tau with tau^2/omega(tau) = c7 / L, L = ln(1/y) given in log form.
double tau_bar_from_log(const OmegaProfile& omega, double c7, double log_L);
double tau_bar(const OmegaProfile& omega, double c7, double y);

enum class CurvePiece { plateau, y2, y1 };
std::string to_string(CurvePiece p);

struct OdiCurve {
  double tau_prime = 0.0;
  TauDoublePrime dprime;
  TauTriplePrime tprime;
  double y_at_dprime = 0.0;
  std::vector<double> tau, Y;
  std::vector<CurvePiece> piece;
  double jump_at_prime = 0.0;   // |Y2(tau') - y0| / y0
  double jump_at_dprime = 0.0;  // |Y1(tau'') - Y2(tau'')| / Y2(tau'')
  bool monotone = false;
  bool reaches_zero = false;
  std::vector<std::string> flags;

  /// Ytilde at an arbitrary radius (plateau/Y2/Y1 pieces, 0 past the end).
  double value(const OdiConfig& cfg, double t) const;
};

OdiCurve build_curve(const OdiConfig& cfg, std::size_t samples = 400);

enum class Region { omega0 = 0, omega1 = 1, omega2 = 2 };
std::string to_string(Region r);

/// Index of the smallest F_i(tau, y) = psi_i(tau) (y/3c0)^{1/(1+lambda_i)},
/// ties to the lower index.
Region region_classifier(const OdiConfig& cfg, double tau, double y);

struct Round {
  std::size_t i = 0;
  double tau = 0.0;
  double t = 0.0;
  double s = 0.0;
  double log_energy = 0.0;  // ln ln(1/y_i), y_i = y0^{(1+gamma)^i}
};

enum class BoundVerdict { finite, unbounded, inconclusive };
std::string to_string(BoundVerdict v);

struct SumCheck {
  std::size_t j = 0;
  double sum = 0.0;       // sum_{i<=j} omega(C1 lambda^i)
  double integral = 0.0;  // int_{C1 lambda^j}^{C1} omega(s)/s ds / ln(1/lambda)
  double ratio = 0.0;
};

struct ExtinctionBoundReport {
  std::vector<Round> rounds;
  double sum_t = 0.0, sum_s = 0.0;
  double tail = 0.0;
  double R = 0.0;  // +inf when unbounded
  BoundVerdict verdict = BoundVerdict::inconclusive;
  std::vector<double> window_sums;  // rounds [2^j, 2^{j+1})
  std::vector<SumCheck> sum_checks;
  double sum_check_factor = 0.0;    // worst max(ratio, 1/ratio)
  std::optional<Verdict> dini;      // cross-reference when supplied
  bool dini_consistent = true;
};

ExtinctionBoundReport extinction_iteration(const OdiConfig& cfg, std::size_t max_rounds = 65536,
                                           std::optional<Verdict> dini = std::nullopt);

}  // namespace extinctlab
