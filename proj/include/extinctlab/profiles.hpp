#pragma once

// Modulus profiles omega(s), the degenerate potential a(r) = d0 exp(-omega(r)/r^2)
// built from them, the inverse maps r(z), rho(z) used by the spectral criteria,
// and the time ramp s(tau) = tau^4 / omega(tau).

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace extinctlab {

enum class OmegaKind {
  power,      // s^alpha
  log_power,  // (ln 1/s)^(-beta)
  constant,   // omega0
  table,      // monotone cubic through (s, omega) samples
  singular,   // scale * (1 + ln 1/s), unbounded at 0
  custom,     // user callable, derivative by central differences
};

std::string to_string(OmegaKind kind);
OmegaKind omega_kind_from_string(const std::string& name);

/// A modulus function omega(s).
///
/// Every kind is frozen at its cutoff s0: omega(s) = omega(s0) for s >= s0,
/// which keeps the profile bounded and nondecreasing on the whole half line.
/// Values and logarithms can be requested at ln(s) so that radii far below
/// the double-precision range (ln s ~ -1e18) stay representable.
class OmegaProfile {
 public:
  static OmegaProfile power(double alpha, double s0 = 1.0, double delta = 0.5);
  static OmegaProfile log_power(double beta, double s0 = 0.36787944117144233,
                                double delta = 0.5);
  static OmegaProfile constant(double omega0, double delta = 0.5);
  /// omega(s) = scale * (1 + ln(1/s)) for s < 1, scale beyond: the
  /// omega -> infinity regime that fails vanishes_at_zero.
  static OmegaProfile singular(double scale, double delta = 0.5);
  /// Samples must be strictly increasing in s with at least four rows.
  /// Below the first sample omega is extended linearly to (0, 0).
  static OmegaProfile table(std::vector<double> s, std::vector<double> omega,
                            double delta = 0.5);
  static OmegaProfile table_from_csv(const std::string& path, double delta = 0.5);
  static OmegaProfile custom(std::function<double(double)> fn, double s0,
                             double omega0, double delta = 0.5,
                             std::string label = "custom");

  OmegaKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double s0() const { return s0_; }
  double delta() const { return delta_; }
  /// Upper bound claimed for the bounded check.
  double omega0() const { return omega0_; }
  std::string name() const;

  OmegaProfile with_delta(double delta) const;

  double operator()(double s) const { return value(s); }
  double value(double s) const;
  double derivative(double s) const;
  bool has_analytic_derivative() const { return kind_ != OmegaKind::custom; }

  /// omega(e^t).
  double value_at_log(double log_s) const;
  /// ln omega(e^t); -inf where omega vanishes.
  double log_value_at_log(double log_s) const;

  /// lim_{r->0} omega(r)/r^2 (may be +inf).
  double exponent_limit_at_zero() const;

 private:
  OmegaProfile() = default;

  OmegaKind kind_ = OmegaKind::constant;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double s0_ = 1.0;
  double delta_ = 0.5;
  double omega0_ = 1.0;
  std::string label_;
  struct Table;
  std::shared_ptr<const Table> table_;
  std::shared_ptr<const std::function<double(double)>> fn_;
};

struct ConditionCheck {
  std::string name;
  bool passed = false;
  std::optional<double> witness;  // first violating sample
  std::string detail;
};

/// Sampled verdicts for the structural checks (monotone, vanishes_at_zero,
/// bounded) and the technical ones (log_slope, power_floor, exp_monotone).
///
/// The technical conditions only need to hold on some (0, s*). They are
/// reported as holding when the violation-free prefix of the grid spans at
/// least one decade; valid_up_to records where that prefix ends.
struct ConditionReport {
  std::vector<ConditionCheck> checks;
  double technical_valid_up_to = 0.0;

  const ConditionCheck& get(const std::string& name) const;
  bool passed(const std::string& name) const { return get(name).passed; }
  bool all_passed() const;
};

/// Log-spaced samples in [s0 * 1e-12, s0 * (1 - 1e-9)].
std::vector<double> default_condition_grid(const OmegaProfile& profile,
                                           std::size_t n = 10000);

ConditionReport check_conditions(const OmegaProfile& profile,
                                 std::span<const double> grid);

/// The radially symmetric minorant a(r) = d0 * exp(-omega(r)/r^2).
class PotentialField {
 public:
  PotentialField(double d0, OmegaProfile omega);

  double d0() const { return d0_; }
  const OmegaProfile& omega() const { return omega_; }

  /// a(r), with a(0) the limit as r -> 0 and values below e^-745 set to 0.
  double value(double r) const;
  double operator()(double r) const { return value(r); }
  /// ln a(r); -inf where a vanishes or falls below e^kLogUnderflow.
  double log_value(double r) const;
  double log_value_at_log(double log_r) const;

 private:
  double d0_;
  OmegaProfile omega_;
};

/// Exponent below which exp() is flushed to zero.
inline constexpr double kLogUnderflow = -745.0;

double eval_potential(const PotentialField& field, double r);

/// Tabulated inverse maps r(z) = a^{-1}(z), rho(z) = z r(z)^2 and rho^{-1}.
///
/// The tables bracket; every lookup is refined by bisection in log space on
/// the exact map, so round trips hold to near machine precision.
class RhoMap {
 public:
  RhoMap(PotentialField field, double z_lo, double z_hi, std::size_t n_points);

  const PotentialField& field() const { return field_; }
  double z_lo() const { return std::exp(log_z_.front()); }
  double z_hi() const { return std::exp(log_z_.back()); }
  double log_z_lo() const { return log_z_.front(); }
  double log_z_hi() const { return log_z_.back(); }
  double log_rho_lo() const { return log_rho_.front(); }
  double log_rho_hi() const { return log_rho_.back(); }

  double log_r_of_log_z(double log_z) const;
  double log_rho_of_log_z(double log_z) const;
  double log_rho_inverse(double log_s) const;

  double r_of_z(double z) const;
  double rho(double z) const;
  double rho_inverse(double s) const;

  std::span<const double> log_z_table() const { return log_z_; }
  std::span<const double> log_r_table() const { return log_r_; }
  std::span<const double> log_rho_table() const { return log_rho_; }

 private:
  PotentialField field_;
  std::vector<double> log_z_, log_r_, log_rho_;
};

RhoMap build_rho_map(const PotentialField& field, double z_lo, double z_hi,
                     std::size_t n_points);

struct SRampValue {
  double s = 0.0;
  double ds = 0.0;
};

/// s(tau) = tau^4 / omega(tau) and its derivative.
SRampValue s_ramp(const OmegaProfile& omega, double tau);

}  // namespace extinctlab
