#include "extinctlab/profiles.hpp"

#include <algorithm>
#include <cmath>
// pchip.hpp in Boost 1.74 calls isnan unqualified
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <fstream>
#include <sstream>

#include "extinctlab/error.hpp"
#include "extinctlab/numerics.hpp"

namespace extinctlab {

namespace {

constexpr double kInf = num::kInf;

// Search window for ln r when inverting a(r).
constexpr double kLogRMin = -80.0;

}  // namespace

struct OmegaProfile::Table {
  std::vector<double> s;
  std::vector<double> omega;
  boost::math::interpolators::pchip<std::vector<double>> spline;

  Table(std::vector<double> xs, std::vector<double> ys)
      : s(xs), omega(ys), spline(std::move(xs), std::move(ys)) {}
};

std::string to_string(OmegaKind kind) {
  switch (kind) {
    case OmegaKind::power: return "power";
    case OmegaKind::log_power: return "log-power";
    case OmegaKind::constant: return "constant";
    case OmegaKind::table: return "table";
    case OmegaKind::singular: return "singular";
    case OmegaKind::custom: return "custom";
  }
  return "unknown";
}

OmegaKind omega_kind_from_string(const std::string& name) {
  if (name == "power") return OmegaKind::power;
  if (name == "log-power" || name == "log_power") return OmegaKind::log_power;
  if (name == "constant") return OmegaKind::constant;
  if (name == "table" || name == "custom-table") return OmegaKind::table;
  if (name == "singular") return OmegaKind::singular;
  throw InvalidInput("unknown profile kind '" + name + "'");
}

OmegaProfile OmegaProfile::power(double alpha, double s0, double delta) {
  if (!(alpha > 0.0)) throw InvalidInput("power profile: alpha must be > 0");
  if (!(s0 > 0.0)) throw InvalidInput("power profile: s0 must be > 0");
  OmegaProfile p;
  p.kind_ = OmegaKind::power;
  p.alpha_ = alpha;
  p.s0_ = s0;
  p.delta_ = delta;
  p.omega0_ = std::pow(s0, alpha);
  return p;
}

OmegaProfile OmegaProfile::log_power(double beta, double s0, double delta) {
  if (!(beta > 0.0)) throw InvalidInput("log-power profile: beta must be > 0");
  if (!(s0 > 0.0 && s0 < 1.0)) {
    throw InvalidInput("log-power profile: s0 must lie in (0, 1)");
  }
  OmegaProfile p;
  p.kind_ = OmegaKind::log_power;
  p.beta_ = beta;
  p.s0_ = s0;
  p.delta_ = delta;
  p.omega0_ = std::pow(-std::log(s0), -beta);
  return p;
}

OmegaProfile OmegaProfile::constant(double omega0, double delta) {
  if (!(omega0 > 0.0)) throw InvalidInput("constant profile: omega0 must be > 0");
  OmegaProfile p;
  p.kind_ = OmegaKind::constant;
  p.s0_ = 1.0;
  p.delta_ = delta;
  p.omega0_ = omega0;
  return p;
}

OmegaProfile OmegaProfile::singular(double scale, double delta) {
  if (!(scale > 0.0)) throw InvalidInput("singular profile: scale must be > 0");
  OmegaProfile p;
  p.kind_ = OmegaKind::singular;
  p.alpha_ = scale;
  p.s0_ = 1.0;
  p.delta_ = delta;
  p.omega0_ = scale;
  return p;
}

OmegaProfile OmegaProfile::table(std::vector<double> s, std::vector<double> omega,
                                 double delta) {
  if (s.size() != omega.size()) {
    throw InvalidInput("table profile: column lengths differ");
  }
  if (s.size() < 4) throw InvalidInput("table profile: need at least 4 rows");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] >= 0.0) || !std::isfinite(omega[i]) || omega[i] < 0.0) {
      throw InvalidInput("table profile: invalid row " + std::to_string(i));
    }
    if (i > 0 && !(s[i] > s[i - 1])) {
      throw InvalidInput("table profile: s must be strictly increasing");
    }
  }
  OmegaProfile p;
  p.kind_ = OmegaKind::table;
  p.s0_ = s.back();
  p.delta_ = delta;
  p.omega0_ = *std::max_element(omega.begin(), omega.end());
  p.table_ = std::make_shared<const Table>(std::move(s), std::move(omega));
  return p;
}

OmegaProfile OmegaProfile::table_from_csv(const std::string& path, double delta) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open profile table '" + path + "'");
  std::vector<double> s, w;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a = 0.0, b = 0.0;
    if (!(row >> a >> b)) {
      if (s.empty()) continue;  // header
      throw InvalidInput("profile table '" + path + "': malformed row '" + line + "'");
    }
    s.push_back(a);
    w.push_back(b);
  }
  return table(std::move(s), std::move(w), delta);
}

OmegaProfile OmegaProfile::custom(std::function<double(double)> fn, double s0,
                                  double omega0, double delta, std::string label) {
  if (!fn) throw InvalidInput("custom profile: empty callable");
  OmegaProfile p;
  p.kind_ = OmegaKind::custom;
  p.s0_ = s0;
  p.delta_ = delta;
  p.omega0_ = omega0;
  p.label_ = std::move(label);
  p.fn_ = std::make_shared<const std::function<double(double)>>(std::move(fn));
  return p;
}

std::string OmegaProfile::name() const {
  std::ostringstream os;
  switch (kind_) {
    case OmegaKind::power: os << "power(alpha=" << alpha_ << ")"; break;
    case OmegaKind::log_power: os << "log-power(beta=" << beta_ << ")"; break;
    case OmegaKind::constant: os << "constant(omega0=" << omega0_ << ")"; break;
    case OmegaKind::table: os << "table(" << table_->s.size() << " rows)"; break;
    case OmegaKind::singular: os << "singular(scale=" << alpha_ << ")"; break;
    case OmegaKind::custom: os << label_; break;
  }
  return os.str();
}

OmegaProfile OmegaProfile::with_delta(double delta) const {
  OmegaProfile p = *this;
  p.delta_ = delta;
  return p;
}

double OmegaProfile::value(double s) const {
  if (std::isnan(s) || s < 0.0) throw DomainError("omega: negative argument");
  if (s == 0.0) {
    switch (kind_) {
      case OmegaKind::constant: return omega0_;
      case OmegaKind::singular: return kInf;
      case OmegaKind::table: return table_->s.front() == 0.0 ? table_->omega.front() : 0.0;
      case OmegaKind::custom: return (*fn_)(0.0);
      default: return 0.0;
    }
  }
  return value_at_log(std::log(s));
}

double OmegaProfile::value_at_log(double t) const {
  const double log_s0 = std::log(s0_);
  if (t >= log_s0) t = log_s0;
  switch (kind_) {
    case OmegaKind::power: return std::exp(alpha_ * t);
    case OmegaKind::log_power: return std::pow(-t, -beta_);
    case OmegaKind::constant: return omega0_;
    case OmegaKind::singular: return alpha_ * (1.0 - t);
    case OmegaKind::table: {
      const auto& tb = *table_;
      if (tb.s.front() > 0.0 && t < std::log(tb.s.front())) {
        return tb.omega.front() * std::exp(t - std::log(tb.s.front()));
      }
      return tb.spline(std::clamp(std::exp(t), tb.s.front(), tb.s.back()));
    }
    case OmegaKind::custom: {
      const double v = (*fn_)(std::exp(t));
      if (std::isnan(v)) throw DomainError("omega: custom profile returned NaN");
      return v;
    }
  }
  return 0.0;
}

double OmegaProfile::log_value_at_log(double t) const {
  const double log_s0 = std::log(s0_);
  if (t >= log_s0) t = log_s0;
  switch (kind_) {
    case OmegaKind::power: return alpha_ * t;
    case OmegaKind::log_power: return -beta_ * std::log(-t);
    case OmegaKind::constant: return std::log(omega0_);
    case OmegaKind::singular: return std::log(alpha_) + std::log1p(-t);
    case OmegaKind::table: {
      const auto& tb = *table_;
      if (tb.s.front() > 0.0 && t < std::log(tb.s.front())) {
        return std::log(tb.omega.front()) + t - std::log(tb.s.front());
      }
      return std::log(value_at_log(t));
    }
    case OmegaKind::custom: return std::log(value_at_log(t));
  }
  return -kInf;
}

double OmegaProfile::derivative(double s) const {
  if (std::isnan(s) || s < 0.0) throw DomainError("omega': negative argument");
  if (s >= s0_) return 0.0;
  switch (kind_) {
    case OmegaKind::power:
      return s == 0.0 ? (alpha_ < 1.0 ? kInf : (alpha_ == 1.0 ? 1.0 : 0.0))
                      : alpha_ * std::pow(s, alpha_ - 1.0);
    case OmegaKind::log_power:
      if (s == 0.0) return kInf;
      return beta_ * std::pow(-std::log(s), -beta_ - 1.0) / s;
    case OmegaKind::constant: return 0.0;
    case OmegaKind::singular: return s == 0.0 ? -kInf : -alpha_ / s;
    case OmegaKind::table: {
      const auto& tb = *table_;
      if (tb.s.front() > 0.0 && s < tb.s.front()) return tb.omega.front() / tb.s.front();
      return tb.spline.prime(s);
    }
    case OmegaKind::custom: {
      const double h = std::max(1e-6 * s, 1e-300);
      const double lo = std::max(0.0, s - h);
      const double hi = std::min(s0_, s + h);
      return ((*fn_)(hi) - (*fn_)(lo)) / (hi - lo);
    }
  }
  return 0.0;
}

double OmegaProfile::exponent_limit_at_zero() const {
  switch (kind_) {
    case OmegaKind::power:
      if (alpha_ < 2.0) return kInf;
      return alpha_ == 2.0 ? 1.0 : 0.0;
    case OmegaKind::table: {
      const auto& tb = *table_;
      if (tb.s.front() > 0.0 || tb.omega.front() > 0.0) return kInf;
      return tb.spline.prime(0.0) > 0.0 ? kInf : 0.0;
    }
    case OmegaKind::custom: {
      const double r1 = 1e-6 * s0_, r2 = 1e-8 * s0_;
      const double g1 = (*fn_)(r1) / (r1 * r1);
      const double g2 = (*fn_)(r2) / (r2 * r2);
      return g2 > 10.0 * g1 ? kInf : g2;
    }
    default: return kInf;
  }
}

const ConditionCheck& ConditionReport::get(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw InvalidInput("no condition named '" + name + "'");
}

bool ConditionReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ConditionCheck& c) { return c.passed; });
}

std::vector<double> default_condition_grid(const OmegaProfile& profile,
                                           std::size_t n) {
  const double hi = profile.s0() * (1.0 - 1e-9);
  return num::logspace(profile.s0() * 1e-12, hi, n);
}

namespace {

// Verdict for a condition that only has to hold near zero.
ConditionCheck prefix_check(std::string name, std::span<const double> grid,
                            const std::function<bool(std::size_t)>& holds,
                            double& valid_up_to) {
  ConditionCheck c;
  c.name = std::move(name);
  std::size_t k = 0;
  while (k < grid.size() && holds(k)) ++k;
  if (k == grid.size()) {
    c.passed = true;
    valid_up_to = grid.back();
    c.detail = "holds on the whole grid";
    return c;
  }
  valid_up_to = k == 0 ? 0.0 : grid[k - 1];
  c.passed = k > 0 && grid[k - 1] >= 10.0 * grid.front();
  c.witness = grid[k];
  std::ostringstream os;
  if (c.passed) {
    os << "holds on (0, " << valid_up_to << "], first violation at " << grid[k];
  } else {
    os << "violated at s=" << grid[k];
  }
  c.detail = os.str();
  return c;
}

}  // namespace

ConditionReport check_conditions(const OmegaProfile& profile,
                                 std::span<const double> grid) {
  if (grid.empty()) throw InvalidInput("check_conditions: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || grid[i] > profile.s0()) {
      throw InvalidInput("check_conditions: grid must lie in (0, s0]");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InvalidInput("check_conditions: grid must be strictly increasing");
    }
  }
  const double delta = profile.delta();
  std::vector<double> w(grid.size()), dw(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    w[i] = profile.value(grid[i]);
    dw[i] = profile.derivative(grid[i]);
  }

  ConditionReport rep;

  {
    ConditionCheck c{"monotone", true, std::nullopt, "nondecreasing and finite"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const bool bad_value = !std::isfinite(w[i]);
      const bool decreasing = i > 0 && w[i] < w[i - 1] - 1e-14 * std::abs(w[i - 1]);
      if (bad_value || decreasing) {
        c.passed = false;
        c.witness = grid[i];
        c.detail = bad_value ? "non-finite value" : "decreases";
        break;
      }
    }
    rep.checks.push_back(c);
  }
  {
    ConditionCheck c{"vanishes_at_zero", true, std::nullopt, "omega(0)=0, omega>0 on grid"};
    if (profile.value(0.0) != 0.0) {
      c.passed = false;
      c.witness = 0.0;
      c.detail = "omega(0) != 0";
    } else {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(w[i] > 0.0)) {
          c.passed = false;
          c.witness = grid[i];
          c.detail = "omega vanishes";
          break;
        }
      }
    }
    rep.checks.push_back(c);
  }
  {
    ConditionCheck c{"bounded", true, std::nullopt, "omega <= omega0"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(w[i] <= profile.omega0() * (1.0 + 1e-12))) {
        c.passed = false;
        c.witness = grid[i];
        c.detail = "exceeds omega0";
        break;
      }
    }
    rep.checks.push_back(c);
  }

  double v15 = 0.0, v16 = 0.0, v17 = 0.0;
  rep.checks.push_back(prefix_check(
      "log_slope", grid,
      [&](std::size_t i) {
        return w[i] > 0.0 && std::isfinite(w[i]) &&
               grid[i] * dw[i] / w[i] <= 2.0 - delta + 1e-12;
      },
      v15));
  rep.checks.push_back(prefix_check(
      "power_floor", grid,
      [&](std::size_t i) { return w[i] >= std::pow(grid[i], 2.0 - delta); }, v16));
  rep.checks.push_back(prefix_check(
      "exp_monotone", grid,
      [&](std::size_t i) {
        if (!std::isfinite(w[i])) return false;
        if (i == 0) return true;
        // compare omega/s^2 in log form
        return std::log(w[i]) - 2.0 * std::log(grid[i]) <
               std::log(w[i - 1]) - 2.0 * std::log(grid[i - 1]);
      },
      v17));
  rep.technical_valid_up_to = std::min({v15, v16, v17});
  return rep;
}

PotentialField::PotentialField(double d0, OmegaProfile omega)
    : d0_(d0), omega_(std::move(omega)) {
  if (!(d0 > 0.0)) throw InvalidInput("potential: d0 must be > 0");
}

double PotentialField::log_value_at_log(double log_r) const {
  if (log_r == -kInf) {
    const double lim = omega_.exponent_limit_at_zero();
    return std::isinf(lim) ? -kInf : std::log(d0_) - lim;
  }
  // omega(r)/r^2 computed as exp(ln omega - 2 ln r) to avoid overflow
  const double log_ratio = omega_.log_value_at_log(log_r) - 2.0 * log_r;
  if (log_ratio > 700.0) return -kInf;
  const double v = std::log(d0_) - std::exp(log_ratio);
  return v < kLogUnderflow ? -kInf : v;
}

double PotentialField::log_value(double r) const {
  if (std::isnan(r) || r < 0.0) throw InvalidInput("potential: negative radius");
  return log_value_at_log(r == 0.0 ? -kInf : std::log(r));
}

double PotentialField::value(double r) const {
  const double lv = log_value(r);
  return lv == -kInf ? 0.0 : std::exp(lv);
}

double eval_potential(const PotentialField& field, double r) {
  return field.value(r);
}

namespace {

// ln(omega(e^t)/e^{2t}), the log of the exponent; strictly decreasing in t
// wherever a is strictly increasing.
double log_exponent(const OmegaProfile& w, double t) {
  return w.log_value_at_log(t) - 2.0 * t;
}

double solve_log_r(const PotentialField& f, double log_z, double t_lo, double t_hi) {
  const double L = std::log(f.d0()) - log_z;
  if (!(L > 0.0)) throw DomainError("rho map: z must be below d0");
  const double target = std::log(L);
  return num::bisect(
      [&](double t) { return log_exponent(f.omega(), t) - target; }, t_lo, t_hi,
      1e-15, 1e-15, 300);
}

}  // namespace

RhoMap::RhoMap(PotentialField field, double z_lo, double z_hi, std::size_t n_points)
    : field_(std::move(field)) {
  if (!(z_lo > 0.0) || !(z_hi > z_lo)) {
    throw InvalidInput("rho map: need 0 < z_lo < z_hi");
  }
  if (n_points < 2) throw InvalidInput("rho map: need at least 2 points");
  if (!(z_hi < field_.d0())) {
    throw MonotonicityError("rho map: z range exceeds sup a = d0");
  }
  const double t_hi = std::log(field_.omega().s0()) + 40.0;
  const auto& w = field_.omega();
  const double target_lo = std::log(std::log(field_.d0()) - std::log(z_lo));
  const double target_hi = std::log(std::log(field_.d0()) - std::log(z_hi));
  if (!(log_exponent(w, kLogRMin) > target_lo) || !(log_exponent(w, t_hi) < target_hi)) {
    throw MonotonicityError("rho map: z range outside the range of a");
  }
  double t_a = 0.0, t_b = 0.0;
  try {
    t_a = solve_log_r(field_, std::log(z_lo), kLogRMin, t_hi);
    t_b = solve_log_r(field_, std::log(z_hi), kLogRMin, t_hi);
  } catch (const BracketError&) {
    throw MonotonicityError("rho map: a is not invertible on the requested range");
  }
  if (!(t_b > t_a)) {
    throw MonotonicityError("rho map: a is not strictly increasing on the range");
  }
  // the exponent omega/r^2 must strictly decrease across [r(z_lo), r(z_hi)]
  const auto probe = num::linspace(t_a, t_b, 4096);
  double prev = log_exponent(w, probe.front());
  for (std::size_t i = 1; i < probe.size(); ++i) {
    const double cur = log_exponent(w, probe[i]);
    if (!(cur < prev)) {
      throw MonotonicityError("rho map: a(r) is not strictly increasing near r=" +
                              std::to_string(std::exp(probe[i])));
    }
    prev = cur;
  }
  log_z_ = num::linspace(std::log(z_lo), std::log(z_hi), n_points);
  log_r_.resize(n_points);
  log_rho_.resize(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    log_r_[i] = solve_log_r(field_, log_z_[i], t_a - 1.0, t_b + 1.0);
    log_rho_[i] = log_z_[i] + 2.0 * log_r_[i];
    if (i > 0 && !(log_rho_[i] > log_rho_[i - 1])) {
      throw MonotonicityError("rho map: rho not strictly increasing");
    }
  }
}

double RhoMap::log_r_of_log_z(double log_z) const {
  if (log_z < log_z_.front() - 1e-12 || log_z > log_z_.back() + 1e-12) {
    throw DomainError("rho map: z outside tabulated range");
  }
  auto it = std::upper_bound(log_z_.begin(), log_z_.end(), log_z);
  std::size_t i = it == log_z_.begin() ? 0 : static_cast<std::size_t>(it - log_z_.begin()) - 1;
  i = std::min(i, log_z_.size() - 2);
  return solve_log_r(field_, log_z, log_r_[i] - 1e-9, log_r_[i + 1] + 1e-9);
}

double RhoMap::log_rho_of_log_z(double log_z) const {
  return log_z + 2.0 * log_r_of_log_z(log_z);
}

double RhoMap::log_rho_inverse(double log_s) const {
  if (log_s < log_rho_.front() - 1e-12 || log_s > log_rho_.back() + 1e-12) {
    throw DomainError("rho map: s outside tabulated range");
  }
  auto it = std::upper_bound(log_rho_.begin(), log_rho_.end(), log_s);
  std::size_t i = it == log_rho_.begin() ? 0 : static_cast<std::size_t>(it - log_rho_.begin()) - 1;
  i = std::min(i, log_rho_.size() - 2);
  const double lo = std::max(log_z_.front(), log_z_[i] - 1e-12);
  const double hi = std::min(log_z_.back(), log_z_[i + 1] + 1e-12);
  return num::bisect([&](double lz) { return log_rho_of_log_z(lz) - log_s; }, lo,
                     hi, 1e-15, 1e-15, 300);
}

double RhoMap::r_of_z(double z) const { return std::exp(log_r_of_log_z(std::log(z))); }
double RhoMap::rho(double z) const { return std::exp(log_rho_of_log_z(std::log(z))); }
double RhoMap::rho_inverse(double s) const { return std::exp(log_rho_inverse(std::log(s))); }

RhoMap build_rho_map(const PotentialField& field, double z_lo, double z_hi,
                     std::size_t n_points) {
  return RhoMap(field, z_lo, z_hi, n_points);
}

SRampValue s_ramp(const OmegaProfile& omega, double tau) {
  if (!(tau > 0.0)) throw InvalidInput("s_ramp: tau must be > 0");
  const double w = omega.value(tau);
  if (w == 0.0) throw DomainError("s_ramp: omega(tau) = 0");
  SRampValue out;
  out.s = std::pow(tau, 4) / w;
  if (omega.has_analytic_derivative()) {
    out.ds = 4.0 * std::pow(tau, 3) / w - std::pow(tau, 4) * omega.derivative(tau) / (w * w);
  } else {
    const double h = 1e-5 * tau;
    const double sp = std::pow(tau + h, 4) / omega.value(tau + h);
    const double sm = std::pow(tau - h, 4) / omega.value(tau - h);
    out.ds = (sp - sm) / (2.0 * h);
  }
  return out;
}

}  // namespace extinctlab
