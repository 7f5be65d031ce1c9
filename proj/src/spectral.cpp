#include "extinctlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "extinctlab/error.hpp"
#include "extinctlab/numerics.hpp"

namespace extinctlab {

RadialPotential RadialPotential::constant(double c) {
  if (!(c >= 0.0)) throw InvalidInput("potential: constant must be >= 0");
  RadialPotential p;
  p.c_ = c;
  return p;
}

RadialPotential RadialPotential::profile(PotentialField field) {
  RadialPotential p;
  p.field_ = std::move(field);
  return p;
}

double RadialPotential::log_value(double r) const {
  if (field_) return field_->log_value(r);
  return c_ > 0.0 ? std::log(c_) : -num::kInf;
}

std::string RadialPotential::name() const {
  if (field_) return field_->omega().name();
  std::ostringstream os;
  os << "constant(" << c_ << ")";
  return os.str();
}

std::size_t SymTridiag::sturm_count(double x) const {
  const std::size_t n = d.size();
  double emax = 0.0;
  for (double v : e) emax = std::max(emax, v * v);
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, emax);
  std::size_t count = 0;
  double q = d[0] - x;
  for (std::size_t i = 0;; ++i) {
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    if (i + 1 == n) break;
    q = d[i + 1] - x - e[i] * e[i] / q;
  }
  return count;
}

double SymTridiag::lower_bound() const {
  double lo = num::kInf;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double off = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i < e.size() ? std::abs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - off);
  }
  return lo;
}

double SymTridiag::upper_bound() const {
  double hi = -num::kInf;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double off = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i < e.size() ? std::abs(e[i]) : 0.0);
    hi = std::max(hi, d[i] + off);
  }
  return hi;
}

std::vector<double> knee_faces(const RadialPotential& a, double log_weight, std::size_t cells) {
  if (cells < 10) throw InvalidInput("knee_faces: need at least 10 cells");
  auto g = [&](double r) { return a.log_value(r) + log_weight; };
  if (a.is_constant() || !(g(1.0) > 0.0)) return num::linspace(0.0, 1.0, cells + 1);
  const double rk = num::bisect(g, 1e-300, 1.0, 1e-14, 1e-14);
  const double lo = 0.8 * rk;
  const double hi = std::min(1.0, 1.2 * rk);
  const std::size_t n1 = (cells * 4) / 10;
  const std::size_t n2 = hi < 1.0 ? (cells * 3) / 10 : cells - n1;
  const std::size_t n3 = cells - n1 - n2;
  std::vector<double> f = num::linspace(0.0, lo, n1 + 1);
  const auto mid = num::linspace(lo, hi, n2 + 1);
  f.insert(f.end(), mid.begin() + 1, mid.end());
  if (n3 > 0) {
    const auto out = num::linspace(hi, 1.0, n3 + 1);
    f.insert(f.end(), out.begin() + 1, out.end());
  }
  f.back() = 1.0;
  return f;
}

SymTridiag spectral_matrix(const RadialGrid& g, const RadialPotential& a, double log_weight) {
  const std::size_t n = g.size();
  SymTridiag T;
  T.d.resize(n);
  T.e.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double la = a.log_value(g.centers[i]) + log_weight;
    const double pot = la < kLogUnderflow ? 0.0 : std::exp(la);
    T.d[i] = (g.coupling[i] + g.coupling[i + 1]) / g.volumes[i] + pot;
    if (i + 1 < n) T.e[i] = -g.coupling[i + 1] / std::sqrt(g.volumes[i] * g.volumes[i + 1]);
  }
  if (!std::all_of(T.d.begin(), T.d.end(), [](double x) { return std::isfinite(x); })) {
    throw NumericError("spectral matrix: weight overflows; reduce the weight");
  }
  return T;
}

namespace {

double rayleigh(const SymTridiag& T, const std::vector<double>& v, std::vector<double>& Tv) {
  const std::size_t n = v.size();
  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = T.d[i] * v[i];
    if (i > 0) s += T.e[i - 1] * v[i - 1];
    if (i + 1 < n) s += T.e[i] * v[i + 1];
    Tv[i] = s;
    num += s * v[i];
  }
  return num;
}

double residual_norm(const std::vector<double>& Tv, const std::vector<double>& v, double lam) {
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r += (Tv[i] - lam * v[i]) * (Tv[i] - lam * v[i]);
  return std::sqrt(r);
}

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (!(s > 0.0) || !std::isfinite(s)) throw NumericError("inverse iteration: degenerate vector");
  // ground states are positive; fix the sign
  double sum = 0.0;
  for (double x : v) sum += x;
  if (sum < 0.0) s = -s;
  for (double& x : v) x /= s;
}

void shifted_solve(const SymTridiag& T, double sigma, std::vector<double>& x) {
  const std::size_t n = T.size();
  std::vector<double> lower(n, 0.0), diag(n), upper(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = T.d[i] - sigma;
    if (i > 0) lower[i] = T.e[i - 1];
    if (i + 1 < n) upper[i] = T.e[i];
  }
  solve_tridiagonal(lower, diag, upper, x);
}

constexpr double kTol = 1e-13;
constexpr double kStall = 1e-10;

}  // namespace

GroundState lowest_eigenpair(const SymTridiag& T) {
  const std::size_t n = T.size();
  if (n == 0) throw InvalidInput("eigenpair: empty matrix");
  GroundState gs;
  gs.cells = n;
  if (n == 1) {
    gs.lambda = T.d[0];
    gs.v = {1.0};
    return gs;
  }
  const double lo = T.lower_bound(), hi = T.upper_bound();
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> v(n, 1.0), Tv(n);
  normalize(v);
  double sigma = lo - 1e-6 * scale;
  double lam = rayleigh(T, v, Tv);
  double res = residual_norm(Tv, v, lam);
  bool converged = false;
  int flat = 0;
  for (std::size_t it = 0; it < 300; ++it) {
    gs.iterations = it + 1;
    try {
      shifted_solve(T, sigma, v);
      normalize(v);
    } catch (const NumericError&) {
      break;
    }
    lam = rayleigh(T, v, Tv);
    const double prev = res;
    res = residual_norm(Tv, v, lam);
    const double unit = std::max(1.0, std::abs(lam));
    // stop at the tolerance, or once the residual stalls at roundoff level
    flat = res > 0.5 * prev ? flat + 1 : 0;
    if (res <= kTol * unit || (flat >= 3 && res <= kStall * unit)) {
      converged = true;
      break;
    }
    // an eigenvalue lies in [lam - res, lam + res]; move the shift up when
    // the Sturm count says it is the lowest one
    const double cand = lam - 2.0 * res - 64.0 * eps * scale;
    if (cand > sigma && T.sturm_count(cand) == 0) sigma = cand;
  }
  const double slack = 2.0 * res + 64.0 * eps * scale;
  const bool lowest = T.sturm_count(lam - slack) == 0 && T.sturm_count(lam + slack) >= 1;
  if (!(converged && lowest)) {
    gs.fallback = true;
    // bisection on the Sturm count for the smallest eigenvalue
    double a = lo - 1e-6 * scale, b = hi + 1e-6 * scale;
    for (int k = 0; k < 400 && b - a > 4.0 * eps * std::max(std::abs(a), std::abs(b)); ++k) {
      const double m = 0.5 * (a + b);
      (T.sturm_count(m) >= 1 ? b : a) = m;
    }
    sigma = a - 1e-10 * std::max(1.0, std::abs(a));
    v.assign(n, 1.0);
    normalize(v);
    for (int k = 0; k < 4; ++k) {
      shifted_solve(T, sigma, v);
      normalize(v);
    }
    lam = rayleigh(T, v, Tv);
    res = residual_norm(Tv, v, lam);
  }
  gs.lambda = lam;
  gs.v = std::move(v);
  gs.residual = res / std::max(1.0, std::abs(lam));
  return gs;
}

GroundState ground_state(const RadialPotential& a, double log_weight, const SpectralOptions& opts) {
  const auto grid = make_radial_grid_from_faces(opts.N, knee_faces(a, log_weight, opts.cells));
  auto gs = lowest_eigenpair(spectral_matrix(grid, a, log_weight));
  gs.u.resize(gs.v.size());
  for (std::size_t i = 0; i < gs.v.size(); ++i) gs.u[i] = gs.v[i] / std::sqrt(grid.volumes[i]);
  return gs;
}

GroundState lambda1(const RadialPotential& a, double h, const SpectralOptions& opts) {
  if (!(h > 0.0)) throw InvalidInput("lambda1: h must be > 0");
  return ground_state(a, -2.0 * std::log(h), opts);
}

GroundState mu_of_log_alpha(const RadialPotential& a, double q, double log_alpha,
                            const SpectralOptions& opts) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidInput("mu: q must lie in (0, 1)");
  // h = alpha^{(1-q)/2}, h^{-2} = alpha^{-(1-q)}
  return ground_state(a, -(1.0 - q) * log_alpha, opts);
}

GroundState mu_of_alpha(const RadialPotential& a, double q, double alpha,
                        const SpectralOptions& opts) {
  if (!(alpha > 0.0)) throw InvalidInput("mu: alpha must be > 0");
  return mu_of_log_alpha(a, q, std::log(alpha), opts);
}

namespace {

SpectralScan scan_log_weights(const RadialPotential& a, const std::vector<double>& x,
                              const std::vector<double>& lw, const SpectralOptions& opts) {
  const std::size_t m = x.size();
  SpectralScan s;
  s.x = x;
  s.lambda.assign(m, 0.0);
  s.residual.assign(m, 0.0);
  s.iterations.assign(m, 0);
  std::vector<char> fb(m, 0);
  std::exception_ptr err;
  auto one = [&](std::size_t i) {
    const auto gs = ground_state(a, lw[i], opts);
    s.lambda[i] = gs.lambda;
    s.residual[i] = gs.residual;
    s.iterations[i] = gs.iterations;
    fb[i] = gs.fallback;
  };
  if (opts.backend == kernels::Backend::omp) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < m; ++i) {
      try {
        one(i);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (std::size_t i = 0; i < m; ++i) one(i);
  }
  s.fallback.assign(fb.begin(), fb.end());
  return s;
}

}  // namespace

SpectralScan scan_lambda1(const RadialPotential& a, const std::vector<double>& hs,
                          const SpectralOptions& opts) {
  std::vector<double> lw(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(hs[i] > 0.0)) throw InvalidInput("scan: h must be > 0");
    lw[i] = -2.0 * std::log(hs[i]);
  }
  return scan_log_weights(a, hs, lw, opts);
}

SpectralScan mu_n_sequence(const RadialPotential& a, std::size_t n_max,
                           const SpectralOptions& opts) {
  if (n_max > 60) throw InvalidInput("mu_n: n_max must be <= 60");
  std::vector<double> x(n_max + 1), lw(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    x[n] = static_cast<double>(n);
    lw[n] = static_cast<double>(n) * std::numbers::ln2;
  }
  auto s = scan_log_weights(a, x, lw, opts);
  // the weights grow with n; keep the sequence monotone against roundoff
  for (std::size_t n = 1; n < s.lambda.size(); ++n) {
    if (s.lambda[n] < s.lambda[n - 1] && s.lambda[n] > s.lambda[n - 1] * (1.0 - 1e-10)) {
      s.lambda[n] = s.lambda[n - 1];
    }
  }
  return s;
}

CriterionReport ground_state_series(const RadialPotential& a, double q, double K, std::size_t n_lo,
                                 std::size_t n_hi, const SpectralOptions& opts) {
  if (!(K > 0.0)) throw InvalidInput("ground state series: K must be > 0");
  if (n_lo < 2 || n_hi < n_lo) throw InvalidInput("ground state series: need 2 <= n_lo <= n_hi");
  if (!(q > 0.0 && q < 1.0)) throw InvalidInput("ground state series: q must lie in (0, 1)");
  auto log_alpha = [&](double n) { return -K * n * std::log(n); };
  std::vector<double> x, lw;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    x.push_back(static_cast<double>(n));
    lw.push_back(-(1.0 - q) * log_alpha(static_cast<double>(n)));
  }
  const auto scan = scan_log_weights(a, x, lw, opts);
  CriterionReport rep;
  std::vector<double> idx, lt;
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double n = x[k];
    SeriesTerm t;
    t.n = static_cast<std::size_t>(n);
    t.log_alpha = log_alpha(n);
    t.mu = scan.lambda[k];
    t.addends[1] = log_alpha(n) - log_alpha(n + 1.0);
    t.addends[2] = 1.0;
    if (!(t.mu > 1.0)) {
      t.flagged = true;
      std::ostringstream os;
      os << "mu(alpha_" << t.n << ") = " << t.mu << " <= 1";
      rep.warnings.push_back(os.str());
    }
    t.addends[0] = t.mu > 0.0 ? std::log(t.mu) : -num::kInf;
    const double bracket = t.addends[0] + t.addends[1] + t.addends[2];
    t.log_term = bracket > 0.0 && t.mu > 0.0 ? std::log(bracket) - t.addends[0] : num::kInf;
    acc += std::exp(t.log_term);
    rep.partial_sums.push_back(acc);
    rep.terms.push_back(t);
    idx.push_back(n);
    lt.push_back(t.log_term);
  }
  rep.diagnosis = diagnose_log_terms(idx, lt);

  const double lqk = std::log((1.0 - q) * K);
  // Delta_n = ln(alpha_n / alpha_{n+1}) at n = e^L
  auto delta = [K](double L) {
    if (L > 30.0) return K * (L + 1.0);
    const double n = std::exp(L);
    return K * (std::log1p(n) + n * std::log1p(1.0 / n));
  };
  std::function<double(double)> log_na;
  if (a.is_constant()) {
    // mu = c h^{-2} exactly
    const double lc = std::log(a.constant_value());
    log_na = [=](double L) {
      const double lw = std::exp(lqk + L + std::log(L));
      const double lmu = lc + lw;
      if (!std::isfinite(lmu)) return -num::kInf;
      return L + std::log(lmu + delta(L) + 1.0) - lmu;
    };
    rep.semiclassical_constant = 1.0;
  } else {
    const auto& field = *a.field();
    double rmin = num::kInf, rmax = 0.0;
    std::vector<double> logs;
    for (std::size_t k = 0; k < rep.terms.size(); ++k) {
      SemiclassicalLog sc;
      try {
        sc = semiclassical_log(field, std::log(lw[k]));
      } catch (const DomainError&) {
        continue;  // knee outside the ball for small n
      }
      const double lr = std::log(rep.terms[k].mu) - sc.value;
      logs.push_back(lr);
      rmin = std::min(rmin, lr);
      rmax = std::max(rmax, lr);
    }
    if (logs.empty()) throw DomainError("ground state series: no term has its knee inside the ball");
    std::sort(logs.begin(), logs.end());
    const double lC = logs[logs.size() / 2];
    rep.semiclassical_constant = std::exp(lC);
    rep.semiclassical_spread = std::exp(rmax - rmin);
    log_na = [=, &field](double L) {
      const double llw = lqk + L + std::log(L);
      const auto sc = semiclassical_log(field, llw);
      const double lmu = lC + sc.value;
      // L - ln mu with the leading L cancelled by hand
      return std::log(lmu + delta(L) + 1.0) - lC - lqk - std::log(L) - sc.eps + sc.log_omega;
    };
  }
  rep.tail = condensed_diagnosis(log_na);
  rep.verdict = rep.tail->verdict;
  if (rep.diagnosis.verdict != Verdict::inconclusive && rep.diagnosis.verdict != rep.verdict) {
    rep.warnings.push_back("computed terms and tail test disagree; the terms are pre-asymptotic");
  }
  return rep;
}

SemiclassicalLog semiclassical_log(const PotentialField& field, double log_lw) {
  // ln a(r) + 2 ln r = -lw with ln a = ln d0 - omega/r^2, i.e.
  // ln omega(r) - 2 ln r = ln(lw + ln d0 + 2 ln r)
  const auto& w = field.omega();
  const double ld0 = std::log(field.d0());
  const bool huge = log_lw > 700.0;
  const double lw = huge ? num::kInf : std::exp(log_lw);
  auto eps_of = [&](double t) { return huge ? 0.0 : std::log1p((ld0 + 2.0 * t) / lw); };
  auto F = [&](double t) {
    const double arg = huge ? 1.0 : lw + ld0 + 2.0 * t;
    if (!(arg > 0.0)) return num::kInf;
    return w.log_value_at_log(t) - 2.0 * t - (log_lw + eps_of(t));
  };
  double hi = 0.0;
  if (F(hi) > 0.0) throw DomainError("semiclassical: weight too small, no knee inside the ball");
  double lo = -std::max(1.0, log_lw);
  while (F(lo) < 0.0) {
    lo *= 2.0;
    if (!std::isfinite(lo)) throw BracketError("semiclassical: no lower bracket");
  }
  const double t = num::bisect(F, lo, hi, 1e-15 * std::abs(lo), 1e-16, 400);
  SemiclassicalLog out;
  out.log_r = t;
  out.log_omega = w.log_value_at_log(t);
  out.eps = eps_of(t);
  out.value = log_lw + out.eps - out.log_omega;
  return out;
}

CriterionReport kv_criterion(const RadialPotential& a, std::size_t n_max,
                             const SpectralOptions& opts) {
  const auto scan = mu_n_sequence(a, n_max, opts);
  CriterionReport rep;
  std::vector<double> log_mu;
  double acc = 0.0;
  for (std::size_t n = 1; n < scan.lambda.size(); ++n) {
    SeriesTerm t;
    t.n = n;
    t.mu = scan.lambda[n];
    const double lm = t.mu > 0.0 ? std::log(t.mu) : -num::kInf;
    t.addends[0] = lm;
    t.flagged = !(lm > 0.0);
    t.log_term = lm > 0.0 ? std::log(lm) - lm : -num::kInf;
    if (lm > 0.0) acc += std::exp(t.log_term);
    rep.partial_sums.push_back(acc);
    rep.terms.push_back(t);
    log_mu.push_back(lm);
  }
  rep.diagnosis = kv_partial_sum_log(log_mu);
  rep.warnings = rep.diagnosis.warnings;
  rep.verdict = rep.diagnosis.verdict;
  return rep;
}

SandwichReport verify_ground_state_sandwich(const PotentialField& field, const std::vector<double>& hs,
                               const SpectralOptions& opts) {
  SandwichReport rep;
  if (hs.empty()) throw InvalidInput("sandwich: no h values");
  const auto pot = RadialPotential::profile(field);
  // z range: rho^{-1}(s) >= s, and z stays below the value of a at r = 1
  const double h_min = *std::min_element(hs.begin(), hs.end());
  const double z_lo = std::min(1e-12, 1e-3 * h_min * h_min);
  const double z_hi = 0.9 * field.value(1.0);
  const RhoMap map(field, z_lo, z_hi, 400);

  std::vector<double> kept;
  for (double h : hs) {
    const double ls = 2.0 * std::log(h);
    if (ls < map.log_rho_lo() || ls > map.log_rho_hi()) {
      std::ostringstream os;
      os << "h=" << h << " outside the rho^{-1} range, skipped";
      rep.warnings.push_back(os.str());
      continue;
    }
    kept.push_back(h);
  }
  auto coarse = scan_lambda1(pot, kept, opts);
  auto fine_opts = opts;
  fine_opts.cells = 2 * opts.cells;
  auto fine = scan_lambda1(pot, kept, fine_opts);
  double rmin = num::kInf, rmax = 0.0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    SandwichRow row;
    row.h = kept[i];
    row.lambda = coarse.lambda[i];
    row.rho_inv = std::exp(map.log_rho_inverse(2.0 * std::log(row.h)));
    row.ratio = row.lambda * row.h * row.h / row.rho_inv;
    row.ratio_fine = fine.lambda[i] * row.h * row.h / row.rho_inv;
    row.refine_change = std::abs(row.ratio_fine / row.ratio - 1.0);
    rmin = std::min(rmin, row.ratio);
    rmax = std::max(rmax, row.ratio);
    rep.worst_refine_change = std::max(rep.worst_refine_change, row.refine_change);
    rep.rows.push_back(row);
  }
  if (!rep.rows.empty()) {
    rep.C = std::max(rmax, 1.0 / rmin);
    rep.width_decades = std::log10(rmax / rmin);
  }
  return rep;
}

RhoInverseReport verify_rho_inverse_estimate(const PotentialField& field, double s_lo, double s_hi,
                               double alpha, std::size_t samples) {
  if (!(s_lo > 0.0 && s_hi > s_lo && s_hi < 1.0)) {
    throw InvalidInput("rho inverse: need 0 < s_lo < s_hi < 1");
  }
  if (!(alpha > 0.0)) throw InvalidInput("rho inverse: alpha must be > 0");
  const auto& w = field.omega();
  const double delta = w.delta();
  const double w0 = w.omega0();
  RhoInverseReport rep;
  const double z_hi = 0.9 * field.value(1.0);
  const RhoMap map(field, std::min(1e-3 * s_lo, 1e-15), z_hi, 400);

  for (double s : num::logspace(s_lo, s_hi, samples)) {
    const double ls = std::log(s);
    if (ls < map.log_rho_lo() || ls > map.log_rho_hi()) {
      rep.warnings.push_back("s outside the rho^{-1} range, clipped");
      continue;
    }
    const double L = -ls;
    RhoInverseRow row;
    row.s = s;
    row.rho_inv = std::exp(map.log_rho_inverse(ls));
    row.lower = s / (1.0 + alpha) * L / w.value(std::sqrt(w0 * (1.0 + alpha) / L));
    row.upper = s * L / w.value(std::pow(1.0 / L, 1.0 / delta));
    row.ok = row.lower <= row.rho_inv && row.rho_inv <= row.upper;
    if (!row.ok) ++rep.violations;
    if (row.rho_inv < s) ++rep.rho_inv_below_s;
    rep.rows.push_back(row);
  }
  rep.threshold = 0.0;
  for (const auto& row : rep.rows) {
    if (!row.ok) break;
    rep.threshold = row.s;
  }

  // bracket for r(z) on the table, over the z that the s range reaches
  const auto lz = map.log_z_table();
  const auto lr = map.log_r_table();
  const double lz_top = map.log_rho_inverse(std::min(std::log(s_hi), map.log_rho_hi()));
  for (std::size_t i = 0; i < lz.size(); ++i) {
    const double L = -lz[i];
    if (lz[i] > lz_top || !(L > 1.0)) continue;
    const double r = std::exp(lr[i]);
    const double lo = std::pow(1.0 / L, 1.0 / delta);
    const double hi = std::sqrt(w0 / L);
    if (r < lo * (1.0 - 1e-12) || r > hi * (1.0 + 1e-12)) ++rep.r_bracket_violations;
  }
  return rep;
}

}  // namespace extinctlab
