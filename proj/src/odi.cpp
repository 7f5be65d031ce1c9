#include "extinctlab/odi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>

#include "extinctlab/error.hpp"
#include "extinctlab/numerics.hpp"

namespace extinctlab {

namespace {

constexpr double kScale = 1.02;  // geometric step when scanning for a bracket

double log_sprime(const OdiConfig& cfg, double tau) {
  const double ds = s_ramp(cfg.field.omega(), tau).ds;
  return ds > 0.0 ? std::log(ds) : -num::kInf;
}

// Quadrature of a positive integrand on [t0, t1] in equal pieces; the
// integrands here grow like exp(-c/r^2) and are steepest near t1.
double piecewise_integral(const std::function<double(double)>& f, double t0, double t1) {
  if (!(t1 > t0)) return 0.0;
  const auto x = num::linspace(t0, t1, 17);
  double acc = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) acc += num::integrate(f, x[i - 1], x[i], 1e-12, 18).value;
  return acc;
}

}  // namespace

void OdiConfig::validate() const {
  if (!(c0 > 0.0 && c4 > 0.0 && c7 > 0.0 && cbar > 0.0)) {
    throw InvalidInput("odi: constants must be positive");
  }
  if (!(gamma > 0.0)) throw InvalidInput("odi: gamma must be > 0");
  if (!(y0 > 0.0)) throw InvalidInput("odi: y0 must be > 0");
  if (!(tau_max > 0.0)) throw InvalidInput("odi: tau_max must be > 0");
}

double tau_bar_from_log(const OmegaProfile& omega, double c7, double log_L) {
  const double target = std::log(c7) - log_L;
  auto h = [&](double t) { return 2.0 * t - omega.log_value_at_log(t) - target; };
  double lo = -1.0, hi = 1.0;
  while (h(lo) > 0.0) {
    lo *= 2.0;
    if (lo < -1e300) throw BracketError("tau_bar: no lower bracket");
  }
  while (h(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw BracketError("tau_bar: no upper bracket");
  }
  const double tol = 1e-15 * std::max(1.0, std::abs(lo));
  return std::exp(num::bisect(h, lo, hi, tol, 1e-16, 400));
}

double tau_bar(const OmegaProfile& omega, double c7, double y) {
  if (!(y > 0.0 && y < 1.0)) throw InvalidInput("tau_bar: y must lie in (0, 1)");
  return tau_bar_from_log(omega, c7, std::log(-std::log(y)));
}

RootResult solve_tau_prime(const OdiConfig& cfg) {
  cfg.validate();
  const double p = 2.0 / (1.0 - cfg.ex.q);
  const double D = std::log(3.0 * cfg.c0) + p * std::log(cfg.field.d0()) - std::log(cfg.y0);
  if (!(D > 0.0)) {
    throw DomainError("tau': y0 >= 3 c0 sup a^{2/(1-q)}, the curve has no plateau");
  }
  const double target = std::log(p) - std::log(D);
  const auto& w = cfg.field.omega();
  auto h = [&](double t) { return 2.0 * t - w.log_value_at_log(t) - target; };
  double lo = -1.0, hi = 1.0;
  while (h(lo) > 0.0) lo *= 2.0;
  while (h(hi) < 0.0) hi *= 2.0;
  RootResult r;
  r.tau = std::exp(num::bisect(h, lo, hi, 1e-15, 1e-16, 400));
  const double lhs = r.tau * r.tau / w.value(r.tau);
  r.residual = std::abs(lhs - p / D) / (p / D);
  return r;
}

double psi2_integral(const OdiConfig& cfg, double t0, double t1) {
  const double e = 1.0 - cfg.ex.theta2;
  auto f = [&](double r) {
    const double la = cfg.field.log_value(r);
    if (la == -num::kInf) return 0.0;
    return std::exp(e * la) * s_ramp(cfg.field.omega(), r).ds;
  };
  return piecewise_integral(f, t0, t1);
}

double psi1_integral(const OdiConfig& cfg, double t0, double t1) {
  const double e = 1.0 - cfg.ex.theta1;
  auto f = [&](double r) {
    const double la = cfg.field.log_value(r);
    return la == -num::kInf ? 0.0 : std::exp(e * la);
  };
  return piecewise_integral(f, t0, t1);
}

namespace {

double y_from_bracket(double base_pow, double kappa, double drop) {
  // below a few ulps of the base the difference is cancellation noise
  const double b = base_pow - drop;
  return b > 64.0 * std::numeric_limits<double>::epsilon() * base_pow ? std::pow(b, 1.0 / kappa)
                                                                      : 0.0;
}

double y2_from_integral(const OdiConfig& cfg, double integral) {
  const double k = cfg.ex.kappa(2);
  const double coef = k * std::pow(3.0 * cfg.c0, -1.0 / (1.0 + cfg.ex.lambda2));
  return y_from_bracket(std::pow(cfg.y0, k), k, coef * integral);
}

double y1_from_integral(const OdiConfig& cfg, double y_start, double integral) {
  const double k = cfg.ex.kappa(1);
  const double coef = k * std::pow(3.0 * cfg.c0, -1.0 / (1.0 + cfg.ex.lambda1));
  return y_from_bracket(std::pow(y_start, k), k, coef * integral);
}

}  // namespace

double curve_y2(const OdiConfig& cfg, double tau_prime, double tau) {
  if (tau < tau_prime) throw InvalidInput("curve_y2: tau below tau'");
  return y2_from_integral(cfg, psi2_integral(cfg, tau_prime, tau));
}

double curve_y1(const OdiConfig& cfg, double tau_dprime, double y_start, double tau) {
  if (tau < tau_dprime) throw InvalidInput("curve_y1: tau below tau''");
  return y1_from_integral(cfg, y_start, psi1_integral(cfg, tau_dprime, tau));
}

double log_boundary_b0(const OdiConfig& cfg, double tau) {
  return std::log(3.0 * cfg.c0) + 2.0 / (1.0 - cfg.ex.q) * cfg.field.log_value(tau);
}

double log_boundary_b1(const OdiConfig& cfg, double tau) {
  const double q = cfg.ex.q;
  const double e = 2.0 / ((1.0 - q) * (cfg.ex.theta1 - cfg.ex.theta2));
  return log_boundary_b0(cfg, tau) + e * log_sprime(cfg, tau);
}

TauDoublePrime solve_tau_double_prime(const OdiConfig& cfg, double tau_prime) {
  TauDoublePrime out;
  auto g_of = [&](double tau, double integral) {
    const double y = y2_from_integral(cfg, integral);
    return (y > 0.0 ? std::log(y) : -num::kInf) - log_boundary_b1(cfg, tau);
  };
  const double kap2 = cfg.ex.kappa(2);
  auto finish = [&](double tau, double y2) {
    out.tau = tau;
    const double lb = log_boundary_b1(cfg, tau);
    out.residual = y2 > 0.0 ? std::abs(std::expm1(std::log(y2) - lb)) : 1.0;
    out.bracket_constant =
        std::exp((1.0 - cfg.ex.theta2) * cfg.field.log_value(tau) + 2.0 * log_sprime(cfg, tau) -
                 kap2 * std::log(cfg.y0));
  };
  if (g_of(tau_prime, 0.0) <= 0.0) {
    out.degenerate = true;
    finish(tau_prime, cfg.y0);
    return out;
  }
  double t_lo = tau_prime, acc = 0.0;
  while (t_lo < cfg.tau_max) {
    const double t_hi = std::min(cfg.tau_max, t_lo * kScale);
    const double piece = psi2_integral(cfg, t_lo, t_hi);
    if (g_of(t_hi, acc + piece) <= 0.0) {
      const double base = acc;
      const double a = t_lo;
      auto g = [&](double lt) {
        const double t = std::exp(lt);
        return g_of(t, base + psi2_integral(cfg, a, t));
      };
      const double lt = num::bisect(g, std::log(t_lo), std::log(t_hi), 1e-15, 1e-16, 400);
      const double tau = std::exp(lt);
      finish(tau, y2_from_integral(cfg, base + psi2_integral(cfg, a, tau)));
      return out;
    }
    acc += piece;
    t_lo = t_hi;
  }
  out.region2_skipped = true;
  finish(cfg.tau_max, y2_from_integral(cfg, acc));
  return out;
}

TauTriplePrime solve_tau_triple_prime(const OdiConfig& cfg, double tau_dprime,
                                      double y2_at_dprime) {
  TauTriplePrime out;
  const double L = -std::log(cfg.y0);
  out.tau_bar = cfg.y0 < 1.0 ? tau_bar_from_log(cfg.field.omega(), cfg.c7, std::log(L)) : 0.0;

  // zero of Y1
  if (y2_at_dprime <= 0.0) {
    out.y1_zero = tau_dprime;
  } else {
    const double k = cfg.ex.kappa(1);
    const double need =
        std::pow(y2_at_dprime, k) * std::pow(3.0 * cfg.c0, 1.0 / (1.0 + cfg.ex.lambda1)) / k;
    double t_lo = tau_dprime, acc = 0.0;
    while (t_lo < cfg.tau_max) {
      const double t_hi = std::min(cfg.tau_max, t_lo * kScale);
      const double piece = psi1_integral(cfg, t_lo, t_hi);
      if (acc + piece >= need) {
        const double base = acc, a = t_lo;
        auto g = [&](double t) { return base + psi1_integral(cfg, a, t) - need; };
        out.y1_zero = num::bisect(g, t_lo, t_hi, 1e-14 * t_hi, 0.0, 400);
        break;
      }
      acc += piece;
      t_lo = t_hi;
    }
  }

  // direct root of a^{1-theta2} s'^2 = c4 y0^{kappa2}
  {
    const double rhs = std::log(cfg.c4) + cfg.ex.kappa(2) * std::log(cfg.y0);
    auto phi = [&](double lt) {
      const double t = std::exp(lt);
      return (1.0 - cfg.ex.theta2) * cfg.field.log_value(t) + 2.0 * log_sprime(cfg, t) - rhs;
    };
    double lt = std::log(std::max(1e-300, std::min(tau_dprime, out.tau_bar) * 1e-2));
    const double lt_max = std::log(cfg.tau_max);
    if (!(phi(lt) >= 0.0)) {
      while (lt < lt_max) {
        const double next = std::min(lt_max, lt + std::log(kScale));
        if (phi(next) >= 0.0) {
          out.direct = std::exp(num::bisect(phi, lt, next, 1e-15, 1e-16, 400));
          break;
        }
        lt = next;
      }
    }
  }

  double end = 0.0;
  if (out.y1_zero) end = std::max(end, *out.y1_zero);
  if (out.direct) end = std::max(end, *out.direct);
  if (end == 0.0) end = cfg.tau_max;
  if (end <= 2.0 * tau_dprime) {
    end = 2.0 * tau_dprime;
    out.bumped = true;
  }
  out.tau = end;
  return out;
}

std::string to_string(CurvePiece p) {
  switch (p) {
    case CurvePiece::plateau: return "plateau";
    case CurvePiece::y2: return "Y2";
    case CurvePiece::y1: return "Y1";
  }
  return "?";
}

double OdiCurve::value(const OdiConfig& cfg, double t) const {
  if (t <= tau_prime) return cfg.y0;
  if (t <= dprime.tau) return curve_y2(cfg, tau_prime, t);
  if (tprime.y1_zero && t >= *tprime.y1_zero) return 0.0;
  return curve_y1(cfg, dprime.tau, y_at_dprime, t);
}

OdiCurve build_curve(const OdiConfig& cfg, std::size_t samples) {
  OdiCurve c;
  c.tau_prime = solve_tau_prime(cfg).tau;
  c.dprime = solve_tau_double_prime(cfg, c.tau_prime);
  c.y_at_dprime = c.dprime.degenerate ? cfg.y0 : curve_y2(cfg, c.tau_prime, c.dprime.tau);
  c.tprime = solve_tau_triple_prime(cfg, c.dprime.tau, c.y_at_dprime);
  if (c.dprime.degenerate) c.flags.push_back("tau'' collapsed onto tau'");
  if (c.dprime.region2_skipped) c.flags.push_back("Y2 never met the region-1 boundary");
  if (c.tprime.bumped) c.flags.push_back("tau''' raised to 2 tau''");
  if (!c.tprime.y1_zero) c.flags.push_back("Y1 does not reach zero below tau_max");

  c.jump_at_prime = std::abs(curve_y2(cfg, c.tau_prime, c.tau_prime) - cfg.y0) / cfg.y0;
  if (c.y_at_dprime > 0.0) {
    c.jump_at_dprime =
        std::abs(curve_y1(cfg, c.dprime.tau, c.y_at_dprime, c.dprime.tau) - c.y_at_dprime) /
        c.y_at_dprime;
  }

  auto ts = num::linspace(0.0, c.tprime.tau, std::max<std::size_t>(samples, 2));
  ts.push_back(c.tau_prime);
  ts.push_back(c.dprime.tau);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  // accumulate the integrals piece by piece along the samples
  double i2 = 0.0, i1 = 0.0, prev = 0.0;
  for (double t : ts) {
    double y = cfg.y0;
    CurvePiece p = CurvePiece::plateau;
    if (t > c.tau_prime && t <= c.dprime.tau) {
      i2 += psi2_integral(cfg, std::max(prev, c.tau_prime), t);
      y = y2_from_integral(cfg, i2);
      p = CurvePiece::y2;
    } else if (t > c.dprime.tau) {
      i1 += psi1_integral(cfg, std::max(prev, c.dprime.tau), t);
      y = y1_from_integral(cfg, c.y_at_dprime, i1);
      if (c.tprime.y1_zero && t >= *c.tprime.y1_zero) y = 0.0;  // root to bisection accuracy
      p = CurvePiece::y1;
    }
    c.tau.push_back(t);
    c.Y.push_back(y);
    c.piece.push_back(p);
    prev = t;
  }
  c.monotone = true;
  for (std::size_t i = 1; i < c.Y.size(); ++i) {
    if (c.Y[i] > c.Y[i - 1]) c.monotone = false;
  }
  c.reaches_zero = !c.Y.empty() && c.Y.back() <= 0.0;
  return c;
}

std::string to_string(Region r) {
  switch (r) {
    case Region::omega0: return "Omega0";
    case Region::omega1: return "Omega1";
    case Region::omega2: return "Omega2";
  }
  return "?";
}

Region region_classifier(const OdiConfig& cfg, double tau, double y) {
  if (!(tau > 0.0 && y > 0.0)) throw InvalidInput("region_classifier: need tau, y > 0");
  const double la = cfg.field.log_value(tau);
  const double ls = log_sprime(cfg, tau);
  const double lpsi[3] = {la + ls, (1.0 - cfg.ex.theta1) * la, (1.0 - cfg.ex.theta2) * la + ls};
  const double ly = std::log(y / (3.0 * cfg.c0));
  int best = 0;
  double best_v = num::kInf;
  for (int i = 0; i < 3; ++i) {
    const double v = lpsi[i] + ly / (1.0 + cfg.ex.lambda(i));
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  return static_cast<Region>(best);
}

std::string to_string(BoundVerdict v) {
  switch (v) {
    case BoundVerdict::finite: return "finite";
    case BoundVerdict::unbounded: return "unbounded";
    case BoundVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

ExtinctionBoundReport extinction_iteration(const OdiConfig& cfg, std::size_t max_rounds,
                                           std::optional<Verdict> dini) {
  cfg.validate();
  if (!(cfg.y0 < 1.0)) throw InvalidInput("extinction_iteration: y0 must be < 1");
  if (max_rounds < 2) throw InvalidInput("extinction_iteration: need at least 2 rounds");
  const auto& w = cfg.field.omega();
  const double log_L = std::log(-std::log(cfg.y0));
  const double lg = std::log1p(cfg.gamma);
  const double tc = cfg.gamma * cfg.c7 / cfg.cbar;

  ExtinctionBoundReport rep;
  rep.dini = dini;
  rep.rounds.reserve(max_rounds);
  const double ln_c7 = std::log(cfg.c7);
  double t_prev = num::kInf;
  for (std::size_t i = 1; i <= max_rounds; ++i) {
    const double lLi = log_L + static_cast<double>(i - 1) * lg;
    const double target = ln_c7 - lLi;
    auto h = [&](double t) { return 2.0 * t - w.log_value_at_log(t) - target; };
    double hi, lo;
    if (std::isfinite(t_prev)) {
      // tau_i decreases with i: the previous root is an upper bracket
      hi = t_prev;
      double step = 1.0;
      lo = hi - step;
      while (h(lo) > 0.0) {
        step *= 2.0;
        lo = hi - step;
      }
    } else {
      lo = -1.0;
      hi = 1.0;
      while (h(lo) > 0.0) lo *= 2.0;
      while (h(hi) < 0.0) hi *= 2.0;
    }
    const double lt = num::bisect(h, lo, hi, 1e-14 * std::max(1.0, std::abs(lo)), 1e-16, 400);
    t_prev = lt;
    Round r;
    r.i = i;
    r.tau = std::exp(lt);
    const double lw = w.log_value_at_log(lt);
    r.t = tc * std::exp(lw);
    r.s = std::exp(4.0 * lt - lw);
    r.log_energy = lLi + lg;  // ln ln(1/y_i), y_i = y0^{(1+gamma)^i}
    rep.sum_t += r.t;
    rep.sum_s += r.s;
    rep.rounds.push_back(r);
  }

  // sums over rounds [2^j, 2^{j+1})
  for (std::size_t lo = 1; 2 * lo - 1 <= max_rounds; lo *= 2) {
    double acc = 0.0;
    for (std::size_t i = lo; i < 2 * lo; ++i) acc += rep.rounds[i - 1].t + rep.rounds[i - 1].s;
    rep.window_sums.push_back(acc);
  }
  const auto& W = rep.window_sums;
  std::vector<double> ratios;
  for (std::size_t j = 1; j < W.size(); ++j) {
    ratios.push_back(W[j - 1] > 0.0 ? W[j] / W[j - 1] : (W[j] > 0.0 ? num::kInf : 0.0));
  }
  const double total = rep.sum_t + rep.sum_s;
  const std::size_t k = std::min<std::size_t>(6, ratios.size());
  rep.verdict = BoundVerdict::inconclusive;
  rep.R = total;
  if (k >= 3) {
    const auto last = std::span<const double>(ratios).last(k);
    const double r_max = *std::max_element(last.begin(), last.end());
    const double r_min = *std::min_element(last.begin(), last.end());
    if (r_max <= 0.97) {
      rep.verdict = BoundVerdict::finite;
      rep.tail = W.back() * r_max / (1.0 - r_max);
      rep.R = total + rep.tail;
    } else if (r_min >= 0.995) {
      rep.verdict = BoundVerdict::unbounded;
      rep.R = num::kInf;
    }
  }

  // sum_i omega(C1 lambda^i) against the integral of omega(s)/s
  const double L = -std::log(cfg.y0);
  const double ln_c1 = 0.5 * (std::log(cfg.c7 * w.omega0()) - std::log(L) - lg);
  const double ln_lam = -0.5 * lg;
  double sum = 0.0, integral = 0.0;
  std::size_t next = 1, done_to = 0;
  for (std::size_t i = 1; i <= max_rounds; ++i) {
    sum += w.value_at_log(ln_c1 + static_cast<double>(i) * ln_lam);
    if (i == next) {
      const double a = ln_c1 + static_cast<double>(i) * ln_lam;
      const double b = ln_c1 + static_cast<double>(done_to) * ln_lam;
      integral += num::integrate([&](double t) { return w.value_at_log(t); }, a, b, 1e-12, 18).value;
      done_to = i;
      SumCheck sc;
      sc.j = i;
      sc.sum = sum;
      sc.integral = integral / (-ln_lam);
      sc.ratio = sc.integral > 0.0 ? sc.sum / sc.integral : num::kInf;
      rep.sum_check_factor = std::max(rep.sum_check_factor, std::max(sc.ratio, 1.0 / sc.ratio));
      rep.sum_checks.push_back(sc);
      next *= 2;
    }
  }

  if (dini && *dini != Verdict::inconclusive && rep.verdict != BoundVerdict::inconclusive) {
    rep.dini_consistent = (*dini == Verdict::convergent) == (rep.verdict == BoundVerdict::finite);
  }
  return rep;
}

}  // namespace extinctlab
