#include "extinctlab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "extinctlab/error.hpp"
#include "extinctlab/numerics.hpp"

namespace extinctlab {

double ExponentPack::lambda(int i) const {
  switch (i) {
    case 0: return lambda0;
    case 1: return lambda1;
    case 2: return lambda2;
    default: throw InvalidInput("exponent index must be 0, 1 or 2");
  }
}

double ExponentPack::kappa(int i) const {
  const double l = lambda(i);
  return l / (1.0 + l);
}

ExponentPack make_exponents(double q, int N) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidInput("exponents: q must lie in (0,1)");
  if (N < 1) throw InvalidInput("exponents: N must be >= 1");
  ExponentPack e;
  e.q = q;
  e.N = N;
  const double den = 2.0 * (q + 1.0) + N * (1.0 - q);
  e.theta1 = ((q + 1.0) + N * (1.0 - q)) / den;
  e.theta2 = N * (1.0 - q) / den;
  e.lambda0 = (1.0 - q) / (1.0 + q);
  auto lam = [q](double th) {
    const double p = (1.0 - th) * (1.0 - q);
    return p / (2.0 - p);
  };
  e.lambda1 = lam(e.theta1);
  e.lambda2 = lam(e.theta2);
  return e;
}

namespace {

// int_s^T of a piecewise-linear column sampled at `times`.
double column_integral(const std::vector<double>& times,
                       const std::vector<std::vector<double>>& rows, std::size_t j,
                       double s, double T) {
  if (times.empty() || !(T > s)) return 0.0;
  s = std::max(s, times.front());
  T = std::min(T, times.back());
  if (!(T > s)) return 0.0;
  auto value = [&](double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t k = static_cast<std::size_t>(it - times.begin());
    if (k == 0) return rows.front()[j];
    if (k == times.size()) return rows.back()[j];
    const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return (1.0 - w) * rows[k - 1][j] + w * rows[k][j];
  };
  double acc = 0.0;
  double t_prev = s, f_prev = value(s);
  auto it = std::upper_bound(times.begin(), times.end(), s);
  for (; it != times.end() && *it < T; ++it) {
    const std::size_t k = static_cast<std::size_t>(it - times.begin());
    acc += 0.5 * (*it - t_prev) * (f_prev + rows[k][j]);
    t_prev = *it;
    f_prev = rows[k][j];
  }
  acc += 0.5 * (T - t_prev) * (f_prev + value(T));
  return acc;
}

double column_at(const std::vector<double>& times,
                 const std::vector<std::vector<double>>& rows, double t, std::size_t j) {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t k = static_cast<std::size_t>(it - times.begin());
  if (k == 0) return rows.front()[j];
  if (k == times.size()) return rows.back()[j];
  const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
  return (1.0 - w) * rows[k - 1][j] + w * rows[k][j];
}

}  // namespace

double EnergyLedger::H_at(double t, std::size_t j) const { return column_at(times, H, t, j); }
double EnergyLedger::E_at(double t, std::size_t j) const { return column_at(times, E, t, j); }

double EnergyLedger::I_between(double s, double t_end, std::size_t j) const {
  return column_integral(times, E, j, s, t_end);
}

double EnergyLedger::J_between(double s, double t_end, std::size_t j) const {
  return column_integral(times, Jdens, j, s, t_end);
}

EnergyLedger compute_ledger(const SolutionTrajectory& traj, std::vector<double> taus,
                            const OmegaProfile* omega, kernels::Backend backend) {
  EnergyLedger L;
  const double R = traj.grid.radius();
  for (double& t : taus) {
    if (t < 0.0 || t > R) {
      std::ostringstream os;
      os << "tau=" << t << " clipped to [0, " << R << "]";
      L.warnings.push_back(os.str());
      t = std::clamp(t, 0.0, R);
    }
  }
  L.taus = taus;
  std::vector<double> ext;
  ext.reserve(taus.size() + 1);
  ext.push_back(0.0);
  ext.insert(ext.end(), taus.begin(), taus.end());

  std::vector<std::vector<double>> states;
  states.reserve(traj.snapshots.size());
  for (const auto& s : traj.snapshots) {
    L.times.push_back(s.t);
    states.push_back(s.u);
  }
  const auto rows = kernels::energy_rows_batch(backend, traj.grid, states, traj.a, traj.q, ext);
  const std::size_t m = taus.size();
  for (const auto& r : rows) {
    L.H0.push_back(r.H[0]);
    L.E0.push_back(r.E[0]);
    L.H.emplace_back(r.H.begin() + 1, r.H.end());
    L.E.emplace_back(r.E.begin() + 1, r.E.end());
    L.Jdens.emplace_back(r.J.begin() + 1, r.J.end());
  }
  L.y0 = traj.y0();
  L.T = L.times.empty() ? 0.0 : L.times.back();
  L.s_of_tau.assign(m, 0.0);
  L.I.assign(m, 0.0);
  L.J.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (omega && taus[j] > 0.0) L.s_of_tau[j] = s_ramp(*omega, taus[j]).s;
    L.I[j] = L.I_between(L.s_of_tau[j], L.T, j);
    L.J[j] = L.J_between(L.s_of_tau[j], L.T, j);
  }
  L.y = L.I;
  return L;
}

GlobalEstimateReport verify_global_estimate(const EnergyLedger& L) {
  GlobalEstimateReport rep;
  const std::size_t n = L.times.size();
  double acc = 0.0, acc_coarse = 0.0, drift = 0.0;
  rep.min_slack = num::kInf;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) acc += 0.5 * (L.times[k] - L.times[k - 1]) * (L.E0[k] + L.E0[k - 1]);
    if (k >= 2 && k % 2 == 0) {
      acc_coarse += 0.5 * (L.times[k] - L.times[k - 2]) * (L.E0[k] + L.E0[k - 2]);
      drift = std::max(drift, std::abs(acc - acc_coarse));
    }
    const double slack = L.y0 - L.H0[k] - acc;
    rep.t.push_back(L.times[k]);
    rep.H.push_back(L.H0[k]);
    rep.I.push_back(acc);
    rep.slack.push_back(slack);
    rep.min_slack = std::min(rep.min_slack, slack);
  }
  rep.tolerance = std::max(drift, 1e-12 * std::max(1.0, L.y0));
  rep.holds = n > 0 && rep.min_slack >= -rep.tolerance;
  return rep;
}

LocalEnergyReport probe_local_energy(const EnergyLedger& L, const ExponentPack& ex,
                                      const PotentialField& field, double s, double T) {
  LocalEnergyReport rep;
  const double q = ex.q;
  const double d2 = 2.0 - (1.0 - ex.theta2) * (1.0 - q);
  const double d1 = 2.0 - (1.0 - ex.theta1) * (1.0 - q);
  // (power of a, power of the energy) for each term
  const double pa[4] = {-2.0 * (1.0 - ex.theta2) / d2, -2.0 / (q + 1.0), -2.0 / (q + 1.0),
                        -2.0 * (1.0 - ex.theta1) / d1};
  const double pe[4] = {2.0 / d2, 2.0 / (q + 1.0), 2.0 / (q + 1.0), 2.0 / d1};
  for (std::size_t j = 0; j < L.taus.size(); ++j) {
    LocalEnergyRow row;
    row.tau = L.taus[j];
    const double la = field.log_value(row.tau);
    if (la == -num::kInf) {
      row.skipped = true;
      std::ostringstream os;
      os << "a(" << row.tau << ") = 0, row skipped";
      rep.warnings.push_back(os.str());
      rep.rows.push_back(row);
      continue;
    }
    row.lhs = L.H_at(T, j) + L.I_between(s, T, j);
    const double e = L.E_at(s, j);
    const double jj = L.J_between(s, T, j);
    const double base[4] = {e, e, jj, jj};
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      row.terms[i] = base[i] > 0.0 ? std::exp(pa[i] * la + pe[i] * std::log(base[i])) : 0.0;
      sum += row.terms[i];
    }
    if (row.lhs == 0.0) {
      row.ratio = 0.0;
    } else {
      row.ratio = sum > 0.0 ? row.lhs / sum : num::kInf;
    }
    rep.c_hat = std::max(rep.c_hat, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<InterpolationCorpusItem> interpolation_corpus(const RadialGrid& g,
                                                          std::size_t n_random,
                                                          std::uint64_t seed) {
  std::vector<InterpolationCorpusItem> out;
  const double R = g.radius();
  const std::size_t n = g.size();
  for (double c : {0.5, 1.0, 2.0}) {
    out.push_back({"const(" + std::to_string(c) + ")", std::vector<double>(n, c)});
  }
  for (double m : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (double w : {0.05, 0.1, 0.2, 0.4}) {
      InterpolationCorpusItem it;
      std::ostringstream os;
      os << "gauss(" << m << "," << w << ")";
      it.label = os.str();
      it.v.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double z = (g.centers[i] - m * R) / (w * R);
        it.v[i] = std::exp(-z * z);
      }
      out.push_back(std::move(it));
    }
  }
  // compactly supported bumps near the boundary
  for (double m : {0.8, 0.9}) {
    for (double w : {0.08, 0.15}) {
      InterpolationCorpusItem it;
      std::ostringstream os;
      os << "cbump(" << m << "," << w << ")";
      it.label = os.str();
      it.v.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double z = (g.centers[i] - m * R) / (w * R);
        it.v[i] = std::abs(z) < 1.0 ? (1.0 - z * z) * (1.0 - z * z) : 0.0;
      }
      out.push_back(std::move(it));
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> G(0.0, 1.0);
  for (std::size_t r = 0; r < n_random; ++r) {
    double b[9];
    for (int k = 0; k < 9; ++k) b[k] = G(rng) / (1.0 + k);
    InterpolationCorpusItem it;
    it.label = "random(" + std::to_string(r) + ")";
    it.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double v = 0.0;
      for (int k = 0; k < 9; ++k) v += b[k] * std::cos(k * std::numbers::pi * g.centers[i] / R);
      it.v[i] = v;
    }
    out.push_back(std::move(it));
  }
  return out;
}

InterpolationReport probe_interpolation(const RadialGrid& g, double r0_lo, double r0_hi,
                                        double lambda,
                                        const std::vector<InterpolationCorpusItem>& corpus) {
  if (!(lambda > 1.0 && lambda <= 2.0)) {
    throw InvalidInput("interpolation probe: lambda must lie in (1, 2]");
  }
  if (!(r0_lo >= 0.0 && r0_hi > r0_lo && r0_hi < g.radius())) {
    throw InvalidInput("interpolation probe: subdomain must be strictly interior");
  }
  const std::size_t n = g.size();
  const double sn = sphere_area(g.N) / g.N;
  std::vector<double> vin(n);
  double vol0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = std::max(g.faces[i], r0_lo), hi = std::min(g.faces[i + 1], r0_hi);
    vin[i] = hi > lo ? sn * (std::pow(hi, g.N) - std::pow(lo, g.N)) : 0.0;
    vol0 += vin[i];
  }
  InterpolationReport rep;
  rep.corpus_size = corpus.size();
  rep.c2_min = std::sqrt(g.total_volume()) / std::pow(vol0, 1.0 / lambda);
  rep.c2 = 2.0 * rep.c2_min;
  for (const auto& item : corpus) {
    double l2 = 0.0, gr = 0.0, p = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      l2 += g.volumes[i] * item.v[i] * item.v[i];
      p += vin[i] * std::pow(std::abs(item.v[i]), lambda);
      if (i > 0) {
        const double d = item.v[i] - item.v[i - 1];
        gr += g.coupling[i] * d * d;
      }
    }
    const double L = std::sqrt(l2), G = std::sqrt(gr), P = std::pow(p, 1.0 / lambda);
    if (!(G > 1e-14 * std::max(1.0, L))) continue;
    const double need = (L - rep.c2 * P) / G;
    if (need > rep.c1) {
      rep.c1 = need;
      rep.c1_witness = item.label;
    }
    if (P == 0.0) rep.c1_outside = std::max(rep.c1_outside, L / G);
  }
  return rep;
}

PsiValues psi_functions(const PotentialField& field, const ExponentPack& ex, double tau) {
  PsiValues p;
  const double la = field.log_value(tau);
  if (la == -num::kInf) return p;
  const double ds = s_ramp(field.omega(), tau).ds;
  p.psi[0] = std::exp(la) * ds;
  p.psi[1] = std::exp((1.0 - ex.theta1) * la);
  p.psi[2] = std::exp((1.0 - ex.theta2) * la) * ds;
  return p;
}

OdiResidualReport ode_inequality_residual(const EnergyLedger& L, const PotentialField& field,
                                          const ExponentPack& ex) {
  OdiResidualReport rep;
  const auto& t = L.taus;
  const auto& y = L.y;
  const std::size_t m = t.size();
  if (m < 3) throw InvalidInput("odi residual: need at least 3 radii");
  std::vector<double> dy(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (j == 0) {
      dy[j] = (y[1] - y[0]) / (t[1] - t[0]);
    } else if (j == m - 1) {
      dy[j] = (y[j] - y[j - 1]) / (t[j] - t[j - 1]);
    } else {
      // derivative of the parabola through three unequally spaced points
      const double h0 = t[j] - t[j - 1], h1 = t[j + 1] - t[j];
      dy[j] = (-h1 / (h0 * (h0 + h1))) * y[j - 1] + ((h1 - h0) / (h0 * h1)) * y[j] +
              (h0 / (h1 * (h0 + h1))) * y[j + 1];
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    OdiResidualRow row;
    row.tau = t[j];
    row.y = y[j];
    row.dy = dy[j];
    if (row.dy > 0.0) {
      row.clipped = true;
      row.dy = 0.0;
      std::ostringstream os;
      os << "y' > 0 at tau=" << t[j] << ", clipped";
      rep.warnings.push_back(os.str());
    }
    const auto psi = psi_functions(field, ex, row.tau);
    for (int i = 0; i < 3; ++i) {
      if (row.dy < 0.0) {
        // psi_i = 0 makes the term infinite and the row holds trivially
        row.sum += psi.psi[i] > 0.0
                       ? std::exp((1.0 + ex.lambda(i)) * std::log(-row.dy / psi.psi[i]))
                       : num::kInf;
      }
    }
    rep.rows.push_back(row);
    if (row.y > 0.0) {
      if (row.sum > 0.0) {
        rep.c0 = std::max(rep.c0, row.y / row.sum);
      } else {
        rep.finite = false;
      }
    }
  }
  for (auto& row : rep.rows) {
    row.residual = std::isinf(row.sum) ? num::kInf : rep.c0 * row.sum - row.y;
  }
  if (!rep.finite) rep.c0 = num::kInf;
  return rep;
}

}  // namespace extinctlab
