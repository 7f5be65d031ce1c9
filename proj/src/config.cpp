#include "extinctlab/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <set>
#include <sstream>

#include "extinctlab/error.hpp"

namespace extinctlab {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string> kKnown = {
    "run.seed",
    "profile.kind", "profile.alpha", "profile.beta", "profile.s0", "profile.omega0",
    "profile.scale", "profile.delta", "profile.table", "profile.d0",
    "problem.N", "problem.R", "problem.q", "problem.potential", "problem.epsilon",
    "problem.u0", "problem.u0_kind", "problem.nu", "problem.horizon", "problem.cells",
    "problem.dt", "problem.max_snapshots", "problem.backend", "problem.ledger_taus",
    "odi.gamma", "odi.c0", "odi.c4", "odi.c7", "odi.cbar", "odi.y0", "odi.tau_max",
    "odi.rounds", "odi.scale_factor", "odi.simulation",
    "spectral.potential", "spectral.constant", "spectral.h_min", "spectral.h_max",
    "spectral.h_count", "spectral.K", "spectral.q", "spectral.n_lo", "spectral.n_hi",
    "spectral.kv_n_max", "spectral.cells", "spectral.s_lo", "spectral.s_hi", "spectral.alpha",
};

template <class T>
void get(const pt::ptree& t, const std::string& key, T& out) {
  const auto v = t.get_optional<std::string>(key);
  if (!v || v->empty()) return;  // "key =" keeps the default
  std::istringstream is(*v);
  T x{};
  is >> x;
  if (is.fail() || !(is >> std::ws).eof()) throw ConfigError("config: bad value for " + key + ": '" + *v + "'");
  out = x;
}

template <>
void get<std::string>(const pt::ptree& t, const std::string& key, std::string& out) {
  if (const auto v = t.get_optional<std::string>(key); v && !v->empty()) out = *v;
}

template <class T>
void get(const pt::ptree& t, const std::string& key, std::optional<T>& out) {
  const auto v = t.get_optional<std::string>(key);
  if (!v || v->empty()) return;
  T x{};
  get(t, key, x);
  out = x;
}

void check_choice(const std::string& key, const std::string& v, std::initializer_list<const char*> ok) {
  for (const char* c : ok) {
    if (v == c) return;
  }
  throw ConfigError("config: " + key + " = '" + v + "' is not a valid choice");
}

RunConfig from_tree(const pt::ptree& t) {
  for (const auto& [sec, body] : t) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config: key '" + sec + "' outside any section");
    }
    for (const auto& [key, val] : body) {
      if (!kKnown.count(sec + "." + key)) throw ConfigError("config: unknown key " + sec + "." + key);
    }
  }
  RunConfig c;
  get(t, "run.seed", c.seed);

  auto& p = c.profile;
  get(t, "profile.kind", p.kind);
  get(t, "profile.alpha", p.alpha);
  get(t, "profile.beta", p.beta);
  get(t, "profile.s0", p.s0);
  get(t, "profile.omega0", p.omega0);
  get(t, "profile.scale", p.scale);
  get(t, "profile.delta", p.delta);
  get(t, "profile.table", p.table);
  get(t, "profile.d0", p.d0);
  check_choice("profile.kind", p.kind, {"power", "log_power", "constant", "singular", "table"});
  if (!(p.d0 > 0.0)) throw ConfigError("config: profile.d0 must be > 0");

  auto& q = c.problem;
  get(t, "problem.N", q.N);
  get(t, "problem.R", q.R);
  get(t, "problem.q", q.q);
  get(t, "problem.potential", q.potential);
  get(t, "problem.epsilon", q.epsilon);
  get(t, "problem.u0", q.u0);
  get(t, "problem.u0_kind", q.u0_kind);
  get(t, "problem.nu", q.nu);
  get(t, "problem.horizon", q.horizon);
  get(t, "problem.cells", q.cells);
  get(t, "problem.dt", q.dt);
  get(t, "problem.max_snapshots", q.max_snapshots);
  get(t, "problem.backend", q.backend);
  get(t, "problem.ledger_taus", q.ledger_taus);
  check_choice("problem.potential", q.potential, {"profile", "constant", "zero"});
  check_choice("problem.u0_kind", q.u0_kind, {"constant", "random"});
  check_choice("problem.backend", q.backend, {"omp", "serial"});
  if (q.ledger_taus < 3) throw ConfigError("config: problem.ledger_taus must be >= 3");

  auto& o = c.odi;
  get(t, "odi.gamma", o.gamma);
  get(t, "odi.c0", o.c0);
  get(t, "odi.c4", o.c4);
  get(t, "odi.c7", o.c7);
  get(t, "odi.cbar", o.cbar);
  get(t, "odi.y0", o.y0);
  get(t, "odi.tau_max", o.tau_max);
  get(t, "odi.rounds", o.rounds);
  get(t, "odi.scale_factor", o.scale_factor);
  get(t, "odi.simulation", o.simulation);

  auto& s = c.spectral;
  get(t, "spectral.potential", s.potential);
  get(t, "spectral.constant", s.constant);
  get(t, "spectral.h_min", s.h_min);
  get(t, "spectral.h_max", s.h_max);
  get(t, "spectral.h_count", s.h_count);
  get(t, "spectral.K", s.K);
  get(t, "spectral.q", s.q);
  get(t, "spectral.n_lo", s.n_lo);
  get(t, "spectral.n_hi", s.n_hi);
  get(t, "spectral.kv_n_max", s.kv_n_max);
  get(t, "spectral.cells", s.cells);
  get(t, "spectral.s_lo", s.s_lo);
  get(t, "spectral.s_hi", s.s_hi);
  get(t, "spectral.alpha", s.alpha);
  check_choice("spectral.potential", s.potential, {"profile", "constant"});
  if (!(s.h_min > 0.0 && s.h_max >= s.h_min)) throw ConfigError("config: need 0 < h_min <= h_max");
  if (s.h_count < 1) throw ConfigError("config: spectral.h_count must be >= 1");
  return c;
}

}  // namespace

OmegaProfile ProfileSection::omega() const {
  if (kind == "power") return OmegaProfile::power(alpha, s0.value_or(1.0), delta);
  if (kind == "log_power") {
    return s0 ? OmegaProfile::log_power(beta, *s0, delta) : OmegaProfile::log_power(beta, std::exp(-1.0), delta);
  }
  if (kind == "constant") return OmegaProfile::constant(omega0, delta);
  if (kind == "singular") return OmegaProfile::singular(scale, delta);
  if (kind == "table") return OmegaProfile::table_from_csv(table, delta);
  throw ConfigError("config: unknown profile kind " + kind);
}

ProblemSpec RunConfig::problem_spec() const {
  ProblemSpec s;
  s.N = problem.N;
  s.R = problem.R;
  s.q = problem.q;
  s.epsilon = problem.epsilon;
  s.nu = problem.nu;
  if (problem.potential == "profile") {
    s.potential = PotentialKind::profile;
    s.field = profile.field();
  } else if (problem.potential == "constant") {
    s.potential = PotentialKind::constant;
  } else {
    s.potential = PotentialKind::zero;
  }
  s.u0.value = problem.u0;
  s.u0.kind = problem.u0_kind == "random" ? InitialKind::random : InitialKind::constant;
  s.u0.seed = seed;
  return s;
}

kernels::Backend RunConfig::backend() const {
  return problem.backend == "serial" ? kernels::Backend::serial : kernels::Backend::omp;
}

SolverOptions RunConfig::solver_options() const {
  SolverOptions o;
  o.cells = problem.cells;
  o.dt = problem.dt;
  o.horizon = problem.horizon;
  o.max_snapshots = problem.max_snapshots;
  o.backend = backend();
  return o;
}

namespace {

// read_ini only knows whole-line comments; drop "key = v  ; note" tails too
std::string strip_inline_comments(const std::string& text) {
  std::istringstream in(text);
  std::string out, line;
  while (std::getline(in, line)) {
    for (std::size_t i = 1; i < line.size(); ++i) {
      if ((line[i] == ';' || line[i] == '#') && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.erase(i);
        break;
      }
    }
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  pt::ptree t;
  std::istringstream is(strip_inline_comments(text));
  try {
    pt::read_ini(is, t);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  return from_tree(t);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto c = parse_config(ss.str());
  c.source = path;
  // table paths are relative to the config file
  if (!c.profile.table.empty() && std::filesystem::path(c.profile.table).is_relative()) {
    c.profile.table = (path.parent_path() / c.profile.table).string();
  }
  return c;
}

}  // namespace extinctlab
