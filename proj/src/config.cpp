#include "rdt/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "rdt/error.hpp"
#include "rdt/experiments.hpp"

namespace rdt::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::input, "config key '" + key + "': " + why);
}

double plain_number(const std::string& t, const std::string& key) {
  double v = 0.0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc() || ptr != end) bad(key, "not a number: '" + t + "'");
  return v;
}

long parse_integer(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  long v = 0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc() || ptr != end) bad(key, "not an integer: '" + t + "'");
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

bool parse_bool(const std::string& t, const std::string& key) {
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  bad(key, "expected true or false");
}

}  // namespace

double parse_number(const std::string& text, const std::string& key) {
  std::string t = trim(text);
  if (t.empty()) bad(key, "empty value");
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    const double den = parse_number(t.substr(slash + 1), key);
    if (den == 0.0) bad(key, "division by zero");
    return parse_number(t.substr(0, slash), key) / den;
  }
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    const std::string head = trim(t.substr(0, t.size() - 2));
    return (head.empty() ? 1.0 : plain_number(head, key)) * std::numbers::pi;
  }
  return plain_number(t, key);
}

const std::map<std::string, std::string>& documented_keys() {
  static const std::map<std::string, std::string> keys{
      {"grid.d", "spatial dimension, 1 to 3"},
      {"grid.n", "nodes per axis, power of two >= 8"},
      {"grid.L", "torus side length (accepts 2pi)"},
      {"thermo.kc", "k^c"},
      {"thermo.ktheta", "k^theta"},
      {"thermo.kappa", "heat conductivity"},
      {"thermo.eta", "friction coefficients: one value or three comma-separated"},
      {"eq.cA", "equilibrium seed concentration of A"},
      {"eq.cB", "equilibrium seed concentration of B"},
      {"eq.cC", "equilibrium seed concentration of C"},
      {"eq.scale", "scale factor lambda applied to the equilibrium"},
      {"run.dt", "time step (accepts 1/256)"},
      {"run.T", "final time"},
      {"run.model", "condensed or perturbed"},
      {"run.convention", "rate convention r1, r2 or rt4"},
      {"run.dealias", "2/3-rule truncation of nonlinear terms, true or false"},
      {"run.record_every", "steps between recorded snapshots"},
      {"iter.h", "smallness parameter h in (0, 1)"},
      {"iter.kmax", "maximum number of iterations"},
      {"iter.tol", "relative convergence tolerance"},
      {"init.kind", "equilibrium, mode or random"},
      {"init.k", "integer wavevector for mode data, e.g. 1,1,0"},
      {"init.weights", "four component weights for mode data"},
      {"init.norm", "total critical norm of mode data (default h^4/2)"},
      {"init.amplitude", "relative max amplitude of random data"},
      {"init.band", "band limit of random data"},
      {"out.dir", "output directory"},
      {"seed", "seed of random data"},
  };
  return keys;
}

std::map<std::string, std::string> parse_pairs(std::istream& is, const std::string& origin) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos)
      throw Error(ErrorKind::input, where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorKind::input, where + ": empty key");
    if (!out.emplace(key, value).second)
      throw Error(ErrorKind::input, where + ": repeated key '" + key + "'");
  }
  return out;
}

RunConfig from_pairs(const std::map<std::string, std::string>& pairs) {
  const auto& known = documented_keys();
  for (const auto& [k, v] : pairs)
    if (!known.count(k)) throw Error(ErrorKind::input, "unknown config key '" + k + "'");

  auto get = [&](const std::string& k) -> const std::string* {
    auto it = pairs.find(k);
    return it == pairs.end() ? nullptr : &it->second;
  };
  auto num = [&](const std::string& k, double fallback) {
    const auto* v = get(k);
    return v ? parse_number(*v, k) : fallback;
  };
  auto integer = [&](const std::string& k, long fallback) {
    const auto* v = get(k);
    return v ? parse_integer(*v, k) : fallback;
  };

  RunConfig c;
  try {
    c.grid = GridSpec(static_cast<int>(integer("grid.d", c.grid.dim())),
                      static_cast<int>(integer("grid.n", c.grid.points())),
                      num("grid.L", c.grid.length()));
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorKind::input, std::string("config grid: ") + e.what());
  }

  c.params.k_c = num("thermo.kc", c.params.k_c);
  c.params.k_theta = num("thermo.ktheta", c.params.k_theta);
  c.params.kappa = num("thermo.kappa", c.params.kappa);
  if (const auto* v = get("thermo.eta")) {
    const auto parts = split(*v);
    if (parts.size() == 1) {
      c.params.eta.fill(parse_number(parts[0], "thermo.eta"));
    } else if (parts.size() == 3) {
      for (int i = 0; i < 3; ++i) c.params.eta[i] = parse_number(parts[i], "thermo.eta");
    } else {
      bad("thermo.eta", "expected one or three values");
    }
  }
  c.params.h = num("iter.h", c.params.h);
  try {
    thermo::validate(c.params);
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorKind::input, std::string("config thermo: ") + e.what());
  }

  c.eq_c = {num("eq.cA", 1.0), num("eq.cB", 1.0), num("eq.cC", 1.0)};
  for (double v : c.eq_c)
    if (!(v > 0.0)) bad("eq.cA/cB/cC", "concentrations must be positive");
  c.eq_scale = num("eq.scale", 1.0);
  if (!(c.eq_scale > 0.0)) bad("eq.scale", "must be positive");

  if (get("run.dt")) {
    c.solver.dt = num("run.dt", 0.0);
    c.iteration.dt = c.solver.dt;
  }
  if (get("run.T")) {
    c.solver.T = num("run.T", 0.0);
    c.iteration.T = c.solver.T;
  }
  if (const auto* v = get("run.model")) {
    if (*v == "condensed") c.solver.model = dyn::SystemModel::condensed;
    else if (*v == "perturbed") c.solver.model = dyn::SystemModel::perturbed;
    else bad("run.model", "expected condensed or perturbed");
  }
  if (const auto* v = get("run.convention")) c.solver.convention = thermo::parse_convention(*v);
  if (const auto* v = get("run.dealias")) {
    c.solver.dealias = parse_bool(*v, "run.dealias");
    c.iteration.dealias = c.solver.dealias;
  }
  c.solver.record_every = static_cast<int>(integer("run.record_every", c.solver.record_every));
  dyn::step_count(c.solver);

  c.iteration.h = c.params.h;
  c.iteration.kmax = static_cast<int>(integer("iter.kmax", c.iteration.kmax));
  if (c.iteration.kmax < 1) bad("iter.kmax", "must be at least 1");
  c.iteration.tol = num("iter.tol", c.iteration.tol);
  if (!(c.iteration.tol > 0.0)) bad("iter.tol", "must be positive");

  if (const auto* v = get("init.kind")) {
    if (*v == "equilibrium") c.init.kind = InitKind::equilibrium;
    else if (*v == "mode") c.init.kind = InitKind::mode;
    else if (*v == "random") c.init.kind = InitKind::random;
    else bad("init.kind", "expected equilibrium, mode or random");
  }
  if (const auto* v = get("init.k")) {
    const auto parts = split(*v);
    if (parts.empty() || parts.size() > 3) bad("init.k", "expected up to three integers");
    c.init.wavevector = {0, 0, 0};
    for (std::size_t i = 0; i < parts.size(); ++i)
      c.init.wavevector[i] = static_cast<int>(parse_integer(parts[i], "init.k"));
  }
  if (const auto* v = get("init.weights")) {
    const auto parts = split(*v);
    if (parts.size() != 4) bad("init.weights", "expected four values");
    for (int i = 0; i < 4; ++i) c.init.weights[i] = parse_number(parts[i], "init.weights");
  }
  c.init.norm = num("init.norm", 0.5 * std::pow(c.params.h, 4));
  if (!(c.init.norm >= 0.0)) bad("init.norm", "must be non-negative");
  c.init.amplitude = num("init.amplitude", c.init.amplitude);
  c.init.band = static_cast<int>(integer("init.band", c.init.band));
  if (const auto* v = get("out.dir")) c.out_dir = *v;
  if (c.out_dir.empty()) bad("out.dir", "empty path");
  const long seed = integer("seed", 1);
  if (seed < 0) bad("seed", "must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  return c;
}

RunConfig load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::input, "cannot open config file '" + path + "'");
  return from_pairs(parse_pairs(is, path));
}

thermo::EquilibriumState equilibrium(const RunConfig& c) {
  return thermo::scale_equilibrium(thermo::find_equilibrium(c.eq_c, c.params), c.eq_scale,
                                   c.params);
}

PerturbationState initial_perturbation(const RunConfig& c) {
  const auto eq = equilibrium(c);
  switch (c.init.kind) {
    case InitKind::equilibrium:
      return PerturbationState::zero(c.grid, eq);
    case InitKind::mode:
      if (c.init.norm == 0.0) return PerturbationState::zero(c.grid, eq);
      try {
        return harness::single_mode_data(c.grid, eq, c.init.wavevector, c.init.weights,
                                         c.init.norm);
      } catch (const std::invalid_argument& e) {
        throw Error(ErrorKind::input, std::string("config init: ") + e.what());
      }
    case InitKind::random: {
      auto s = PerturbationState::zero(c.grid, eq);
      try {
        for (int i = 0; i < 4; ++i) {
          const double base = i < 3 ? eq.c_tilde[i] : eq.theta_tilde;
          s.component(i) =
              exp::random_bandlimited(c.grid, c.init.band, 16 * c.seed + i, c.init.amplitude * base);
        }
      } catch (const std::invalid_argument& e) {
        throw Error(ErrorKind::input, std::string("config init: ") + e.what());
      }
      return s;
    }
  }
  return PerturbationState::zero(c.grid, eq);
}

}  // namespace rdt::config
