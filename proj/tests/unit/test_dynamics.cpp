#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "rdt/dynamics.hpp"
#include "rdt/error.hpp"
#include "rdt/experiments.hpp"
#include "rdt/spectral_ops.hpp"

using namespace rdt;
using namespace rdt::dyn;
using std::numbers::e;
using std::numbers::pi;

namespace {

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) m = std::max(m, std::abs(a[q] - b[q]));
  return m;
}

ThermoParams mixed() {
  ThermoParams p;
  p.k_c = 0.8;
  p.k_theta = 1.5;
  p.kappa = 0.6;
  p.eta = {0.9, 1.2, 1.7};
  return p;
}

ChemState smooth_state(const GridSpec& g) {
  return {{oracle::smooth(g, 0.2, 0.1, 0.3), oracle::smooth(g, 0.15, -0.2, 1.0),
           oracle::smooth(g, -0.1, 0.2, 2.0)},
          2.0 * oracle::smooth(g, 0.1, 0.15, 0.5)};
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("right-hand sides vanish at equilibrium") {
  const GridSpec g(2, 16, 2 * pi);
  const auto s = ChemState::uniform(g, thermo::find_equilibrium({1, 1, 1}, {}));
  for (const Field& f : rhs_concentration(s, {})) CHECK(f.max_abs() < 1e-14);
  CHECK(rhs_temperature(s, {}).max_abs() < 1e-14);
}

TEST_CASE("uniform temperature with zero rate leaves concentrations still") {
  const GridSpec g(2, 16, 2 * pi);
  ChemState s = ChemState::uniform(g, {{1, 1, 1}, e});
  s.c[0] = oracle::smooth(g, 0.3, 0.0, 0.0);
  s.c[1] = oracle::smooth(g, 0.0, 0.2, 0.0);
  s.c[2] = s.c[0] * s.c[1];
  for (const Field& f : rhs_concentration(s, {})) CHECK(f.max_abs() < 1e-12);
}

TEST_CASE("right-hand sides agree with finite differences of the system") {
  const ThermoParams p = mixed();
  std::array<double, 2> err{};
  for (int n : {32, 64}) {
    const GridSpec g(2, n, 2 * pi);
    const ChemState s = smooth_state(g);
    const auto ref = oracle::condensed_rhs(s, p);
    auto conc = rhs_concentration(s, p);
    double m = 0.0;
    for (int i = 0; i < 3; ++i) {
      conc[i].axpy(p.k_c, laplacian(s.c[i]));
      m = std::max(m, max_diff(conc[i], ref[i]));
    }
    m = std::max(m, max_diff(rhs_temperature(s, p), ref[3]));
    err[n == 32 ? 0 : 1] = m;
  }
  CHECK(err[1] < 1e-3);
  CHECK(std::log2(err[0] / err[1]) >= 3.5);
}

TEST_CASE("one step from equilibrium is the identity") {
  const GridSpec g(2, 16, 2 * pi);
  const auto eq = thermo::find_equilibrium({1, 1, 2}, {});
  const auto s0 = ChemState::uniform(g, eq);
  SolverConfig cfg;
  const auto s1 = step(s0, cfg, {});
  for (int i = 0; i < 4; ++i)
    CHECK(max_diff(s1.component(i), s0.component(i)) <= 1e-14 * 3.0);
}

TEST_CASE("equilibrium trajectory is constant") {
  const GridSpec g(2, 16, 2 * pi);
  const auto s0 = ChemState::uniform(g, thermo::find_equilibrium({1, 1, 1}, {}));
  SolverConfig cfg;
  cfg.dt = 0.05;
  cfg.T = 0.5;
  const auto rec = integrate(s0, cfg, {});
  REQUIRE(!rec.failure);
  CHECK(rec.times.size() == 11);
  const auto rep = diagnostics(rec);
  CHECK(rep.max_energy_drift_rate < 1e-12);
  CHECK(rep.max_Z_drift < 1e-12);
  CHECK(std::abs(rep.min_entropy_increment) < 1e-12);
  CHECK(std::abs(rep.min_delta) < 1e-12);
  CHECK(rep.violations.empty());
}

TEST_CASE("conduction trajectory produces entropy") {
  const GridSpec g(2, 16, 2 * pi);
  auto s0 = ChemState::uniform(g, thermo::find_equilibrium({1, 1, 1}, {}));
  s0.theta = Field::sample(g, [](std::array<double, 3> x) { return e + 0.1 * std::sin(x[0]); });
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.T = 0.2;
  const auto rec = integrate(s0, cfg, {});
  REQUIRE(!rec.failure);
  for (double d : rec.min_delta) CHECK(d >= -1e-12);
  for (std::size_t k = 1; k < rec.entropy.size(); ++k)
    CHECK(rec.entropy[k] - rec.entropy[k - 1] >= -1e-8);
  CHECK(rec.entropy.back() > rec.entropy.front());
}

TEST_CASE("diagnostics csv has one row per snapshot") {
  const GridSpec g(1, 16, 2 * pi);
  const auto s0 = ChemState::uniform(g, thermo::find_equilibrium({1, 1, 1}, {}));
  SolverConfig cfg;
  cfg.dt = 0.1;
  cfg.T = 0.3;
  const auto rec = integrate(s0, cfg, {});
  std::ostringstream os;
  write_diagnostics_csv(os, rec);
  std::istringstream is(os.str());
  std::string line;
  int lines = 0;
  std::getline(is, line);
  CHECK(line.rfind("t,", 0) == 0);
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 4);
}

TEST_CASE("step count validation") {
  SolverConfig c;
  c.dt = 0.3;
  c.T = 1.0;
  CHECK_THROWS_AS(step_count(c), Error);
  c.dt = -1.0;
  CHECK_THROWS_AS(step_count(c), Error);
  c.dt = 0.25;
  CHECK(step_count(c) == 4);
  c.record_every = 0;
  CHECK_THROWS_AS(step_count(c), Error);
}

TEST_CASE("negative concentration is a physics error") {
  const GridSpec g(1, 8, 2 * pi);
  auto s = ChemState::uniform(g, {{1, 1, 1}, e});
  s.c[1][3] = -0.1;
  try {
    rhs_concentration(s, {});
    FAIL("expected an error");
  } catch (const Error& ex) {
    CHECK(ex.kind() == ErrorKind::physics);
    CHECK(std::string(ex.what()).find("c_B at node 3") != std::string::npos);
  }
}

TEST_CASE("homogeneous reaction") {
  const ThermoParams p;
  ReactionConfig cfg;
  cfg.record_every = 100;
  SUBCASE("conservation") {
    const auto r = reaction_ode({2, 2, 1}, 1.0, cfg, p);
    double drift = 0.0;
    for (const auto& s : r.state) drift = std::max(drift, std::abs(s.c[0] + s.c[2] - 3.0));
    CHECK(drift <= 1e-9);
    CHECK(r.t.back() == doctest::Approx(10.0));
  }
  SUBCASE("equilibrium start stays put") {
    const auto r = reaction_ode({1, 1, 1}, e, cfg, p);
    for (const auto& s : r.state) {
      CHECK(std::abs(s.c[0] - 1.0) < 1e-14);
      CHECK(std::abs(s.theta - e) < 1e-14);
    }
  }
  SUBCASE("long-run limit matches the constrained root") {
    const thermo::Triple c0{2, 2, 1};
    const double th0 = 1.0;
    const auto r = reaction_ode(c0, th0, cfg, p);
    CHECK(std::abs(r.R.back()) <= 1e-8);
    // Extent x: c = c0 - σx, total energy θ Σc conserved.
    const double S0 = c0[0] + c0[1] + c0[2];
    auto Rx = [&](double x) {
      const double a = c0[0] - x, b = c0[1] - x, c = c0[2] + x;
      const double th = th0 * S0 / (a + b + c);
      return oracle::rate_rt4(a, b, c, th, p.k_c, p.k_theta);
    };
    const double x = oracle::bisect(Rx, -c0[2] + 1e-12, std::min(c0[0], c0[1]) - 1e-12);
    const auto& last = r.state.back();
    CHECK(std::abs(last.c[0] - (c0[0] - x)) <= 1e-6);
    CHECK(std::abs(last.c[2] - (c0[2] + x)) <= 1e-6);
    CHECK(std::abs(last.theta - th0 * S0 / (S0 - x)) <= 1e-6);
  }
}

TEST_CASE("reference trajectories decay") {
  const auto rec = exp::reference_trajectory(1);
  REQUIRE(!rec.failure);
  CHECK(exp::max_relative_growth(rec, 0.1) <= 0.0);
  const auto rep = diagnostics(rec);
  CHECK(rep.min_delta >= -1e-12);
  CHECK(rep.min_entropy_increment >= -1e-8);
}

}  // TEST_SUITE
