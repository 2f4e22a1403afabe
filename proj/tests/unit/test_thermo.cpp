#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rdt/error.hpp"
#include "rdt/thermo.hpp"

using namespace rdt;
using namespace rdt::thermo;
using std::numbers::e;
using std::numbers::pi;

namespace {

const ThermoParams unit{};

ThermoParams mixed() {
  ThermoParams p;
  p.k_c = 0.7;
  p.k_theta = 1.9;
  p.kappa = 0.4;
  p.eta = {0.8, 1.3, 2.1};
  return p;
}

std::vector<StatePoint> random_states(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lc(std::log(0.05), std::log(20.0));
  std::vector<StatePoint> out;
  for (int k = 0; k < count; ++k)
    out.push_back({{std::exp(lc(rng)), std::exp(lc(rng)), std::exp(lc(rng))}, std::exp(lc(rng))});
  return out;
}

// Closed forms of the ideal mixture, per species:
//   ψ_i = k^c c θ ln c - k^θ c θ ln θ,  e_i = k^θ c θ.
double psi_oracle(const StatePoint& p, const ThermoParams& k) {
  double s = 0.0;
  for (double c : p.c) s += k.k_c * c * p.theta * std::log(c) - k.k_theta * c * p.theta * std::log(p.theta);
  return s;
}

}  // namespace

TEST_SUITE("thermo") {

TEST_CASE("closed-form values") {
  CHECK(free_energy({{1, 1, 1}, 1}, unit) == doctest::Approx(0.0));
  CHECK(free_energy({{e, e, e}, 1}, unit) == doctest::Approx(3 * e));
  CHECK(entropy({{1, 1, 1}, 1}, unit) == doctest::Approx(3.0));
  CHECK(temperature_from_entropy({1, 1, 1}, 3.0, unit) == doctest::Approx(1.0));
  CHECK(temperature_from_entropy({1, 1, 1}, 0.0, unit) == doctest::Approx(1.0 / e));
  CHECK(internal_energy({{1, 1, 1}, 1}, unit) == doctest::Approx(3.0));
  CHECK(internal_energy({{1, 1, 1}, 2}, unit) == doctest::Approx(6.0));
  for (int i = 0; i < 3; ++i) {
    CHECK(chemical_potential(i, {{1, 1, 1}, 1}, unit) == doctest::Approx(1.0));
    CHECK(pressure(i, {{1, 1, 1}, 1}, unit) == doctest::Approx(1.0));
  }
  CHECK(affinity({{1, 1, 1}, 1}, unit) == doctest::Approx(1.0));
}

TEST_CASE("free energy against the independent formula") {
  const ThermoParams k = mixed();
  for (const auto& p : random_states(50, 3))
    CHECK(free_energy(p, k) == doctest::Approx(psi_oracle(p, k)).epsilon(1e-12));
}

TEST_CASE("entropy, potentials and energy by differences of the free energy") {
  const ThermoParams k = mixed();
  for (const auto& p : random_states(100, 5)) {
    const double h = 1e-5 * p.theta;
    StatePoint up = p, dn = p;
    up.theta += h;
    dn.theta -= h;
    const double s_fd = -(psi_oracle(up, k) - psi_oracle(dn, k)) / (2 * h);
    CHECK(entropy(p, k) == doctest::Approx(s_fd).epsilon(1e-8));
    for (int i = 0; i < 3; ++i) {
      StatePoint a = p, b = p;
      const double hc = 1e-5 * p.c[i];
      a.c[i] += hc;
      b.c[i] -= hc;
      const double mu_fd = (psi_oracle(a, k) - psi_oracle(b, k)) / (2 * hc);
      CHECK(chemical_potential(i, p, k) == doctest::Approx(mu_fd).epsilon(1e-7));
    }
    const double e_val = internal_energy(p, k);
    const double rebuilt = free_energy(p, k) + p.theta * entropy(p, k);
    CHECK(std::abs(e_val - rebuilt) <= 1e-12 * std::max(1.0, std::abs(e_val)));
  }
}

TEST_CASE("temperature from entropy round trip") {
  const ThermoParams k = mixed();
  for (const auto& p : random_states(100, 8)) {
    const double th = temperature_from_entropy(p.c, entropy(p, k), k);
    CHECK(std::abs(th - p.theta) / p.theta <= 1e-12);
  }
}

TEST_CASE("energy identities in the (c, s) variables") {
  const auto r = verify_thermo_identities({{1, 1, 1}, 1}, unit);
  CHECK(r.temperature_rel_err <= 1e-6);
  const ThermoParams k = mixed();
  for (const auto& p : random_states(100, 9)) CHECK(verify_thermo_identities(p, k).max_rel_err() <= 1e-6);
  CHECK_THROWS_AS(verify_thermo_identities({{1, 1, 1}, 1}, unit, 0.5), std::invalid_argument);
}

TEST_CASE("free energy curvature in temperature") {
  // ∂²ψ/∂θ² = -k^θ Σc_i / θ < 0 for every positive state.
  const ThermoParams k = mixed();
  for (const auto& p : random_states(50, 10)) {
    const double h = 1e-3 * p.theta;
    StatePoint a = p, b = p;
    a.theta += h;
    b.theta -= h;
    const double second = (free_energy(a, k) - 2 * free_energy(p, k) + free_energy(b, k)) / (h * h);
    const double S = p.c[0] + p.c[1] + p.c[2];
    CHECK(second == doctest::Approx(-k.k_theta * S / p.theta).epsilon(1e-5));
  }
}

TEST_CASE("equilibrium constant") {
  CHECK(equilibrium_constant(e, unit) == doctest::Approx(1.0));
  CHECK(equilibrium_constant(1.0, unit) == doctest::Approx(1.0 / e));
  const ThermoParams k = mixed();
  for (double th : {0.3, 1.0, 4.0})
    CHECK(equilibrium_constant(th, k) ==
          doctest::Approx(std::pow(th, k.k_theta) / std::exp(k.k_c)).epsilon(1e-13));
  CHECK_THROWS_AS(equilibrium_constant(-1.0, unit), PositivityError);
}

TEST_CASE("rate conventions") {
  const StatePoint eq{{1, 1, 1}, e};
  CHECK(rate_mass_action(eq, unit) == doctest::Approx(0.0));
  CHECK(rate_linear_response(eq, unit) == doctest::Approx(0.0));
  CHECK(rate_affinity_form(eq, unit) == doctest::Approx(0.0));
  CHECK(rate_mass_action({{2, 1, 1}, e}, unit) == doctest::Approx(1.0));
  CHECK_THROWS_AS(rate_affinity_form({{0, 1, 1}, 1}, unit), PositivityError);
  CHECK_THROWS_AS(parse_convention("r7"), Error);
  CHECK(to_string(parse_convention("r2")) == "r2");

  // Canonical family c_A c_B = c_C, θ = e^{k^c/k^θ}.
  const ThermoParams k = mixed();
  for (double a : {0.3, 1.0, 5.0})
    for (double b : {0.2, 2.0}) {
      const StatePoint p{{a, b, a * b}, std::exp(k.k_c / k.k_theta)};
      CHECK(std::abs(rate_mass_action(p, k)) <= 1e-12);
      CHECK(std::abs(rate_linear_response(p, k)) <= 1e-12);
      CHECK(std::abs(rate_affinity_form(p, k)) <= 1e-12);
    }
}

TEST_CASE("equilibrium quotient under the affinity form") {
  // R_t = 0 gives (c_A c_B / c_C)^{k^c} = θ^{k^θ} / e^{k^c} = K_eq(θ).
  const ThermoParams k = mixed();
  for (const auto& p : random_states(20, 12)) {
    const auto eq = find_equilibrium(p.c, k);
    const double q = std::pow(eq.c_tilde[0] * eq.c_tilde[1] / eq.c_tilde[2], k.k_c);
    CHECK(q == doctest::Approx(equilibrium_constant(eq.theta_tilde, k)).epsilon(1e-12));
  }
}

TEST_CASE("linearized rate") {
  const EquilibriumState eq{{1, 1, 1}, e};
  CHECK(linearized_rate({0, 0, 0}, 0.0, eq, unit) == 0.0);
  CHECK(linearized_rate({1e-3, 0, 0}, 0.0, eq, unit) == doctest::Approx(1e-3));
  // Agrees with the derivative of R_t at the equilibrium.
  const ThermoParams k = mixed();
  const auto q = find_equilibrium({0.5, 2.0, 1.5}, k);
  const Triple z{1e-6, -2e-6, 0.5e-6};
  const double w = 3e-6;
  const StatePoint p{{q.c_tilde[0] + z[0], q.c_tilde[1] + z[1], q.c_tilde[2] + z[2]},
                     q.theta_tilde + w};
  CHECK(linearized_rate(z, w, q, k) == doctest::Approx(rate_affinity_form(p, k)).epsilon(1e-5));
}

TEST_CASE("reaction dissipation") {
  CHECK(dissipation_reaction(0.0, 1.0, 1.0, DissipationForm::general) == 0.0);
  CHECK(dissipation_reaction(0.0, 1.0, 1.0, DissipationForm::quadratic) == 0.0);
  CHECK(dissipation_reaction(2.0, 1.0, 1.0, DissipationForm::quadratic) == doctest::Approx(4.0));
  CHECK(dissipation_reaction(1.0, 1.0, 1.0, DissipationForm::general) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(dissipation_reaction(-2.0, 1.0, 1.0, DissipationForm::general), Error);
}

TEST_CASE("virtual work balance") {
  const ThermoParams k = mixed();
  for (const auto& p : random_states(50, 14)) {
    const double scale = std::max(1.0, std::abs(affinity(p, k)));
    CHECK(virtual_work_residual(p, k, RateConvention::affinity_form) <= 1e-10 * scale);
  }
  // The linear-response rate carries +k^θ ln θ - k^c where the balance needs
  // the opposite signs, so away from θ = e^{k^c/k^θ} the balance fails.
  CHECK(virtual_work_residual({{1, 1, 1}, 2.0}, unit, RateConvention::linear_response) > 0.1);
}

TEST_CASE("find and scale equilibria") {
  const auto a = find_equilibrium({1, 1, 1}, unit);
  CHECK(a.theta_tilde == doctest::Approx(e));
  const auto b = scale_equilibrium(a, 100.0, unit);
  CHECK(b.c_tilde[0] == doctest::Approx(100.0));
  CHECK(b.theta_tilde == doctest::Approx(100 * e));
  CHECK(std::abs(rate_affinity_form({b.c_tilde, b.theta_tilde}, unit)) <= 1e-12);
  CHECK(find_equilibrium({1, 1, 2}, unit).theta_tilde == doctest::Approx(e / 2));
  CHECK_THROWS_AS(scale_equilibrium(a, -1.0, unit), std::invalid_argument);
  CHECK_THROWS_AS(find_equilibrium({1, -1, 1}, unit), PositivityError);

  const ThermoParams k = mixed();
  const auto c = scale_equilibrium(find_equilibrium({2, 3, 5}, k), 7.0, k);
  CHECK(std::abs(rate_affinity_form({c.c_tilde, c.theta_tilde}, k)) <= 1e-12);
}

TEST_CASE("fluxes and pressure identity") {
  const GridSpec g(2, 32, 2 * pi);
  const Field one(g, 1.0);
  for (const Field& f : darcy_velocity(0, one, Field(g, 2.0), unit)) CHECK(f.max_abs() < 1e-14);
  for (const Field& f : heat_flux(Field(g, 3.0), unit)) CHECK(f.max_abs() < 1e-14);

  const Field th = Field::sample(g, [](std::array<double, 3> x) { return 2.0 + std::sin(x[0]); });
  const auto q = heat_flux(th, unit);
  const auto j = entropy_flux(th, unit);
  double err = 0.0, duhem = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    err = std::max(err, std::abs(q[0][n] + std::cos(g.node(n)[0])));
    duhem = std::max(duhem, std::abs(j[0][n] * th[n] - q[0][n]));
  }
  CHECK(err < 1e-12);
  CHECK(q[1].max_abs() < 1e-12);
  CHECK(duhem < 1e-14);

  CHECK(pressure_identity_residual(1, one, Field(g, 2.0), unit) < 1e-14);
  const Field c = oracle::smooth(g, 0.3, 0.2, 0.5);
  const Field t2 = oracle::smooth(g, 0.2, -0.3, 1.1);
  CHECK(pressure_identity_residual(0, c, t2, mixed()) < 1e-9);
}

TEST_CASE("entropy production") {
  const GridSpec g(2, 16, 2 * pi);
  const std::array<Field, 3> c{Field(g, 1.0), Field(g, 1.0), Field(g, 1.0)};
  const Field th(g, e);
  const Vec zero{Field(g), Field(g)};
  const Field R = rate_field(c, th, unit, RateConvention::affinity_form);
  const auto at_eq = entropy_production(c, th, {zero, zero, zero}, R, unit);
  CHECK(at_eq.delta.max_abs() < 1e-14);
  CHECK(at_eq.constraint_ok);

  // Conduction only: Δ = κ|∇θ|²/θ² ≥ 0.
  const Field tn = Field::sample(g, [](std::array<double, 3> x) { return 2.0 + std::sin(x[1]); });
  const auto cond = entropy_production(c, tn, {zero, zero, zero}, Field(g), unit);
  CHECK(cond.delta.min() >= 0.0);
  CHECK(cond.delta.max() > 0.0);
}

}  // TEST_SUITE
