#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "rdt/dynamics.hpp"
#include "rdt/error.hpp"
#include "rdt/experiments.hpp"
#include "rdt/harness.hpp"
#include "rdt/spectral_ops.hpp"

using namespace rdt;
using namespace rdt::harness;
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

PerturbationState small_state(const GridSpec& g, const thermo::EquilibriumState& eq, double amp) {
  auto s = PerturbationState::zero(g, eq);
  for (int i = 0; i < 4; ++i) s.component(i) = exp::random_bandlimited(g, 3, 70 + i, amp);
  return s;
}

}  // namespace

TEST_SUITE("wellposedness-harness") {

TEST_CASE("reciprocal helpers") {
  for (double xt : {0.5, 1.0, 100.0}) {
    CHECK(f_helper(0.0, xt) == 0.0);
    CHECK(g_helper(0.0, xt) == 0.0);
    CHECK(f_helper(xt, xt) == doctest::Approx(-1.0 / (2 * xt)));
    for (double x = -xt / 2; x <= xt / 2; x += xt / 64) {
      // f(x) = -x / (x̃(x̃ + x)): |f| ≤ |x|/x̃² for x ≥ 0, ≤ 2|x|/x̃² down to -x̃/2.
      const double f = std::abs(f_helper(x, xt));
      CHECK(f <= (x >= 0 ? 1.0 : 2.0) * std::abs(x) / (xt * xt) * (1 + 1e-12));
    }
    // g is first order at the origin: g(x)/x -> -2/x̃³.
    const double x = 1e-6 * xt;
    CHECK(g_helper(x, xt) / x == doctest::Approx(-2.0 / (xt * xt * xt)).epsilon(1e-5));
    CHECK_THROWS_AS(f_helper(-xt, xt), Error);
    CHECK_THROWS_AS(g_helper(-2 * xt, xt), Error);
  }
}

TEST_CASE("forcings vanish at zero") {
  const GridSpec g(2, 16, 2 * pi);
  const auto z = PerturbationState::zero(g, thermo::find_equilibrium({1, 1, 1}, {}));
  for (const Field& f : forcing_F(z, {})) CHECK(f.max_abs() == 0.0);
  CHECK(forcing_G(z, {}).max_abs() == 0.0);
}

TEST_CASE("forcings are the full system minus its diffusion") {
  const ThermoParams p = mixed();
  const GridSpec g(2, 32, 2 * pi);
  const auto eq = thermo::scale_equilibrium(thermo::find_equilibrium({1, 2, 1.5}, p), 3.0, p);
  const auto s = small_state(g, eq, 0.05);
  const auto full = dyn::perturbed_rhs(s, p);
  const auto F = forcing_F(s, p);
  for (int i = 0; i < 3; ++i) {
    const Field lin = p.k_c * laplacian(s.z[i]);
    CHECK(max_diff(F[i], full[i] - lin) <= 1e-10);
  }
  const double nu = temperature_diffusivity(p, eq.c_tilde[0] + eq.c_tilde[1] + eq.c_tilde[2]);
  CHECK(max_diff(forcing_G(s, p), full[3] - nu * laplacian(s.omega)) <= 1e-10);
}

TEST_CASE("concentration forcing without temperature perturbation") {
  const ThermoParams p = mixed();
  const GridSpec g(2, 16, 2 * pi);
  const auto eq = thermo::find_equilibrium({1, 2, 1.5}, p);
  auto s = small_state(g, eq, 0.05);
  s.omega = Field(g);
  const auto F = forcing_F(s, p);
  Field r(g);
  for (int j = 0; j < 3; ++j) r.axpy(p.k_c * p.sigma[j] / eq.c_tilde[j], s.z[j]);
  for (int i = 0; i < 3; ++i) CHECK(max_diff(F[i], -p.sigma[i] * r) <= 1e-13);
}

TEST_CASE("temperature forcing from a temperature mode is linear plus quadratic") {
  const GridSpec g(2, 16, 2 * pi);
  const auto eq = thermo::find_equilibrium({1, 1, 1}, {});
  auto G = [&](double amp) {
    auto s = PerturbationState::zero(g, eq);
    s.omega = exp::pure_mode(g, {1, 1, 0}, amp);
    return forcing_G(s, {});
  };
  // Remove the linear part by Richardson combination; what remains scales as
  // amplitude squared.
  auto nonlinear = [&](double amp) { return l2_norm(G(amp) - 2.0 * G(amp / 2)); };
  const double ratio = nonlinear(1e-3) / nonlinear(5e-4);
  CHECK(ratio == doctest::Approx(4.0).epsilon(1e-2));
}

TEST_CASE("smallness gate") {
  const auto ref = reference_problem(32, 1.0 / 32);
  const auto P = lp::build_partition(ref.grid);
  const double h4 = std::pow(ref.params.h, 4);
  const auto zero = smallness_gate(PerturbationState::zero(ref.grid, ref.eq), 0.5, P);
  CHECK(zero.pass);
  CHECK(zero.measured == 0.0);

  const auto half = smallness_gate(ref.data, ref.params.h, P);
  CHECK(half.pass);
  CHECK(half.measured == doctest::Approx(h4 / 2).epsilon(1e-12));

  const auto big = single_mode_data(ref.grid, ref.eq, {1, 1, 0}, {1, .5, .75, 1}, 2 * h4);
  CHECK_FALSE(smallness_gate(big, ref.params.h, P).pass);
}

TEST_CASE("picard step and iteration from zero data") {
  const auto ref = reference_problem(16, 1.0 / 16);
  const auto zero = PerturbationState::zero(ref.grid, ref.eq);
  const auto prev = zero_series(ref.grid, ref.config);
  const auto next = picard_step(prev, zero, ref.config, ref.params).next;
  for (const auto& st : next.values)
    for (const auto& c : st) CHECK(l2_norm(c) == 0.0);

  const auto rep = run_iteration(zero, ref.config, ref.params);
  CHECK(rep.status == IterationStatus::converged);
  CHECK(rep.rows.size() == 1);
  CHECK(rep.max_norm == 0.0);
}

TEST_CASE("small data iterates contract") {
  const auto ref = reference_problem(16, 1.0 / 32);
  const auto rep = run_iteration(ref.data, ref.config, ref.params);
  CHECK(rep.status == IterationStatus::converged);
  CHECK(rep.est1_ok);
  CHECK(rep.est2_ok);
  CHECK(rep.max_norm <= ref.params.h * ref.params.h);

  std::ostringstream os;
  write_iteration_csv(os, rep);
  std::istringstream is(os.str());
  std::string header, first;
  std::getline(is, header);
  std::getline(is, first);
  CHECK(header.rfind("k,norm_zA", 0) == 0);
  CHECK(first.rfind("1,", 0) == 0);
}

TEST_CASE("stability with zero perturbation") {
  const auto ref = reference_problem(16, 1.0 / 16);
  const auto rep = uniqueness_stability(ref.data, PerturbationState::zero(ref.grid, ref.eq),
                                        ref.config, ref.params);
  CHECK(rep.distance == 0.0);
  CHECK(rep.delta_norm == 0.0);
  CHECK(rep.determinism_distance <= 1e-10);
}

TEST_CASE("stability distance is linear in the perturbation") {
  const auto ref = reference_problem(16, 1.0 / 16);
  const double h6 = std::pow(ref.params.h, 6);
  auto ratio = [&](double n) {
    return uniqueness_stability(ref.data, exp::stability_delta(ref.grid, ref.eq, n), ref.config,
                                ref.params)
        .ratio();
  };
  const double r1 = ratio(h6), r2 = ratio(h6 / 2);
  CHECK(r1 > 0.0);
  CHECK(std::abs(r1 / r2 - 1.0) <= 0.1);
}

TEST_CASE("cross validation from zero data") {
  const auto ref = reference_problem(16, 1.0 / 16);
  const auto zero = PerturbationState::zero(ref.grid, ref.eq);
  const auto cv = cross_validate(zero_series(ref.grid, ref.config), zero, ref.config, ref.params);
  CHECK(cv.distance == 0.0);
}

TEST_CASE("single mode data rejects the zero mode") {
  const auto ref = reference_problem(16, 1.0 / 16);
  CHECK_THROWS_AS(single_mode_data(ref.grid, ref.eq, {0, 0, 0}, {1, 1, 1, 1}, 1e-4),
                  std::invalid_argument);
}

}  // TEST_SUITE
