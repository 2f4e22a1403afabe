#include "rdt/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "rdt/calibration.hpp"
#include "rdt/dynamics.hpp"
#include "rdt/error.hpp"
#include "rdt/experiments.hpp"
#include "rdt/fft.hpp"
#include "rdt/harness.hpp"
#include "rdt/littlewood_paley.hpp"
#include "rdt/spectral_ops.hpp"
#include "rdt/thermo.hpp"

namespace rdt::checks {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using thermo::RateConvention;

class Suite {
 public:
  explicit Suite(std::string module) : module_(std::move(module)) {}

  // Passes when measured ≤ bound.
  void at_most(const std::string& name, double measured, double bound, std::string detail = {}) {
    out_.push_back({module_, name, measured <= bound, measured, bound, std::move(detail)});
  }
  void at_least(const std::string& name, double measured, double bound, std::string detail = {}) {
    out_.push_back({module_, name, measured >= bound, measured, bound, std::move(detail)});
  }
  // Runs body; an exception fails the check with its message.
  void guarded(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      out_.push_back({module_, name, false, 0.0, 0.0, std::string("exception: ") + e.what()});
    }
  }
  std::vector<CheckResult> take() { return std::move(out_); }

 private:
  std::string module_;
  std::vector<CheckResult> out_;
};

// ------------------------------------------------- finite-difference oracle

std::size_t stride(const GridSpec& g, int axis) {
  std::size_t s = 1;
  for (int a = g.dim() - 1; a > axis; --a) s *= static_cast<std::size_t>(g.points());
  return s;
}

// Periodic neighbour of flat index k shifted by `shift` along axis.
std::size_t neighbour(const GridSpec& g, std::size_t k, int axis, int shift) {
  const std::size_t st = stride(g, axis);
  const long n = g.points();
  const long i = static_cast<long>((k / st) % static_cast<std::size_t>(n));
  const long j = ((i + shift) % n + n) % n;
  return k + static_cast<std::size_t>(j - i) * st;
}

Field fd_first(const Field& u, int axis) {
  const GridSpec& g = u.grid();
  const double h = g.spacing();
  Field out(g);
  for (std::size_t k = 0; k < g.size(); ++k)
    out[k] = (-u[neighbour(g, k, axis, 2)] + 8.0 * u[neighbour(g, k, axis, 1)] -
              8.0 * u[neighbour(g, k, axis, -1)] + u[neighbour(g, k, axis, -2)]) /
             (12.0 * h);
  return out;
}

Field fd_laplacian(const Field& u) {
  const GridSpec& g = u.grid();
  const double h = g.spacing();
  Field out(g);
  for (int a = 0; a < g.dim(); ++a)
    for (std::size_t k = 0; k < g.size(); ++k)
      out[k] += (-u[neighbour(g, k, a, 2)] + 16.0 * u[neighbour(g, k, a, 1)] - 30.0 * u[k] +
                 16.0 * u[neighbour(g, k, a, -1)] - u[neighbour(g, k, a, -2)]) /
                (12.0 * h * h);
  return out;
}

Field smooth_field(const GridSpec& g, double shift) {
  return Field::sample(g, [&](std::array<double, 3> x) {
    return std::exp(0.5 * std::sin(x[0] + shift) + 0.3 * std::cos(2.0 * x[1]) +
                    0.2 * std::sin(x[2] - shift));
  });
}

Field random_nodes(const GridSpec& g, std::uint64_t seed) {
  exp::UniformSource rng(seed);
  Field u(g);
  for (std::size_t k = 0; k < g.size(); ++k) u[k] = rng.next();
  return u;
}

// ------------------------------------------------------------ spectral-core

std::vector<CheckResult> spectral_checks() {
  Suite s("spectral-core");
  const std::vector<GridSpec> grids{GridSpec(1, 256, kTwoPi), GridSpec(2, 256, kTwoPi),
                                    GridSpec(3, 64, kTwoPi), GridSpec(3, 128, 3.0)};
  double rt = 0.0, pv = 0.0;
  for (const auto& g : grids) {
    const Field u = random_nodes(g, 17 + g.dim());
    const SpectralField uh = transform(u);
    rt = std::max(rt, (inverse(uh) - u).max_abs() / u.max_abs());
    double phys = 0.0;
    for (double v : u.values()) phys += v * v;
    phys *= g.cell_volume();
    const double spec = coefficient_energy(uh) * g.volume() / (double(g.size()) * g.size());
    pv = std::max(pv, std::abs(phys - spec) / phys);
  }
  s.at_most("round-trip", rt, 1e-12, "d <= 3, n <= 256");
  s.at_most("parseval", pv, 1e-12);

  double heat = 0.0;
  const GridSpec g2(2, 32, kTwoPi);
  for (std::array<int, 3> k : {std::array<int, 3>{1, 0, 0}, {3, 2, 0}, {5, 5, 0}, {0, 10, 0}}) {
    const Field u0 = exp::pure_mode(g2, k);
    const double k2 = double(k[0] * k[0] + k[1] * k[1]);
    const Field u1 = heat_propagate(u0, 1.0, 0.5);
    heat = std::max(heat, (u1 - std::exp(-0.5 * k2) * u0).max_abs());
  }
  s.at_most("heat-eigenmode", heat, 1e-12, "nu = 1, dt = 0.5");

  // FD error of smooth fields should fall by ~16 per doubling.
  double e[2]{}, el[2]{};
  int m = 0;
  for (int n : {16, 32}) {
    const GridSpec g(2, n, kTwoPi);
    const Field u = smooth_field(g, 0.3);
    const auto grad = gradient(u);
    for (int a = 0; a < 2; ++a) e[m] = std::max(e[m], (grad[a] - fd_first(u, a)).max_abs());
    el[m] = (laplacian(u) - fd_laplacian(u)).max_abs();
    ++m;
  }
  s.at_least("gradient-fd-order", std::log2(e[0] / e[1]), 3.5, "observed order, n = 16 -> 32");
  s.at_least("laplacian-fd-order", std::log2(el[0] / el[1]), 3.5, "observed order, n = 16 -> 32");
  return s.take();
}

// --------------------------------------------------------- littlewood-paley

std::vector<CheckResult> lp_checks(const lp::PartitionOptions& opts) {
  Suite s("littlewood-paley");
  const GridSpec g(2, 64, kTwoPi);
  const lp::DyadicPartition P(g, opts);

  double pu = 0.0;
  const double lo = std::pow(2.0, P.j_min() + 1), hi = std::pow(2.0, P.j_max() - 1);
  for (int q = 0; q <= 4000; ++q) {
    const double rho = lo * std::pow(hi / lo, q / 4000.0);
    double sum = 0.0;
    for (int j = P.j_min(); j <= P.j_max(); ++j) sum += P.phi(std::ldexp(rho, -j));
    pu = std::max(pu, std::abs(sum - 1.0));
  }
  s.at_most("partition-of-unity", pu, 1e-10);

  double rec = 0.0, orth = 0.0, lo_eq = 1e300, hi_eq = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Field u = exp::random_bandlimited(g, 8, seed, 1.0);
    const SpectralField uh = transform(u);
    SpectralField sum(g);
    for (int j = P.j_min(); j <= P.j_max(); ++j) sum += lp::dyadic_block(j, uh, P);
    rec = std::max(rec, l2_norm(sum - uh) / l2_norm(uh));
    for (int i = P.j_min(); i <= P.j_max(); ++i)
      for (int j = i + 2; j <= P.j_max(); ++j) {
        const SpectralField b = lp::dyadic_block(i, lp::dyadic_block(j, uh, P), P);
        for (std::size_t q = 0; q < b.size(); ++q) orth = std::max(orth, std::abs(b[q]));
      }
    const double n2 = lp::besov_norm(uh, {0.0, 2, 2}, P).total;
    const double ratio = n2 * n2 / std::pow(l2_norm(uh), 2);
    lo_eq = std::min(lo_eq, ratio);
    hi_eq = std::max(hi_eq, ratio);
  }
  s.at_most("reconstruction", rec, 1e-8, "mean-free band-limited fields");
  s.at_most("almost-orthogonality", orth, 0.0, "|i - j| >= 2");
  s.at_least("norm-equivalence-lower", lo_eq, 1.0 / 3.0);
  s.at_most("norm-equivalence-upper", hi_eq, 3.0);

  double prod = 0.0, sq = 0.0, ex = 0.0;
  for (std::uint64_t seed = calib::kFirstSeed; seed <= calib::kLastSeed; ++seed) {
    prod = std::max(prod, exp::product_ratio(g, seed));
    sq = std::max(sq, exp::composition_ratio(g, seed, exp::Nonlinearity::square));
    ex = std::max(ex, exp::composition_ratio(g, seed, exp::Nonlinearity::expm1));
  }
  s.at_most("product-law", prod, calib::kProductLaw);
  s.at_most("composition-square", sq, calib::kCompositionSquare);
  s.at_most("composition-expm1", ex, calib::kCompositionExpm1);

  double sc = 0.0;
  for (std::array<int, 3> k : {std::array<int, 3>{1, 0, 0}, {1, 1, 0}, {2, 1, 0}, {3, 2, 0}})
    sc = std::max(sc, exp::scale_covariance_change(g, k));
  s.at_most("scale-covariance", sc, 0.02);

  double mr[2]{};
  int m = 0;
  for (int n : {32, 64}) {
    const GridSpec gm(2, n, kTwoPi);
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
      mr[m] = std::max(mr[m], exp::max_regularity_ratio(gm, seed));
    ++m;
  }
  s.at_most("maximal-regularity", std::max(mr[0], mr[1]), calib::kMaxRegularity);
  s.at_most("maximal-regularity-resolution", std::abs(mr[1] / mr[0] - 1.0), 0.10,
            "n = 32 vs 64");
  return s.take();
}

// ------------------------------------------------------------------ thermo

std::vector<CheckResult> thermo_checks() {
  Suite s("thermo");
  const thermo::ThermoParams params;
  exp::UniformSource rng(99);
  double ds = 0.0, dmu = 0.0, de = 0.0, ident = 0.0, curv = -1e300;
  for (int q = 0; q < 200; ++q) {
    thermo::StatePoint p;
    for (double& c : p.c) c = 1.75 + 1.25 * rng.next();
    p.theta = 2.25 + 1.75 * rng.next();
    const double h = 1e-5 * p.theta;
    auto at_theta = [&](double t) { return thermo::free_energy({p.c, t}, params); };
    const double s_fd = -(at_theta(p.theta + h) - at_theta(p.theta - h)) / (2.0 * h);
    const double s_ex = thermo::entropy(p, params);
    ds = std::max(ds, std::abs(s_fd - s_ex) / std::max(1.0, std::abs(s_ex)));
    for (int i = 0; i < 3; ++i) {
      const double hc = 1e-5 * p.c[i];
      auto pp = p, pm = p;
      pp.c[i] += hc;
      pm.c[i] -= hc;
      const double fd = (thermo::free_energy(pp, params) - thermo::free_energy(pm, params)) / (2 * hc);
      const double mu = thermo::chemical_potential(i, p, params);
      dmu = std::max(dmu, std::abs(fd - mu) / std::max(1.0, std::abs(mu)));
    }
    const double e = thermo::internal_energy(p, params);
    de = std::max(de, std::abs(e - (thermo::free_energy(p, params) + p.theta * s_ex)) /
                          std::max(1.0, std::abs(e)));
    ident = std::max(ident, thermo::verify_thermo_identities(p, params).max_rel_err());
    // The ideal-gas free energy has ψ_θθ = -k^θ Σc_i / θ: definite, negative.
    const double h2 = 1e-3 * p.theta;
    const double second =
        (at_theta(p.theta + h2) - 2.0 * at_theta(p.theta) + at_theta(p.theta - h2)) / (h2 * h2);
    curv = std::max(curv, second);
  }
  s.at_most("entropy-identity", ds, 1e-8, "s = -d psi / d theta");
  s.at_most("potential-identity", dmu, 1e-8, "mu_i = d psi / d c_i");
  s.at_most("energy-identity", de, 1e-12, "e = psi + theta s");
  s.at_most("energy-entropy-identities", ident, 1e-6, "d e1/ds = theta, d e1/dc_i = psi_ci");
  s.at_most("psi-theta-curvature", curv, -1e-10, "second difference in theta, definite sign");

  double canon = 0.0;
  const double te = std::exp(params.k_c / params.k_theta);
  for (double a : {0.5, 1.0, 2.0, 7.0})
    for (double b : {0.3, 1.0, 4.0}) {
      const thermo::StatePoint p{{a, b, a * b}, te};
      for (auto conv : {RateConvention::mass_action, RateConvention::linear_response,
                        RateConvention::affinity_form})
        canon = std::max(canon, std::abs(thermo::rate(p, params, conv)));
    }
  s.at_most("rates-vanish-canonical", canon, 1e-12);

  double scaled = 0.0;
  for (thermo::Triple c : {thermo::Triple{1, 1, 1}, {1, 1, 2}, {3, 0.5, 0.2}})
    for (double lam : {0.01, 0.5, 3.0, 100.0}) {
      const auto eq = thermo::scale_equilibrium(thermo::find_equilibrium(c, params), lam, params);
      scaled = std::max(scaled, std::abs(thermo::rate({eq.c_tilde, eq.theta_tilde}, params,
                                                      RateConvention::affinity_form)));
    }
  s.at_most("equilibrium-scaling", scaled, 1e-12);

  // Δ ≥ 0 wherever the η-constraint holds, and the detector agrees with a
  // node-by-node evaluation of the constraint.
  s.guarded("entropy-production-sign", [&] {
    const GridSpec g(2, 32, kTwoPi);
    double worst = 1e300;
    int disagreements = 0, violated = 0;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      thermo::ThermoParams pr;
      if (seed % 2 == 0) pr.eta = {0.05 * seed, 1.0, 0.02 * seed};
      std::array<Field, 3> c{Field(g), Field(g), Field(g)};
      for (int i = 0; i < 3; ++i) c[i] = exp::random_bandlimited(g, 3, 10 * seed + i, 0.8) + 1.0;
      const Field th = exp::random_bandlimited(g, 3, 10 * seed + 5, 1.5) + 2.0;
      const Field R = thermo::rate_field(c, th, pr, RateConvention::affinity_form);
      std::array<thermo::Vec, 3> u;
      for (int i = 0; i < 3; ++i) u[i] = thermo::darcy_velocity(i, c[i], th, pr);
      const auto ep = thermo::entropy_production(c, th, u, R, pr);
      bool all_ok = true;
      for (std::size_t k = 0; k < g.size(); ++k) {
        double con = 0.0;
        for (int i = 0; i < 3; ++i) {
          double u2 = 0.0;
          for (const auto& comp : u[i]) u2 += comp[k] * comp[k];
          con += (pr.sigma[i] * R[k] + pr.eta[i]) * u2;
        }
        if (con < 0.0) all_ok = false;
        else worst = std::min(worst, ep.delta[k]);
      }
      if (all_ok != ep.constraint_ok) ++disagreements;
      if (!all_ok) ++violated;
    }
    s.at_least("entropy-production-sign", worst, -1e-12, "min delta where constraint holds");
    s.at_most("constraint-detector", disagreements, 0.0,
              fmt::format("{} of 6 samples violate the constraint", violated));
  });
  return s.take();
}

// ---------------------------------------------------------------- dynamics

// Condensed right-hand side from fourth-order differences.
std::array<Field, 4> fd_condensed_rhs(const dyn::ChemState& st, const thermo::ThermoParams& p,
                                      RateConvention conv) {
  const GridSpec& g = st.grid();
  const int d = g.dim();
  const Field& th = st.theta;
  const Field R = thermo::rate_field(st.c, th, p, conv);
  std::vector<Field> gt;
  for (int a = 0; a < d; ++a) gt.push_back(fd_first(th, a));
  const Field lt = fd_laplacian(th);
  Field S = st.c[0] + st.c[1] + st.c[2];
  std::array<Field, 4> out{Field(g), Field(g), Field(g), Field(g)};
  Field cross(g), eta_sum(g), lap_sum(g), react(g);
  for (int i = 0; i < 3; ++i) {
    const Field& c = st.c[i];
    const Field cth = c * th;
    const Field lc = fd_laplacian(c);
    const Field lcth = fd_laplacian(cth);
    std::vector<Field> gc, gcth;
    for (int a = 0; a < d; ++a) {
      gc.push_back(fd_first(c, a));
      gcth.push_back(fd_first(cth, a));
    }
    for (std::size_t k = 0; k < g.size(); ++k) {
      double gcgt = 0.0, gt2 = 0.0, gm2 = 0.0;
      for (int a = 0; a < d; ++a) {
        gcgt += gc[a][k] * gt[a][k];
        gt2 += gt[a][k] * gt[a][k];
        gm2 += gcth[a][k] * gcth[a][k];
      }
      out[i][k] = p.k_c * (lc[k] + gcgt / th[k] + c[k] * (lt[k] / th[k] - gt2 / (th[k] * th[k]))) -
                  p.sigma[i] * R[k];
      cross[k] += gcgt;
      eta_sum[k] += (p.eta[i] - 1.0) * gm2 / cth[k];
      lap_sum[k] += lcth[k];
      react[k] += p.sigma[i] * p.k_theta * th[k] * R[k];
    }
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    double gt2 = 0.0;
    for (int a = 0; a < d; ++a) gt2 += gt[a][k] * gt[a][k];
    out[3][k] = p.k_theta * cross[k] / S[k] + p.k_theta * gt2 / th[k] +
                (p.kappa * lt[k] + react[k] + p.k_c * p.k_c * (eta_sum[k] + lap_sum[k])) /
                    (p.k_theta * S[k]);
  }
  return out;
}

std::array<Field, 4> spectral_condensed_rhs(const dyn::ChemState& st, const thermo::ThermoParams& p,
                                            RateConvention conv) {
  const auto rc = dyn::rhs_concentration(st, p, conv);
  return {rc[0] + p.k_c * laplacian(st.c[0]), rc[1] + p.k_c * laplacian(st.c[1]),
          rc[2] + p.k_c * laplacian(st.c[2]), dyn::rhs_temperature(st, p, conv)};
}

dyn::ChemState smooth_state(const GridSpec& g, const thermo::EquilibriumState& eq) {
  auto s = dyn::ChemState::uniform(g, eq);
  for (int i = 0; i < 4; ++i) {
    Field f = smooth_field(g, 0.7 * i);
    f *= 0.05;
    f += 0.9;
    s.component(i) *= f;
  }
  return s;
}

std::vector<CheckResult> dynamics_checks(RateConvention conv) {
  Suite s("dynamics");
  thermo::ThermoParams params;

  s.guarded("fixed-point", [&] {
    const GridSpec g(2, 16, kTwoPi);
    const auto eq = thermo::find_equilibrium({1.0, 1.0, 2.0}, params);
    const auto s0 = dyn::ChemState::uniform(g, eq);
    dyn::SolverConfig c;
    c.dt = 0.01;
    c.T = 0.01;
    c.convention = conv;
    const auto s1 = dyn::step(s0, c, params);
    double r = 0.0;
    for (int i = 0; i < 4; ++i)
      r = std::max(r, (s1.component(i) - s0.component(i)).max_abs() / s0.component(i).max_abs());
    s.at_most("fixed-point", r, 1e-14, "equilibrium (1, 1, 2)");
  });

  s.guarded("reaction-ode-conservation", [&] {
    dyn::ReactionConfig rc;
    rc.convention = conv;
    rc.record_every = 100;
    const auto ser = dyn::reaction_ode({2.0, 2.0, 1.0}, 1.0, rc, params);
    double z = 0.0;
    for (std::size_t n = 0; n < ser.t.size(); ++n)
      z = std::max({z, std::abs(ser.Z0[n] - ser.Z0[0]), std::abs(ser.Z1[n] - ser.Z1[0])});
    s.at_most("reaction-ode-conservation", z, 1e-9, "T = 10, dt = 1e-3");
    s.at_most("reaction-ode-terminal-rate", std::abs(ser.R.back()), 1e-8);
  });

  s.guarded("entropy", [&] {
    double min_delta = 1e300, min_inc = 1e300, drift = 0.0, growth = -1e300;
    for (int seed = 1; seed <= calib::kReferenceTrajectories; ++seed) {
      const auto rec = exp::reference_trajectory(seed, params, conv);
      if (rec.failure) throw Error(ErrorKind::physics, *rec.failure);
      const auto rep = dyn::diagnostics(rec);
      min_delta = std::min(min_delta, rep.min_delta);
      min_inc = std::min(min_inc, rep.min_entropy_increment);
      drift = std::max(drift, rep.max_energy_drift_rate);
      if (!rep.constraint_ok) throw Error(ErrorKind::physics, "eta-constraint violated");
      if (seed == 1) growth = exp::max_relative_growth(rec, calib::kDecayTransient);
    }
    s.at_least("entropy-production", min_delta, -1e-12, "reference trajectories");
    s.at_least("entropy-monotone", min_inc, -1e-8, "per step");
    s.at_most("energy-drift", drift, calib::kEnergyDriftRate, "per unit time");
    s.at_most("perturbation-decay", growth, calib::kDecayGrowth, "after t = 0.1");
  });

  s.guarded("rhs-fd-order", [&] {
    const auto eq = thermo::find_equilibrium({1.0, 1.0, 1.0}, params);
    double e[2]{};
    int m = 0;
    for (int n : {16, 32}) {
      const auto st = smooth_state(GridSpec(2, n, kTwoPi), eq);
      const auto a = spectral_condensed_rhs(st, params, conv);
      const auto b = fd_condensed_rhs(st, params, conv);
      for (int i = 0; i < 4; ++i) e[m] = std::max(e[m], (a[i] - b[i]).max_abs());
      ++m;
    }
    s.at_least("rhs-fd-order", std::log2(e[0] / e[1]), 3.5, "observed order, n = 16 -> 32");
  });

  s.guarded("second-order", [&] {
    const GridSpec g(2, 16, kTwoPi);
    const auto s0 = exp::reference_perturbation(g, 4);
    dyn::SolverConfig c;
    c.T = 0.5;
    c.record_every = 1 << 20;
    c.convention = conv;
    c.dt = c.T / 256;
    const auto ref = dyn::integrate(s0, c, params);
    if (ref.failure) throw Error(ErrorKind::physics, *ref.failure);
    double err[2]{};
    for (int m = 0; m < 2; ++m) {
      c.dt = c.T / (16 << m);
      const auto r = dyn::integrate(s0, c, params);
      if (r.failure) throw Error(ErrorKind::physics, *r.failure);
      for (int i = 0; i < 4; ++i)
        err[m] = std::max(err[m], (r.snapshots.back().component(i) -
                                   ref.snapshots.back().component(i)).max_abs());
    }
    s.at_least("second-order", std::log2(err[0] / err[1]), 1.8, "observed order in dt");
  });
  return s.take();
}

// ---------------------------------------------------- wellposedness-harness

std::vector<CheckResult> harness_checks() {
  Suite s("wellposedness-harness");

  s.guarded("zero-fixed-point", [&] {
    const auto ref = harness::reference_problem(32, 1.0 / 64);
    const auto zero = PerturbationState::zero(ref.grid, ref.eq);
    const auto x0 = harness::zero_series(ref.grid, ref.config);
    const auto out = harness::picard_step(x0, zero, ref.config, ref.params);
    double m = 0.0;
    for (const auto& st : out.next.values)
      for (const auto& c : st)
        for (std::size_t q = 0; q < c.size(); ++q) m = std::max(m, std::abs(c[q]));
    s.at_most("zero-fixed-point", m, 0.0);
  });

  s.guarded("reference-iteration", [&] {
    const auto ref = harness::reference_problem();
    const lp::DyadicPartition P(ref.grid);
    const auto gate = harness::smallness_gate(ref.data, ref.config.h, P);
    s.at_most("gate", gate.measured, gate.bound);
    const auto rep = harness::run_iteration(ref.data, ref.config, ref.params);
    const double h2 = ref.config.h * ref.config.h, h4 = h2 * h2;
    s.at_most("iterate-bound", rep.max_norm, h2, "every iterate, B-norm <= h^2");
    double ratio = 0.0;
    for (const auto& r : rep.rows)
      if (r.k >= 2 && r.ratio) ratio = std::max(ratio, *r.ratio);
    s.at_most("difference-decay", ratio, 0.5, "k >= 2");
    s.at_most("forcing-smallness", rep.max_forcing / h4, calib::kForcing, "units of h^4");
    s.at_most("converged-within-kmax",
              rep.status == harness::IterationStatus::converged ? double(rep.rows.size()) : 1e9,
              ref.config.kmax);
  });

  s.guarded("residual-refinement", [&] {
    double res[2]{};
    int m = 0;
    for (double dt : {1.0 / 32, 1.0 / 64}) {
      const auto ref = harness::reference_problem(32, dt);
      const auto rep = harness::run_iteration(ref.data, ref.config, ref.params, true);
      res[m++] = rep.rows.back().residual;
    }
    s.at_least("residual-order", std::log2(res[0] / res[1]), 1.0, "observed order in dt");
  });

  s.guarded("equilibrium-scaling-decisions", [&] {
    int mismatches = 0;
    std::array<bool, 3> base{};
    for (double lam : {1.0, 1.5}) {
      auto ref = harness::reference_problem(32, 1.0 / 64);
      const auto eq = thermo::scale_equilibrium(ref.eq, lam, ref.params);
      const lp::DyadicPartition P(ref.grid);
      const double h4 = std::pow(ref.config.h, 4);
      std::array<bool, 3> got{};
      for (double norm : {0.5 * h4 / 1.5, 2.0 * h4}) {
        auto data = harness::single_mode_data(ref.grid, eq, {1, 1, 0}, {1.0, 0.5, 0.75, 1.0},
                                              norm * lam);
        const bool pass = harness::smallness_gate(data, ref.config.h, P).pass;
        if (norm < h4) {
          const auto rep = harness::run_iteration(data, ref.config, ref.params);
          got[0] = pass;
          got[1] = rep.est1_ok;
          got[2] = rep.est2_ok;
        } else if (pass) {
          ++mismatches;  // oversized data must fail at every scale
        }
      }
      if (lam == 1.0) base = got;
      else if (got != base) ++mismatches;
    }
    s.at_most("equilibrium-scaling-decisions", mismatches, 0.0, "lambda = 1 vs 1.5");
  });

  s.guarded("horizon-doubling", [&] {
    std::array<bool, 3> got[2]{};
    int m = 0;
    for (double T : {1.0, 2.0}) {
      auto ref = harness::reference_problem(32, 1.0 / 64);
      ref.config.T = T;
      const lp::DyadicPartition P(ref.grid);
      const auto rep = harness::run_iteration(ref.data, ref.config, ref.params);
      got[m++] = {harness::smallness_gate(ref.data, ref.config.h, P).pass, rep.est1_ok,
                  rep.est2_ok};
    }
    s.at_most("horizon-doubling", got[0] == got[1] ? 0.0 : 1.0, 0.0, "decisions at T = 1 vs 2");
  });
  return s.take();
}

}  // namespace

Fault parse_fault(const std::string& name) {
  if (name.empty() || name == "none") return Fault::none;
  if (name == "phi-support") return Fault::phi_support;
  if (name == "rate-sign") return Fault::rate_sign;
  throw Error(ErrorKind::input, "unknown fault '" + name + "' (phi-support, rate-sign)");
}

std::vector<CheckResult> run_checks(const CheckOptions& options) {
  for (const auto& m : options.modules)
    if (std::find(module_names().begin(), module_names().end(), m) == module_names().end())
      throw Error(ErrorKind::input, "unknown module '" + m + "'");
  auto wanted = [&](const std::string& m) {
    return options.modules.empty() ||
           std::find(options.modules.begin(), options.modules.end(), m) != options.modules.end();
  };
  lp::PartitionOptions lp_opts;
  if (options.fault == Fault::phi_support) lp_opts.support_scale = 0.9;
  const RateConvention conv = options.fault == Fault::rate_sign ? RateConvention::linear_response
                                                                : RateConvention::affinity_form;
  std::vector<CheckResult> all;
  auto append = [&](std::vector<CheckResult> v) { all.insert(all.end(), v.begin(), v.end()); };
  if (wanted("spectral-core")) append(spectral_checks());
  if (wanted("littlewood-paley")) append(lp_checks(lp_opts));
  if (wanted("thermo")) append(thermo_checks());
  if (wanted("dynamics")) append(dynamics_checks(conv));
  if (wanted("wellposedness-harness")) append(harness_checks());
  return all;
}

void print_result(std::ostream& os, const CheckResult& r) {
  os << fmt::format("{} {}/{} measured={:.6e} bound={:.6e}", r.pass ? "PASS" : "FAIL", r.module,
                    r.name, r.measured, r.bound);
  if (!r.detail.empty()) os << " [" << r.detail << "]";
  os << "\n";
}

}  // namespace rdt::checks
