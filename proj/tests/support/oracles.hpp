#pragma once

// Test-side reference computations, written independently of the library so
// that agreement means something.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "rdt/dynamics.hpp"
#include "rdt/grid.hpp"

namespace oracle {

using rdt::Field;
using rdt::GridSpec;

constexpr double kPi = std::numbers::pi;

/// Direct O(N²) discrete Fourier coefficient Σ_x u(x) e^{-i k·x (2π/L)}.
inline std::complex<double> dft_coefficient(const Field& u, std::array<int, 3> k) {
  const GridSpec& g = u.grid();
  const double w = g.base_frequency();
  std::complex<double> s = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const auto x = g.node(q);
    const double ph = w * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
    s += u[q] * std::complex<double>(std::cos(ph), -std::sin(ph));
  }
  return s;
}

inline long wrap(long i, long n) { return ((i % n) + n) % n; }

/// u at the node with integer coordinates idx (periodic).
inline double at(const Field& u, std::array<long, 3> idx) {
  const GridSpec& g = u.grid();
  const long n = g.points();
  std::size_t flat = 0;
  for (int a = 0; a < g.dim(); ++a) flat = flat * n + wrap(idx[a], n);
  return u[flat];
}

inline std::array<long, 3> coords(const GridSpec& g, std::size_t flat) {
  std::array<long, 3> c{0, 0, 0};
  for (int a = g.dim() - 1; a >= 0; --a) {
    c[a] = static_cast<long>(flat % g.points());
    flat /= g.points();
  }
  return c;
}

/// Fourth-order central first derivative along axis.
inline Field d1(const Field& u, int axis) {
  const GridSpec& g = u.grid();
  const double h = g.spacing();
  Field out(g);
  for (std::size_t q = 0; q < g.size(); ++q) {
    auto c = coords(g, q);
    auto s = [&](long o) {
      auto cc = c;
      cc[axis] += o;
      return at(u, cc);
    };
    out[q] = (s(-2) - 8.0 * s(-1) + 8.0 * s(1) - s(2)) / (12.0 * h);
  }
  return out;
}

/// Fourth-order central Laplacian.
inline Field lap(const Field& u) {
  const GridSpec& g = u.grid();
  const double h = g.spacing();
  Field out(g);
  for (std::size_t q = 0; q < g.size(); ++q) {
    auto c = coords(g, q);
    double acc = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      auto s = [&](long o) {
        auto cc = c;
        cc[a] += o;
        return at(u, cc);
      };
      acc += (-s(-2) + 16.0 * s(-1) - 30.0 * s(0) + 16.0 * s(1) - s(2)) / (12.0 * h * h);
    }
    out[q] = acc;
  }
  return out;
}

/// R_t = k^c ln(c_A c_B / c_C) - k^θ ln θ + k^c
inline double rate_rt4(double a, double b, double c, double th, double kc, double kt) {
  return kc * std::log(a * b / c) - kt * std::log(th) + kc;
}

/// Condensed right-hand side of the (c_i, θ) system, pointwise from
/// finite-difference derivatives. The concentration equation is
/// written in expanded form k^c[∆c_i + ∇c_i·∇θ/θ + c_i∆θ/θ - c_i|∇θ|²/θ²].
inline std::array<Field, 4> condensed_rhs(const rdt::dyn::ChemState& s,
                                          const rdt::thermo::ThermoParams& p) {
  const GridSpec& g = s.grid();
  const int d = g.dim();
  const Field& th = s.theta;
  std::vector<Field> gth;
  for (int a = 0; a < d; ++a) gth.push_back(d1(th, a));
  const Field lth = lap(th);
  std::array<Field, 4> out{Field(g), Field(g), Field(g), Field(g)};
  std::array<std::vector<Field>, 3> gc, gp;
  std::array<Field, 3> lc{Field(g), Field(g), Field(g)}, lp{Field(g), Field(g), Field(g)};
  for (int i = 0; i < 3; ++i) {
    const Field prod = s.c[i] * th;
    for (int a = 0; a < d; ++a) {
      gc[i].push_back(d1(s.c[i], a));
      gp[i].push_back(d1(prod, a));
    }
    lc[i] = lap(s.c[i]);
    lp[i] = lap(prod);
  }
  for (std::size_t q = 0; q < g.size(); ++q) {
    const double t = th[q];
    const double R = rate_rt4(s.c[0][q], s.c[1][q], s.c[2][q], t, p.k_c, p.k_theta);
    double gt2 = 0.0;
    for (int a = 0; a < d; ++a) gt2 += gth[a][q] * gth[a][q];
    double S = 0.0, cross = 0.0, bracket = p.kappa * lth[q];
    for (int i = 0; i < 3; ++i) {
      const double c = s.c[i][q];
      double gcgt = 0.0, gp2 = 0.0;
      for (int a = 0; a < d; ++a) {
        gcgt += gc[i][a][q] * gth[a][q];
        gp2 += gp[i][a][q] * gp[i][a][q];
      }
      out[i][q] = p.k_c * (lc[i][q] + gcgt / t + c * lth[q] / t - c * gt2 / (t * t)) -
                  p.sigma[i] * R;
      S += c;
      cross += gcgt;
      bracket += p.sigma[i] * p.k_theta * t * R +
                 p.k_c * p.k_c * ((p.eta[i] - 1.0) * gp2 / (c * t) + lp[i][q]);
    }
    out[3][q] = p.k_theta * cross / S + p.k_theta * gt2 / t + bracket / (p.k_theta * S);
  }
  return out;
}

/// Smooth bridge e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)}) rescaled to [1.1, 4/3]:
/// the cutoff is 1 below 1.1 and 0 above 4/3.
inline double cutoff(double rho) {
  const double a = 1.1, b = 4.0 / 3.0;
  if (rho <= a) return 1.0;
  if (rho >= b) return 0.0;
  const double t = (rho - a) / (b - a);
  const double e0 = std::exp(-1.0 / t), e1 = std::exp(-1.0 / (1.0 - t));
  return 1.0 - e0 / (e0 + e1);
}
inline double profile(double rho) { return cutoff(rho / 2.0) - cutoff(rho); }

/// Bisection for a sign change of f on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Smooth positive test field exp(a sin(x₀ + φ) + b cos(2 x₁)).
inline Field smooth(const GridSpec& g, double a, double b, double phase) {
  return Field::sample(g, [&](std::array<double, 3> x) {
    return std::exp(a * std::sin(x[0] + phase) + b * std::cos(2.0 * x[1]));
  });
}

}  // namespace oracle
