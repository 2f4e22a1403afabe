#include "rdt/spectral_ops.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "rdt/fft.hpp"

namespace rdt {

namespace {

std::unique_ptr<SpectralGeometry> build_geometry(const GridSpec& grid) {
  auto g = std::make_unique<SpectralGeometry>();
  const int d = grid.dim();
  const int n = grid.points();
  const int half = n / 2 + 1;
  const double k0 = grid.base_frequency();
  const std::size_t m = grid.spectral_size();
  g->index.resize(m);
  g->ik.resize(m);
  g->k2.resize(m);
  g->radius.resize(m);
  g->multiplicity.resize(m);
  g->keep.resize(m);

  for (std::size_t q = 0; q < m; ++q) {
    std::array<int, 3> idx{0, 0, 0};
    std::size_t rest = q;
    idx[d - 1] = static_cast<int>(rest % half);
    rest /= half;
    for (int a = d - 2; a >= 0; --a) {
      idx[a] = grid.signed_index(static_cast<int>(rest % n));
      rest /= n;
    }
    const int last = idx[d - 1];
    // Bin n/2 on the last axis is the Nyquist bin; report it as -n/2.
    if (last == n / 2) idx[d - 1] = -n / 2;

    double k2 = 0.0;
    bool keep = true;
    std::array<double, 3> ik{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) {
      const double xi = k0 * idx[a];
      k2 += xi * xi;
      ik[a] = (idx[a] == -n / 2) ? 0.0 : xi;
      if (3 * std::abs(idx[a]) > n) keep = false;
    }
    g->index[q] = idx;
    g->ik[q] = ik;
    g->k2[q] = k2;
    g->radius[q] = std::sqrt(k2);
    g->multiplicity[q] = (last > 0 && last < n / 2) ? 2.0 : 1.0;
    g->keep[q] = keep ? 1 : 0;
  }
  return g;
}

}  // namespace

const SpectralGeometry& geometry(const GridSpec& grid) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double>, std::unique_ptr<SpectralGeometry>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(grid.dim(), grid.points(), grid.length());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_geometry(grid)).first;
  return *it->second;
}

double coefficient_energy(const SpectralField& u_hat) {
  const auto& g = geometry(u_hat.grid());
  double s = 0.0;
  for (std::size_t q = 0; q < u_hat.size(); ++q) s += g.multiplicity[q] * std::norm(u_hat[q]);
  return s;
}

double l2_norm(const SpectralField& u_hat) {
  const GridSpec& grid = u_hat.grid();
  const double N = static_cast<double>(grid.size());
  return std::sqrt(coefficient_energy(u_hat) * grid.volume() / (N * N));
}

SpectralField derivative(const SpectralField& u_hat, int axis) {
  const auto& g = geometry(u_hat.grid());
  if (axis < 0 || axis >= u_hat.grid().dim())
    throw std::invalid_argument("derivative axis out of range");
  SpectralField out(u_hat.grid());
  for (std::size_t q = 0; q < u_hat.size(); ++q)
    out[q] = std::complex<double>(0.0, g.ik[q][axis]) * u_hat[q];
  return out;
}

SpectralField laplacian(const SpectralField& u_hat) {
  const auto& g = geometry(u_hat.grid());
  SpectralField out(u_hat.grid());
  for (std::size_t q = 0; q < u_hat.size(); ++q) out[q] = -g.k2[q] * u_hat[q];
  return out;
}

void dealias_inplace(SpectralField& u_hat) {
  const auto& g = geometry(u_hat.grid());
  for (std::size_t q = 0; q < u_hat.size(); ++q)
    if (!g.keep[q]) u_hat[q] = 0.0;
}

std::vector<Field> gradient(const Field& u) {
  const SpectralField u_hat = transform(u);
  std::vector<Field> out;
  out.reserve(u.grid().dim());
  for (int a = 0; a < u.grid().dim(); ++a) out.push_back(inverse(derivative(u_hat, a)));
  return out;
}

Field laplacian(const Field& u) { return inverse(laplacian(transform(u))); }

Field divergence(std::span<const Field> v) {
  if (v.empty()) throw std::invalid_argument("divergence of an empty vector field");
  const GridSpec& grid = v[0].grid();
  if (static_cast<int>(v.size()) != grid.dim())
    throw std::invalid_argument("divergence needs one component per axis");
  SpectralField acc(grid);
  for (int a = 0; a < grid.dim(); ++a) {
    require_same_grid(grid, v[a].grid());
    acc += derivative(transform(v[a]), a);
  }
  return inverse(acc);
}

Field dealias(const Field& u) {
  SpectralField u_hat = transform(u);
  dealias_inplace(u_hat);
  return inverse(u_hat);
}

EtdWeights etd_weights(double a) {
  EtdWeights w{};
  w.decay = std::exp(-a);
  if (a < 0.1) {
    // Taylor series; 12 terms reach round-off for a < 0.1.
    double p1 = 0.0, p2 = 0.0, term = 1.0;  // term = (-a)^m / m!
    for (int m = 0; m < 14; ++m) {
      p1 += term / (m + 1);
      p2 += term / ((m + 1) * (m + 2));
      term *= -a / (m + 1);
    }
    w.phi1 = p1;
    w.phi2 = p2;
  } else {
    w.phi1 = -std::expm1(-a) / a;
    w.phi2 = (a + std::expm1(-a)) / (a * a);
  }
  w.psi = w.phi1 - w.phi2;
  return w;
}

namespace {

void check_step(double nu, double dt) {
  if (!(nu > 0.0)) throw std::invalid_argument("diffusivity must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
}

}  // namespace

SpectralField heat_propagate(const SpectralField& u0, double nu, const SpectralField& f0,
                             const SpectralField& f1, double dt) {
  check_step(nu, dt);
  require_same_grid(u0.grid(), f0.grid());
  require_same_grid(u0.grid(), f1.grid());
  const auto& g = geometry(u0.grid());
  SpectralField out(u0.grid());
  for (std::size_t q = 0; q < u0.size(); ++q) {
    const EtdWeights w = etd_weights(nu * g.k2[q] * dt);
    out[q] = w.decay * u0[q] + dt * (w.psi * f0[q] + w.phi2 * f1[q]);
  }
  return out;
}

SpectralField heat_propagate(const SpectralField& u0, double nu, double dt) {
  check_step(nu, dt);
  const auto& g = geometry(u0.grid());
  SpectralField out(u0.grid());
  for (std::size_t q = 0; q < u0.size(); ++q) out[q] = std::exp(-nu * g.k2[q] * dt) * u0[q];
  return out;
}

Field heat_propagate(const Field& u0, double nu, const Field& f0, const Field& f1,
                     double dt) {
  return inverse(heat_propagate(transform(u0), nu, transform(f0), transform(f1), dt));
}

Field heat_propagate(const Field& u0, double nu, const Field& f, double dt) {
  const SpectralField f_hat = transform(f);
  return inverse(heat_propagate(transform(u0), nu, f_hat, f_hat, dt));
}

Field heat_propagate(const Field& u0, double nu, double dt) {
  return inverse(heat_propagate(transform(u0), nu, dt));
}

}  // namespace rdt
