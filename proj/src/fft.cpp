#include "rdt/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

namespace rdt {

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~PlanPair() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

// FFTW planning is not thread-safe; execution of a finished plan on new arrays is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(const GridSpec& grid) {
  static std::map<std::pair<int, int>, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(plan_mutex());
  auto key = std::make_pair(grid.dim(), grid.points());
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  const int d = grid.dim();
  std::vector<int> dims(d, grid.points());
  std::vector<double> real(grid.size());
  std::vector<std::complex<double>> spec(grid.spectral_size());
  auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

  auto pair = std::make_unique<PlanPair>();
  pair->forward = fftw_plan_dft_r2c(d, dims.data(), real.data(), cplx, flags);
  pair->backward = fftw_plan_dft_c2r(d, dims.data(), cplx, real.data(), flags);
  auto& ref = *pair;
  cache.emplace(key, std::move(pair));
  return ref;
}

}  // namespace

SpectralField transform(const Field& u) {
  const GridSpec& grid = u.grid();
  const PlanPair& p = plans_for(grid);
  std::vector<double> in(u.values().begin(), u.values().end());
  SpectralField out(grid);
  fftw_execute_dft_r2c(p.forward, in.data(),
                       reinterpret_cast<fftw_complex*>(out.coeffs().data()));
  return out;
}

Field inverse(const SpectralField& u_hat) {
  const GridSpec& grid = u_hat.grid();
  const PlanPair& p = plans_for(grid);
  // c2r overwrites its input.
  std::vector<std::complex<double>> in(u_hat.coeffs().begin(), u_hat.coeffs().end());
  Field out(grid);
  fftw_execute_dft_c2r(p.backward, reinterpret_cast<fftw_complex*>(in.data()),
                       out.values().data());
  out *= 1.0 / static_cast<double>(grid.size());
  return out;
}

}  // namespace rdt
