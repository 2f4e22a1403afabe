#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "rdt/fft.hpp"
#include "rdt/grid.hpp"
#include "rdt/spectral_ops.hpp"

using namespace rdt;
using std::numbers::pi;

namespace {

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) m = std::max(m, std::abs(a[q] - b[q]));
  return m;
}

Field cos_x0(const GridSpec& g) {
  return Field::sample(g, [](std::array<double, 3> x) { return std::cos(x[0]); });
}

}  // namespace

TEST_SUITE("spectral-core") {

TEST_CASE("grid construction") {
  const GridSpec g = build_grid(1, 8, 2 * pi);
  CHECK(g.spacing() == doctest::Approx(pi / 4));
  CHECK(g.size() == 8);
  CHECK(g.signed_index(0) == 0);
  CHECK(g.signed_index(3) == 3);
  CHECK(g.signed_index(4) == -4);
  CHECK(g.signed_index(7) == -1);
  CHECK(build_grid(2, 16, 2 * pi).size() == 256);
  CHECK(build_grid(3, 8, 1.0).spectral_size() == 8u * 8u * 5u);
  CHECK_THROWS_AS(build_grid(2, 12, 2 * pi), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(4, 8, 2 * pi), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(2, 4, 2 * pi), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(2, 8, 0.0), std::invalid_argument);
}

TEST_CASE("zero field has zero coefficients") {
  const GridSpec g(2, 16, 2 * pi);
  const SpectralField z = transform(Field(g));
  for (std::size_t q = 0; q < z.size(); ++q) CHECK(std::abs(z[q]) == 0.0);
}

TEST_CASE("cosine has two coefficients of magnitude N/2") {
  // Unnormalized forward transform: the inverse carries 1/N, so each of the
  // two coefficients of cos(x₀) has magnitude N/2 and inverse(·) returns cos.
  const GridSpec g(2, 16, 2 * pi);
  const SpectralField c = transform(cos_x0(g));
  const double N = static_cast<double>(g.size());
  int nonzero = 0;
  for (int a = -8; a < 8; ++a)
    for (int b = -8; b < 8; ++b) {
      const auto v = c.coefficient({a, b, 0});
      if (std::abs(v) > 1e-9) {
        ++nonzero;
        CHECK(std::abs(b) == 0);
        CHECK(std::abs(a) == 1);
        CHECK(std::abs(v) == doctest::Approx(N / 2).epsilon(1e-13));
      }
    }
  CHECK(nonzero == 2);
}

TEST_CASE("transform matches a direct DFT") {
  for (int d = 1; d <= 3; ++d) {
    const GridSpec g(d, 8, 3.0);
    const Field u = oracle::smooth(g, 0.4, d > 1 ? 0.3 : 0.0, 0.7);
    const SpectralField uh = transform(u);
    double err = 0.0;
    for (int a = -4; a < 4; ++a)
      for (int b = (d > 1 ? -4 : 0); b < (d > 1 ? 4 : 1); ++b)
        for (int c = (d > 2 ? -4 : 0); c < (d > 2 ? 4 : 1); ++c) {
          const std::array<int, 3> k{a, b, c};
          err = std::max(err, std::abs(uh.coefficient(k) - oracle::dft_coefficient(u, k)));
        }
    CHECK(err < 1e-11);
  }
}

TEST_CASE("round trip and Parseval") {
  const GridSpec g(3, 16, 2.5);
  const Field u = oracle::smooth(g, 0.8, 0.6, 0.2);
  CHECK(max_diff(inverse(transform(u)), u) < 1e-13);
  CHECK(l2_norm(transform(u)) == doctest::Approx(l2_norm(u)).epsilon(1e-13));
}

TEST_CASE("spectral size mismatch is rejected") {
  const GridSpec g(2, 8, 1.0);
  CHECK_THROWS_AS(SpectralField(g, std::vector<std::complex<double>>(3)), std::invalid_argument);
}

TEST_CASE("gradient and laplacian eigenfunctions") {
  const GridSpec g(2, 32, 2 * pi);
  const Field s = Field::sample(g, [](std::array<double, 3> x) { return std::sin(x[0]); });
  const auto grad = gradient(s);
  REQUIRE(grad.size() == 2);
  CHECK(max_diff(grad[0], cos_x0(g)) < 1e-12);
  CHECK(grad[1].max_abs() < 1e-12);
  CHECK(max_diff(laplacian(cos_x0(g)), -1.0 * cos_x0(g)) < 1e-12);
}

TEST_CASE("divergence of gradient is the laplacian") {
  const GridSpec g(2, 32, 2 * pi);
  const Field u = oracle::smooth(g, 0.5, 0.3, 0.1);
  const auto grad = gradient(u);
  CHECK(max_diff(divergence(grad), laplacian(u)) < 1e-8);
  CHECK_THROWS_AS(divergence(std::span<const Field>(grad.data(), 1)), std::invalid_argument);
}

TEST_CASE("derivatives agree with fourth-order stencils on a fine grid") {
  const GridSpec g(2, 64, 2 * pi);
  const Field u = oracle::smooth(g, 0.5, 0.3, 0.4);
  CHECK(max_diff(gradient(u)[1], oracle::d1(u, 1)) < 1e-3);
  CHECK(max_diff(laplacian(u), oracle::lap(u)) < 1e-3);
}

TEST_CASE("heat propagator") {
  const GridSpec g(2, 32, 2 * pi);
  SUBCASE("eigenmode decays exactly") {
    const Field u = heat_propagate(cos_x0(g), 1.0, 0.5);
    CHECK(max_diff(u, std::exp(-0.5) * cos_x0(g)) <= 1e-12);
  }
  SUBCASE("constant forcing raises the mean linearly") {
    for (double nu : {0.1, 1.0, 7.0}) {
      const Field u = heat_propagate(Field(g), nu, Field(g, 1.0), 0.3);
      CHECK(max_diff(u, Field(g, 0.3)) < 1e-14);
    }
  }
  SUBCASE("linear-in-time forcing on one mode matches the Duhamel integral") {
    // u' = -u + (a + b t) cos x, u(0) = 0:
    //   u(t) = [a(1 - e^{-t}) + b(t - 1 + e^{-t})] cos x
    const double a = 0.7, b = -1.3, dt = 0.4;
    const Field u =
        heat_propagate(Field(g), 1.0, a * cos_x0(g), (a + b * dt) * cos_x0(g), dt);
    const double amp = a * (1 - std::exp(-dt)) + b * (dt - 1 + std::exp(-dt));
    CHECK(max_diff(u, amp * cos_x0(g)) < 1e-13);
  }
}

TEST_CASE("integrator weights stay finite near zero") {
  for (double a : {0.0, 1e-14, 1e-8, 1e-3, 1.0, 50.0}) {
    const EtdWeights w = etd_weights(a);
    CHECK(std::isfinite(w.phi1));
    CHECK(std::isfinite(w.phi2));
    if (a == 0.0) {
      CHECK(w.phi1 == doctest::Approx(1.0));
      CHECK(w.phi2 == doctest::Approx(0.5));
    }
    if (a >= 1e-3) {
      CHECK(w.phi1 == doctest::Approx((1 - std::exp(-a)) / a).epsilon(1e-10));
      CHECK(w.phi2 == doctest::Approx((a - 1 + std::exp(-a)) / (a * a)).epsilon(1e-7));
    }
  }
}

TEST_CASE("dealiasing removes the top third of the spectrum") {
  const GridSpec g(1, 32, 2 * pi);
  const Field hi = Field::sample(g, [](std::array<double, 3> x) { return std::cos(12 * x[0]); });
  const Field lo = Field::sample(g, [](std::array<double, 3> x) { return std::cos(5 * x[0]); });
  CHECK(dealias(hi).max_abs() < 1e-14);
  CHECK(max_diff(dealias(lo), lo) < 1e-14);
}

}  // TEST_SUITE
