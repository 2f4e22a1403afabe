#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "rdt/config.hpp"
#include "rdt/error.hpp"
#include "rdt/field_io.hpp"
#include "rdt/invariants.hpp"

using namespace rdt;
namespace fs = std::filesystem;

namespace {

config::RunConfig parse(const std::string& text) {
  std::istringstream is(text);
  return config::from_pairs(config::parse_pairs(is, "test"));
}

std::string input_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::input);
    return e.what();
  }
  FAIL("no error for: " << text);
  return {};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rdt_unit";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("numbers") {
  CHECK(config::parse_number("2pi", "k") == doctest::Approx(2 * std::numbers::pi));
  CHECK(config::parse_number("pi/2", "k") == doctest::Approx(std::numbers::pi / 2));
  CHECK(config::parse_number("1/256", "k") == doctest::Approx(1.0 / 256));
  CHECK(config::parse_number(" 1e-3 ", "k") == doctest::Approx(1e-3));
  CHECK_THROWS_AS(config::parse_number("abc", "k"), Error);
  CHECK_THROWS_AS(config::parse_number("1/0", "k"), Error);
}

TEST_CASE("a full configuration") {
  const auto c = parse(
      "# comment\n"
      "grid.d = 2\ngrid.n = 64\ngrid.L = 2pi\n"
      "thermo.eta = 1, 2, 3\n"
      "eq.scale = 100\n"
      "run.dt = 1/256   # trailing comment\n"
      "run.T = 1\nrun.convention = r2\n"
      "iter.h = 0.2\niter.kmax = 5\n"
      "init.kind = mode\ninit.k = 2,1\n"
      "seed = 9\n");
  CHECK(c.grid.points() == 64);
  CHECK(c.grid.length() == doctest::Approx(2 * std::numbers::pi));
  CHECK(c.params.eta[2] == 3.0);
  CHECK(c.solver.dt == doctest::Approx(1.0 / 256));
  CHECK(c.iteration.dt == doctest::Approx(1.0 / 256));
  CHECK(c.solver.convention == thermo::RateConvention::linear_response);
  CHECK(c.params.h == 0.2);
  CHECK(c.iteration.h == 0.2);
  CHECK(c.init.norm == doctest::Approx(0.5 * std::pow(0.2, 4)));
  CHECK(c.init.wavevector == std::array<int, 3>{2, 1, 0});
  CHECK(c.seed == 9);
  const auto eq = config::equilibrium(c);
  CHECK(eq.c_tilde[0] == doctest::Approx(100.0));
  CHECK(eq.theta_tilde == doctest::Approx(100 * std::numbers::e));
}

TEST_CASE("malformed configurations name the problem") {
  CHECK(input_error("grid.n = 12\n").find("power of two") != std::string::npos);
  CHECK(input_error("grid.x = 1\n").find("grid.x") != std::string::npos);
  CHECK(input_error("grid.n\n").find("test:1") != std::string::npos);
  CHECK(input_error("seed = 1\nseed = 2\n").find("repeated") != std::string::npos);
  CHECK(input_error("run.dt = 0.3\n").find("multiple") != std::string::npos);
  CHECK(input_error("iter.h = 1.5\n").find("h") != std::string::npos);
  CHECK(input_error("init.kind = wave\n").find("init.kind") != std::string::npos);
  CHECK(input_error("init.weights = 1,2\n").find("init.weights") != std::string::npos);
  CHECK(input_error("eq.cA = -1\n").find("positive") != std::string::npos);
  CHECK(input_error("run.convention = r9\n").find("r9") != std::string::npos);
}

TEST_CASE("missing file names the path") {
  try {
    config::load("/nonexistent/run.cfg");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::input);
    CHECK(std::string(e.what()).find("/nonexistent/run.cfg") != std::string::npos);
  }
}

TEST_CASE("every documented key is accepted") {
  for (const auto& [key, meaning] : config::documented_keys()) CHECK(!meaning.empty());
  CHECK(config::documented_keys().count("grid.n") == 1);
}

TEST_CASE("initial data kinds") {
  auto c = parse("grid.n = 16\ninit.kind = random\nseed = 3\n");
  const auto a = config::initial_perturbation(c);
  const auto b = config::initial_perturbation(c);
  CHECK(a.z[0].max_abs() == doctest::Approx(0.05 * a.eq.c_tilde[0]));
  for (std::size_t q = 0; q < a.omega.size(); ++q) CHECK(a.omega[q] == b.omega[q]);
  c.init.band = 8;
  CHECK_THROWS_AS(config::initial_perturbation(c), Error);
}

TEST_CASE("field files round trip") {
  const GridSpec g(2, 8, 3.5);
  const Field u = Field::sample(g, [](std::array<double, 3> x) { return std::sin(x[0]) - x[1]; });
  const auto path = scratch("u.rdtf");
  write_field(path, u);
  CHECK(fs::file_size(path) == 18 + 8 * 64);
  const Field v = read_field(path);
  CHECK(v.grid() == g);
  for (std::size_t q = 0; q < u.size(); ++q) CHECK(v[q] == u[q]);
}

TEST_CASE("malformed field files report the byte offset") {
  const GridSpec g(1, 8, 1.0);
  const auto path = scratch("t.rdtf");
  write_field(path, Field(g, 1.0));
  fs::resize_file(path, 30);
  try {
    read_field(path);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::input);
    CHECK(std::string(e.what()).find("byte offset 30") != std::string::npos);
  }
  {
    std::ofstream os(path, std::ios::binary);
    os << "RDTX1";
  }
  try {
    read_field(path);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("byte offset 3") != std::string::npos);
  }
}

TEST_CASE("fault and module names") {
  CHECK(checks::parse_fault("phi-support") == checks::Fault::phi_support);
  CHECK(checks::parse_fault("rate-sign") == checks::Fault::rate_sign);
  CHECK_THROWS_AS(checks::parse_fault("bogus"), Error);
  checks::CheckOptions o;
  o.modules = {"nope"};
  CHECK_THROWS_AS(checks::run_checks(o), Error);
}

}  // TEST_SUITE
