// Writes a unit-L² single Fourier mode on a 2-D grid of side 32.
#include <cstdio>
#include <numbers>

#include "rdt/experiments.hpp"
#include "rdt/field_io.hpp"
#include "rdt/spectral_ops.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: make_mode <out.rdtf>\n");
    return 2;
  }
  const rdt::GridSpec g(2, 32, 2 * std::numbers::pi);
  rdt::Field u = rdt::exp::pure_mode(g, {1, 1, 0});
  u *= 1.0 / rdt::l2_norm(u);
  rdt::write_field(argv[1], u);
  return 0;
}
