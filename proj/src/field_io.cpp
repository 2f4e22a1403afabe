#include "rdt/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "rdt/error.hpp"

namespace rdt {

namespace {

constexpr char kMagic[5] = {'R', 'D', 'T', 'F', '1'};

void put_u64(std::vector<unsigned char>& out, std::uint64_t v, int bytes) {
  for (int b = 0; b < bytes; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

std::uint64_t get_u64(const std::vector<unsigned char>& in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b) v |= static_cast<std::uint64_t>(in[at + b]) << (8 * b);
  return v;
}

[[noreturn]] void malformed(const std::filesystem::path& path, std::size_t offset,
                            const std::string& what) {
  throw Error(ErrorKind::input, path.string() + ": " + what + " at byte offset " +
                                    std::to_string(offset));
}

}  // namespace

void write_field(const std::filesystem::path& path, const Field& u) {
  const GridSpec& g = u.grid();
  std::vector<unsigned char> buf;
  buf.reserve(5 + 1 + 4 + 8 + 8 * u.size());
  buf.insert(buf.end(), std::begin(kMagic), std::end(kMagic));
  buf.push_back(static_cast<unsigned char>(g.dim()));
  put_u64(buf, static_cast<std::uint32_t>(g.points()), 4);
  put_u64(buf, std::bit_cast<std::uint64_t>(g.length()), 8);
  for (double v : u.values()) put_u64(buf, std::bit_cast<std::uint64_t>(v), 8);

  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::input, "cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!os) throw Error(ErrorKind::input, "write failed for " + path.string());
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::input, "cannot open " + path.string());
  std::vector<unsigned char> in((std::istreambuf_iterator<char>(is)),
                                std::istreambuf_iterator<char>());

  constexpr std::size_t header = 5 + 1 + 4 + 8;
  for (std::size_t b = 0; b < 5; ++b) {
    if (b >= in.size()) malformed(path, b, "truncated magic");
    if (in[b] != static_cast<unsigned char>(kMagic[b])) malformed(path, b, "bad magic");
  }
  if (in.size() < header) malformed(path, in.size(), "truncated header");

  const int d = in[5];
  const auto n = static_cast<std::uint32_t>(get_u64(in, 6, 4));
  const double L = std::bit_cast<double>(get_u64(in, 10, 8));
  if (d < 1 || d > 3) malformed(path, 5, "invalid dimension " + std::to_string(d));
  if (n < 8 || n > (1u << 16) || (n & (n - 1)) != 0)
    malformed(path, 6, "invalid point count " + std::to_string(n));
  if (!(L > 0.0)) malformed(path, 10, "invalid period length");

  const GridSpec grid(d, static_cast<int>(n), L);
  const std::size_t expected = header + 8 * grid.size();
  if (in.size() < expected) malformed(path, in.size(), "truncated sample data");
  if (in.size() > expected) malformed(path, expected, "trailing bytes");

  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    values[k] = std::bit_cast<double>(get_u64(in, header + 8 * k, 8));
  return Field(grid, std::move(values));
}

}  // namespace rdt
