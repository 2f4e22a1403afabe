#pragma once

#include <filesystem>

#include "rdt/grid.hpp"

namespace rdt {

// RDTF1 layout: "RDTF1", u8 d, u32 n, f64 L, then n^d f64 samples, all
// little-endian, samples row-major.

void write_field(const std::filesystem::path& path, const Field& u);

/// Throws Error(ErrorKind::input) naming the byte offset of the first
/// malformed or missing byte.
Field read_field(const std::filesystem::path& path);

}  // namespace rdt
