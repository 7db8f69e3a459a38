#pragma once
#include "landau/grid.hpp"
#include <cstdint>
#include <string>

namespace landau {

// .ldnf field blob: 32-byte header then n^dim little-endian f64 values.
// header: bytes 0-3 magic "LDNF", 4-11 dim as f64, 12-19 n as f64,
// 20-27 L as f64, 28-31 reserved zero.
void write_field(const std::string& path, const ScalarField& f);
ScalarField read_field(const std::string& path);

// FNV-1a over a canonical key=value rendering; used to stamp configs
std::uint64_t fnv1a(const std::string& s);
std::string hash_hex(std::uint64_t h);

} // namespace landau
