#pragma once

#include <filesystem>

#include "afmcf/grid.hpp"

namespace afmcf {

/// Field file format: one ASCII header line
///     AFMCF-FIELD v1 nx ny Lx Ly\n
/// followed by nx*ny little-endian IEEE-754 doubles in row-major order
/// ((i,j) -> j*nx + i). Lengths are printed with 17 significant digits so
/// a write/read round trip is bit-exact.
void write_field(const std::filesystem::path& path, const ScalarField& f);

/// Reads a field file; rejects bad headers, short payloads and non-finite
/// samples with IoError.
ScalarField read_field(const std::filesystem::path& path);

} // namespace afmcf
