#include "afmcf/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace afmcf {

namespace {

uint64_t to_little_endian(uint64_t bits) {
    if constexpr (std::endian::native == std::endian::little) return bits;
    uint64_t out = 0;
    for (int b = 0; b < 8; ++b)
        out |= ((bits >> (8 * b)) & 0xffu) << (8 * (7 - b));
    return out;
}

} // namespace

void write_field(const std::filesystem::path& path, const ScalarField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open field file for writing: " + path.string());

    const PeriodicGrid& g = f.grid();
    char header[128];
    std::snprintf(header, sizeof header, "AFMCF-FIELD v1 %d %d %.17g %.17g\n",
                  g.nx, g.ny, g.Lx, g.Ly);
    os << header;

    std::vector<uint64_t> payload(f.size());
    for (std::size_t k = 0; k < f.size(); ++k)
        payload[k] = to_little_endian(std::bit_cast<uint64_t>(f.data()[k]));
    os.write(reinterpret_cast<const char*>(payload.data()),
             static_cast<std::streamsize>(payload.size() * sizeof(uint64_t)));
    if (!os) throw IoError("short write to field file: " + path.string());
}

ScalarField read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open field file: " + path.string());

    std::string header;
    if (!std::getline(is, header))
        throw IoError("missing header in field file: " + path.string());

    std::istringstream hs(header);
    std::string magic, version;
    int nx = 0, ny = 0;
    double Lx = 0.0, Ly = 0.0;
    hs >> magic >> version >> nx >> ny >> Lx >> Ly;
    if (!hs || magic != "AFMCF-FIELD" || version != "v1")
        throw IoError("bad field header '" + header + "' in " + path.string());

    PeriodicGrid grid;
    try {
        grid = PeriodicGrid(nx, ny, Lx, Ly);
    } catch (const Error& e) {
        throw IoError("bad field geometry in " + path.string() + ": " + e.what());
    }

    ScalarField f(grid);
    std::vector<uint64_t> payload(f.size());
    is.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(uint64_t)));
    if (is.gcount() != static_cast<std::streamsize>(payload.size() * sizeof(uint64_t)))
        throw IoError("truncated payload in field file: " + path.string());

    for (std::size_t k = 0; k < f.size(); ++k)
        f.data()[k] = std::bit_cast<double>(to_little_endian(payload[k]));
    if (!f.all_finite())
        throw IoError("non-finite samples in field file: " + path.string());
    return f;
}

} // namespace afmcf
