#include "landau/serialize.hpp"

#include <cstring>
#include <fstream>

namespace landau {

void write_field(const std::string& path, const ScalarField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    char header[32] = {};
    std::memcpy(header, "LDNF", 4);
    double meta[3] = {static_cast<double>(f.grid.dim),
                      static_cast<double>(f.grid.n), f.grid.L};
    std::memcpy(header + 4, meta, 24);
    os.write(header, 32);
    os.write(reinterpret_cast<const char*>(f.v.data()),
             static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write failed: " + path);
}

ScalarField read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    char header[32];
    is.read(header, 32);
    if (!is || std::memcmp(header, "LDNF", 4) != 0)
        throw std::runtime_error("not a field file: " + path);
    double meta[3];
    std::memcpy(meta, header + 4, 24);
    VelocityGrid g(static_cast<int>(meta[0]), static_cast<int>(meta[1]), meta[2]);
    ScalarField f(g);
    is.read(reinterpret_cast<char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    if (!is) throw std::runtime_error("truncated field file: " + path);
    return f;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace landau
