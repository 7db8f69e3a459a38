#pragma once
#include <cstdint>
#include <random>
#include <string>

namespace landau {

// All randomness flows from one seed; independent streams are derived by
// hashing a stream tag into the seed.  Normals use explicit Box-Muller on the
// raw 64-bit stream so values do not depend on the standard library's
// distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed, const std::string& tag = "");

    double uniform();      // [0, 1)
    double normal();       // standard normal
    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace landau
