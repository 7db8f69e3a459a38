#include "landau/rng.hpp"

#include "landau/serialize.hpp"

#include <cmath>

namespace landau {

Rng::Rng(std::uint64_t seed, const std::string& tag)
    : gen_(tag.empty() ? seed : seed ^ fnv1a(tag)) {}

double Rng::uniform() {
    // 53 random bits into [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

} // namespace landau
