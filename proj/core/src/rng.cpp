#include "zcjitter/rng.hpp"

#include <cmath>

#include "zcjitter/units.hpp"

namespace zcjitter {

GaussianSource::GaussianSource(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32), stream};
    engine_.seed(seq);
}

double GaussianSource::uniform() {
    // 53 random bits -> [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianSource::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
}

std::vector<double> GaussianSource::draw(std::size_t count) {
    std::vector<double> out(count);
    for (double& v : out) {
        v = next();
    }
    return out;
}

} // namespace zcjitter
