#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace zcjitter {

/// Portable seeded source of standard normal deviates.
///
/// Algorithm: std::mt19937_64 seeded through std::seed_seq{seed_lo, seed_hi,
/// stream} (both are fully specified by the C++ standard), uniform doubles
/// from the top 53 bits, and the Box-Muller transform producing pairs
/// (r cos 2 pi u2, r sin 2 pi u2) with r = sqrt(-2 ln(1 - u1)).
/// std::normal_distribution is avoided because its algorithm is
/// implementation-defined.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed, std::uint32_t stream = 0);

    double next();
    std::vector<double> draw(std::size_t count);

private:
    double uniform();

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace zcjitter
