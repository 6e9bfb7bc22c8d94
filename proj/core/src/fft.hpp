#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Thin FFTW wrappers. Plans are created per call with FFTW_ESTIMATE; planning is
// serialised because the FFTW planner is not thread-safe, execution is not.
namespace zcjitter::detail {

/// Unnormalised real-to-half-complex transform, n / 2 + 1 bins.
std::vector<std::complex<double>> forward_real(std::span<const double> input);

/// Inverse of forward_real including the 1 / n normalisation. `spectrum` is
/// consumed (FFTW overwrites it).
std::vector<double> inverse_real(std::vector<std::complex<double>> spectrum, std::size_t n);

/// Inverse real transform of length n where the caller fills the half spectrum
/// in place. `fill` receives a span of n / 2 + 1 zeroed bins. No normalisation.
template <typename Fill>
std::vector<double> inverse_real_in_place(std::size_t n, Fill&& fill);

std::vector<std::complex<double>> forward_complex(std::span<const std::complex<double>> input);
/// Includes the 1 / n normalisation.
std::vector<std::complex<double>> inverse_complex(std::span<const std::complex<double>> input);

void execute_c2r_in_place(std::vector<double>& storage, std::size_t n);

template <typename Fill>
std::vector<double> inverse_real_in_place(std::size_t n, Fill&& fill) {
    const std::size_t bins = n / 2 + 1;
    std::vector<double> storage(2 * bins, 0.0);
    fill(std::span<std::complex<double>>(reinterpret_cast<std::complex<double>*>(storage.data()), bins));
    execute_c2r_in_place(storage, n);
    storage.resize(n);
    return storage;
}

} // namespace zcjitter::detail
