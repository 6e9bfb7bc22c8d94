#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "zcjitter/error.hpp"

namespace zcjitter::detail {
namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct Plan {
    fftw_plan handle = nullptr;

    explicit Plan(fftw_plan p) : handle(p) {
        require(handle != nullptr, ErrorCategory::configuration, "FFTW could not create a plan");
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(handle);
    }
    void execute() const { fftw_execute(handle); }
};

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

} // namespace

std::vector<std::complex<double>> forward_real(std::span<const double> input) {
    const std::size_t n = input.size();
    std::vector<double> in(input.begin(), input.end());
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_plan p;
    {
        std::lock_guard lock(planner_mutex());
        p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), as_fftw(out.data()), FFTW_ESTIMATE);
    }
    Plan plan(p);
    plan.execute();
    return out;
}

std::vector<double> inverse_real(std::vector<std::complex<double>> spectrum, std::size_t n) {
    require(spectrum.size() == n / 2 + 1, ErrorCategory::configuration,
            "inverse_real: spectrum length does not match transform size");
    std::vector<double> out(n);
    fftw_plan p;
    {
        std::lock_guard lock(planner_mutex());
        p = fftw_plan_dft_c2r_1d(static_cast<int>(n), as_fftw(spectrum.data()), out.data(), FFTW_ESTIMATE);
    }
    Plan plan(p);
    plan.execute();
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) {
        v *= scale;
    }
    return out;
}

void execute_c2r_in_place(std::vector<double>& storage, std::size_t n) {
    require(storage.size() == 2 * (n / 2 + 1), ErrorCategory::configuration,
            "in-place c2r: storage size mismatch");
    fftw_plan p;
    {
        std::lock_guard lock(planner_mutex());
        p = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(storage.data()),
                                 storage.data(), FFTW_ESTIMATE);
    }
    Plan plan(p);
    plan.execute();
}

std::vector<std::complex<double>> forward_complex(std::span<const std::complex<double>> input) {
    std::vector<std::complex<double>> in(input.begin(), input.end());
    std::vector<std::complex<double>> out(in.size());
    fftw_plan p;
    {
        std::lock_guard lock(planner_mutex());
        p = fftw_plan_dft_1d(static_cast<int>(in.size()), as_fftw(in.data()), as_fftw(out.data()),
                             FFTW_FORWARD, FFTW_ESTIMATE);
    }
    Plan plan(p);
    plan.execute();
    return out;
}

std::vector<std::complex<double>> inverse_complex(std::span<const std::complex<double>> input) {
    std::vector<std::complex<double>> in(input.begin(), input.end());
    std::vector<std::complex<double>> out(in.size());
    fftw_plan p;
    {
        std::lock_guard lock(planner_mutex());
        p = fftw_plan_dft_1d(static_cast<int>(in.size()), as_fftw(in.data()), as_fftw(out.data()),
                             FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    Plan plan(p);
    plan.execute();
    const double scale = 1.0 / static_cast<double>(out.size());
    for (auto& v : out) {
        v *= scale;
    }
    return out;
}

} // namespace zcjitter::detail
