#include "zcjitter/decomposition.hpp"

#include <array>
#include <cmath>
#include <string>

#include "zcjitter/error.hpp"
#include "zcjitter/units.hpp"

namespace zcjitter {

Derived Derived::from_variance(double variance) noexcept {
    Derived d;
    d.variance = variance;
    d.valid = variance >= 0.0;
    d.value = d.valid ? std::sqrt(variance) : 0.0;
    return d;
}

double dev(std::span<const double> values) {
    require(!values.empty(), ErrorCategory::statistics, "standard deviation of an empty sequence");
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(values.size()));
}

BandAnnotation make_bands(double carrier, double bandwidth, double span_seconds) {
    BandAnnotation bands;
    bands.jitter = {span_seconds > 0.0 ? 1.0 / span_seconds : 0.0, bandwidth};
    bands.pi = {carrier - bandwidth, carrier + bandwidth};
    return bands;
}

double srs_budget(const ZeroCrossingSeries& series) { return dev(series.delta); }

VarianceBudget drs_from_stats(double e1, double e2, double e3, double e4) {
    VarianceBudget out;
    out.e1 = e1;
    out.e2 = e2;
    out.e3 = e3;
    out.e4 = e4;
    const double vn = (e1 * e1 + e2 * e2 - e3 * e3) / 2.0;
    out.sigma_n = Derived::from_variance(vn);
    out.sigma_a = Derived::from_variance(e1 * e1 - vn);
    out.sigma_b = Derived::from_variance(e2 * e2 - vn);
    out.consistency_residual = e4 * e4 - (4.0 * vn + (e1 * e1 - vn) + (e2 * e2 - vn));
    out.consistency_relative = e4 > 0.0 ? out.consistency_residual / (e4 * e4) : 0.0;
    return out;
}

VarianceBudget drs_decompose(const ZeroCrossingSeries& a, const ZeroCrossingSeries& b) {
    require(a.size() == b.size(), ErrorCategory::synchronization,
            "DRS needs aligned series of equal length (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
    require(a.size() >= 2, ErrorCategory::statistics, "DRS needs at least two crossings");
    std::vector<double> diff(a.size());
    std::vector<double> sum(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        diff[k] = a.delta[k] - b.delta[k];
        sum[k] = a.delta[k] + b.delta[k];
    }
    auto out = drs_from_stats(dev(a.delta), dev(b.delta), dev(diff), dev(sum));
    out.crossings = a.size();
    out.omega_a0 = 0.5 * (a.omega_a0() + b.omega_a0());
    return out;
}

PlayerSplit split_player_jitter_pi(double sigma_n2, double sigma_n3) {
    PlayerSplit out;
    out.sigma_n2 = sigma_n2;
    out.sigma_n3 = sigma_n3;
    const double v2 = sigma_n2 * sigma_n2;
    const double v3 = sigma_n3 * sigma_n3;
    out.jitter = Derived::from_variance(2.0 * v3 - v2);
    out.pi_scaled = Derived::from_variance(2.0 * (v2 - v3));
    return out;
}

RecorderSplit split_recorder_from_stats(double e5, double e6, double e7, double e8, double sigma_n2) {
    RecorderSplit out;
    out.e5 = e5;
    out.e6 = e6;
    out.e7 = e7;
    out.e8 = e8;
    out.sigma_n2 = sigma_n2;
    const double v5 = e5 * e5;
    const double v6 = e6 * e6;
    const double v7 = e7 * e7;
    out.pi_left = Derived::from_variance((v7 + v5 - v6) / 2.0);
    out.pi_right = Derived::from_variance((v7 - v5 + v6) / 2.0);
    out.common = Derived::from_variance(v5 - out.pi_left.variance);
    out.jitter = Derived::from_variance(out.common.variance - sigma_n2 * sigma_n2);
    return out;
}

RecorderSplit split_recorder_jitter_pi(const ZeroCrossingSeries& left, const ZeroCrossingSeries& right,
                                       double sigma_n2) {
    require(left.size() == right.size(), ErrorCategory::synchronization,
            "L and R series must be aligned to equal length");
    require(left.size() >= 2, ErrorCategory::statistics, "recorder split needs at least two crossings");
    std::vector<double> diff(left.size());
    std::vector<double> sum(left.size());
    for (std::size_t k = 0; k < left.size(); ++k) {
        diff[k] = left.delta[k] - right.delta[k];
        sum[k] = left.delta[k] + right.delta[k];
    }
    return split_recorder_from_stats(dev(left.delta), dev(right.delta), dev(diff), dev(sum), sigma_n2);
}

namespace {

// Solves the symmetric 3x3 system m x = r by Cramer's rule.
std::array<double, 3> solve3(const std::array<std::array<double, 3>, 3>& m, const std::array<double, 3>& r) {
    const auto det = [](const std::array<std::array<double, 3>, 3>& a) {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    const double d = det(m);
    require(d != 0.0, ErrorCategory::statistics, "carrier fit is singular");
    std::array<double, 3> x{};
    for (std::size_t c = 0; c < 3; ++c) {
        auto mc = m;
        for (std::size_t row = 0; row < 3; ++row) {
            mc[row][c] = r[row];
        }
        x[c] = det(mc) / d;
    }
    return x;
}

} // namespace

PhaseFit phase_variance_fit(std::span<const double> samples, double sample_rate, double carrier) {
    require(sample_rate > 0.0 && carrier > 0.0, ErrorCategory::configuration,
            "phase fit needs positive rate and carrier");
    const std::size_t n = samples.size();
    const double omega = kTwoPi * carrier;
    const double duration = static_cast<double>(n) / sample_rate;
    const auto cycles = static_cast<std::size_t>(std::floor(omega * duration / kTwoPi));
    if (cycles < 100) {
        fail(ErrorCategory::statistics,
             "phase fit needs at least 100 carrier cycles, got " + std::to_string(cycles));
    }

    // Least-squares carrier a cos(wt) + b sin(wt) + c at the given frequency.
    std::array<std::array<double, 3>, 3> m{};
    std::array<double, 3> r{};
    for (std::size_t i = 0; i < n; ++i) {
        const double ph = omega * static_cast<double>(i) / sample_rate;
        const std::array<double, 3> basis{std::cos(ph), std::sin(ph), 1.0};
        for (std::size_t p = 0; p < 3; ++p) {
            for (std::size_t q = 0; q < 3; ++q) {
                m[p][q] += basis[p] * basis[q];
            }
            r[p] += basis[p] * samples[i];
        }
    }
    const auto coef = solve3(m, r);
    const double theta0 = std::atan2(-coef[1], coef[0]);

    PhaseFit fit;
    fit.cycles = cycles;
    fit.carrier = carrier;
    fit.amplitude = std::hypot(coef[0], coef[1]);

    std::vector<double> sum(kPhaseBins, 0.0);
    std::vector<double> sum_sq(kPhaseBins, 0.0);
    std::vector<double> sum_cos2(kPhaseBins, 0.0);
    fit.count_by_phase.assign(kPhaseBins, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double ph = omega * static_cast<double>(i) / sample_rate;
        const double model = coef[0] * std::cos(ph) + coef[1] * std::sin(ph) + coef[2];
        const double residual = samples[i] - model;
        double theta = std::fmod(ph + theta0, kTwoPi);
        if (theta < 0.0) {
            theta += kTwoPi;
        }
        const auto bin = std::min(kPhaseBins - 1, static_cast<std::size_t>(theta / kTwoPi * kPhaseBins));
        sum[bin] += residual;
        sum_sq[bin] += residual * residual;
        sum_cos2[bin] += std::cos(2.0 * theta);
        ++fit.count_by_phase[bin];
    }

    // Regress on the in-bin mean of cos(2 theta) so finite bin width does not bias A.
    fit.theta.resize(kPhaseBins);
    fit.variance_by_phase.resize(kPhaseBins);
    std::vector<double> regressor(kPhaseBins);
    for (std::size_t k = 0; k < kPhaseBins; ++k) {
        const auto c = static_cast<double>(fit.count_by_phase[k]);
        if (fit.count_by_phase[k] < 2) {
            fail(ErrorCategory::statistics, "phase bin " + std::to_string(k) + " holds fewer than two samples");
        }
        const double mean = sum[k] / c;
        fit.theta[k] = (static_cast<double>(k) + 0.5) * kTwoPi / static_cast<double>(kPhaseBins);
        fit.variance_by_phase[k] = std::max(0.0, sum_sq[k] / c - mean * mean);
        regressor[k] = sum_cos2[k] / c;
    }
    double xm = 0.0;
    double ym = 0.0;
    for (std::size_t k = 0; k < kPhaseBins; ++k) {
        xm += regressor[k];
        ym += fit.variance_by_phase[k];
    }
    xm /= kPhaseBins;
    ym /= kPhaseBins;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t k = 0; k < kPhaseBins; ++k) {
        sxx += (regressor[k] - xm) * (regressor[k] - xm);
        sxy += (regressor[k] - xm) * (fit.variance_by_phase[k] - ym);
    }
    fit.a = sxy / sxx;
    fit.b = ym - fit.a * xm;
    double rss = 0.0;
    for (std::size_t k = 0; k < kPhaseBins; ++k) {
        const double e = fit.variance_by_phase[k] - (fit.a * regressor[k] + fit.b);
        rss += e * e;
    }
    fit.residual_rms = std::sqrt(rss / kPhaseBins);
    return fit;
}

PhaseFit phase_variance_fit(const SampleBuffer& buffer, const AnalysisConfig& config, std::size_t span_start) {
    const auto series = compute_zcf(buffer, config, span_start);
    const std::size_t block = config.block;
    auto window = buffer.to_full_scale(span_start - block, 6 * block);
    const auto edge = blackman_edge_window(block, buffer.sample_rate);
    for (std::size_t i = 0; i < window.size(); ++i) {
        window[i] *= edge[i];
    }
    const auto limited = band_limit(window, buffer.sample_rate, analysis_band(series.carrier, config.bandwidth));
    const std::span<const double> flat(limited.data() + block, 4 * block);
    return phase_variance_fit(flat, buffer.sample_rate, series.carrier);
}

double detection_limit(int bit_depth, double amplitude_ratio, double carrier) {
    require(bit_depth >= 2 && bit_depth <= 32, ErrorCategory::configuration, "bit depth must lie in [2, 32]");
    require(amplitude_ratio > 0.0 && carrier > 0.0, ErrorCategory::configuration,
            "detection limit needs a positive amplitude ratio and carrier");
    const double x_max = std::ldexp(1.0, bit_depth - 1) - 1.0;
    return 1.0 / (x_max * amplitude_ratio * kTwoPi * carrier);
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) {
        return s;
    }
    for (double v : values) {
        s.mean += v;
    }
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.standard_error = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
    }
    return s;
}

} // namespace zcjitter
