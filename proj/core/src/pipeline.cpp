#include "zcjitter/pipeline.hpp"

#include <cmath>
#include <string>

#include "zcjitter/error.hpp"

namespace zcjitter {

double default_onset_fraction(const PlaybackSpec& playback) {
    return 0.5 * static_cast<double>(playback.v_min) / static_cast<double>(playback.v_max());
}

RecordingAnalysis analyze_recording(const SampleBuffer& buffer, const AnalysisConfig& config,
                                    std::size_t windows) {
    validate(buffer);
    RecordingAnalysis out;
    out.carrier = resolve_carrier(buffer, config);
    AnalysisConfig fixed = config;
    fixed.carrier_nominal = out.carrier;
    out.spans = plan_windows(buffer, fixed, out.carrier, windows);
    for (const std::size_t span : out.spans) {
        auto series = compute_zcf(buffer, fixed, span);
        out.rms.push_back(dev(series.delta));
        out.windows.push_back(std::move(series));
    }
    out.rms_summary = summarize(out.rms);
    return out;
}

std::size_t map_span(const SampleBuffer& a, const SampleBuffer& b, std::size_t span_a, double onset_a,
                     double onset_b) {
    const double t_b = a.time_of(span_a) - onset_a + onset_b;
    const double index = std::round((t_b - b.start_time) * b.sample_rate);
    require(index >= 0.0, ErrorCategory::coverage, "mapped window starts before the second recording");
    return static_cast<std::size_t>(index);
}

namespace {

Summary summarize_field(const std::vector<DrsWindow>& windows, double (*get)(const VarianceBudget&)) {
    std::vector<double> v;
    v.reserve(windows.size());
    for (const auto& w : windows) {
        v.push_back(get(w.budget));
    }
    return summarize(v);
}

} // namespace

DrsAnalysis analyze_drs(const SampleBuffer& a, const SampleBuffer& b, const AnalysisConfig& config,
                        std::size_t windows, double onset_fraction, bool keep_series) {
    validate(a);
    validate(b);
    DrsAnalysis out;
    out.carrier = resolve_carrier(a, config);
    AnalysisConfig fixed = config;
    fixed.carrier_nominal = out.carrier;
    out.onset_a = detect_onset(a, out.carrier, onset_fraction);
    out.onset_b = detect_onset(b, out.carrier, onset_fraction);

    const auto spans = plan_windows(a, fixed, out.carrier, windows);
    for (const std::size_t span_a : spans) {
        DrsWindow w;
        w.span_a = span_a;
        w.span_b = map_span(a, b, span_a, out.onset_a, out.onset_b);
        const auto za = compute_zcf(a, fixed, w.span_a);
        const auto zb = compute_zcf(b, fixed, w.span_b);
        auto [aa, bb] = align_crossings(za, zb, out.onset_a, out.onset_b);
        w.budget = drs_decompose(aa, bb);
        w.budget.bands = make_bands(out.carrier, fixed.bandwidth, fixed.span_seconds(a.sample_rate));
        out.invalid_windows += w.budget.valid() ? 0 : 1;
        if (keep_series) {
            w.a = std::move(aa);
            w.b = std::move(bb);
        }
        out.windows.push_back(std::move(w));
    }
    out.e1 = summarize_field(out.windows, [](const VarianceBudget& v) { return v.e1; });
    out.e2 = summarize_field(out.windows, [](const VarianceBudget& v) { return v.e2; });
    out.e3 = summarize_field(out.windows, [](const VarianceBudget& v) { return v.e3; });
    out.e4 = summarize_field(out.windows, [](const VarianceBudget& v) { return v.e4; });
    out.sigma_n = summarize_field(out.windows, [](const VarianceBudget& v) { return v.sigma_n.value; });
    out.sigma_a = summarize_field(out.windows, [](const VarianceBudget& v) { return v.sigma_a.value; });
    out.sigma_b = summarize_field(out.windows, [](const VarianceBudget& v) { return v.sigma_b.value; });
    return out;
}

RecorderSplitAnalysis analyze_recorder_split(const SampleBuffer& left, const SampleBuffer& right,
                                             const AnalysisConfig& config, std::size_t windows,
                                             double sigma_n2, double onset_fraction) {
    validate(left);
    validate(right);
    require(left.size() == right.size() && left.sample_rate == right.sample_rate, ErrorCategory::configuration,
            "L and R channels must have equal length and rate");
    const double carrier = resolve_carrier(left, config);
    AnalysisConfig fixed = config;
    fixed.carrier_nominal = carrier;
    const double onset_l = detect_onset(left, carrier, onset_fraction);
    const double onset_r = detect_onset(right, carrier, onset_fraction);

    RecorderSplitAnalysis out;
    double e[4] = {0.0, 0.0, 0.0, 0.0};
    for (const std::size_t span : plan_windows(left, fixed, carrier, windows)) {
        const auto zl = compute_zcf(left, fixed, span);
        const auto zr = compute_zcf(right, fixed, map_span(left, right, span, onset_l, onset_r));
        const auto [al, ar] = align_crossings(zl, zr, onset_l, onset_r);
        auto split = split_recorder_jitter_pi(al, ar, sigma_n2);
        e[0] += split.e5 * split.e5;
        e[1] += split.e6 * split.e6;
        e[2] += split.e7 * split.e7;
        e[3] += split.e8 * split.e8;
        out.windows.push_back(split);
    }
    // Average variances, not RMS values, before solving the split equations.
    const double n = static_cast<double>(out.windows.size());
    out.mean = split_recorder_from_stats(std::sqrt(e[0] / n), std::sqrt(e[1] / n), std::sqrt(e[2] / n),
                                         std::sqrt(e[3] / n), sigma_n2);
    return out;
}

} // namespace zcjitter
