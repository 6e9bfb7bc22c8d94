#pragma once

#include <cstddef>
#include <vector>

#include "zcjitter/decomposition.hpp"
#include "zcjitter/dsp.hpp"
#include "zcjitter/sample_buffer.hpp"
#include "zcjitter/synthesis.hpp"
#include "zcjitter/zca.hpp"

namespace zcjitter {

/// Threshold for the fade-in onset relative to the running-RMS maximum: half the
/// fade start amplitude of the default playback file.
double default_onset_fraction(const PlaybackSpec& playback = {});

/// ZCA over consecutive windows of one recording.
struct RecordingAnalysis {
    double carrier = 0.0;
    std::vector<std::size_t> spans;
    std::vector<ZeroCrossingSeries> windows;
    /// Per-window ZCF RMS (s) and its mean +/- standard error.
    std::vector<double> rms;
    Summary rms_summary;
};

RecordingAnalysis analyze_recording(const SampleBuffer& buffer, const AnalysisConfig& config,
                                    std::size_t windows);

/// One DRS window: both series after crossing alignment and their budget.
struct DrsWindow {
    std::size_t span_a = 0;
    std::size_t span_b = 0;
    ZeroCrossingSeries a;
    ZeroCrossingSeries b;
    VarianceBudget budget;
};

struct DrsAnalysis {
    double carrier = 0.0;
    double onset_a = 0.0;
    double onset_b = 0.0;
    std::vector<DrsWindow> windows;
    Summary e1;
    Summary e2;
    Summary e3;
    Summary e4;
    Summary sigma_n;
    Summary sigma_a;
    Summary sigma_b;
    /// Number of windows whose budget had a negative radicand.
    std::size_t invalid_windows = 0;
};

/// Span start in `b` that covers the same physical interval as `span_a` in `a`,
/// given each recording's onset time in its own clock.
std::size_t map_span(const SampleBuffer& a, const SampleBuffer& b, std::size_t span_a, double onset_a,
                     double onset_b);

/// Full DRS run: onsets, windows planned in `a` and mapped into `b`, per-window
/// ZCA, crossing alignment and decomposition. `keep_series` retains the aligned
/// series for export.
DrsAnalysis analyze_drs(const SampleBuffer& a, const SampleBuffer& b, const AnalysisConfig& config,
                        std::size_t windows, double onset_fraction, bool keep_series = false);

/// Recorder L/R split averaged over windows; both channels share one clock.
struct RecorderSplitAnalysis {
    std::vector<RecorderSplit> windows;
    RecorderSplit mean;
};

RecorderSplitAnalysis analyze_recorder_split(const SampleBuffer& left, const SampleBuffer& right,
                                             const AnalysisConfig& config, std::size_t windows,
                                             double sigma_n2, double onset_fraction);

} // namespace zcjitter
