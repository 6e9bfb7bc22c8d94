#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "zcjitter/dsp.hpp"
#include "zcjitter/synthesis.hpp"

namespace zcjitter::cli {

enum class Command { simulate, analyze, decompose, split, baseline };

/// Everything that determines a run. Serialised as manifest.json next to the outputs.
struct RunManifest {
    Command command = Command::analyze;
    /// simulate: dummy | playback | drs.  split: player | recorder.
    std::string mode;
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path output_dir = ".";
    std::filesystem::path traces;  // ground truth for validation mode
    AnalysisConfig analysis;
    double window_seconds = 0.0;   // overrides analysis.block when > 0
    DummySpec dummy;
    PlaybackSpec playback;
    std::uint64_t seed = 1;
    std::size_t windows = 1;
    bool pseudo_mono = false;
    int channel = 0;
    /// dummy noise kind: jitter | am | pi.
    std::string kind = "jitter";
    // drs simulation (ps)
    double player_jitter_ps = 20.0;
    double player_pi_ps = 40.0;
    double recorder_noise_ps = 35.0;
    bool bundled = false;
    // split inputs (ps); used when no files are given
    double sigma_n2_ps = 0.0;
    double sigma_n3_ps = 0.0;
    // baseline noise band (Hz); zero means carrier +/- bandwidth
    double band_low = 0.0;
    double band_high = 0.0;
};

std::string to_string(Command command);
std::string manifest_json(const RunManifest& manifest);

/// Executes the run. Library errors are reported on `err` as
/// "error[<category>]: <message>" and mapped to exit codes 10 + category index.
int cli_run(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Parses argv into a manifest and runs it.
int cli_main(int argc, char** argv);

} // namespace zcjitter::cli
