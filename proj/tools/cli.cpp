#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zcjitter/baseline.hpp"
#include "zcjitter/config.hpp"
#include "zcjitter/decomposition.hpp"
#include "zcjitter/error.hpp"
#include "zcjitter/pipeline.hpp"
#include "zcjitter/report.hpp"
#include "zcjitter/units.hpp"
#include "zcjitter/wav.hpp"

namespace zcjitter::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string to_string(Command command) {
    switch (command) {
    case Command::simulate: return "simulate";
    case Command::analyze: return "analyze";
    case Command::decompose: return "decompose";
    case Command::split: return "split";
    case Command::baseline: return "baseline";
    }
    return "unknown";
}

std::string manifest_json(const RunManifest& m) {
    ordered_json j;
    j["command"] = to_string(m.command);
    j["mode"] = m.mode;
    auto& inputs = j["inputs"] = ordered_json::array();
    for (const auto& p : m.inputs) {
        inputs.push_back(p.generic_string());
    }
    j["output_dir"] = m.output_dir.generic_string();
    j["traces"] = m.traces.generic_string();
    j["seed"] = m.seed;
    j["windows"] = m.windows;
    j["pseudo_mono"] = m.pseudo_mono;
    j["channel"] = m.channel;
    j["analysis"] = {{"block", m.analysis.block},
                     {"window_seconds", m.window_seconds},
                     {"oversample", m.analysis.oversample},
                     {"bandwidth_hz", m.analysis.bandwidth},
                     {"carrier_hz", m.analysis.carrier_nominal}};
    j["dummy"] = {{"kind", m.kind},
                  {"carrier_hz", m.dummy.carrier},
                  {"amplitude_ratio", m.dummy.amplitude_ratio},
                  {"theta0", m.dummy.theta0},
                  {"jitter_ps", to_ps(m.dummy.jitter_full_band)},
                  {"bandwidth_hz", m.dummy.bandwidth},
                  {"sample_rate_hz", m.dummy.sample_rate},
                  {"bit_depth", m.dummy.bit_depth},
                  {"length", m.dummy.length}};
    j["playback"] = {{"sample_rate_hz", m.playback.sample_rate}, {"bit_depth", m.playback.bit_depth},
                     {"i_main", m.playback.i_main},              {"fade_length", m.playback.fade_length},
                     {"main_length", m.playback.main_length},    {"v_min", m.playback.v_min}};
    j["drs"] = {{"player_jitter_ps", m.player_jitter_ps},
                {"player_pi_ps", m.player_pi_ps},
                {"recorder_noise_ps", m.recorder_noise_ps},
                {"bundled", m.bundled}};
    j["split"] = {{"sigma_n2_ps", m.sigma_n2_ps}, {"sigma_n3_ps", m.sigma_n3_ps}};
    j["band_hz"] = {m.band_low, m.band_high};
    return j.dump(2);
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCategory::io, "cannot create " + path.string());
    out << text;
    if (!text.empty() && text.back() != '\n') {
        out << '\n';
    }
}

template <typename Writer>
void write_csv(const fs::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCategory::io, "cannot create " + path.string());
    writer(out);
}

std::string window_name(const std::string& stem, std::size_t w) {
    std::ostringstream s;
    s << stem << "_w" << std::setw(2) << std::setfill('0') << w + 1 << ".csv";
    return s.str();
}

SampleBuffer load_channel(const fs::path& path, const RunManifest& m) {
    const auto wav = read_wav(path);
    if (m.pseudo_mono) {
        require(wav.channels >= 2, ErrorCategory::configuration,
                "--pseudo-mono needs a stereo file: " + path.string());
        return average_channels(wav.channel(0), wav.channel(1));
    }
    return wav.channel(static_cast<std::size_t>(m.channel));
}

AnalysisConfig effective_config(const RunManifest& m, double sample_rate) {
    AnalysisConfig c = m.analysis;
    if (m.window_seconds > 0.0) {
        c.block = AnalysisConfig::for_span(m.window_seconds, sample_rate).block;
    }
    validate(c);
    return c;
}

void require_inputs(const RunManifest& m, std::size_t count, const char* what) {
    require(m.inputs.size() == count, ErrorCategory::configuration,
            to_string(m.command) + " expects " + what + " (got " + std::to_string(m.inputs.size()) + " files)");
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
}

ordered_json run_simulate(const RunManifest& m) {
    ordered_json summary;
    if (m.mode == "dummy") {
        DummySpec d = m.dummy;
        d.seed = m.seed;
        d.enable_jitter = m.kind == "jitter";
        d.enable_am = m.kind == "am";
        d.enable_pi = m.kind == "pi";
        require(d.enable_jitter || d.enable_am || d.enable_pi, ErrorCategory::configuration,
                "--kind must be jitter, am or pi");
        const auto traces = make_dummy_traces(d);
        const auto result = synthesize_dummy_waveform(d, traces);
        const SampleBuffer channels[] = {result.buffer};
        write_wav(m.output_dir / "dummy.wav", WavFile::from_buffers(channels));
        write_csv(m.output_dir / "traces.csv", [&](std::ostream& o) { write_traces_csv(o, traces); });
        summary["files"] = {"dummy.wav", "traces.csv"};
        summary["clipped"] = result.clipped;
        const double scale = kTwoPi * d.carrier * d.amplitude_ratio;
        const auto rms_ps = [](const std::vector<double>& v, double divisor) {
            return v.empty() ? 0.0 : round_report_ps(to_ps(dev(v) / divisor));
        };
        summary["injected_rms_ps"] = {{"j", rms_ps(traces.j, 1.0)},
                                      {"a_m_scaled", rms_ps(traces.a_m, scale)},
                                      {"n_pi_scaled", rms_ps(traces.n_pi, scale)}};
    } else if (m.mode == "playback") {
        const auto wave = generate_playback_waveform(m.playback);
        const SampleBuffer channels[] = {wave};
        write_wav(m.output_dir / "playback.wav", WavFile::from_buffers(channels));
        summary["files"] = {"playback.wav"};
        summary["samples"] = wave.size();
    } else if (m.mode == "drs") {
        DrsScenario sc;
        sc.playback = m.playback;
        sc.player_jitter = from_ps(m.player_jitter_ps);
        sc.player_pi = from_ps(m.player_pi_ps);
        sc.recorder_noise = from_ps(m.recorder_noise_ps);
        sc.bundled = m.bundled;
        sc.seed = m.seed;
        const auto rec = simulate_drs(sc);
        const SampleBuffer a[] = {rec.a};
        const SampleBuffer b[] = {rec.b};
        write_wav(m.output_dir / "recorder_a.wav", WavFile::from_buffers(a));
        write_wav(m.output_dir / "recorder_b.wav", WavFile::from_buffers(b));
        summary["files"] = {"recorder_a.wav", "recorder_b.wav"};
        const double pi_variance_factor = m.bundled ? 0.5 : 1.0;
        summary["expected_ps"] = {
            {"sigma_n", round_report_ps(std::sqrt(m.player_jitter_ps * m.player_jitter_ps +
                                                  pi_variance_factor * m.player_pi_ps * m.player_pi_ps))},
            {"sigma_a", m.recorder_noise_ps},
            {"sigma_b", m.recorder_noise_ps}};
    } else {
        fail(ErrorCategory::configuration, "simulate mode must be dummy, playback or drs");
    }
    return summary;
}

ordered_json run_analyze(const RunManifest& m) {
    require_inputs(m, 1, "one WAV file");
    const auto buffer = load_channel(m.inputs.front(), m);
    const auto config = effective_config(m, buffer.sample_rate);
    const auto analysis = analyze_recording(buffer, config, m.windows);
    std::vector<double> all;
    for (std::size_t w = 0; w < analysis.windows.size(); ++w) {
        const auto& s = analysis.windows[w];
        write_csv(m.output_dir / window_name("zcf", w), [&](std::ostream& o) { write_zcf_csv(o, s); });
        all.insert(all.end(), s.delta.begin(), s.delta.end());
    }
    write_csv(m.output_dir / "histogram.csv",
              [&](std::ostream& o) { write_histogram_csv(o, make_histogram(all, 5.0)); });
    auto report = ordered_json::parse(to_json(analysis));
    if (!m.traces.empty()) {
        std::ifstream in(m.traces);
        require(static_cast<bool>(in), ErrorCategory::io, "cannot open traces " + m.traces.string());
        const auto truth = read_traces_csv(in);
        auto& validation = report["validation"] = ordered_json::array();
        for (const auto& s : analysis.windows) {
            std::vector<double> j(s.size());
            std::vector<double> pi(s.size());
            std::vector<double> pi_meas(s.size());
            for (std::size_t k = 0; k < s.size(); ++k) {
                j[k] = interpolate_trace(truth.j, truth.sample_rate, truth.start_time - buffer.start_time,
                                         s.s_prime[k]);
                pi[k] = interpolate_trace(truth.n_pi, truth.sample_rate, truth.start_time - buffer.start_time,
                                          s.s_prime[k]);
                pi_meas[k] = s.sign(k) * s.delta[k] * s.omega_a0();
            }
            validation.push_back({{"corr_zcf_vs_j", correlation(s.delta, j)},
                                  {"corr_signed_zcf_vs_n_pi", correlation(pi_meas, pi)}});
        }
    }
    return report;
}

ordered_json run_decompose(const RunManifest& m) {
    require_inputs(m, 2, "two WAV files (recorder A and recorder B)");
    const auto a = load_channel(m.inputs[0], m);
    const auto b = load_channel(m.inputs[1], m);
    const auto config = effective_config(m, a.sample_rate);
    const auto drs = analyze_drs(a, b, config, m.windows, default_onset_fraction(m.playback), true);
    for (std::size_t w = 0; w < drs.windows.size(); ++w) {
        write_csv(m.output_dir / window_name("zcf_a", w), [&](std::ostream& o) { write_zcf_csv(o, drs.windows[w].a); });
        write_csv(m.output_dir / window_name("zcf_b", w), [&](std::ostream& o) { write_zcf_csv(o, drs.windows[w].b); });
    }
    return ordered_json::parse(to_json(drs));
}

ordered_json run_split(const RunManifest& m) {
    if (m.mode == "player") {
        double n2 = from_ps(m.sigma_n2_ps);
        double n3 = from_ps(m.sigma_n3_ps);
        ordered_json extra;
        if (!m.inputs.empty()) {
            require_inputs(m, 4, "four WAV files (single A, single B, bundled A, bundled B)");
            std::vector<SampleBuffer> b;
            for (const auto& p : m.inputs) {
                b.push_back(load_channel(p, m));
            }
            const auto config = effective_config(m, b[0].sample_rate);
            const double fraction = default_onset_fraction(m.playback);
            const auto single = analyze_drs(b[0], b[1], config, m.windows, fraction);
            const auto bundled = analyze_drs(b[2], b[3], config, m.windows, fraction);
            n2 = single.sigma_n.mean;
            n3 = bundled.sigma_n.mean;
            extra["single"] = ordered_json::parse(to_json(single));
            extra["bundled"] = ordered_json::parse(to_json(bundled));
        }
        require(n2 > 0.0 && n3 > 0.0, ErrorCategory::configuration,
                "split player needs --sigma-n2-ps/--sigma-n3-ps or four WAV files");
        auto report = ordered_json::parse(to_json(split_player_jitter_pi(n2, n3)));
        if (!extra.empty()) {
            report["drs"] = std::move(extra);
        }
        return report;
    }
    if (m.mode == "recorder") {
        require_inputs(m, 1, "one stereo WAV file");
        require(m.sigma_n2_ps > 0.0, ErrorCategory::configuration, "split recorder needs --sigma-n2-ps");
        const auto wav = read_wav(m.inputs.front());
        require(wav.channels >= 2, ErrorCategory::configuration, "split recorder needs a stereo file");
        const auto left = wav.channel(0);
        const auto right = wav.channel(1);
        const auto config = effective_config(m, left.sample_rate);
        return ordered_json::parse(to_json(analyze_recorder_split(
            left, right, config, m.windows, from_ps(m.sigma_n2_ps), default_onset_fraction(m.playback))));
    }
    fail(ErrorCategory::configuration, "split mode must be player or recorder");
}

ordered_json run_baseline(const RunManifest& m) {
    require_inputs(m, 1, "one WAV file");
    const auto buffer = load_channel(m.inputs.front(), m);
    const auto config = effective_config(m, buffer.sample_rate);
    const double carrier = resolve_carrier(buffer, config);
    FrequencyBand band{carrier - config.bandwidth, carrier + config.bandwidth};
    if (m.band_high > m.band_low) {
        band = {m.band_low, m.band_high};
    }
    const auto spectrum = psd(buffer.to_full_scale(), buffer.sample_rate, PsdWindow::blackman);
    write_csv(m.output_dir / "psd.csv", [&](std::ostream& o) { write_psd_csv(o, spectrum); });
    ordered_json report;
    report["fda"] = ordered_json::parse(to_json(fda_band_power(spectrum, band)));

    AnalysisConfig fixed = config;
    fixed.carrier_nominal = carrier;
    const auto span = plan_windows(buffer, fixed, carrier, 1).front();
    const auto hta = hta_extract(buffer, fixed, span);
    write_csv(m.output_dir / "hta.csv", [&](std::ostream& o) { write_hta_csv(o, hta); });
    report["hta"] = {{"carrier_hz", hta.carrier},
                     {"jitter_rms_ps", round_report_ps(to_ps(dev(hta.jitter)))},
                     {"weak_samples", hta.weak_samples}};
    report["phase_fit"] = ordered_json::parse(to_json(phase_variance_fit(buffer, fixed, span)));
    return report;
}

} // namespace

int cli_run(const RunManifest& m, std::ostream& out, std::ostream& err) {
    try {
        std::error_code ec;
        fs::create_directories(m.output_dir, ec);
        require(!ec, ErrorCategory::io, "cannot create output directory " + m.output_dir.string());
        write_text(m.output_dir / "manifest.json", manifest_json(m));
        ordered_json report;
        const char* name = "report.json";
        switch (m.command) {
        case Command::simulate: report = run_simulate(m); name = "simulation.json"; break;
        case Command::analyze: report = run_analyze(m); break;
        case Command::decompose: report = run_decompose(m); name = "budget.json"; break;
        case Command::split: report = run_split(m); name = "split.json"; break;
        case Command::baseline: report = run_baseline(m); name = "baseline.json"; break;
        }
        const auto text = report.dump(2);
        write_text(m.output_dir / name, text);
        out << text << '\n';
        return 0;
    } catch (const Error& e) {
        err << "error[" << zcjitter::to_string(e.category()) << "]: " << e.what() << '\n';
        return 10 + static_cast<int>(e.category());
    } catch (const std::exception& e) {
        err << "error[internal]: " << e.what() << '\n';
        return 9;
    }
}

int cli_main(int argc, char** argv) {
    RunManifest m;
    CLI::App app{"Zero-crossing jitter analysis"};
    app.require_subcommand(1);
    fs::path config_file;
    double window_seconds = 0.0;
    double carrier = 0.0;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--out", m.output_dir, "Output directory")->capture_default_str();
        sub->add_option("--config", config_file, "key = value configuration file");
        sub->add_option("--window-seconds", window_seconds, "Analysis span T in seconds");
        sub->add_option("--oversample", m.analysis.oversample, "FFT oversampling factor")->capture_default_str();
        sub->add_option("--bandwidth-hz", m.analysis.bandwidth, "Half bandwidth B_W")->capture_default_str();
        sub->add_option("--carrier-hz", carrier, "Nominal carrier (0: estimate)");
        sub->add_option("--seed", m.seed, "Random seed")->capture_default_str();
        sub->add_flag("--pseudo-mono", m.pseudo_mono, "Average L and R before analysis");
        sub->add_option("--windows", m.windows, "Number of consecutive analysis windows")->capture_default_str();
        sub->add_option("--channel", m.channel, "Channel index for multi-channel files")->capture_default_str();
    };

    auto* simulate = app.add_subcommand("simulate", "Synthesize dummy, playback or DRS recordings");
    common(simulate);
    simulate->add_option("mode", m.mode, "dummy | playback | drs")->required();
    simulate->add_option("--kind", m.kind, "Dummy noise kind: jitter | am | pi")->capture_default_str();
    simulate->add_option("--player-jitter-ps", m.player_jitter_ps)->capture_default_str();
    simulate->add_option("--player-pi-ps", m.player_pi_ps)->capture_default_str();
    simulate->add_option("--recorder-noise-ps", m.recorder_noise_ps)->capture_default_str();
    simulate->add_flag("--bundled", m.bundled, "Bundle two player outputs (halves PI variance)");

    auto* analyze = app.add_subcommand("analyze", "Zero-crossing analysis of one recording");
    common(analyze);
    analyze->add_option("input", m.inputs, "WAV file")->required();
    analyze->add_option("--traces", m.traces, "Ground-truth traces CSV (validation mode)");

    auto* decompose = app.add_subcommand("decompose", "DRS decomposition of two recordings");
    common(decompose);
    decompose->add_option("inputs", m.inputs, "Recorder A and recorder B WAV files")->required();

    auto* split = app.add_subcommand("split", "Separate jitter from PI noise");
    common(split);
    split->add_option("mode", m.mode, "player | recorder")->required();
    split->add_option("inputs", m.inputs, "WAV files");
    split->add_option("--sigma-n2-ps", m.sigma_n2_ps, "Player noise from the plain DRS run");
    split->add_option("--sigma-n3-ps", m.sigma_n3_ps, "Player noise with bundled outputs");

    auto* baseline = app.add_subcommand("baseline", "FDA band powers and HTA jitter");
    common(baseline);
    baseline->add_option("input", m.inputs, "WAV file")->required();
    baseline->add_option("--band-low-hz", m.band_low);
    baseline->add_option("--band-high-hz", m.band_high);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    if (simulate->parsed()) m.command = Command::simulate;
    if (analyze->parsed()) m.command = Command::analyze;
    if (decompose->parsed()) m.command = Command::decompose;
    if (split->parsed()) m.command = Command::split;
    if (baseline->parsed()) m.command = Command::baseline;

    try {
        if (!config_file.empty()) {
            const auto config = load_config(config_file);
            check_known_keys(config);
            apply(config, m.dummy);
            apply(config, m.playback);
            apply(config, m.analysis, m.dummy.sample_rate);
        }
    } catch (const Error& e) {
        std::cerr << "error[" << zcjitter::to_string(e.category()) << "]: " << e.what() << '\n';
        return 10 + static_cast<int>(e.category());
    }
    m.window_seconds = window_seconds;
    if (carrier > 0.0) {
        m.analysis.carrier_nominal = carrier;
    }
    return cli_run(m, std::cout, std::cerr);
}

} // namespace zcjitter::cli
