#include "zcjitter/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "zcjitter/error.hpp"
#include "zcjitter/units.hpp"

namespace zcjitter {

namespace {

using nlohmann::ordered_json;

double ps(double seconds) { return round_report_ps(to_ps(seconds)); }

ordered_json derived(const Derived& d) {
    ordered_json j;
    j["ps"] = ps(d.value);
    j["valid"] = d.valid;
    if (!d.valid) {
        j["negative_variance_ps2"] = d.variance / (kPicosecond * kPicosecond);
    }
    return j;
}

ordered_json band(const FrequencyBand& b) { return ordered_json::array({b.low, b.high}); }

ordered_json summary(const Summary& s) {
    return ordered_json{{"mean_ps", ps(s.mean)}, {"standard_error_ps", ps(s.standard_error)}, {"windows", s.count}};
}

ordered_json budget(const VarianceBudget& b) {
    ordered_json j;
    j["E1_ps"] = ps(b.e1);
    j["E2_ps"] = ps(b.e2);
    j["E3_ps"] = ps(b.e3);
    j["E4_ps"] = ps(b.e4);
    j["sigma_n"] = derived(b.sigma_n);
    j["sigma_a"] = derived(b.sigma_a);
    j["sigma_b"] = derived(b.sigma_b);
    j["consistency_residual_ps2"] = std::round(b.consistency_residual / (kPicosecond * kPicosecond) * 10.0) / 10.0;
    j["consistency_relative"] = b.consistency_relative;
    j["crossings"] = b.crossings;
    j["omega_a0_per_s"] = b.omega_a0;
    j["jitter_band_hz"] = band(b.bands.jitter);
    j["pi_band_hz"] = band(b.bands.pi);
    j["valid"] = b.valid();
    // Identical inputs: recorder terms vanish and only the shared part remains.
    j["degenerate"] = b.e3 == 0.0;
    return j;
}

ordered_json recorder_split(const RecorderSplit& s) {
    ordered_json j;
    j["E5_ps"] = ps(s.e5);
    j["E6_ps"] = ps(s.e6);
    j["E7_ps"] = ps(s.e7);
    j["E8_ps"] = ps(s.e8);
    j["sigma_n2_ps"] = ps(s.sigma_n2);
    j["a_pi_left_scaled"] = derived(s.pi_left);
    j["a_pi_right_scaled"] = derived(s.pi_right);
    j["common"] = derived(s.common);
    j["a_jitter_scaled"] = derived(s.jitter);
    return j;
}

std::string dump(const ordered_json& j) { return j.dump(2); }

} // namespace

std::string to_json(const VarianceBudget& b) { return dump(budget(b)); }

std::string to_json(const DrsAnalysis& a) {
    ordered_json j;
    j["carrier_hz"] = a.carrier;
    j["onset_a_s"] = a.onset_a;
    j["onset_b_s"] = a.onset_b;
    j["E1"] = summary(a.e1);
    j["E2"] = summary(a.e2);
    j["E3"] = summary(a.e3);
    j["E4"] = summary(a.e4);
    j["sigma_n"] = summary(a.sigma_n);
    j["sigma_a"] = summary(a.sigma_a);
    j["sigma_b"] = summary(a.sigma_b);
    j["invalid_windows"] = a.invalid_windows;
    auto& windows = j["windows"] = ordered_json::array();
    for (const auto& w : a.windows) {
        auto entry = budget(w.budget);
        entry["span_a"] = w.span_a;
        entry["span_b"] = w.span_b;
        windows.push_back(std::move(entry));
    }
    return dump(j);
}

std::string to_json(const PlayerSplit& s) {
    ordered_json j;
    j["sigma_n2_ps"] = ps(s.sigma_n2);
    j["sigma_n3_ps"] = ps(s.sigma_n3);
    j["jitter"] = derived(s.jitter);
    j["pi_scaled"] = derived(s.pi_scaled);
    return dump(j);
}

std::string to_json(const RecorderSplit& s) { return dump(recorder_split(s)); }

std::string to_json(const RecorderSplitAnalysis& a) {
    ordered_json j;
    j["mean"] = recorder_split(a.mean);
    auto& windows = j["windows"] = ordered_json::array();
    for (const auto& w : a.windows) {
        windows.push_back(recorder_split(w));
    }
    return dump(j);
}

std::string to_json(const RecordingAnalysis& a) {
    ordered_json j;
    j["carrier_hz"] = a.carrier;
    j["zcf_rms"] = summary(a.rms_summary);
    auto& windows = j["windows"] = ordered_json::array();
    for (std::size_t w = 0; w < a.windows.size(); ++w) {
        const auto& s = a.windows[w];
        windows.push_back(ordered_json{{"span_start", a.spans[w]},
                                       {"crossings", s.size()},
                                       {"fitted_carrier_hz", s.carrier},
                                       {"amplitude_fs", s.amplitude},
                                       {"zcf_rms_ps", ps(a.rms[w])},
                                       {"monotonic", s.monotonic}});
    }
    return dump(j);
}

std::string to_json(const BandPowerReport& r) {
    const auto power = [](double p) { return ordered_json{{"fs2", p}, {"db", p > 0.0 ? db10(p) : -400.0}}; };
    ordered_json j;
    j["band_hz"] = band(r.band);
    j["carrier_hz"] = r.carrier_frequency;
    j["guard_hz"] = r.guard;
    j["carrier_power"] = power(r.carrier_power);
    j["noise_band_power"] = power(r.noise_band_power);
    j["band_residual_power"] = power(r.band_residual_power);
    j["floor_power"] = power(r.floor_power);
    j["total_power"] = power(r.total_power);
    j["noise_to_carrier_db"] = r.noise_to_carrier_db;
    j["floor_to_carrier_db"] = r.floor_to_carrier_db;
    return dump(j);
}

std::string to_json(const PhaseFit& f) {
    ordered_json j;
    j["A_fs2"] = f.a;
    j["B_fs2"] = f.b;
    j["residual_rms_fs2"] = f.residual_rms;
    j["cycles"] = f.cycles;
    j["carrier_hz"] = f.carrier;
    j["amplitude_fs"] = f.amplitude;
    j["theta_rad"] = f.theta;
    j["variance_by_phase_fs2"] = f.variance_by_phase;
    return dump(j);
}

Histogram make_histogram(std::span<const double> values_seconds, double bin_width_ps) {
    require(bin_width_ps > 0.0, ErrorCategory::configuration, "histogram bin width must be positive");
    Histogram h;
    h.bin_width_ps = bin_width_ps;
    if (values_seconds.empty()) {
        return h;
    }
    const auto [lo_it, hi_it] = std::minmax_element(values_seconds.begin(), values_seconds.end());
    const auto lo = static_cast<long long>(std::floor(to_ps(*lo_it) / bin_width_ps + 0.5));
    const auto hi = static_cast<long long>(std::floor(to_ps(*hi_it) / bin_width_ps + 0.5));
    h.count.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (long long b = lo; b <= hi; ++b) {
        h.centre_ps.push_back(static_cast<double>(b) * bin_width_ps);
    }
    for (double v : values_seconds) {
        const auto b = static_cast<long long>(std::floor(to_ps(v) / bin_width_ps + 0.5));
        ++h.count[static_cast<std::size_t>(b - lo)];
    }
    return h;
}

std::string format_exact(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_zcf_csv(std::ostream& out, const ZeroCrossingSeries& s) {
    out << "k,parity,s_k,s_prime_k,delta_ps\n";
    for (std::size_t k = 0; k < s.size(); ++k) {
        out << k + 1 << ',' << (s.parity(k) == Parity::rising ? "rising" : "falling") << ',' << format_exact(s.s[k])
            << ',' << format_exact(s.s_prime[k]) << ',' << format_exact(to_ps(s.delta[k])) << '\n';
    }
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
    out << "centre_ps,count\n";
    for (std::size_t b = 0; b < h.count.size(); ++b) {
        out << format_exact(h.centre_ps[b]) << ',' << h.count[b] << '\n';
    }
}

void write_psd_csv(std::ostream& out, const Spectrum& spectrum) {
    out << "frequency_hz,density_dbfs_per_hz\n";
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        out << format_exact(spectrum.frequency[k]) << ',' << format_exact(spectrum.dbfs(k)) << '\n';
    }
}

void write_hta_csv(std::ostream& out, const HtaTrace& trace) {
    out << "time_s,jitter_ps\n";
    for (std::size_t i = 0; i < trace.time.size(); ++i) {
        out << format_exact(trace.time[i]) << ',' << format_exact(to_ps(trace.jitter[i])) << '\n';
    }
}

void write_traces_csv(std::ostream& out, const NoiseTraces& traces) {
    validate(traces);
    const auto at = [](const std::vector<double>& v, std::size_t i) { return i < v.size() ? v[i] : 0.0; };
    out << "time_s,j_s,a_m,n_pi,a_total\n";
    for (std::size_t i = 0; i < traces.size(); ++i) {
        out << format_exact(traces.start_time + static_cast<double>(i) / traces.sample_rate) << ','
            << format_exact(at(traces.j, i)) << ',' << format_exact(at(traces.a_m, i)) << ','
            << format_exact(at(traces.n_pi, i)) << ',' << format_exact(at(traces.a_total, i)) << '\n';
    }
}

NoiseTraces read_traces_csv(std::istream& in) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)) && line.rfind("time_s,j_s,a_m,n_pi,a_total", 0) == 0,
            ErrorCategory::parse, "traces CSV: missing or wrong header");
    NoiseTraces t;
    std::vector<double> times;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) {
            continue;
        }
        double v[5];
        const char* p = line.data();
        const char* end = p + line.size();
        for (int c = 0; c < 5; ++c) {
            const auto [next, ec] = std::from_chars(p, end, v[c]);
            if (ec != std::errc{} || (c < 4 && (next == end || *next != ','))) {
                fail(ErrorCategory::parse, "traces CSV row " + std::to_string(row) + ": malformed column " +
                                               std::to_string(c + 1));
            }
            p = next + (c < 4 ? 1 : 0);
        }
        times.push_back(v[0]);
        t.j.push_back(v[1]);
        t.a_m.push_back(v[2]);
        t.n_pi.push_back(v[3]);
        t.a_total.push_back(v[4]);
    }
    require(times.size() >= 2, ErrorCategory::parse, "traces CSV needs at least two rows");
    t.start_time = times.front();
    const double rate = static_cast<double>(times.size() - 1) / (times.back() - times.front());
    t.sample_rate = std::abs(rate - std::round(rate)) < 1e-6 * rate ? std::round(rate) : rate;
    return t;
}

} // namespace zcjitter
