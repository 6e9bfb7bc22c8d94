#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "zcjitter/baseline.hpp"
#include "zcjitter/decomposition.hpp"
#include "zcjitter/pipeline.hpp"
#include "zcjitter/sample_buffer.hpp"
#include "zcjitter/zca.hpp"

namespace zcjitter {

// JSON reports. Times are printed in ps rounded to 0.1 ps; frequencies in Hz;
// powers in FS^2 together with their dB value.
std::string to_json(const VarianceBudget& budget);
std::string to_json(const DrsAnalysis& analysis);
std::string to_json(const PlayerSplit& split);
std::string to_json(const RecorderSplit& split);
std::string to_json(const RecorderSplitAnalysis& analysis);
std::string to_json(const RecordingAnalysis& analysis);
std::string to_json(const BandPowerReport& report);
std::string to_json(const PhaseFit& fit);

/// Equal-width histogram of ZCF values, bin centres in ps.
struct Histogram {
    double bin_width_ps = 0.0;
    std::vector<double> centre_ps;
    std::vector<std::size_t> count;
};

Histogram make_histogram(std::span<const double> values_seconds, double bin_width_ps);

// CSV writers, one header line each.
void write_zcf_csv(std::ostream& out, const ZeroCrossingSeries& series);           // k,parity,s_k,s_prime_k,delta_ps
void write_histogram_csv(std::ostream& out, const Histogram& histogram);            // centre_ps,count
void write_psd_csv(std::ostream& out, const Spectrum& spectrum);                   // frequency_hz,density_dbfs_per_hz
void write_hta_csv(std::ostream& out, const HtaTrace& trace);                      // time_s,jitter_ps
void write_traces_csv(std::ostream& out, const NoiseTraces& traces);               // time_s,j_s,a_m,n_pi,a_total

/// Reads what write_traces_csv wrote (validation mode only).
NoiseTraces read_traces_csv(std::istream& in);

/// Shortest text that reads back to the same double.
std::string format_exact(double value);

} // namespace zcjitter
