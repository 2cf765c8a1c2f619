#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace ecggen {

struct Lead {
    std::string name;
    std::vector<double> samples; // millivolts
};

/// Multi-lead ECG time-series. All leads share the same sample count,
/// which equals round(fs * duration_s).
struct EcgRecord {
    std::vector<Lead> leads;
    double fs = 0.0; // Hz
    double duration_s = 0.0;

    std::size_t sample_count() const { return leads.empty() ? 0 : leads.front().samples.size(); }
    const Lead* find_lead(const std::string& name) const;
    void validate() const; // throws on any invariant violation
};

enum class RecordFormat { csv, wfdb_like };

struct SignalNoiseSpec {
    enum class Kind { none, awgn, baseline_wander, both };
    Kind kind = Kind::none;
    double snr_db = 20.0;
    double wander_freq_hz = 0.3;
    double wander_amp_mv = 0.1;

    void validate() const;
};

/// csv: header row of lead names, then one row of mV values per sample.
/// The sampling rate is not part of the csv payload and is passed in.
///
/// wfdb_like: "fs=<Hz> n=<samples> leads=<comma list>" on the first line,
/// "gain=<units per mV>" on the second, then whitespace-separated signed
/// integers in lead-interleaved order.
EcgRecord parse_record(std::istream& source, RecordFormat format, double csv_fs = 500.0);
EcgRecord parse_record_file(const std::string& path, double csv_fs = 500.0);

/// Extract [start_s, start_s + dur_s) and resample by linear interpolation.
EcgRecord segment_and_resample(const EcgRecord& rec, double start_s, double dur_s, double target_fs);

/// AWGN scaled to the requested SNR against per-lead mean squared value,
/// plus an optional sinusoidal baseline wander. Deterministic in seed.
EcgRecord add_signal_noise(const EcgRecord& rec, const SignalNoiseSpec& spec, std::uint64_t seed);

} // namespace ecggen
