#include "ecggen/ecg_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ecggen/rng.hpp"

namespace ecggen {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, delim)) out.push_back(item);
    if (!s.empty() && s.back() == delim) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_mv(const std::string& tok, std::size_t row) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("trailing");
        if (!std::isfinite(v))
            throw std::runtime_error("non-finite sample value at data row " + std::to_string(row));
        return v;
    } catch (const std::runtime_error&) {
        throw;
    } catch (const std::exception&) {
        throw std::runtime_error("bad numeric value '" + tok + "' at data row " + std::to_string(row));
    }
}

EcgRecord parse_csv(std::istream& in, double fs) {
    if (fs <= 0.0) throw std::runtime_error("csv: sampling rate must be positive");
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("csv: missing header row");
    EcgRecord rec;
    for (const std::string& name : split(trim(header), ',')) {
        const std::string n = trim(name);
        if (n.empty()) throw std::runtime_error("csv: empty lead name in header");
        rec.leads.push_back({n, {}});
    }
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        ++row;
        const auto cells = split(line, ',');
        if (cells.size() != rec.leads.size())
            throw std::runtime_error("csv: row " + std::to_string(row) + " has " +
                                     std::to_string(cells.size()) + " values, expected " +
                                     std::to_string(rec.leads.size()));
        for (std::size_t i = 0; i < cells.size(); ++i)
            rec.leads[i].samples.push_back(parse_mv(trim(cells[i]), row));
    }
    if (row == 0) throw std::runtime_error("csv: no data rows");
    rec.fs = fs;
    rec.duration_s = static_cast<double>(row) / fs;
    rec.validate();
    return rec;
}

EcgRecord parse_wfdb_like(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("wfdb_like: missing header line");
    double fs = 0.0;
    std::size_t n = 0;
    std::vector<std::string> lead_names;
    for (const std::string& tok : split(trim(header), ' ')) {
        if (tok.empty()) continue;
        if (tok.rfind("fs=", 0) == 0) {
            fs = std::stod(tok.substr(3));
        } else if (tok.rfind("n=", 0) == 0) {
            n = static_cast<std::size_t>(std::stoull(tok.substr(2)));
        } else if (tok.rfind("leads=", 0) == 0) {
            for (const std::string& name : split(tok.substr(6), ','))
                lead_names.push_back(trim(name));
        } else {
            throw std::runtime_error("wfdb_like: unknown header token '" + tok + "'");
        }
    }
    if (fs <= 0.0 || n == 0 || lead_names.empty())
        throw std::runtime_error("wfdb_like: header must define fs, n and leads");

    std::string gain_line;
    if (!std::getline(in, gain_line)) throw std::runtime_error("wfdb_like: missing gain line");
    gain_line = trim(gain_line);
    if (gain_line.rfind("gain=", 0) != 0)
        throw std::runtime_error("wfdb_like: expected 'gain=<units per mV>' line");
    const double gain = std::stod(gain_line.substr(5));
    if (gain <= 0.0 || !std::isfinite(gain))
        throw std::runtime_error("wfdb_like: gain must be positive and finite");

    EcgRecord rec;
    for (const std::string& name : lead_names) rec.leads.push_back({name, {}});
    for (Lead& lead : rec.leads) lead.samples.reserve(n);

    long long v = 0;
    std::size_t count = 0;
    const std::size_t total = n * lead_names.size();
    while (count < total && (in >> v)) {
        rec.leads[count % lead_names.size()].samples.push_back(static_cast<double>(v) / gain);
        ++count;
    }
    if (count != total)
        throw std::runtime_error("wfdb_like: expected " + std::to_string(total) +
                                 " samples, found " + std::to_string(count));
    rec.fs = fs;
    rec.duration_s = static_cast<double>(n) / fs;
    rec.validate();
    return rec;
}

} // namespace

const Lead* EcgRecord::find_lead(const std::string& name) const {
    for (const Lead& l : leads)
        if (l.name == name) return &l;
    return nullptr;
}

void EcgRecord::validate() const {
    if (leads.empty()) throw std::runtime_error("EcgRecord: no leads");
    if (fs <= 0.0 || !std::isfinite(fs)) throw std::runtime_error("EcgRecord: fs must be positive");
    const std::size_t n = leads.front().samples.size();
    if (n == 0) throw std::runtime_error("EcgRecord: empty lead");
    const auto expected = static_cast<std::size_t>(std::llround(fs * duration_s));
    if (expected != n)
        throw std::runtime_error("EcgRecord: sample count " + std::to_string(n) +
                                 " != round(fs * duration) = " + std::to_string(expected));
    std::set<std::string> names;
    for (const Lead& l : leads) {
        if (l.samples.size() != n)
            throw std::runtime_error("EcgRecord: lead '" + l.name + "' length mismatch");
        if (!names.insert(l.name).second)
            throw std::runtime_error("EcgRecord: duplicate lead name '" + l.name + "'");
        for (double v : l.samples)
            if (!std::isfinite(v))
                throw std::runtime_error("EcgRecord: non-finite sample in lead '" + l.name + "'");
    }
}

void SignalNoiseSpec::validate() const {
    const bool has_awgn = kind == Kind::awgn || kind == Kind::both;
    const bool has_wander = kind == Kind::baseline_wander || kind == Kind::both;
    if (has_awgn && !std::isfinite(snr_db))
        throw std::runtime_error("SignalNoiseSpec: snr_db must be finite");
    if (has_wander) {
        if (!(wander_freq_hz > 0.0 && wander_freq_hz <= 1.0))
            throw std::runtime_error("SignalNoiseSpec: wander_freq_hz must be in (0, 1]");
        if (wander_amp_mv < 0.0)
            throw std::runtime_error("SignalNoiseSpec: wander_amp_mv must be >= 0");
    }
}

EcgRecord parse_record(std::istream& source, RecordFormat format, double csv_fs) {
    return format == RecordFormat::csv ? parse_csv(source, csv_fs) : parse_wfdb_like(source);
}

EcgRecord parse_record_file(const std::string& path, double csv_fs) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open record file " + path);
    const bool is_csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    return parse_record(in, is_csv ? RecordFormat::csv : RecordFormat::wfdb_like, csv_fs);
}

EcgRecord segment_and_resample(const EcgRecord& rec, double start_s, double dur_s, double target_fs) {
    rec.validate();
    if (target_fs <= 0.0) throw std::runtime_error("segment_and_resample: target_fs must be positive");
    if (start_s < 0.0 || dur_s <= 0.0 || start_s + dur_s > rec.duration_s + 1e-9)
        throw std::range_error("segment_and_resample: window [" + std::to_string(start_s) + ", " +
                               std::to_string(start_s + dur_s) + ") outside record of " +
                               std::to_string(rec.duration_s) + " s");

    // Identity window at identity rate: return samples bitwise-equal.
    if (start_s == 0.0 && dur_s == rec.duration_s && target_fs == rec.fs) return rec;

    const auto out_n = static_cast<std::size_t>(std::llround(target_fs * dur_s));
    const std::size_t src_n = rec.sample_count();
    EcgRecord out;
    out.fs = target_fs;
    out.duration_s = dur_s;
    for (const Lead& lead : rec.leads) {
        Lead ol{lead.name, {}};
        ol.samples.reserve(out_n);
        for (std::size_t k = 0; k < out_n; ++k) {
            const double t = start_s + static_cast<double>(k) / target_fs;
            const double pos = std::clamp(t * rec.fs, 0.0, static_cast<double>(src_n - 1));
            const auto i0 = static_cast<std::size_t>(pos);
            const std::size_t i1 = std::min(i0 + 1, src_n - 1);
            const double f = pos - static_cast<double>(i0);
            ol.samples.push_back(lead.samples[i0] + f * (lead.samples[i1] - lead.samples[i0]));
        }
        out.leads.push_back(std::move(ol));
    }
    out.validate();
    return out;
}

EcgRecord add_signal_noise(const EcgRecord& rec, const SignalNoiseSpec& spec, std::uint64_t seed) {
    rec.validate();
    spec.validate();
    if (spec.kind == SignalNoiseSpec::Kind::none) return rec;
    const bool has_awgn =
        spec.kind == SignalNoiseSpec::Kind::awgn || spec.kind == SignalNoiseSpec::Kind::both;
    const bool has_wander =
        spec.kind == SignalNoiseSpec::Kind::baseline_wander || spec.kind == SignalNoiseSpec::Kind::both;

    EcgRecord out = rec;
    for (std::size_t li = 0; li < out.leads.size(); ++li) {
        Lead& lead = out.leads[li];
        if (has_awgn) {
            double power = 0.0;
            for (double v : lead.samples) power += v * v;
            power /= static_cast<double>(lead.samples.size());
            if (power == 0.0)
                throw std::runtime_error("add_signal_noise: lead '" + lead.name +
                                         "' has zero power, SNR-scaled noise undefined");
            const double sigma = std::sqrt(power / std::pow(10.0, spec.snr_db / 10.0));
            Rng rng(derive_seed(seed, li, 0x4157474eULL)); // per-lead substream
            for (double& v : lead.samples) v += sigma * rng.next_normal();
        }
        if (has_wander) {
            for (std::size_t k = 0; k < lead.samples.size(); ++k) {
                const double t = static_cast<double>(k) / rec.fs;
                lead.samples[k] += spec.wander_amp_mv * std::sin(kTwoPi * spec.wander_freq_hz * t);
            }
        }
    }
    return out;
}

} // namespace ecggen
