// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "isac/harness/config.hpp"

#include "isac/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace isac::harness {

std::string_view to_string(Experiment e)
{
    switch (e) {
    case Experiment::Papr: return "papr";
    case Experiment::Sense: return "sense";
    case Experiment::Ber: return "ber";
    case Experiment::Psd: return "psd";
    }
    return "?";
}

namespace {

std::string trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_list(const std::string &value)
{
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

enum class Unit { None, Frequency, Time, Velocity, Length };

struct Entry {
    std::string value;
    int line = 0;
};

class Reader {
public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string &key) const { return entries_.count(key) != 0; }

    const Entry &entry(const std::string &key) const { return entries_.at(key); }

    [[noreturn]] void fail(const std::string &key, const std::string &why) const
    {
        throw ConfigError("line " + std::to_string(entries_.at(key).line) + ": " + key + ": " + why);
    }

    double number(const std::string &key, const std::string &text, Unit unit) const
    {
        const char *begin = text.data();
        const char *end = text.data() + text.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || !std::isfinite(value))
            fail(key, "'" + text + "' is not a number");
        const std::string suffix = trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
        return value * scale(key, suffix, unit);
    }

    double scalar(const std::string &key, Unit unit) const
    {
        const auto items = split_list(entry(key).value);
        if (items.size() != 1)
            fail(key, "expected a single value");
        return number(key, items[0], unit);
    }

    std::vector<double> list(const std::string &key, Unit unit) const
    {
        std::vector<double> out;
        for (const auto &item : split_list(entry(key).value))
            out.push_back(number(key, item, unit));
        if (out.empty())
            fail(key, "empty list");
        return out;
    }

    std::uint64_t count(const std::string &key, const std::string &text) const
    {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size())
            fail(key, "'" + text + "' is not a non-negative integer");
        return v;
    }

    std::uint64_t integer(const std::string &key) const
    {
        const auto items = split_list(entry(key).value);
        if (items.size() != 1)
            fail(key, "expected a single value");
        return count(key, items[0]);
    }

    std::vector<std::size_t> integers(const std::string &key) const
    {
        std::vector<std::size_t> out;
        for (const auto &item : split_list(entry(key).value))
            out.push_back(static_cast<std::size_t>(count(key, item)));
        return out;
    }

    std::string word(const std::string &key) const { return lower(trim(entry(key).value)); }

private:
    double scale(const std::string &key, const std::string &suffix, Unit unit) const
    {
        if (suffix.empty())
            return 1.0;
        const std::string s = lower(suffix);
        switch (unit) {
        case Unit::Frequency: {
            static const std::map<std::string, double> f{
                {"hz", 1.0}, {"khz", 1e3}, {"mhz", 1e6}, {"ghz", 1e9}, {"thz", 1e12}};
            if (auto it = f.find(s); it != f.end())
                return it->second;
            break;
        }
        case Unit::Time: {
            static const std::map<std::string, double> t{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}};
            if (auto it = t.find(s); it != t.end())
                return it->second;
            break;
        }
        case Unit::Velocity:
            if (s == "m/s")
                return 1.0;
            if (s == "km/h")
                return 1.0 / 3.6;
            break;
        case Unit::Length:
            if (s == "m")
                return 1.0;
            if (s == "mm")
                return 1e-3;
            if (s == "km")
                return 1e3;
            break;
        case Unit::None:
            if (s == "db")
                return 1.0;
            break;
        }
        fail(key, "unit '" + suffix + "' not allowed here");
    }

    std::map<std::string, Entry> entries_;
};

const std::set<std::string> kKnownKeys = {
    "experiment", "waveforms",  "subcarriers", "symbols",       "snr_db",       "trials",
    "seed",       "output",     "carrier",     "subcarrier_spacing", "modulation", "cp_len",
    "oversample", "range",      "velocity",    "doppler",       "echo_delay",   "echo_gain_db",
    "equalizer",  "phase_noise", "pn_linewidth", "pn_reference_carrier", "pa", "pa_ibo_db",
    "pa_smoothness", "psd_segments"};

bool on_off(const Reader &r, const std::string &key)
{
    const std::string w = r.word(key);
    if (w == "on" || w == "true" || w == "yes")
        return true;
    if (w == "off" || w == "false" || w == "no")
        return false;
    r.fail(key, "expected on or off");
}

} // namespace

ExperimentConfig parse_config(std::string_view text)
{
    std::map<std::string, Entry> entries;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = lower(trim(std::string_view(line).substr(0, eq)));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!kKnownKeys.count(key))
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (entries.count(key))
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' given twice");
        if (value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' has no value");
        entries.emplace(key, Entry{value, line_no});
    }

    const Reader r(std::move(entries));
    ExperimentConfig cfg;
    for (const char *required : {"experiment", "waveforms", "subcarriers", "symbols"})
        if (!r.has(required))
            throw ConfigError(std::string("missing required key '") + required + "'");

    const std::string exp = r.word("experiment");
    if (exp == "papr")
        cfg.experiment = Experiment::Papr;
    else if (exp == "sense")
        cfg.experiment = Experiment::Sense;
    else if (exp == "ber")
        cfg.experiment = Experiment::Ber;
    else if (exp == "psd")
        cfg.experiment = Experiment::Psd;
    else
        r.fail("experiment", "unknown experiment '" + exp + "'");

    for (const auto &name : split_list(r.entry("waveforms").value)) {
        try {
            cfg.waveforms.push_back(parse_waveform(name));
        } catch (const ParameterError &) {
            r.fail("waveforms", "unknown waveform '" + name + "'");
        }
    }
    cfg.subcarriers = r.integers("subcarriers");
    cfg.symbols = r.integers("symbols");
    if (r.has("snr_db"))
        cfg.snr_db = r.list("snr_db", Unit::None);
    if (r.has("trials"))
        cfg.trials = static_cast<std::size_t>(r.integer("trials"));
    if (r.has("seed"))
        cfg.seed = r.integer("seed");
    if (r.has("output"))
        cfg.output = trim(r.entry("output").value);
    if (r.has("carrier"))
        cfg.carrier_hz = r.scalar("carrier", Unit::Frequency);
    if (r.has("subcarrier_spacing"))
        cfg.subcarrier_spacing_hz = r.scalar("subcarrier_spacing", Unit::Frequency);
    if (r.has("modulation"))
        cfg.mod_order = static_cast<int>(r.integer("modulation"));
    if (r.has("cp_len"))
        cfg.cp_len = static_cast<std::size_t>(r.integer("cp_len"));
    if (r.has("oversample"))
        cfg.oversample = r.integers("oversample");
    if (r.has("range"))
        cfg.scenario.range_m = r.scalar("range", Unit::Length);
    if (r.has("velocity"))
        cfg.scenario.velocity_mps = r.scalar("velocity", Unit::Velocity);
    if (r.has("doppler"))
        cfg.doppler_hz = r.scalar("doppler", Unit::Frequency);
    if (r.has("echo_delay"))
        cfg.echo_delay_s = r.scalar("echo_delay", Unit::Time);
    if (r.has("echo_gain_db"))
        cfg.echo_gain_db = r.scalar("echo_gain_db", Unit::None);
    if (r.has("equalizer")) {
        const std::string w = r.word("equalizer");
        if (w == "auto")
            cfg.equalizer = EqualizerChoice::Auto;
        else if (w == "onetap")
            cfg.equalizer = EqualizerChoice::OneTap;
        else if (w == "ls")
            cfg.equalizer = EqualizerChoice::IterativeLs;
        else
            r.fail("equalizer", "expected auto, onetap or ls");
    }
    if (r.has("phase_noise"))
        cfg.phase_noise = on_off(r, "phase_noise");
    if (r.has("pn_linewidth"))
        cfg.impairments.pn_linewidth_ref_hz = r.scalar("pn_linewidth", Unit::Frequency);
    if (r.has("pn_reference_carrier"))
        cfg.impairments.pn_ref_carrier_hz = r.scalar("pn_reference_carrier", Unit::Frequency);
    if (r.has("pa")) {
        const std::string w = r.word("pa");
        if (w == "none")
            cfg.impairments.pa_model = PaModel::None;
        else if (w == "rapp")
            cfg.impairments.pa_model = PaModel::Rapp;
        else
            r.fail("pa", "expected none or rapp");
    }
    if (r.has("pa_ibo_db"))
        cfg.impairments.pa_ibo_db = r.scalar("pa_ibo_db", Unit::None);
    if (r.has("pa_smoothness"))
        cfg.impairments.pa_smoothness = r.scalar("pa_smoothness", Unit::None);
    if (r.has("psd_segments"))
        cfg.psd_segments = static_cast<std::size_t>(r.integer("psd_segments"));

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

WaveformConfig ExperimentConfig::waveform(WaveformKind kind, std::size_t pair_index) const
{
    WaveformConfig w = WaveformConfig::make(kind, subcarriers.at(pair_index), symbols.at(pair_index));
    w.subcarrier_spacing_hz = subcarrier_spacing_hz;
    w.carrier_hz = carrier_hz;
    w.mod_order = mod_order;
    if (cp_len)
        w.cp_len = *cp_len;
    return w;
}

void ExperimentConfig::validate() const
{
    if (waveforms.empty())
        throw ConfigError("no waveforms selected");
    if (subcarriers.empty() || subcarriers.size() != symbols.size())
        throw ConfigError("subcarriers and symbols must be non-empty lists of equal length");
    if (trials == 0)
        throw ConfigError("trials must be positive");
    for (WaveformKind k : waveforms)
        for (std::size_t i = 0; i < subcarriers.size(); ++i) {
            try {
                waveform(k, i).validate();
            } catch (const std::invalid_argument &e) {
                throw ConfigError(std::string(to_string(k)) + " " + std::to_string(subcarriers[i]) + "x" +
                                  std::to_string(symbols[i]) + ": " + e.what());
            }
        }
    try {
        impairments.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }

    switch (experiment) {
    case Experiment::Papr:
        if (oversample.empty())
            throw ConfigError("oversample list is empty");
        for (std::size_t f : oversample)
            if (!is_power_of_two(f) || f > 16)
                throw ConfigError("oversample factors must be powers of two up to 16");
        break;
    case Experiment::Sense:
        if (snr_db.empty())
            throw ConfigError("sense experiment needs snr_db");
        if (trials < 100)
            throw ConfigError("sense experiment needs at least 100 trials");
        if (!(scenario.range_m > 0.0))
            throw ConfigError("range must be positive");
        break;
    case Experiment::Ber:
        if (snr_db.empty())
            throw ConfigError("ber experiment needs snr_db");
        if (echo_delay_s && !(*echo_delay_s >= 0.0))
            throw ConfigError("echo_delay must be non-negative");
        if (equalizer == EqualizerChoice::OneTap)
            for (WaveformKind k : waveforms)
                if (is_delay_doppler(k))
                    throw ConfigError("onetap equalizer needs time-frequency waveforms, got " +
                                      std::string(to_string(k)));
        break;
    case Experiment::Psd:
        for (std::size_t i = 0; i < subcarriers.size(); ++i) {
            const std::size_t len = subcarriers[i] * symbols[i];
            if (psd_segments == 0 || len / psd_segments < 2)
                throw ConfigError("psd_segments leaves fewer than 2 samples per segment");
        }
        break;
    }
}

ExperimentConfig preset(std::string_view name)
{
    ExperimentConfig cfg;
    cfg.waveforms.assign(kAllWaveforms.begin(), kAllWaveforms.end());
    cfg.subcarriers = {64, 128};
    cfg.symbols = {16, 32};
    cfg.carrier_hz = 0.3e12;
    cfg.subcarrier_spacing_hz = 1.92e6;
    cfg.mod_order = 4;
    if (name == "fig3") {
        cfg.experiment = Experiment::Papr;
        cfg.trials = 10000;
        cfg.oversample = {1, 4};
        cfg.output = "fig3.csv";
    } else if (name == "fig4") {
        cfg.experiment = Experiment::Sense;
        cfg.trials = 200;
        cfg.snr_db = {30.0};
        cfg.scenario.range_m = 10.0;
        cfg.scenario.velocity_mps = 20.0 / 3.6;
        cfg.output = "fig4.csv";
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "' (expected fig3 or fig4)");
    }
    cfg.validate();
    return cfg;
}

} // namespace isac::harness
