// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "isac/harness/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <tuple>

namespace isac::harness {

namespace {

// Total order on doubles with NaN first, so sorting is well defined.
int compare_snr(double a, double b)
{
    const bool na = std::isnan(a);
    const bool nb = std::isnan(b);
    if (na || nb)
        return static_cast<int>(nb) - static_cast<int>(na);
    return (a > b) - (a < b);
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    return buf;
}

} // namespace

void sort_records(std::vector<TrialRecord> &records)
{
    std::stable_sort(records.begin(), records.end(), [](const TrialRecord &a, const TrialRecord &b) {
        if (a.waveform != b.waveform)
            return a.waveform < b.waveform;
        if (a.subcarriers != b.subcarriers)
            return a.subcarriers < b.subcarriers;
        if (a.symbols != b.symbols)
            return a.symbols < b.symbols;
        if (int c = compare_snr(a.snr_db, b.snr_db); c != 0)
            return c < 0;
        return a.metric < b.metric;
    });
}

std::string format_csv(std::vector<TrialRecord> records)
{
    sort_records(records);
    std::string out = kCsvHeader;
    out += '\n';
    for (const TrialRecord &r : records) {
        out += r.experiment;
        out += ',';
        out += r.waveform;
        out += ',';
        out += std::to_string(r.subcarriers);
        out += ',';
        out += std::to_string(r.symbols);
        out += ',';
        out += format_double(r.snr_db);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += r.metric;
        out += ',';
        out += format_double(r.value);
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::string &path, const std::string &content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path())
        fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
        }
    }
    fs::rename(tmp, target);
}

} // namespace isac::harness
