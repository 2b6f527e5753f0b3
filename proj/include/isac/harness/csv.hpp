// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace isac::harness {

// One aggregate metric of one (waveform, M, N, snr) combination.
struct TrialRecord {
    std::string experiment;
    std::string waveform;
    std::size_t subcarriers = 0;
    std::size_t symbols = 0;
    double snr_db = 0.0;   // NaN when the experiment has no SNR axis
    std::uint64_t seed = 0;
    std::string metric;
    double value = 0.0;
};

inline constexpr const char *kCsvHeader = "experiment,waveform,M,N,snr_db,seed,metric,value";

// Orders by (waveform, M, N, snr, metric); NaN SNRs sort first.
void sort_records(std::vector<TrialRecord> &records);

// Header plus one LF-terminated row per record, floats as %.9e. Sorts a copy.
std::string format_csv(std::vector<TrialRecord> records);

// Writes to "<path>.tmp" then renames, so readers never see a partial file.
// Creates missing parent directories.
void write_file_atomic(const std::string &path, const std::string &content);

} // namespace isac::harness
