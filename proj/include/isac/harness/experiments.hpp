// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#pragma once

#include "isac/harness/config.hpp"
#include "isac/harness/csv.hpp"
#include "isac/rxcomm.hpp"

#include <string>
#include <vector>

namespace isac::harness {

struct RunResult {
    std::vector<TrialRecord> records;   // sorted
    std::vector<std::string> summary;   // one human-readable line per combination
    std::vector<std::string> warnings;  // deduplicated
};

// Runs every (waveform, (M,N), snr) combination of `cfg`. Trials are fanned
// out over `workers` threads; each trial's seed is derived from cfg.seed and
// the trial index only, so records do not depend on `workers`.
RunResult run_experiment(const ExperimentConfig &cfg, std::size_t workers = 1);

// LoS path (random phase, zero delay, cfg.doppler_hz) plus the optional echo
// path (cfg.echo_gain_db, cfg.echo_delay_s, same Doppler, random phase).
std::vector<PathSpec> ber_channel(const ExperimentConfig &cfg, Rng &rng);

Equalizer ber_equalizer(const ExperimentConfig &cfg, WaveformKind kind);

// One frame of the ber experiment: random payload, optional PA, channel with
// AWGN, optional receive phase noise, equalize with known channel, detect.
DetectionResult ber_frame(const ExperimentConfig &cfg, const WaveformConfig &wf, double snr_db,
                          std::uint64_t frame_seed, std::vector<std::string> *warnings = nullptr);

// Formats CCDF axis points as fixed-width metric suffixes ("07.3") so that
// lexicographic metric order equals numeric order.
std::string ccdf_metric_name(std::size_t oversample, double papr_db);

} // namespace isac::harness
