// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#pragma once

#include "isac/channel.hpp"
#include "isac/waveform.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace isac::harness {

enum class Experiment { Papr, Sense, Ber, Psd };

std::string_view to_string(Experiment e);

enum class EqualizerChoice { Auto, OneTap, IterativeLs };

/**
 * One experiment definition. `subcarriers` and `symbols` are zipped into
 * (M, N) pairs; every pair is run for every waveform and every SNR.
 *
 * Text form (one `key = value` per line, `#` starts a comment, lists are
 * comma separated, numbers may carry a unit suffix):
 *
 *   experiment         papr | sense | ber | psd            (required)
 *   waveforms          OFDM, DFT-s-OFDM, OTFS, DFT-s-OTFS  (required)
 *   subcarriers        list of M                            (required)
 *   symbols            list of N, same length               (required)
 *   snr_db             list, dB                   (required for sense, ber)
 *   trials             frames (papr, ber, psd) or sensing trials
 *   seed               unsigned 64-bit
 *   output             CSV path
 *   carrier            Hz, kHz, MHz, GHz, THz      default 0.3 THz
 *   subcarrier_spacing                            default 1.92 MHz
 *   modulation         4 | 16                     default 4
 *   cp_len             samples                    default M/4
 *   oversample         list of PAPR oversampling factors, default 4
 *   range              m                          default 10
 *   velocity           m/s or km/h                default 20 km/h
 *   doppler            Hz units, ber LoS path     default 11.1 kHz
 *   echo_delay         s, ms, us, ns; adds a second ber path
 *   echo_gain_db       dB relative to the LoS path, default -2
 *   equalizer          auto | onetap | ls         default auto
 *   phase_noise        on | off                   default off
 *   pn_linewidth       Hz units at pn_reference_carrier, default 100 kHz
 *   pn_reference_carrier                          default 300 GHz
 *   pa                 none | rapp                default none
 *   pa_ibo_db, pa_smoothness                      default 10, 2
 *   psd_segments       segments per frame         default 16
 */
struct ExperimentConfig {
    Experiment experiment = Experiment::Papr;
    std::vector<WaveformKind> waveforms;
    std::vector<std::size_t> subcarriers;
    std::vector<std::size_t> symbols;
    std::vector<double> snr_db;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::string output;

    double carrier_hz = 0.3e12;
    double subcarrier_spacing_hz = 1.92e6;
    int mod_order = 4;
    std::optional<std::size_t> cp_len;
    std::vector<std::size_t> oversample{4};

    SensingScenario scenario;
    double doppler_hz = 11.1e3;
    std::optional<double> echo_delay_s;
    double echo_gain_db = -2.0;
    EqualizerChoice equalizer = EqualizerChoice::Auto;

    bool phase_noise = false;
    ImpairmentSpec impairments;
    std::size_t psd_segments = 16;

    // Throws ConfigError when any combination would violate a module
    // precondition.
    void validate() const;

    WaveformConfig waveform(WaveformKind kind, std::size_t pair_index) const;
};

// Strict parser: unknown or repeated keys, bad values and missing required
// keys all throw ConfigError naming the line.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string &path);

// "fig3": PAPR CCDF of all four waveforms, (64,16) and (128,32), 10^4
// frames, oversampling 1 and 4. "fig4": range RMSE for the same grid, 10 m
// target at 20 km/h, 30 dB SNR, 200 trials. Both at 0.3 THz, 1.92 MHz, 4-QAM.
ExperimentConfig preset(std::string_view name);

} // namespace isac::harness
