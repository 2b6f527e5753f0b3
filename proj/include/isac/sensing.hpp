// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#pragma once

#include "isac/channel.hpp"
#include "isac/waveform.hpp"

#include <string_view>

namespace isac {

enum class SensingMethod { OfdmRadar, PilotBased, DdAmbiguity };

std::string_view to_string(SensingMethod method);

// OFDM -> OfdmRadar, DFT-s-OFDM -> PilotBased (dedicated Zadoff-Chu
// symbol), OTFS and DFT-s-OTFS -> DdAmbiguity.
SensingMethod sensing_method_for(WaveformKind kind);
PilotScheme sensing_pilots_for(WaveformKind kind);

struct SensingEstimate {
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double peak_snr_db = 0.0;     // peak power over mean surface power
    SensingMethod method = SensingMethod::OfdmRadar;
    double delay_s = 0.0;
    double doppler_hz = 0.0;
    bool velocity_valid = true;   // false when the pilots span a single symbol
};

inline constexpr std::size_t kDefaultZeroPad = 16;

/**
 * Classical OFDM radar. Divides rx by tx per RE, then runs a zero-padded
 * delay transform across (centered) subcarriers and a zero-padded Doppler
 * transform across symbols. The 2D magnitude peak is refined by a 3-point
 * parabola along each axis. Throws ParameterError on any zero tx RE.
 */
SensingEstimate estimate_ofdm_radar(const TFGrid &tx, const TFGrid &rx, const WaveformConfig &cfg,
                                    std::size_t zero_pad = kDefaultZeroPad);

/**
 * Same periodogram restricted to the pilot REs. The mask must form a regular
 * lattice (evenly spaced pilot rows repeated on evenly spaced columns). With
 * a single pilot column only range is estimated; velocity_valid is false.
 */
SensingEstimate estimate_pilot_based(const TFGrid &rx, const PilotMask &mask,
                                     std::span<const cdouble> pilot_values, const WaveformConfig &cfg,
                                     std::size_t zero_pad = kDefaultZeroPad);

/**
 * Cross-ambiguity of rx against tx over whole frames,
 *   A(tau, nu) = sum_k rx[k] conj(tx[k - tau]) exp(-j 2 pi nu k / fs),
 * with circular lags. A coarse search covers every integer lag and Doppler
 * steps of fs/L within +-delta_f/2; the zero-padded surface (step 1/pad of
 * a coarse cell on both axes) is then evaluated over +-1 coarse cell around
 * the coarse peak and parabolically refined.
 */
SensingEstimate estimate_dd_ambiguity(std::span<const cdouble> tx_frame, std::span<const cdouble> rx_frame,
                                      const WaveformConfig &cfg, std::size_t zero_pad = kDefaultZeroPad);

struct SensingTrialOptions {
    bool phase_noise = false;
    ImpairmentSpec impairments;   // phase noise settings when enabled
    std::size_t zero_pad = kDefaultZeroPad;
    std::size_t workers = 1;
};

// One monostatic trial: random payload, echo with random target phase,
// AWGN at snr_db, estimator chosen by sensing_method_for(cfg.kind).
SensingEstimate sense_once(const WaveformConfig &cfg, const SensingScenario &scenario, double snr_db,
                           std::uint64_t trial_seed, const SensingTrialOptions &options = {});

struct RmseRow {
    WaveformKind kind = WaveformKind::Ofdm;
    std::size_t subcarriers = 0;
    std::size_t symbols = 0;
    double snr_db = 0.0;
    std::size_t trials = 0;
    double range_mean_m = 0.0;
    double range_rmse_m = 0.0;
    double velocity_mean_mps = 0.0;
    double velocity_rmse_mps = 0.0;
    std::size_t outliers = 0;     // |range error| above one coarse range bin
};

// Coarse range bin c / (2 M delta_f).
double range_resolution(const WaveformConfig &cfg);

// Trial i uses Rng::derive_seed(seed, i); requires trials >= 100.
RmseRow run_rmse_trials(const WaveformConfig &cfg, const SensingScenario &scenario, double snr_db,
                        std::size_t trials, std::uint64_t seed, const SensingTrialOptions &options = {});

} // namespace isac
