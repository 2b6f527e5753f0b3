// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#pragma once

#include "isac/waveform.hpp"

namespace isac {

// EVM values for identical grids are clamped to this floor.
inline constexpr double kEvmFloorDb = -150.0;

/**
 * Peak-to-average power ratio in dB of the `oversample`-times interpolated
 * buffer. Interpolation zero-pads the unitary DFT in the middle (the Nyquist
 * bin split evenly between both edges), so original sample values are kept.
 * Throws NumericError on a zero-energy buffer, ParameterError unless
 * oversample is a power of two.
 */
double papr_db(std::span<const cdouble> x, std::size_t oversample = 4);

ComplexBuffer interpolate(std::span<const cdouble> x, std::size_t factor);

struct CcdfCurve {
    std::vector<double> papr_axis_db;    // 0.0, 0.1, ..., 14.0
    std::vector<double> probability;     // P(PAPR > axis value)
    std::size_t frames = 0;
    std::vector<double> papr_samples_db; // per-frame PAPR, ascending
};

std::vector<double> ccdf_axis();

// CCDF of a set of per-frame PAPR values on the standard axis.
CcdfCurve ccdf_from_samples(std::vector<double> papr_samples_db);

/**
 * Per-frame PAPR of CP-stripped, pilot-free random frames. Frame i draws its
 * bits from Rng(Rng::derive_seed(seed, i)), so results do not depend on the
 * worker count.
 */
CcdfCurve ccdf(const WaveformConfig &cfg, std::size_t frames, std::size_t oversample, std::uint64_t seed,
               std::size_t workers = 1);

// PAPR exceeded with probability p (linear interpolation between order
// statistics).
double papr_at_probability(const CcdfCurve &curve, double probability);

// 10 log10( sum |meas - ref|^2 / sum |ref|^2 ), floored at kEvmFloorDb.
double evm_db(std::span<const cdouble> ref, std::span<const cdouble> meas);
double evm_db(const Grid &ref, const Grid &meas);

/**
 * Averaged periodogram: x is cut into `segments` equal non-overlapping
 * pieces, each Hann-windowed and transformed; bin powers are averaged and
 * normalized by the window energy. Bins are in DFT order. White noise of
 * variance s^2 has expected level s^2 in every bin.
 */
std::vector<double> psd(std::span<const cdouble> x, std::size_t segments);

} // namespace isac
