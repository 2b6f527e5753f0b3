// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#pragma once

#include "isac/channel.hpp"
#include "isac/waveform.hpp"

#include <limits>

namespace isac {

/**
 * Exact linear map from a transmitted placement grid (TF for OFDM kinds, DD
 * for OTFS kinds) to the received placement grid through a known multipath
 * channel:  analyze(channel(synthesize(x))).
 *
 * Nothing is stored densely. Each application runs the per-symbol FFTs, the
 * symplectic transforms and one frame-length DFT pair per fractional-delay
 * path, so the cost is O(P * MN log MN). The adjoint chains the adjoint of
 * every stage in reverse order.
 */
class ChannelOperator {
public:
    ChannelOperator(std::vector<PathSpec> paths, const WaveformConfig &cfg);

    Grid apply(const Grid &x) const;
    Grid adjoint(const Grid &y) const;

    const WaveformConfig &config() const { return cfg_; }
    const std::vector<PathSpec> &paths() const { return kernel_.paths(); }

private:
    WaveformConfig cfg_;
    MultipathKernel kernel_;
};

// Frame samples -> placement grid adjoint pairs used by ChannelOperator.
Grid synthesize_adjoint(std::span<const cdouble> samples, const WaveformConfig &cfg);
ComplexBuffer analyze_adjoint(const Grid &placement, const WaveformConfig &cfg);

/**
 * Per-RE channel gains seen by an OFDM receiver that ignores ICI: the
 * diagonal of the TF-domain channel for the given paths,
 *   H[m,n] = sum_p g_p exp(-j2pi f_m tau_p) exp(j2pi nu_p t_n) D(nu_p)
 * with t_n the first body sample of symbol n and D the in-symbol Doppler
 * average (1/M) sum_i exp(j2pi nu_p i / fs).
 */
TFGrid tf_channel_response(const std::vector<PathSpec> &paths, const WaveformConfig &cfg);

struct OneTapResult {
    Grid equalized;
    std::vector<std::uint8_t> excluded;   // 1 where the gain was zero at infinite SNR
};

// rx * conj(h) / (|h|^2 + 1/snr). snr_linear = +inf gives zero forcing.
OneTapResult equalize_onetap(const Grid &rx, const Grid &known_channel,
                             double snr_linear = std::numeric_limits<double>::infinity());

struct LsOptions {
    std::size_t max_iterations = 100;
    double tolerance = 1e-6;
    double regularization = 0.0;   // ridge weight, normally the noise variance
};

struct LsResult {
    Grid estimate;
    std::size_t iterations = 0;
    bool converged = false;
    double residual = 0.0;          // ||y - A x|| / ||y||
    double normal_residual = 0.0;   // ||A^H (y - A x) - lambda x|| / ||A^H y||
    std::vector<double> residual_history;
};

/**
 * Conjugate gradient on the (optionally ridge-regularized) normal equations
 * (A^H A + lambda I) x = A^H y, in the CGLS arrangement that never forms
 * A^H A. Stops once either relative residual drops below the tolerance.
 * The regularized objective ||y - A x||^2 + lambda ||x||^2 is monotone in
 * exact arithmetic; three consecutive increases throw NumericError.
 */
LsResult equalize_iterative_ls(const Grid &rx, const ChannelOperator &op, const LsOptions &options = {});

struct DetectionResult {
    Bits bits;
    std::size_t bit_errors = 0;
    std::size_t bits_compared = 0;
    double ber = 0.0;
};

// Hard decisions on the data REs (column-major, skipping pilots). REs
// flagged in `excluded` are left out of the comparison.
DetectionResult detect_bits(const Grid &symbols, const WaveformConfig &cfg, const PilotMask &mask,
                            std::span<const std::uint8_t> reference,
                            std::span<const std::uint8_t> excluded = {});

enum class Equalizer { OneTap, IterativeLs };

struct ReceiverOptions {
    Equalizer equalizer = Equalizer::IterativeLs;
    double noise_variance = 0.0;   // per sample; sets MMSE/ridge weights
    LsOptions ls;
};

// Full communication receiver with perfect channel knowledge: analyze,
// equalize, undo precoding, detect.
DetectionResult receive(std::span<const cdouble> samples, const Frame &reference,
                        const std::vector<PathSpec> &paths, const ReceiverOptions &options);

} // namespace isac
