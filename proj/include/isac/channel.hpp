// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#pragma once

#include "isac/numerics.hpp"

#include <limits>
#include <string>

namespace isac {

inline constexpr double kSpeedOfLight = 299792458.0;

struct PathSpec {
    cdouble gain{1.0, 0.0};
    double delay_s = 0.0;
    double doppler_hz = 0.0;
};

struct ChannelSpec {
    std::vector<PathSpec> paths;
    // Per-sample SNR after the channel; +inf disables noise.
    double snr_db = std::numeric_limits<double>::infinity();
};

struct SensingScenario {
    double range_m = 10.0;
    double velocity_mps = 20.0 / 3.6;   // positive = approaching
    cdouble rcs_gain{1.0, 0.0};
};

enum class PaModel { None, Rapp };

struct ImpairmentSpec {
    double pn_linewidth_ref_hz = 100e3;
    double pn_ref_carrier_hz = 300e9;
    PaModel pa_model = PaModel::None;
    double pa_smoothness = 2.0;
    double pa_ibo_db = 10.0;

    void validate() const;
};

// Monostatic echo: delay 2R/c, Doppler 2 v f_c / c.
PathSpec scenario_to_path(const SensingScenario &scenario, double carrier_hz);

/**
 * Linear part of the multipath channel over one whole frame:
 *
 *   y[k] = sum_p g_p x_circ(k - tau_p fs) exp(j 2 pi nu_p k / fs)
 *
 * The delay is a circular phase ramp over the frame's DFT, using signed bin
 * frequencies, so integer delays are exact circular shifts and fractional
 * delays are band-limited interpolations. Ramps are precomputed once per
 * (paths, length, sample rate).
 */
class MultipathKernel {
public:
    MultipathKernel(std::vector<PathSpec> paths, std::size_t length, double sample_rate);

    ComplexBuffer apply(std::span<const cdouble> x) const;
    ComplexBuffer adjoint(std::span<const cdouble> y) const;

    const std::vector<PathSpec> &paths() const { return paths_; }
    std::size_t length() const { return length_; }
    double sample_rate() const { return sample_rate_; }

private:
    struct Prepared {
        cdouble gain;
        bool integer_delay = true;
        std::size_t shift = 0;                // integer delays only
        std::vector<cdouble> delay_ramp;      // fractional delays only
        std::vector<cdouble> doppler_ramp;    // empty when doppler == 0
    };

    std::vector<PathSpec> paths_;
    std::size_t length_;
    double sample_rate_;
    std::vector<Prepared> prepared_;
    bool any_fractional_ = false;
};

struct ChannelOutput {
    ComplexBuffer samples;
    double signal_power = 0.0;   // measured on the noiseless output
    double noise_variance = 0.0;
    std::vector<std::string> warnings;  // e.g. delay beyond the cyclic prefix
};

/**
 * Multipath channel plus AWGN. The noise variance is the measured mean power
 * of the noiseless output divided by 10^(snr_db/10). Paths delayed by more
 * than `cp_len` samples produce a warning (the echo is beyond the range the
 * cyclic prefix covers) but are still applied.
 */
ChannelOutput apply_channel(std::span<const cdouble> x, const ChannelSpec &spec, double sample_rate, Rng &rng,
                            std::size_t cp_len);

void add_awgn(std::span<cdouble> x, double noise_variance, Rng &rng);

// beta = linewidth_ref * (f_c / f_ref)^2: +6 dB per carrier doubling.
double phase_noise_linewidth(const ImpairmentSpec &imp, double carrier_hz);
// Wiener increment variance 2 pi beta / fs.
double phase_noise_increment_variance(const ImpairmentSpec &imp, double carrier_hz, double sample_rate);

// x[k] exp(j phi[k]), phi[0] = 0, phi[k] = phi[k-1] + N(0, 2 pi beta / fs).
ComplexBuffer apply_phase_noise(std::span<const cdouble> x, const ImpairmentSpec &imp, double carrier_hz,
                                double sample_rate, Rng &rng);

// Rapp AM/AM: a / (1 + (a/sat)^{2p})^{1/(2p)}, phase untouched.
double rapp_amplitude(double amplitude, double saturation, double smoothness);

// Memoryless PA. The saturation amplitude sits pa_ibo_db above the input
// RMS. PaModel::None passes the signal through.
ComplexBuffer apply_pa(std::span<const cdouble> x, const ImpairmentSpec &imp);

} // namespace isac
