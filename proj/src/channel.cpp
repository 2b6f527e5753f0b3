// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "isac/channel.hpp"

#include "isac/errors.hpp"

#include <cmath>
#include <cstdio>

namespace isac {

PathSpec scenario_to_path(const SensingScenario &scenario, double carrier_hz)
{
    if (!(carrier_hz > 0.0))
        throw ParameterError("carrier frequency must be positive");
    PathSpec p;
    p.gain = scenario.rcs_gain;
    p.delay_s = 2.0 * scenario.range_m / kSpeedOfLight;
    p.doppler_hz = 2.0 * scenario.velocity_mps * carrier_hz / kSpeedOfLight;
    return p;
}

MultipathKernel::MultipathKernel(std::vector<PathSpec> paths, std::size_t length, double sample_rate)
    : paths_(std::move(paths)), length_(length), sample_rate_(sample_rate)
{
    if (paths_.empty())
        throw ParameterError("channel needs at least one path");
    if (length_ == 0)
        throw SizeError("channel length must be positive");
    if (!(sample_rate_ > 0.0))
        throw ParameterError("sample rate must be positive");

    const double len = static_cast<double>(length_);
    for (const PathSpec &p : paths_) {
        if (!(p.delay_s >= 0.0) || !std::isfinite(p.delay_s))
            throw ParameterError("path delay must be finite and non-negative");
        if (!std::isfinite(p.gain.real()) || !std::isfinite(p.gain.imag()) || !std::isfinite(p.doppler_hz))
            throw ParameterError("path gain and Doppler must be finite");

        Prepared prep;
        prep.gain = p.gain;
        const double delay_samples = p.delay_s * sample_rate_;
        const double nearest = std::round(delay_samples);
        if (std::abs(delay_samples - nearest) <= 1e-12 * std::max(1.0, delay_samples)) {
            prep.shift = static_cast<std::size_t>(nearest) % length_;
        } else {
            prep.integer_delay = false;
            any_fractional_ = true;
            prep.delay_ramp.resize(length_);
            for (std::size_t k = 0; k < length_; ++k) {
                const double turns = static_cast<double>(signed_bin(k, length_)) * delay_samples / len;
                prep.delay_ramp[k] = std::polar(1.0, -2.0 * kPi * (turns - std::round(turns)));
            }
        }
        if (p.doppler_hz != 0.0) {
            prep.doppler_ramp.resize(length_);
            const double cycles_per_sample = p.doppler_hz / sample_rate_;
            for (std::size_t k = 0; k < length_; ++k) {
                const double turns = cycles_per_sample * static_cast<double>(k);
                prep.doppler_ramp[k] = std::polar(1.0, 2.0 * kPi * (turns - std::round(turns)));
            }
        }
        prepared_.push_back(std::move(prep));
    }
}

ComplexBuffer MultipathKernel::apply(std::span<const cdouble> x) const
{
    if (x.size() != length_)
        throw SizeError("channel input length mismatch");
    ComplexBuffer spectrum;
    if (any_fractional_)
        spectrum = dft(x, false);

    ComplexBuffer out(length_);
    ComplexBuffer delayed(length_);
    for (const Prepared &p : prepared_) {
        if (p.integer_delay) {
            for (std::size_t k = 0; k < length_; ++k)
                delayed[k] = x[(k + length_ - p.shift) % length_];
        } else {
            ComplexBuffer shaped(length_);
            for (std::size_t k = 0; k < length_; ++k)
                shaped[k] = spectrum[k] * p.delay_ramp[k];
            delayed = dft(shaped, true);
        }
        if (p.doppler_ramp.empty()) {
            for (std::size_t k = 0; k < length_; ++k)
                out[k] += p.gain * delayed[k];
        } else {
            for (std::size_t k = 0; k < length_; ++k)
                out[k] += p.gain * delayed[k] * p.doppler_ramp[k];
        }
    }
    return out;
}

ComplexBuffer MultipathKernel::adjoint(std::span<const cdouble> y) const
{
    if (y.size() != length_)
        throw SizeError("channel input length mismatch");
    ComplexBuffer out(length_);
    ComplexBuffer undone(length_);
    for (const Prepared &p : prepared_) {
        const cdouble g = std::conj(p.gain);
        if (p.doppler_ramp.empty()) {
            for (std::size_t k = 0; k < length_; ++k)
                undone[k] = g * y[k];
        } else {
            for (std::size_t k = 0; k < length_; ++k)
                undone[k] = g * y[k] * std::conj(p.doppler_ramp[k]);
        }
        if (p.integer_delay) {
            for (std::size_t k = 0; k < length_; ++k)
                out[k] += undone[(k + p.shift) % length_];
        } else {
            ComplexBuffer spectrum = dft(undone, false);
            for (std::size_t k = 0; k < length_; ++k)
                spectrum[k] *= std::conj(p.delay_ramp[k]);
            const ComplexBuffer back = dft(spectrum, true);
            for (std::size_t k = 0; k < length_; ++k)
                out[k] += back[k];
        }
    }
    return out;
}

void add_awgn(std::span<cdouble> x, double noise_variance, Rng &rng)
{
    if (!(noise_variance > 0.0))
        return;
    for (auto &v : x)
        v += rng.complex_normal(noise_variance);
}

ChannelOutput apply_channel(std::span<const cdouble> x, const ChannelSpec &spec, double sample_rate, Rng &rng,
                            std::size_t cp_len)
{
    require_finite(x, "apply_channel");
    const MultipathKernel kernel(spec.paths, x.size(), sample_rate);

    ChannelOutput out;
    for (const PathSpec &p : spec.paths) {
        const double delay_samples = p.delay_s * sample_rate;
        if (delay_samples > static_cast<double>(cp_len)) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "path delay %.3f samples exceeds the %zu-sample cyclic prefix (beyond unambiguous range)",
                          delay_samples, cp_len);
            out.warnings.emplace_back(msg);
        }
    }

    out.samples = kernel.apply(x);
    out.signal_power = mean_power(out.samples);
    if (std::isfinite(spec.snr_db)) {
        out.noise_variance = out.signal_power / std::pow(10.0, spec.snr_db / 10.0);
        add_awgn(out.samples, out.noise_variance, rng);
    }
    return out;
}

} // namespace isac
