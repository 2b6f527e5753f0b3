// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "isac/channel.hpp"

#include "isac/errors.hpp"

#include <cmath>

namespace isac {

void ImpairmentSpec::validate() const
{
    if (!(pn_linewidth_ref_hz >= 0.0))
        throw ParameterError("phase-noise linewidth must be non-negative");
    if (!(pn_ref_carrier_hz > 0.0))
        throw ParameterError("phase-noise reference carrier must be positive");
    if (!(pa_smoothness > 0.0))
        throw ParameterError("PA smoothness must be positive");
}

double phase_noise_linewidth(const ImpairmentSpec &imp, double carrier_hz)
{
    const double ratio = carrier_hz / imp.pn_ref_carrier_hz;
    return imp.pn_linewidth_ref_hz * ratio * ratio;
}

double phase_noise_increment_variance(const ImpairmentSpec &imp, double carrier_hz, double sample_rate)
{
    return 2.0 * kPi * phase_noise_linewidth(imp, carrier_hz) / sample_rate;
}

ComplexBuffer apply_phase_noise(std::span<const cdouble> x, const ImpairmentSpec &imp, double carrier_hz,
                                double sample_rate, Rng &rng)
{
    imp.validate();
    ComplexBuffer out(x.begin(), x.end());
    const double variance = phase_noise_increment_variance(imp, carrier_hz, sample_rate);
    if (variance == 0.0)
        return out;
    const double sigma = std::sqrt(variance);
    double phase = 0.0;
    for (std::size_t k = 1; k < out.size(); ++k) {
        phase += sigma * rng.normal();
        out[k] *= std::polar(1.0, phase);
    }
    return out;
}

double rapp_amplitude(double amplitude, double saturation, double smoothness)
{
    const double two_p = 2.0 * smoothness;
    const double r = amplitude / saturation;
    // Above saturation, divide through by r so the power cannot overflow.
    if (r > 1.0)
        return saturation / std::pow(1.0 + std::pow(r, -two_p), 1.0 / two_p);
    return amplitude / std::pow(1.0 + std::pow(r, two_p), 1.0 / two_p);
}

ComplexBuffer apply_pa(std::span<const cdouble> x, const ImpairmentSpec &imp)
{
    imp.validate();
    ComplexBuffer out(x.begin(), x.end());
    if (imp.pa_model == PaModel::None || out.empty())
        return out;
    const double rms = std::sqrt(mean_power(x));
    if (rms == 0.0)
        return out;
    const double saturation = rms * std::pow(10.0, imp.pa_ibo_db / 20.0);
    for (auto &v : out) {
        const double a = std::abs(v);
        if (a > 0.0)
            v *= rapp_amplitude(a, saturation, imp.pa_smoothness) / a;
    }
    return out;
}

} // namespace isac
