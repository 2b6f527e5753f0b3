// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "isac/metrics.hpp"

#include "isac/errors.hpp"
#include "isac/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace isac {

ComplexBuffer interpolate(std::span<const cdouble> x, std::size_t factor)
{
    if (!is_power_of_two(factor))
        throw ParameterError("oversampling factor must be a power of two");
    if (factor == 1)
        return ComplexBuffer(x.begin(), x.end());

    const std::size_t len = x.size();
    const ComplexBuffer spec = dft(x, false);
    ComplexBuffer padded(len * factor);
    const std::size_t half = len / 2;
    if (len % 2 == 0) {
        for (std::size_t k = 0; k < half; ++k)
            padded[k] = spec[k];
        for (std::size_t k = half + 1; k < len; ++k)
            padded[padded.size() - len + k] = spec[k];
        padded[half] = 0.5 * spec[half];
        padded[padded.size() - half] = 0.5 * spec[half];
    } else {
        for (std::size_t k = 0; k <= half; ++k)
            padded[k] = spec[k];
        for (std::size_t k = half + 1; k < len; ++k)
            padded[padded.size() - len + k] = spec[k];
    }
    ComplexBuffer out = dft(padded, true);
    const double scale = std::sqrt(static_cast<double>(factor));
    for (auto &v : out)
        v *= scale;
    return out;
}

double papr_db(std::span<const cdouble> x, std::size_t oversample)
{
    require_finite(x, "papr_db");
    const ComplexBuffer y = interpolate(x, oversample);
    double peak = 0.0;
    double total = 0.0;
    for (const auto &v : y) {
        const double p = std::norm(v);
        peak = std::max(peak, p);
        total += p;
    }
    if (total == 0.0)
        throw NumericError("papr_db: zero-energy buffer");
    return 10.0 * std::log10(peak / (total / static_cast<double>(y.size())));
}

std::vector<double> ccdf_axis()
{
    std::vector<double> axis(141);
    for (std::size_t i = 0; i < axis.size(); ++i)
        axis[i] = static_cast<double>(i) / 10.0;
    return axis;
}

CcdfCurve ccdf_from_samples(std::vector<double> papr_samples_db)
{
    CcdfCurve curve;
    curve.papr_axis_db = ccdf_axis();
    std::sort(papr_samples_db.begin(), papr_samples_db.end());
    curve.frames = papr_samples_db.size();
    curve.probability.resize(curve.papr_axis_db.size());
    for (std::size_t i = 0; i < curve.papr_axis_db.size(); ++i) {
        const auto above = papr_samples_db.end() -
                           std::upper_bound(papr_samples_db.begin(), papr_samples_db.end(), curve.papr_axis_db[i]);
        curve.probability[i] = curve.frames == 0 ? 0.0 : static_cast<double>(above) / static_cast<double>(curve.frames);
    }
    curve.papr_samples_db = std::move(papr_samples_db);
    return curve;
}

CcdfCurve ccdf(const WaveformConfig &cfg, std::size_t frames, std::size_t oversample, std::uint64_t seed,
               std::size_t workers)
{
    cfg.validate();
    const Pilots no_pilots = make_pilots(cfg, PilotScheme::None);
    const std::size_t nbits = data_bit_capacity(cfg, no_pilots.mask);
    std::vector<double> values(frames);
    parallel_for(frames, workers, [&](std::size_t i) {
        Rng rng(Rng::derive_seed(seed, i));
        const Bits bits = rng.bits(nbits);
        const Frame frame = modulate(bits, no_pilots, cfg);
        const ComplexBuffer body = strip_cyclic_prefix(frame.samples, cfg.subcarriers, cfg.cp_len);
        values[i] = papr_db(body, oversample);
    });
    return ccdf_from_samples(std::move(values));
}

double papr_at_probability(const CcdfCurve &curve, double probability)
{
    const auto &s = curve.papr_samples_db;
    if (s.empty())
        throw SizeError("papr_at_probability: empty curve");
    if (!(probability > 0.0 && probability < 1.0))
        throw ParameterError("probability must lie in (0, 1)");
    const double pos = (1.0 - probability) * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, s.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return s[lo] + frac * (s[hi] - s[lo]);
}

double evm_db(std::span<const cdouble> ref, std::span<const cdouble> meas)
{
    if (ref.size() != meas.size())
        throw SizeError("evm_db: dimension mismatch");
    double err = 0.0;
    double sig = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        err += std::norm(meas[i] - ref[i]);
        sig += std::norm(ref[i]);
    }
    if (sig == 0.0)
        throw NumericError("evm_db: zero-energy reference");
    if (err == 0.0)
        return kEvmFloorDb;
    return std::max(kEvmFloorDb, 10.0 * std::log10(err / sig));
}

double evm_db(const Grid &ref, const Grid &meas)
{
    if (!ref.same_shape(meas))
        throw SizeError("evm_db: grid shape mismatch");
    return evm_db(ref.values(), meas.values());
}

std::vector<double> psd(std::span<const cdouble> x, std::size_t segments)
{
    if (segments == 0)
        throw ParameterError("psd: segments must be >= 1");
    const std::size_t len = x.size() / segments;
    if (len < 2)
        throw SizeError("psd: segments too short");

    std::vector<double> window(len);
    double window_energy = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(len));
        window_energy += window[i] * window[i];
    }

    std::vector<double> out(len, 0.0);
    ComplexBuffer seg(len);
    for (std::size_t s = 0; s < segments; ++s) {
        for (std::size_t i = 0; i < len; ++i)
            seg[i] = x[s * len + i] * window[i];
        // The unitary DFT carries a 1/len factor in |X|^2; undo it.
        const ComplexBuffer spec = dft(seg, false);
        for (std::size_t k = 0; k < len; ++k)
            out[k] += std::norm(spec[k]) * static_cast<double>(len) / window_energy;
    }
    for (auto &v : out)
        v /= static_cast<double>(segments);
    return out;
}

} // namespace isac
