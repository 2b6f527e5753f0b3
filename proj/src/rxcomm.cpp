// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "isac/rxcomm.hpp"

#include "isac/errors.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace isac {

namespace {

double norm2(std::span<const cdouble> v) { return energy(v); }


} // namespace

Grid synthesize_adjoint(std::span<const cdouble> samples, const WaveformConfig &cfg)
{
    const std::size_t m = cfg.subcarriers;
    const std::size_t cp = cfg.cp_len;
    const std::size_t sym = m + cp;
    if (samples.size() != cfg.frame_length())
        throw SizeError("synthesize_adjoint: length mismatch");

    TFGrid tf(m, cfg.symbols);
    for (std::size_t n = 0; n < cfg.symbols; ++n) {
        auto col = tf.column(n);
        const cdouble *src = samples.data() + n * sym;
        for (std::size_t i = 0; i < m; ++i)
            col[i] = src[cp + i];
        // The prefix repeats the last cp body samples.
        for (std::size_t i = 0; i < cp; ++i)
            col[m - cp + i] += src[i];
        fft_inplace(col, false);
    }
    if (is_delay_doppler(cfg.kind))
        return sfft(tf);
    return tf;
}

ComplexBuffer analyze_adjoint(const Grid &placement, const WaveformConfig &cfg)
{
    const std::size_t m = cfg.subcarriers;
    const std::size_t cp = cfg.cp_len;
    const TFGrid tf = is_delay_doppler(cfg.kind) ? isfft(DDGrid(placement)) : TFGrid(placement);
    ComplexBuffer out(cfg.frame_length());
    std::vector<cdouble> body(m);
    for (std::size_t n = 0; n < cfg.symbols; ++n) {
        auto col = tf.column(n);
        std::copy(col.begin(), col.end(), body.begin());
        fft_inplace(body, true);
        std::copy(body.begin(), body.end(), out.begin() + static_cast<long>(n * (m + cp) + cp));
    }
    return out;
}

ChannelOperator::ChannelOperator(std::vector<PathSpec> paths, const WaveformConfig &cfg)
    : cfg_(cfg), kernel_(std::move(paths), cfg.frame_length(), cfg.sample_rate())
{
}

Grid ChannelOperator::apply(const Grid &x) const
{
    if (x.rows() != cfg_.subcarriers || x.cols() != cfg_.symbols)
        throw SizeError("ChannelOperator::apply: grid shape mismatch");
    return analyze(kernel_.apply(synthesize(x, cfg_)), cfg_);
}

Grid ChannelOperator::adjoint(const Grid &y) const
{
    if (y.rows() != cfg_.subcarriers || y.cols() != cfg_.symbols)
        throw SizeError("ChannelOperator::adjoint: grid shape mismatch");
    return synthesize_adjoint(kernel_.adjoint(analyze_adjoint(y, cfg_)), cfg_);
}

TFGrid tf_channel_response(const std::vector<PathSpec> &paths, const WaveformConfig &cfg)
{
    const double fs = cfg.sample_rate();
    const std::size_t m_count = cfg.subcarriers;
    TFGrid h(m_count, cfg.symbols);
    for (const PathSpec &p : paths) {
        cdouble in_symbol{0.0, 0.0};
        for (std::size_t i = 0; i < m_count; ++i)
            in_symbol += std::polar(1.0, 2.0 * kPi * p.doppler_hz * static_cast<double>(i) / fs);
        in_symbol /= static_cast<double>(m_count);
        for (std::size_t n = 0; n < cfg.symbols; ++n) {
            const double t0 = static_cast<double>(n * cfg.symbol_length() + cfg.cp_len) / fs;
            const cdouble time_term = p.gain * std::polar(1.0, 2.0 * kPi * p.doppler_hz * t0) * in_symbol;
            for (std::size_t m = 0; m < m_count; ++m) {
                const double f = static_cast<double>(signed_bin(m, m_count)) * cfg.subcarrier_spacing_hz;
                h(m, n) += time_term * std::polar(1.0, -2.0 * kPi * f * p.delay_s);
            }
        }
    }
    return h;
}

OneTapResult equalize_onetap(const Grid &rx, const Grid &known_channel, double snr_linear)
{
    if (!rx.same_shape(known_channel))
        throw SizeError("equalize_onetap: channel grid shape mismatch");
    OneTapResult out{Grid(rx.rows(), rx.cols()), std::vector<std::uint8_t>(rx.size(), 0)};
    const double bias = std::isinf(snr_linear) ? 0.0 : 1.0 / snr_linear;
    auto src = rx.values();
    auto h = known_channel.values();
    auto dst = out.equalized.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double denom = std::norm(h[i]) + bias;
        if (denom == 0.0) {
            out.excluded[i] = 1;
            continue;
        }
        dst[i] = src[i] * std::conj(h[i]) / denom;
    }
    return out;
}

LsResult equalize_iterative_ls(const Grid &rx, const ChannelOperator &op, const LsOptions &options)
{
    const WaveformConfig &cfg = op.config();
    if (rx.rows() != cfg.subcarriers || rx.cols() != cfg.symbols)
        throw SizeError("equalize_iterative_ls: grid shape mismatch");
    const double lambda = options.regularization;

    LsResult res;
    res.estimate = Grid(rx.rows(), rx.cols());
    const double y_norm = std::sqrt(norm2(rx.values()));
    if (y_norm == 0.0) {
        res.converged = true;
        return res;
    }

    Grid r = rx;
    Grid s = op.adjoint(r);
    const double s0_norm = std::sqrt(norm2(s.values()));
    if (s0_norm == 0.0)
        throw NumericError("equalize_iterative_ls: received grid lies in the operator's null space");
    Grid p = s;
    double gamma = norm2(s.values());
    double last_objective = norm2(r.values());
    int increases = 0;

    auto x = res.estimate.values();
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        const Grid q = op.apply(p);
        const double delta = norm2(q.values()) + lambda * norm2(p.values());
        if (!(delta > 0.0) || !std::isfinite(delta))
            throw NumericError("equalize_iterative_ls: breakdown at iteration " + std::to_string(it));
        const double alpha = gamma / delta;

        auto pv = p.values();
        auto qv = q.values();
        auto rv = r.values();
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += alpha * pv[i];
            rv[i] -= alpha * qv[i];
        }

        s = op.adjoint(r);
        auto sv = s.values();
        if (lambda != 0.0)
            for (std::size_t i = 0; i < sv.size(); ++i)
                sv[i] -= lambda * x[i];
        const double gamma_next = norm2(sv);

        res.iterations = it;
        res.residual = std::sqrt(norm2(rv)) / y_norm;
        res.normal_residual = std::sqrt(gamma_next) / s0_norm;
        res.residual_history.push_back(res.residual);

        const double objective = norm2(rv) + lambda * norm2(x);
        if (objective > last_objective * (1.0 + 1e-12)) {
            if (++increases >= 3) {
                char msg[200];
                std::snprintf(msg, sizeof msg,
                              "equalize_iterative_ls diverged: objective rose 3 iterations running "
                              "(iteration %zu, residual %.3e, normal residual %.3e)",
                              it, res.residual, res.normal_residual);
                throw NumericError(msg);
            }
        } else {
            increases = 0;
        }
        last_objective = objective;

        if (!std::isfinite(res.residual))
            throw NumericError("equalize_iterative_ls: non-finite residual");
        if (res.residual < options.tolerance || res.normal_residual < options.tolerance) {
            res.converged = true;
            break;
        }

        const double beta = gamma_next / gamma;
        for (std::size_t i = 0; i < pv.size(); ++i)
            pv[i] = sv[i] + beta * pv[i];
        gamma = gamma_next;
    }
    return res;
}

DetectionResult detect_bits(const Grid &symbols, const WaveformConfig &cfg, const PilotMask &mask,
                            std::span<const std::uint8_t> reference, std::span<const std::uint8_t> excluded)
{
    if (symbols.rows() != cfg.subcarriers || symbols.cols() != cfg.symbols)
        throw SizeError("detect_bits: grid shape mismatch");
    const bool has_mask = mask.rows() != 0;
    if (has_mask && (mask.rows() != cfg.subcarriers || mask.cols() != cfg.symbols))
        throw SizeError("detect_bits: mask shape mismatch");
    if (!excluded.empty() && excluded.size() != symbols.size())
        throw SizeError("detect_bits: exclusion flags shape mismatch");

    const std::size_t k = static_cast<std::size_t>(bits_per_symbol(cfg.mod_order));
    ComplexBuffer data;
    std::vector<std::uint8_t> skip;
    for (std::size_t n = 0; n < cfg.symbols; ++n)
        for (std::size_t m = 0; m < cfg.subcarriers; ++m) {
            if (has_mask && mask(m, n))
                continue;
            data.push_back(symbols(m, n));
            skip.push_back(excluded.empty() ? 0 : excluded[n * cfg.subcarriers + m]);
        }

    DetectionResult out;
    out.bits = qam_demap(data, cfg.mod_order);
    if (reference.size() != out.bits.size())
        throw SizeError("detect_bits: reference has " + std::to_string(reference.size()) + " bits, frame carries " +
                        std::to_string(out.bits.size()));
    for (std::size_t i = 0; i < out.bits.size(); ++i) {
        if (skip[i / k])
            continue;
        ++out.bits_compared;
        out.bit_errors += out.bits[i] != reference[i] ? 1 : 0;
    }
    out.ber = out.bits_compared == 0 ? 0.0
                                     : static_cast<double>(out.bit_errors) / static_cast<double>(out.bits_compared);
    return out;
}

DetectionResult receive(std::span<const cdouble> samples, const Frame &reference,
                        const std::vector<PathSpec> &paths, const ReceiverOptions &options)
{
    const WaveformConfig &cfg = reference.config;
    const Grid placement = analyze(samples, cfg);

    Grid equalized;
    std::vector<std::uint8_t> excluded;
    if (options.equalizer == Equalizer::OneTap) {
        if (is_delay_doppler(cfg.kind))
            throw ParameterError("one-tap equalization needs a time-frequency waveform");
        const double snr = options.noise_variance > 0.0 ? 1.0 / options.noise_variance
                                                        : std::numeric_limits<double>::infinity();
        OneTapResult eq = equalize_onetap(placement, tf_channel_response(paths, cfg), snr);
        equalized = std::move(eq.equalized);
        // Zeroed REs spread over the whole column once de-spread.
        if (cfg.kind == WaveformKind::Ofdm)
            excluded = std::move(eq.excluded);
    } else {
        const ChannelOperator op(paths, cfg);
        LsOptions ls = options.ls;
        ls.regularization = options.noise_variance;
        equalized = equalize_iterative_ls(placement, op, ls).estimate;
    }
    const Grid symbols = deprecode(equalized, cfg, reference.pilot_mask);
    return detect_bits(symbols, cfg, reference.pilot_mask, reference.payload_bits, excluded);
}

} // namespace isac
