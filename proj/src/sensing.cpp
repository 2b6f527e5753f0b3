// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "isac/sensing.hpp"

#include "isac/errors.hpp"
#include "isac/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace isac {

std::string_view to_string(SensingMethod method)
{
    switch (method) {
    case SensingMethod::OfdmRadar: return "ofdm-radar";
    case SensingMethod::PilotBased: return "pilot";
    case SensingMethod::DdAmbiguity: return "dd-ambiguity";
    }
    return "?";
}

SensingMethod sensing_method_for(WaveformKind kind)
{
    switch (kind) {
    case WaveformKind::Ofdm: return SensingMethod::OfdmRadar;
    case WaveformKind::DftSOfdm: return SensingMethod::PilotBased;
    case WaveformKind::Otfs:
    case WaveformKind::DftSOtfs: return SensingMethod::DdAmbiguity;
    }
    return SensingMethod::OfdmRadar;
}

PilotScheme sensing_pilots_for(WaveformKind kind)
{
    return kind == WaveformKind::DftSOfdm ? PilotScheme::DedicatedSymbol : PilotScheme::None;
}

double range_resolution(const WaveformConfig &cfg)
{
    return kSpeedOfLight / (2.0 * static_cast<double>(cfg.subcarriers) * cfg.subcarrier_spacing_hz);
}

namespace {

// Vertex offset of the parabola through (-1, left), (0, mid), (1, right).
double parabolic_offset(double left, double mid, double right)
{
    const double denom = left - 2.0 * mid + right;
    if (!(denom < 0.0))
        return 0.0;
    return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

long wrap_signed(std::size_t index, std::size_t length)
{
    return index <= length / 2 ? static_cast<long>(index) : static_cast<long>(index) - static_cast<long>(length);
}

struct SurfacePeak {
    double delay_cells = 0.0;     // in units of coarse delay bins
    double doppler_cells = 0.0;   // in units of coarse Doppler bins
    double peak_power = 0.0;
    double mean_power = 0.0;
};

/**
 * Zero-padded delay-Doppler periodogram of per-RE channel ratios h (rows:
 * frequency in DFT order, columns: time). Subcarriers are re-ordered from
 * -R/2 to R/2-1 before the delay transform so a fractional delay is a
 * continuous phase ramp.
 */
SurfacePeak periodogram_peak(const Grid &h, std::size_t pad)
{
    const std::size_t rows = h.rows();
    const std::size_t cols = h.cols();
    const std::size_t pd = pad * rows;
    const std::size_t pv = cols > 1 ? pad * cols : 1;

    // Column-major delay profiles, pd x cols.
    std::vector<cdouble> profiles(pd * cols);
    ComplexBuffer buf(pd);
    for (std::size_t c = 0; c < cols; ++c) {
        std::fill(buf.begin(), buf.end(), cdouble{});
        for (std::size_t j = 0; j < rows; ++j)
            buf[j] = h((j + rows / 2) % rows, c);
        const ComplexBuffer prof = dft(buf, true);
        std::copy(prof.begin(), prof.end(), profiles.begin() + static_cast<long>(c * pd));
    }

    // Row-major surface, pd x pv.
    std::vector<double> power(pd * pv);
    ComplexBuffer row(pv);
    for (std::size_t d = 0; d < pd; ++d) {
        if (pv == 1) {
            power[d] = std::norm(profiles[d]);
            continue;
        }
        std::fill(row.begin(), row.end(), cdouble{});
        for (std::size_t c = 0; c < cols; ++c)
            row[c] = profiles[c * pd + d];
        const ComplexBuffer spec = dft(row, false);
        for (std::size_t k = 0; k < pv; ++k)
            power[d * pv + k] = std::norm(spec[k]);
    }

    const auto best = static_cast<std::size_t>(std::max_element(power.begin(), power.end()) - power.begin());
    const std::size_t d0 = best / pv;
    const std::size_t k0 = best % pv;
    auto mag = [&](std::size_t d, std::size_t k) { return std::sqrt(power[d * pv + k]); };

    SurfacePeak peak;
    peak.peak_power = power[best];
    double total = 0.0;
    for (double p : power)
        total += p;
    peak.mean_power = total / static_cast<double>(power.size());

    const double dd = parabolic_offset(mag((d0 + pd - 1) % pd, k0), mag(d0, k0), mag((d0 + 1) % pd, k0));
    peak.delay_cells = (static_cast<double>(wrap_signed(d0, pd)) + dd) / static_cast<double>(pad);
    if (pv > 1) {
        const double dk = parabolic_offset(mag(d0, (k0 + pv - 1) % pv), mag(d0, k0), mag(d0, (k0 + 1) % pv));
        peak.doppler_cells = (static_cast<double>(wrap_signed(k0, pv)) + dk) / static_cast<double>(pad);
    }
    return peak;
}

double peak_snr_db(const SurfacePeak &p)
{
    return p.mean_power > 0.0 ? 10.0 * std::log10(p.peak_power / p.mean_power) : 0.0;
}

void finish(SensingEstimate &est, const WaveformConfig &cfg)
{
    est.range_m = std::max(0.0, kSpeedOfLight * est.delay_s / 2.0);
    est.velocity_mps = kSpeedOfLight * est.doppler_hz / (2.0 * cfg.carrier_hz);
}

void require_pad(std::size_t zero_pad)
{
    if (zero_pad == 0)
        throw ParameterError("zero-padding factor must be positive");
}

// Evenly spaced indices [first, first + step, ...]; step 0 for one element.
bool arithmetic(const std::vector<std::size_t> &v, std::size_t &step)
{
    step = v.size() > 1 ? v[1] - v[0] : 1;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] - v[i - 1] != step)
            return false;
    return true;
}

} // namespace

SensingEstimate estimate_ofdm_radar(const TFGrid &tx, const TFGrid &rx, const WaveformConfig &cfg,
                                    std::size_t zero_pad)
{
    require_pad(zero_pad);
    if (!tx.same_shape(rx) || tx.rows() != cfg.subcarriers || tx.cols() != cfg.symbols)
        throw SizeError("estimate_ofdm_radar: grid shapes do not match the configuration");

    Grid ratio(tx.rows(), tx.cols());
    for (std::size_t n = 0; n < tx.cols(); ++n)
        for (std::size_t m = 0; m < tx.rows(); ++m) {
            if (tx(m, n) == cdouble{})
                throw ParameterError("estimate_ofdm_radar: transmit RE (" + std::to_string(m) + ", " +
                                     std::to_string(n) + ") is zero; point-wise division undefined");
            ratio(m, n) = rx(m, n) / tx(m, n);
        }

    const SurfacePeak p = periodogram_peak(ratio, zero_pad);
    SensingEstimate est;
    est.method = SensingMethod::OfdmRadar;
    est.delay_s = p.delay_cells / cfg.sample_rate();
    est.doppler_hz = p.doppler_cells / (static_cast<double>(cfg.symbols) * cfg.symbol_period());
    est.peak_snr_db = peak_snr_db(p);
    finish(est, cfg);
    return est;
}

SensingEstimate estimate_pilot_based(const TFGrid &rx, const PilotMask &mask, std::span<const cdouble> pilot_values,
                                     const WaveformConfig &cfg, std::size_t zero_pad)
{
    require_pad(zero_pad);
    if (rx.rows() != cfg.subcarriers || rx.cols() != cfg.symbols || mask.rows() != rx.rows() ||
        mask.cols() != rx.cols())
        throw SizeError("estimate_pilot_based: grid or mask shape mismatch");
    const std::size_t count = mask.count();
    if (count == 0)
        throw ParameterError("estimate_pilot_based: empty pilot mask");
    if (pilot_values.size() != count)
        throw SizeError("estimate_pilot_based: pilot value count does not match the mask");

    std::vector<std::size_t> cols;
    std::vector<std::size_t> rows;
    for (std::size_t n = 0; n < mask.cols(); ++n)
        if (mask.column_has_pilot(n))
            cols.push_back(n);
    for (std::size_t m = 0; m < mask.rows(); ++m)
        if (mask(m, cols.front()))
            rows.push_back(m);
    std::size_t row_step = 1;
    std::size_t col_step = 1;
    if (rows.size() * cols.size() != count || !arithmetic(rows, row_step) || !arithmetic(cols, col_step))
        throw ParameterError("estimate_pilot_based: pilots must form a regular lattice");

    Grid ratio(rows.size(), cols.size());
    std::size_t next = 0;
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!mask(rows[i], cols[j]))
                throw ParameterError("estimate_pilot_based: pilots must form a regular lattice");
            const cdouble pilot = pilot_values[next++];
            if (pilot == cdouble{})
                throw ParameterError("estimate_pilot_based: zero pilot value");
            ratio(i, j) = rx(rows[i], cols[j]) / pilot;
        }

    const SurfacePeak p = periodogram_peak(ratio, zero_pad);
    SensingEstimate est;
    est.method = SensingMethod::PilotBased;
    const double freq_step = cfg.subcarrier_spacing_hz * static_cast<double>(row_step);
    est.delay_s = p.delay_cells / (static_cast<double>(rows.size()) * freq_step);
    if (cols.size() > 1) {
        const double time_step = cfg.symbol_period() * static_cast<double>(col_step);
        est.doppler_hz = p.doppler_cells / (static_cast<double>(cols.size()) * time_step);
    } else {
        est.velocity_valid = false;
    }
    est.peak_snr_db = peak_snr_db(p);
    finish(est, cfg);
    return est;
}

SensingEstimate estimate_dd_ambiguity(std::span<const cdouble> tx_frame, std::span<const cdouble> rx_frame,
                                      const WaveformConfig &cfg, std::size_t zero_pad)
{
    require_pad(zero_pad);
    if (tx_frame.size() != rx_frame.size() || tx_frame.empty())
        throw SizeError("estimate_dd_ambiguity: frames must have equal, non-zero length");

    const std::size_t len = tx_frame.size();
    const double fs = cfg.sample_rate();
    const ComplexBuffer tx_spec = dft(tx_frame, false);
    const ComplexBuffer rx_spec = dft(rx_frame, false);

    // Coarse: Doppler steps of fs/L are circular shifts of the rx spectrum.
    const long doppler_span = static_cast<long>(std::floor(cfg.subcarrier_spacing_hz / 2.0 / (fs / static_cast<double>(len))));
    double best_power = -1.0;
    double total_power = 0.0;
    std::size_t cells = 0;
    long best_shift = 0;
    std::size_t best_lag = 0;
    ComplexBuffer product(len);
    for (long j = -doppler_span; j <= doppler_span; ++j) {
        for (std::size_t f = 0; f < len; ++f) {
            const std::size_t src = static_cast<std::size_t>((static_cast<long>(f) + j + static_cast<long>(len)) %
                                                             static_cast<long>(len));
            product[f] = rx_spec[src] * std::conj(tx_spec[f]);
        }
        const ComplexBuffer corr = dft(product, true);
        for (std::size_t lag = 0; lag < len; ++lag) {
            const double p = std::norm(corr[lag]);
            total_power += p;
            ++cells;
            if (p > best_power) {
                best_power = p;
                best_shift = j;
                best_lag = lag;
            }
        }
    }

    // Fine: zero-padded surface over +-1 coarse cell, evaluated directly.
    const long half = static_cast<long>(zero_pad);
    const std::size_t span = 2 * zero_pad + 1;
    std::vector<std::vector<cdouble>> lag_kernels(span, std::vector<cdouble>(len));
    for (std::size_t b = 0; b < span; ++b) {
        const double lag = static_cast<double>(best_lag) +
                           static_cast<double>(static_cast<long>(b) - half) / static_cast<double>(zero_pad);
        for (std::size_t f = 0; f < len; ++f) {
            if (len % 2 == 0 && f == len / 2) {
                lag_kernels[b][f] = std::cos(kPi * lag);
                continue;
            }
            const double turns = static_cast<double>(signed_bin(f, len)) * lag / static_cast<double>(len);
            lag_kernels[b][f] = std::polar(1.0, 2.0 * kPi * (turns - std::round(turns)));
        }
    }

    std::vector<double> fine(span * span);   // [doppler a][lag b]
    ComplexBuffer shifted(len);
    for (std::size_t a = 0; a < span; ++a) {
        const double cycles = (static_cast<double>(best_shift) +
                               static_cast<double>(static_cast<long>(a) - half) / static_cast<double>(zero_pad)) /
                              static_cast<double>(len);
        for (std::size_t k = 0; k < len; ++k) {
            const double turns = cycles * static_cast<double>(k);
            shifted[k] = rx_frame[k] * std::polar(1.0, -2.0 * kPi * (turns - std::round(turns)));
        }
        const ComplexBuffer spec = dft(shifted, false);
        for (std::size_t f = 0; f < len; ++f)
            product[f] = spec[f] * std::conj(tx_spec[f]);
        for (std::size_t b = 0; b < span; ++b) {
            cdouble acc{};
            const auto &kern = lag_kernels[b];
            for (std::size_t f = 0; f < len; ++f)
                acc += product[f] * kern[f];
            fine[a * span + b] = std::abs(acc);
        }
    }

    const auto best = static_cast<std::size_t>(std::max_element(fine.begin(), fine.end()) - fine.begin());
    const std::size_t a0 = best / span;
    const std::size_t b0 = best % span;
    double da = 0.0;
    double db = 0.0;
    if (a0 > 0 && a0 + 1 < span)
        da = parabolic_offset(fine[(a0 - 1) * span + b0], fine[best], fine[(a0 + 1) * span + b0]);
    if (b0 > 0 && b0 + 1 < span)
        db = parabolic_offset(fine[a0 * span + b0 - 1], fine[best], fine[a0 * span + b0 + 1]);

    const double lag = static_cast<double>(wrap_signed(best_lag, len)) +
                       (static_cast<double>(static_cast<long>(b0) - half) + db) / static_cast<double>(zero_pad);
    const double shift = static_cast<double>(best_shift) +
                         (static_cast<double>(static_cast<long>(a0) - half) + da) / static_cast<double>(zero_pad);

    SensingEstimate est;
    est.method = SensingMethod::DdAmbiguity;
    est.delay_s = lag / fs;
    est.doppler_hz = shift * fs / static_cast<double>(len);
    const double mean = total_power / static_cast<double>(cells);
    est.peak_snr_db = mean > 0.0 ? 10.0 * std::log10(best_power / mean) : 0.0;
    finish(est, cfg);
    return est;
}

SensingEstimate sense_once(const WaveformConfig &cfg, const SensingScenario &scenario, double snr_db,
                           std::uint64_t trial_seed, const SensingTrialOptions &options)
{
    Rng payload_rng(trial_seed, 0);
    Rng noise_rng(trial_seed, 1);
    Rng phase_rng(trial_seed, 2);

    const Pilots pilots = make_pilots(cfg, sensing_pilots_for(cfg.kind));
    const Bits bits = payload_rng.bits(data_bit_capacity(cfg, pilots.mask));
    const Frame frame = modulate(bits, pilots, cfg);

    PathSpec echo = scenario_to_path(scenario, cfg.carrier_hz);
    echo.gain *= std::polar(1.0, 2.0 * kPi * phase_rng.uniform());
    const ChannelSpec channel{{echo}, snr_db};
    ComplexBuffer rx = apply_channel(frame.samples, channel, cfg.sample_rate(), noise_rng, cfg.cp_len).samples;
    if (options.phase_noise)
        rx = apply_phase_noise(rx, options.impairments, cfg.carrier_hz, cfg.sample_rate(), phase_rng);

    switch (sensing_method_for(cfg.kind)) {
    case SensingMethod::OfdmRadar:
        return estimate_ofdm_radar(frame.tf_grid,
                                   ofdm_demodulate(rx, cfg.subcarriers, cfg.symbols, cfg.cp_len), cfg,
                                   options.zero_pad);
    case SensingMethod::PilotBased:
        return estimate_pilot_based(ofdm_demodulate(rx, cfg.subcarriers, cfg.symbols, cfg.cp_len), pilots.mask,
                                    pilots.values, cfg, options.zero_pad);
    case SensingMethod::DdAmbiguity:
        return estimate_dd_ambiguity(frame.samples, rx, cfg, options.zero_pad);
    }
    throw ParameterError("unsupported waveform for sensing");
}

RmseRow run_rmse_trials(const WaveformConfig &cfg, const SensingScenario &scenario, double snr_db,
                        std::size_t trials, std::uint64_t seed, const SensingTrialOptions &options)
{
    cfg.validate();
    if (trials < 100)
        throw ParameterError("run_rmse_trials: at least 100 trials required, got " + std::to_string(trials));
    if (!(scenario.range_m > 0.0))
        throw ParameterError("target range must be positive");

    std::vector<SensingEstimate> estimates(trials);
    parallel_for(trials, options.workers, [&](std::size_t i) {
        estimates[i] = sense_once(cfg, scenario, snr_db, Rng::derive_seed(seed, i), options);
    });

    RmseRow row;
    row.kind = cfg.kind;
    row.subcarriers = cfg.subcarriers;
    row.symbols = cfg.symbols;
    row.snr_db = snr_db;
    row.trials = trials;

    const double bin = range_resolution(cfg);
    double range_sum = 0.0;
    double range_sq = 0.0;
    double vel_sum = 0.0;
    double vel_sq = 0.0;
    std::size_t vel_count = 0;
    for (const SensingEstimate &e : estimates) {
        const double err = e.range_m - scenario.range_m;
        range_sum += e.range_m;
        range_sq += err * err;
        if (std::abs(err) > bin)
            ++row.outliers;
        if (e.velocity_valid) {
            const double verr = e.velocity_mps - scenario.velocity_mps;
            vel_sum += e.velocity_mps;
            vel_sq += verr * verr;
            ++vel_count;
        }
    }
    const double n = static_cast<double>(trials);
    row.range_mean_m = range_sum / n;
    row.range_rmse_m = std::sqrt(range_sq / n);
    if (vel_count > 0) {
        row.velocity_mean_mps = vel_sum / static_cast<double>(vel_count);
        row.velocity_rmse_mps = std::sqrt(vel_sq / static_cast<double>(vel_count));
    } else {
        row.velocity_mean_mps = std::numeric_limits<double>::quiet_NaN();
        row.velocity_rmse_mps = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

} // namespace isac
