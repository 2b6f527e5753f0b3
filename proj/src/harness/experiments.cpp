// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "isac/harness/experiments.hpp"

#include "isac/metrics.hpp"
#include "isac/parallel.hpp"
#include "isac/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <set>

namespace isac::harness {

namespace {

constexpr double kNoSnr = std::numeric_limits<double>::quiet_NaN();

std::string grid_label(const WaveformConfig &wf)
{
    return std::string(to_string(wf.kind)) + " " + std::to_string(wf.subcarriers) + "x" + std::to_string(wf.symbols);
}

std::string fmt(const char *format, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

struct Emitter {
    const ExperimentConfig &cfg;
    RunResult &result;

    void operator()(const WaveformConfig &wf, double snr, std::string metric, double value)
    {
        result.records.push_back(TrialRecord{std::string(to_string(cfg.experiment)), std::string(to_string(wf.kind)),
                                             wf.subcarriers, wf.symbols, snr, cfg.seed, std::move(metric), value});
    }
};

void run_papr(const ExperimentConfig &cfg, std::size_t workers, RunResult &result)
{
    Emitter emit{cfg, result};
    for (WaveformKind kind : cfg.waveforms)
        for (std::size_t g = 0; g < cfg.subcarriers.size(); ++g) {
            const WaveformConfig wf = cfg.waveform(kind, g);
            std::string line = "papr " + grid_label(wf);
            for (std::size_t os : cfg.oversample) {
                const CcdfCurve curve = ccdf(wf, cfg.trials, os, cfg.seed, workers);
                for (std::size_t i = 0; i < curve.papr_axis_db.size(); ++i)
                    emit(wf, kNoSnr, ccdf_metric_name(os, curve.papr_axis_db[i]), curve.probability[i]);
                const double p3 = papr_at_probability(curve, 1e-3);
                emit(wf, kNoSnr, "papr_at_1e-3_os" + std::to_string(os), p3);
                line += "  os" + std::to_string(os) + " PAPR@1e-3 " + fmt("%.3f", p3) + " dB";
            }
            result.summary.push_back(line);
        }
}

void run_sense(const ExperimentConfig &cfg, std::size_t workers, RunResult &result)
{
    Emitter emit{cfg, result};
    SensingTrialOptions opts;
    opts.phase_noise = cfg.phase_noise;
    opts.impairments = cfg.impairments;
    opts.workers = workers;
    for (WaveformKind kind : cfg.waveforms)
        for (std::size_t g = 0; g < cfg.subcarriers.size(); ++g) {
            const WaveformConfig wf = cfg.waveform(kind, g);
            for (double snr : cfg.snr_db) {
                const RmseRow row = run_rmse_trials(wf, cfg.scenario, snr, cfg.trials, cfg.seed, opts);
                emit(wf, snr, "range_rmse_m", row.range_rmse_m);
                emit(wf, snr, "range_mean_m", row.range_mean_m);
                emit(wf, snr, "velocity_rmse_mps", row.velocity_rmse_mps);
                emit(wf, snr, "velocity_mean_mps", row.velocity_mean_mps);
                emit(wf, snr, "outliers", static_cast<double>(row.outliers));
                result.summary.push_back("sense " + grid_label(wf) + fmt(" snr %.1f dB", snr) +
                                         fmt("  range RMSE %.3f mm", row.range_rmse_m * 1e3) +
                                         fmt("  velocity RMSE %.3f m/s", row.velocity_rmse_mps) +
                                         "  outliers " + std::to_string(row.outliers));
            }
        }
}

void run_ber(const ExperimentConfig &cfg, std::size_t workers, RunResult &result)
{
    Emitter emit{cfg, result};
    std::mutex warn_mutex;
    for (WaveformKind kind : cfg.waveforms)
        for (std::size_t g = 0; g < cfg.subcarriers.size(); ++g) {
            const WaveformConfig wf = cfg.waveform(kind, g);
            for (double snr : cfg.snr_db) {
                std::vector<std::size_t> errors(cfg.trials);
                std::vector<std::size_t> compared(cfg.trials);
                std::vector<std::string> warnings;
                parallel_for(cfg.trials, workers, [&](std::size_t i) {
                    std::vector<std::string> local;
                    const DetectionResult d = ber_frame(cfg, wf, snr, Rng::derive_seed(cfg.seed, i), &local);
                    errors[i] = d.bit_errors;
                    compared[i] = d.bits_compared;
                    if (!local.empty()) {
                        std::lock_guard<std::mutex> lock(warn_mutex);
                        warnings.insert(warnings.end(), local.begin(), local.end());
                    }
                });
                std::size_t errs = 0;
                std::size_t bits = 0;
                for (std::size_t i = 0; i < cfg.trials; ++i) {
                    errs += errors[i];
                    bits += compared[i];
                }
                const double ber = bits ? static_cast<double>(errs) / static_cast<double>(bits) : 0.0;
                emit(wf, snr, "ber", ber);
                emit(wf, snr, "bit_errors", static_cast<double>(errs));
                emit(wf, snr, "bits", static_cast<double>(bits));
                result.warnings.insert(result.warnings.end(), warnings.begin(), warnings.end());
                result.summary.push_back("ber " + grid_label(wf) + fmt(" snr %.1f dB", snr) + fmt("  BER %.3e", ber) +
                                         " (" + std::to_string(errs) + "/" + std::to_string(bits) + ")");
            }
        }
}

void run_psd(const ExperimentConfig &cfg, std::size_t workers, RunResult &result)
{
    Emitter emit{cfg, result};
    for (WaveformKind kind : cfg.waveforms)
        for (std::size_t g = 0; g < cfg.subcarriers.size(); ++g) {
            const WaveformConfig wf = cfg.waveform(kind, g);
            const std::size_t len = wf.frame_length() / cfg.psd_segments;
            std::vector<std::vector<double>> per_frame(cfg.trials);
            parallel_for(cfg.trials, workers, [&](std::size_t i) {
                Rng rng(Rng::derive_seed(cfg.seed, i));
                const Frame frame = modulate(rng.bits(data_bit_capacity(wf, PilotMask())), Pilots{}, wf);
                const ComplexBuffer tx = apply_pa(frame.samples, cfg.impairments);
                per_frame[i] = psd(tx, cfg.psd_segments);
            });
            // Sum in index order so the result does not depend on scheduling.
            std::vector<double> avg(len, 0.0);
            for (const auto &p : per_frame)
                for (std::size_t k = 0; k < len; ++k)
                    avg[k] += p[k] / static_cast<double>(cfg.trials);
            // Centered bin order: bin 0000 is -fs/2.
            for (std::size_t c = 0; c < len; ++c) {
                const std::size_t k = (c + len / 2) % len;
                char name[32];
                std::snprintf(name, sizeof name, "psd_db@%04zu", c);
                emit(wf, kNoSnr, name, 10.0 * std::log10(std::max(avg[k], 1e-300)));
            }
            const double peak = *std::max_element(avg.begin(), avg.end());
            result.summary.push_back("psd " + grid_label(wf) + "  " + std::to_string(len) + " bins, peak " +
                                     fmt("%.2f dB", 10.0 * std::log10(peak)));
        }
}

} // namespace

std::string ccdf_metric_name(std::size_t oversample, double papr_db)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "ccdf_os%zu@%04.1f", oversample, papr_db);
    return buf;
}

std::vector<PathSpec> ber_channel(const ExperimentConfig &cfg, Rng &rng)
{
    std::vector<PathSpec> paths;
    paths.push_back({std::polar(1.0, 2.0 * kPi * rng.uniform()), 0.0, cfg.doppler_hz});
    if (cfg.echo_delay_s) {
        const double g = std::pow(10.0, cfg.echo_gain_db / 20.0);
        paths.push_back({std::polar(g, 2.0 * kPi * rng.uniform()), *cfg.echo_delay_s, cfg.doppler_hz});
    }
    return paths;
}

Equalizer ber_equalizer(const ExperimentConfig &cfg, WaveformKind kind)
{
    switch (cfg.equalizer) {
    case EqualizerChoice::OneTap: return Equalizer::OneTap;
    case EqualizerChoice::IterativeLs: return Equalizer::IterativeLs;
    case EqualizerChoice::Auto: break;
    }
    return is_delay_doppler(kind) ? Equalizer::IterativeLs : Equalizer::OneTap;
}

DetectionResult ber_frame(const ExperimentConfig &cfg, const WaveformConfig &wf, double snr_db,
                          std::uint64_t frame_seed, std::vector<std::string> *warnings)
{
    Rng bit_rng(frame_seed, 0);
    Rng chan_rng(frame_seed, 1);
    Rng pn_rng(frame_seed, 2);

    const Frame frame = modulate(bit_rng.bits(data_bit_capacity(wf, PilotMask())), Pilots{}, wf);
    const ComplexBuffer tx = apply_pa(frame.samples, cfg.impairments);
    const std::vector<PathSpec> paths = ber_channel(cfg, chan_rng);
    ChannelOutput out = apply_channel(tx, ChannelSpec{paths, snr_db}, wf.sample_rate(), chan_rng, wf.cp_len);
    if (warnings)
        *warnings = out.warnings;
    if (cfg.phase_noise)
        out.samples = apply_phase_noise(out.samples, cfg.impairments, wf.carrier_hz, wf.sample_rate(), pn_rng);

    ReceiverOptions ro;
    ro.equalizer = ber_equalizer(cfg, wf.kind);
    ro.noise_variance = out.noise_variance;
    return receive(out.samples, frame, paths, ro);
}

RunResult run_experiment(const ExperimentConfig &cfg, std::size_t workers)
{
    cfg.validate();
    RunResult result;
    switch (cfg.experiment) {
    case Experiment::Papr: run_papr(cfg, workers, result); break;
    case Experiment::Sense: run_sense(cfg, workers, result); break;
    case Experiment::Ber: run_ber(cfg, workers, result); break;
    case Experiment::Psd: run_psd(cfg, workers, result); break;
    }
    sort_records(result.records);
    std::set<std::string> seen;
    std::vector<std::string> unique;
    for (auto &w : result.warnings)
        if (seen.insert(w).second)
            unique.push_back(w);
    result.warnings = std::move(unique);
    return result;
}

} // namespace isac::harness
