// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors
//
// Reference implementations used only by the tests. Everything here is built
// from textbook sums and dense matrices, never from the library's fast paths.

#pragma once

#include "isac/channel.hpp"
#include "isac/numerics.hpp"
#include "isac/waveform.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using isac::cdouble;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline cdouble cis(double phase) { return {std::cos(phase), std::sin(phase)}; }

// Unitary DFT by direct O(L^2) summation.
inline std::vector<cdouble> dft(const std::vector<cdouble> &x, bool inverse = false)
{
    const std::size_t L = x.size();
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cdouble> out(L);
    for (std::size_t k = 0; k < L; ++k) {
        cdouble acc = 0.0;
        for (std::size_t n = 0; n < L; ++n)
            acc += x[n] * cis(sign * 2.0 * kPi * static_cast<double>((k * n) % L) / static_cast<double>(L));
        out[k] = acc / std::sqrt(static_cast<double>(L));
    }
    return out;
}

inline double rel_diff(const std::vector<cdouble> &a, const std::vector<cdouble> &b)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / (den > 0.0 ? den : 1.0));
}

inline double max_abs_diff(const std::vector<cdouble> &a, const std::vector<cdouble> &b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline std::vector<cdouble> circular_shift(const std::vector<cdouble> &x, std::size_t d)
{
    std::vector<cdouble> y(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        y[(k + d) % x.size()] = x[k];
    return y;
}

// Gray 4-QAM bit error probability at per-symbol SNR Es/N0 (linear).
inline double qpsk_ber(double snr_linear)
{
    return 0.5 * std::erfc(std::sqrt(snr_linear / 2.0));
}

// ---------------------------------------------------------------------------
// Dense model of synthesize -> channel -> analyze for small frames.
// Grids are vectorized column by column (row index fastest).
// ---------------------------------------------------------------------------

// Placement grid -> frame samples.
inline Mat synthesis_matrix(const isac::WaveformConfig &cfg)
{
    const std::size_t M = cfg.subcarriers;
    const std::size_t N = cfg.symbols;
    const std::size_t cp = cfg.cp_len;
    const std::size_t S = M + cp;
    const bool dd = isac::is_delay_doppler(cfg.kind);
    Mat A = Mat::Zero(static_cast<Eigen::Index>(N * S), static_cast<Eigen::Index>(M * N));
    for (std::size_t col = 0; col < N; ++col)
        for (std::size_t row = 0; row < M; ++row) {
            // TF grid produced by a unit entry at (row, col).
            std::vector<cdouble> tf(M * N, 0.0);
            if (dd) {
                for (std::size_t n = 0; n < N; ++n)
                    for (std::size_t m = 0; m < M; ++m)
                        tf[n * M + m] = cis(2.0 * kPi * (static_cast<double>(n * col) / static_cast<double>(N) -
                                                         static_cast<double>(m * row) / static_cast<double>(M))) /
                                        std::sqrt(static_cast<double>(M * N));
            } else {
                tf[col * M + row] = 1.0;
            }
            for (std::size_t n = 0; n < N; ++n)
                for (std::size_t t = 0; t < S; ++t) {
                    const std::size_t i = (t + M - cp) % M;
                    cdouble acc = 0.0;
                    for (std::size_t m = 0; m < M; ++m)
                        acc += tf[n * M + m] * cis(2.0 * kPi * static_cast<double>(m * i) / static_cast<double>(M));
                    A(static_cast<Eigen::Index>(n * S + t), static_cast<Eigen::Index>(col * M + row)) =
                        acc / std::sqrt(static_cast<double>(M));
                }
        }
    return A;
}

// Frame samples -> placement grid.
inline Mat analysis_matrix(const isac::WaveformConfig &cfg)
{
    const std::size_t M = cfg.subcarriers;
    const std::size_t N = cfg.symbols;
    const std::size_t cp = cfg.cp_len;
    const std::size_t S = M + cp;
    const bool dd = isac::is_delay_doppler(cfg.kind);
    // Per-symbol FFT after dropping the prefix: TF index (m, n) <- sample.
    Mat F = Mat::Zero(static_cast<Eigen::Index>(M * N), static_cast<Eigen::Index>(N * S));
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t i = 0; i < M; ++i)
                F(static_cast<Eigen::Index>(n * M + m), static_cast<Eigen::Index>(n * S + cp + i)) =
                    cis(-2.0 * kPi * static_cast<double>(m * i) / static_cast<double>(M)) /
                    std::sqrt(static_cast<double>(M));
    if (!dd)
        return F;
    // SFFT: x[l,k] = (MN)^{-1/2} sum_{m,n} X[m,n] exp(-j2pi(nk/N - ml/M)).
    Mat Sf = Mat::Zero(static_cast<Eigen::Index>(M * N), static_cast<Eigen::Index>(M * N));
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t l = 0; l < M; ++l)
            for (std::size_t n = 0; n < N; ++n)
                for (std::size_t m = 0; m < M; ++m)
                    Sf(static_cast<Eigen::Index>(k * M + l), static_cast<Eigen::Index>(n * M + m)) =
                        cis(-2.0 * kPi * (static_cast<double>(n * k) / static_cast<double>(N) -
                                          static_cast<double>(m * l) / static_cast<double>(M))) /
                        std::sqrt(static_cast<double>(M * N));
    return Sf * F;
}

// Whole-frame channel: circular band-limited delay (signed DFT bins, Nyquist
// bin at -L/2) followed by the absolute-time Doppler ramp, summed over paths.
inline Mat channel_matrix(const std::vector<isac::PathSpec> &paths, std::size_t L, double fs)
{
    Mat H = Mat::Zero(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(L));
    for (const auto &p : paths) {
        const double d = p.delay_s * fs;
        for (std::size_t k = 0; k < L; ++k)
            for (std::size_t j = 0; j < L; ++j) {
                cdouble acc = 0.0;
                for (std::size_t q = 0; q < L; ++q) {
                    const double sq = q < (L + 1) / 2 ? static_cast<double>(q) : static_cast<double>(q) - static_cast<double>(L);
                    const double f = sq / static_cast<double>(L);
                    acc += cis(2.0 * kPi * f * (static_cast<double>(k) - static_cast<double>(j) - d));
                }
                H(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) +=
                    p.gain * acc / static_cast<double>(L) *
                    cis(2.0 * kPi * p.doppler_hz * static_cast<double>(k) / fs);
            }
    }
    return H;
}

inline Mat channel_operator_matrix(const std::vector<isac::PathSpec> &paths, const isac::WaveformConfig &cfg)
{
    return analysis_matrix(cfg) * channel_matrix(paths, cfg.frame_length(), cfg.sample_rate()) *
           synthesis_matrix(cfg);
}

inline Vec to_vec(std::span<const cdouble> v)
{
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

inline std::vector<cdouble> from_vec(const Vec &v)
{
    return std::vector<cdouble>(v.data(), v.data() + v.size());
}

// Random 2-path channel with delays inside the prefix and Doppler within
// +-delta_f/10.
inline std::vector<isac::PathSpec> random_two_path(const isac::WaveformConfig &cfg, isac::Rng &rng)
{
    const double fs = cfg.sample_rate();
    std::vector<isac::PathSpec> paths;
    for (int p = 0; p < 2; ++p) {
        isac::PathSpec s;
        s.gain = std::polar(p == 0 ? 1.0 : 0.3 + 0.5 * rng.uniform(), 2.0 * kPi * rng.uniform());
        s.delay_s = (p == 0 ? 0.0 : rng.uniform() * static_cast<double>(cfg.cp_len)) / fs;
        s.doppler_hz = (2.0 * rng.uniform() - 1.0) * 0.1 * cfg.subcarrier_spacing_hz;
        paths.push_back(s);
    }
    return paths;
}

} // namespace oracle
