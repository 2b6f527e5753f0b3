// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "oracles.hpp"

#include "isac/errors.hpp"
#include "isac/metrics.hpp"
#include "isac/waveform.hpp"

#include <doctest.h>

using namespace isac;

namespace {

Frame random_frame(const WaveformConfig &cfg, std::uint64_t seed, PilotScheme scheme = PilotScheme::None)
{
    const Pilots pilots = make_pilots(cfg, scheme);
    Rng rng(seed);
    return modulate(rng.bits(data_bit_capacity(cfg, pilots.mask)), pilots, cfg);
}

const Grid &grid_of(const SymbolGrid &g)
{
    return std::visit([](const auto &v) -> const Grid & { return v; }, g);
}

Grid random_grid(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
    Rng rng(seed);
    Grid g(rows, cols);
    for (auto &v : g.values())
        v = rng.complex_normal(1.0);
    return g;
}

} // namespace

TEST_CASE("waveform names round trip")
{
    for (WaveformKind k : kAllWaveforms)
        CHECK(parse_waveform(to_string(k)) == k);
    CHECK(parse_waveform("dft-s-otfs") == WaveformKind::DftSOtfs);
    CHECK_THROWS_AS(parse_waveform("OFDMA"), ParameterError);
    CHECK(is_delay_doppler(WaveformKind::Otfs));
    CHECK_FALSE(is_delay_doppler(WaveformKind::DftSOfdm));
}

TEST_CASE("config validation")
{
    auto cfg = WaveformConfig::make(WaveformKind::Ofdm, 64, 16);
    CHECK(cfg.cp_len == 16);
    CHECK(cfg.sample_rate() == doctest::Approx(64 * 1.92e6));
    CHECK(cfg.frame_length() == 16 * 80);
    CHECK_NOTHROW(cfg.validate());

    auto bad = cfg;
    bad.subcarriers = 4;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = cfg;
    bad.subcarriers = 48;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = cfg;
    bad.symbols = 1;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = cfg;
    bad.cp_len = 64;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = cfg;
    bad.mod_order = 8;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = cfg;
    bad.subcarrier_spacing_hz = 0.0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("single-tone OFDM has constant envelope and 0 dB PAPR")
{
    auto cfg = WaveformConfig::make(WaveformKind::Ofdm, 64, 16);
    Grid g(64, 16);
    for (std::size_t n = 0; n < 16; ++n)
        g(0, n) = std::polar(1.0, 0.3 * static_cast<double>(n));
    const ComplexBuffer x = synthesize(g, cfg);
    for (std::size_t n = 0; n < 16; ++n)
        for (std::size_t i = 0; i < cfg.symbol_length(); ++i)
            CHECK(std::abs(x[n * cfg.symbol_length() + i]) == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
    CHECK(std::abs(papr_db(strip_cyclic_prefix(x, 64, 16), 1)) < 1e-9);

    // Same tone on every symbol: the stripped frame is a constant, so the
    // interpolated PAPR is 0 dB as well.
    for (std::size_t n = 0; n < 16; ++n)
        g(0, n) = 1.0;
    const ComplexBuffer body = strip_cyclic_prefix(synthesize(g, cfg), 64, 16);
    CHECK(std::abs(papr_db(body, 4)) < 1e-9);
}

TEST_CASE("DFT-s-OTFS with one Doppler bin equals DFT-s-OFDM")
{
    for (std::size_t M : {8u, 64u}) {
        auto a = WaveformConfig::make(WaveformKind::DftSOtfs, M, 2);
        auto b = WaveformConfig::make(WaveformKind::DftSOfdm, M, 2);
        a.symbols = 1;
        b.symbols = 1;
        Rng rng(M);
        Grid sym(M, 1);
        const ComplexBuffer q = qam_map(rng.bits(2 * M), 4);
        std::copy(q.begin(), q.end(), sym.values().begin());
        const ComplexBuffer xa = synthesize(precode(sym, a, {}), a);
        const ComplexBuffer xb = synthesize(precode(sym, b, {}), b);
        CHECK(oracle::max_abs_diff(xa, xb) < 1e-12);
    }
}

TEST_CASE("ISFFT of a delay-Doppler impulse is flat")
{
    DDGrid dd(16, 8);
    dd(0, 0) = 1.0;
    const TFGrid tf = isfft(dd);
    for (const auto &v : tf.values())
        CHECK(std::abs(v - cdouble(1.0 / std::sqrt(128.0))) < 1e-10);
}

TEST_CASE("ISFFT and SFFT match the documented double sum")
{
    const std::size_t M = 8;
    const std::size_t N = 4;
    const Grid x = random_grid(M, N, 5);
    const TFGrid tf = isfft(DDGrid(x));
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t m = 0; m < M; ++m) {
            cdouble acc = 0.0;
            for (std::size_t k = 0; k < N; ++k)
                for (std::size_t l = 0; l < M; ++l)
                    acc += x(l, k) * oracle::cis(2.0 * oracle::kPi *
                                                 (static_cast<double>(n * k) / N - static_cast<double>(m * l) / M));
            CHECK(std::abs(tf(m, n) - acc / std::sqrt(static_cast<double>(M * N))) < 1e-12);
        }
    const DDGrid back = sfft(tf);
    CHECK(oracle::max_abs_diff({back.values().begin(), back.values().end()}, {x.values().begin(), x.values().end()}) <
          1e-12);
}

TEST_CASE("modulate/demodulate round trip")
{
    for (WaveformKind k : kAllWaveforms)
        for (auto [M, N] : {std::pair{64u, 16u}, std::pair{128u, 32u}, std::pair{8u, 2u}})
            for (int order : {4, 16}) {
                auto cfg = WaveformConfig::make(k, M, N);
                cfg.mod_order = order;
                const Frame f = random_frame(cfg, M + N + order);
                CHECK(f.samples.size() == N * (M + M / 4));
                const SymbolGrid out = demodulate(f.samples, cfg);
                const Grid &got = grid_of(out);
                CHECK(evm_db(f.symbols, got) < -100.0);
            }
}

TEST_CASE("known pilots come back exactly")
{
    for (auto [k, scheme] : {std::pair{WaveformKind::Ofdm, PilotScheme::Scattered},
                             std::pair{WaveformKind::Ofdm, PilotScheme::DedicatedSymbol},
                             std::pair{WaveformKind::DftSOfdm, PilotScheme::DedicatedSymbol},
                             std::pair{WaveformKind::Otfs, PilotScheme::Scattered}}) {
        const auto cfg = WaveformConfig::make(k, 64, 16);
        const Pilots pilots = make_pilots(cfg, scheme);
        Rng rng(3);
        const Frame f = modulate(rng.bits(data_bit_capacity(cfg, pilots.mask)), pilots, cfg);
        const SymbolGrid out = demodulate(f.samples, cfg, pilots.mask);
        const Grid &got = grid_of(out);
        std::size_t i = 0;
        for (std::size_t n = 0; n < 16; ++n)
            for (std::size_t m = 0; m < 64; ++m)
                if (pilots.mask(m, n))
                    CHECK(std::abs(got(m, n) - pilots.values[i++]) < 1e-12);
        CHECK(i == pilots.values.size());
    }
}

TEST_CASE("DFT-s-OFDM dedicated pilot symbol bypasses the spread")
{
    const auto cfg = WaveformConfig::make(WaveformKind::DftSOfdm, 64, 16);
    const Pilots pilots = make_pilots(cfg, PilotScheme::DedicatedSymbol);
    Rng rng(4);
    const Frame f = modulate(rng.bits(data_bit_capacity(cfg, pilots.mask)), pilots, cfg);
    for (std::size_t m = 0; m < 64; ++m) {
        CHECK(std::abs(f.tf_grid(m, 0) - pilots.values[m]) < 1e-15);
        CHECK(std::abs(std::abs(f.tf_grid(m, 0)) - 1.0) < 1e-12);
    }
}

TEST_CASE("DFT-s-OTFS round trip equals the Doppler-axis inverse DFT of the DD grid")
{
    const auto cfg = WaveformConfig::make(WaveformKind::DftSOtfs, 16, 8);
    const Frame f = random_frame(cfg, 21);
    const Grid dd = analyze(f.samples, cfg);
    for (std::size_t l = 0; l < 16; ++l) {
        std::vector<cdouble> row(8);
        for (std::size_t k = 0; k < 8; ++k)
            row[k] = dd(l, k);
        const auto despread = oracle::dft(row, true);
        for (std::size_t k = 0; k < 8; ++k)
            CHECK(std::abs(despread[k] - f.symbols(l, k)) < 1e-10);
    }
}

TEST_CASE("resource_map overheads")
{
    const auto ofdm = WaveformConfig::make(WaveformKind::Ofdm, 64, 16);
    const PilotMask none = resource_map(ofdm, PilotScheme::None);
    CHECK(none.count() == 0);
    CHECK(none.overhead() == 0.0);
    CHECK(resource_map(ofdm, PilotScheme::DedicatedSymbol).overhead() == doctest::Approx(1.0 / 16.0));
    CHECK(resource_map(ofdm, PilotScheme::Scattered, 4, 4).overhead() == doctest::Approx(1.0 / 16.0));
    CHECK(resource_map(ofdm, PilotScheme::Scattered, 2, 4).overhead() == doctest::Approx(1.0 / 8.0));
    const auto dfts = WaveformConfig::make(WaveformKind::DftSOfdm, 64, 32);
    CHECK(resource_map(dfts, PilotScheme::DedicatedSymbol).overhead() == doctest::Approx(1.0 / 32.0));
}

TEST_CASE("resource_map rejects scheme/kind mismatches")
{
    CHECK_THROWS_AS(resource_map(WaveformConfig::make(WaveformKind::DftSOfdm, 64, 16), PilotScheme::Scattered),
                    ParameterError);
    CHECK_THROWS_AS(resource_map(WaveformConfig::make(WaveformKind::Otfs, 64, 16), PilotScheme::DedicatedSymbol),
                    ParameterError);
    CHECK_THROWS_AS(resource_map(WaveformConfig::make(WaveformKind::DftSOtfs, 64, 16), PilotScheme::Scattered),
                    ParameterError);
}

TEST_CASE("pilot values are constant envelope")
{
    for (std::size_t n : {1u, 16u, 64u, 256u}) {
        const ComplexBuffer p = pilot_sequence(n);
        REQUIRE(p.size() == n);
        for (const auto &v : p)
            CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("frame invariants: pilot and data REs are disjoint and fill the grid")
{
    const auto cfg = WaveformConfig::make(WaveformKind::Ofdm, 64, 16);
    const Pilots pilots = make_pilots(cfg, PilotScheme::Scattered);
    const std::size_t bits = data_bit_capacity(cfg, pilots.mask);
    CHECK(bits / 2 + pilots.mask.count() == cfg.resource_elements());
    Rng rng(1);
    const Frame f = modulate(rng.bits(bits), pilots, cfg);
    CHECK(f.payload_bits.size() == bits);
    CHECK(f.samples.size() == cfg.frame_length());
}

TEST_CASE("modulate and demodulate reject bad sizes")
{
    const auto cfg = WaveformConfig::make(WaveformKind::Otfs, 64, 16);
    Rng rng(1);
    CHECK_THROWS_AS(modulate(rng.bits(100), Pilots{}, cfg), SizeError);
    CHECK_THROWS_AS(demodulate(ComplexBuffer(cfg.frame_length() - 1), cfg), SizeError);
    auto bad = cfg;
    bad.symbols = 3;
    CHECK_THROWS_AS(modulate(rng.bits(64 * 3 * 2), Pilots{}, bad), ParameterError);
}

TEST_CASE("energy is conserved through every chain, CP accounted separately")
{
    for (WaveformKind k : kAllWaveforms) {
        const auto cfg = WaveformConfig::make(k, 64, 16);
        const Frame f = random_frame(cfg, 77);
        const ComplexBuffer body = strip_cyclic_prefix(f.samples, 64, 16);
        const double sym_energy = energy(f.symbols.values());
        CHECK(std::abs(energy(body) - sym_energy) / sym_energy < 1e-10);
        // The prefix repeats the last cp samples of each body.
        double tail = 0.0;
        for (std::size_t n = 0; n < 16; ++n)
            for (std::size_t i = 64 - 16; i < 64; ++i)
                tail += std::norm(body[n * 64 + i]);
        CHECK(std::abs(energy(f.samples) - (sym_energy + tail)) / sym_energy < 1e-10);
    }
}

TEST_CASE("OTFS and OFDM carry the same mean power for the same symbols")
{
    const auto a = WaveformConfig::make(WaveformKind::Ofdm, 64, 16);
    const auto b = WaveformConfig::make(WaveformKind::Otfs, 64, 16);
    Rng rng(8);
    const Bits bits = rng.bits(data_bit_capacity(a, {}));
    const Frame fa = modulate(bits, Pilots{}, a);
    const Frame fb = modulate(bits, Pilots{}, b);
    const double pa = mean_power(strip_cyclic_prefix(fa.samples, 64, 16));
    const double pb = mean_power(strip_cyclic_prefix(fb.samples, 64, 16));
    CHECK(std::abs(pa - pb) < 1e-10);
}

TEST_CASE("DFT-s-OFDM 99.9th-percentile PAPR sits at least 2 dB below OFDM")
{
    const auto a = WaveformConfig::make(WaveformKind::Ofdm, 64, 16);
    const auto b = WaveformConfig::make(WaveformKind::DftSOfdm, 64, 16);
    const double pa = papr_at_probability(ccdf(a, 10000, 4, 31), 1e-3);
    const double pb = papr_at_probability(ccdf(b, 10000, 4, 31), 1e-3);
    CHECK(pa - pb >= 2.0);
}
