// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "oracles.hpp"

#include "isac/errors.hpp"
#include "isac/metrics.hpp"

#include <doctest.h>

using namespace isac;

TEST_CASE("PAPR of constant-envelope and impulse buffers")
{
    ComplexBuffer c(256);
    for (std::size_t k = 0; k < c.size(); ++k)
        c[k] = oracle::cis(0.01 * static_cast<double>(k * k));
    CHECK(std::abs(papr_db(c, 1)) < 1e-12);

    for (std::size_t L : {16u, 64u, 1024u}) {
        ComplexBuffer x(L);
        x[L / 3] = 1.0;
        const double len = static_cast<double>(L);
        CHECK(papr_db(x, 1) == doctest::Approx(10.0 * std::log10(len)).epsilon(1e-12));
        // The Nyquist bin is split across both band edges, costing half its energy.
        CHECK(papr_db(x, 4) == doctest::Approx(10.0 * std::log10(len) - 10.0 * std::log10(1.0 - 0.5 / len)).epsilon(1e-12));
    }
}

TEST_CASE("PAPR is scale free and only rises with oversampling")
{
    const auto cfg = WaveformConfig::make(WaveformKind::Ofdm, 64, 16);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        const Frame f = modulate(rng.bits(data_bit_capacity(cfg, {})), Pilots{}, cfg);
        ComplexBuffer body = strip_cyclic_prefix(f.samples, 64, 16);
        const double p1 = papr_db(body, 1);
        const double p4 = papr_db(body, 4);
        CHECK(p4 >= p1 - 1e-12);
        for (auto &v : body)
            v *= cdouble(-3.0, 0.5);
        CHECK(papr_db(body, 4) == doctest::Approx(p4).epsilon(1e-12));
    }
}

TEST_CASE("interpolation keeps the original samples")
{
    Rng rng(1);
    ComplexBuffer x(64);
    for (auto &v : x)
        v = rng.complex_normal(1.0);
    ComplexBuffer spec = oracle::dft(x, false);
    spec[32] = 0.0;
    const ComplexBuffer band = oracle::dft(spec, true);
    for (std::size_t os : {1u, 2u, 4u, 8u}) {
        const ComplexBuffer y = interpolate(x, os);
        REQUIRE(y.size() == 64 * os);
        for (std::size_t k = 0; k < 64; ++k)
            CHECK(std::abs(y[k * os] - x[k]) < 1e-12);
        CHECK(mean_power(interpolate(band, os)) == doctest::Approx(mean_power(band)).epsilon(1e-12));
    }
}

TEST_CASE("PAPR preconditions")
{
    CHECK_THROWS_AS(papr_db(ComplexBuffer(16), 1), NumericError);
    CHECK_THROWS_AS(papr_db(ComplexBuffer(16, 1.0), 3), ParameterError);
}

TEST_CASE("CCDF axis and shape")
{
    const auto axis = ccdf_axis();
    REQUIRE(axis.size() == 141);
    CHECK(axis.front() == 0.0);
    CHECK(axis.back() == doctest::Approx(14.0).epsilon(1e-15));
    for (std::size_t i = 0; i < axis.size(); ++i)
        CHECK(axis[i] == doctest::Approx(0.1 * static_cast<double>(i)).epsilon(1e-12));

    const auto cfg = WaveformConfig::make(WaveformKind::Otfs, 64, 16);
    const CcdfCurve curve = ccdf(cfg, 2000, 4, 3);
    CHECK(curve.frames == 2000);
    CHECK(curve.papr_samples_db.size() == 2000);
    for (std::size_t i = 0; i < curve.probability.size(); ++i) {
        CHECK(curve.probability[i] >= 0.0);
        CHECK(curve.probability[i] <= 1.0);
        if (i > 0)
            CHECK(curve.probability[i] <= curve.probability[i - 1]);
    }
    CHECK(curve.probability.front() == 1.0);
    CHECK(curve.probability.back() == 0.0);
}

TEST_CASE("CCDF is reproducible and worker-count independent")
{
    const auto cfg = WaveformConfig::make(WaveformKind::DftSOfdm, 64, 16);
    const CcdfCurve a = ccdf(cfg, 500, 4, 11, 1);
    const CcdfCurve b = ccdf(cfg, 500, 4, 11, 8);
    const CcdfCurve c = ccdf(cfg, 500, 4, 12, 1);
    CHECK(a.papr_samples_db == b.papr_samples_db);
    CHECK(a.probability == b.probability);
    CHECK(a.papr_samples_db != c.papr_samples_db);
}

TEST_CASE("constant-envelope frames give a CCDF step at 0 dB")
{
    // Full-band DFT spreading of 4-QAM without oversampling returns the QAM
    // symbols themselves in time.
    const auto cfg = WaveformConfig::make(WaveformKind::DftSOfdm, 64, 16);
    const CcdfCurve curve = ccdf(cfg, 200, 1, 5);
    for (double p : curve.papr_samples_db)
        CHECK(std::abs(p) < 1e-9);
    for (std::size_t i = 1; i < curve.probability.size(); ++i)
        CHECK(curve.probability[i] == 0.0);

    const CcdfCurve exact = ccdf_from_samples(std::vector<double>(10, 0.0));
    for (double p : exact.probability)
        CHECK(p == 0.0);
}

TEST_CASE("PAPR quantile interpolates order statistics")
{
    std::vector<double> s;
    for (int i = 1000; i >= 1; --i)
        s.push_back(static_cast<double>(i));
    const CcdfCurve c = ccdf_from_samples(s);
    CHECK(papr_at_probability(c, 1e-3) == doctest::Approx(999.001).epsilon(1e-12));
    CHECK(papr_at_probability(c, 0.5) == doctest::Approx(500.5).epsilon(1e-12));
    CHECK_THROWS_AS(papr_at_probability(c, 0.0), ParameterError);
    CHECK_THROWS_AS(papr_at_probability(ccdf_from_samples({}), 0.1), SizeError);
}

TEST_CASE("PAPR ordering of the four waveforms at 1e-3")
{
    auto at = [](WaveformKind k) {
        return papr_at_probability(ccdf(WaveformConfig::make(k, 64, 16), 4000, 4, 17), 1e-3);
    };
    const double ofdm = at(WaveformKind::Ofdm);
    const double dfts = at(WaveformKind::DftSOfdm);
    const double dftsotfs = at(WaveformKind::DftSOtfs);
    CHECK(std::abs(dftsotfs - dfts) <= 0.5);
    CHECK(std::abs(ofdm - dfts - 3.0) <= 1.0);
}

TEST_CASE("EVM")
{
    Rng rng(2);
    ComplexBuffer ref(100);
    for (auto &v : ref)
        v = rng.complex_normal(1.0);
    CHECK(evm_db(ref, ref) == kEvmFloorDb);
    ComplexBuffer scaled = ref;
    for (auto &v : scaled)
        v *= 1.1;
    CHECK(evm_db(ref, scaled) == doctest::Approx(-20.0).epsilon(1e-12));
    CHECK_THROWS_AS(evm_db(ref, ComplexBuffer(99)), SizeError);
    CHECK_THROWS_AS(evm_db(Grid(4, 2), Grid(2, 4)), SizeError);
}

TEST_CASE("PSD of white noise is flat at the noise variance")
{
    Rng rng(3);
    ComplexBuffer x(400 * 64);
    for (auto &v : x)
        v = rng.complex_normal(2.0);
    const auto p = psd(x, 400);
    REQUIRE(p.size() == 64);
    double mean = 0.0;
    for (double v : p) {
        CHECK(std::abs(10.0 * std::log10(v / 2.0)) < 1.0);
        mean += v / 64.0;
    }
    CHECK(mean == doctest::Approx(2.0).epsilon(0.02));
    CHECK_THROWS_AS(psd(x, 0), ParameterError);
    CHECK_THROWS_AS(psd(ComplexBuffer(3), 2), SizeError);
}

TEST_CASE("PSD locates a tone")
{
    ComplexBuffer x(16 * 128);
    for (std::size_t k = 0; k < x.size(); ++k)
        x[k] = oracle::cis(2.0 * oracle::kPi * 10.0 * static_cast<double>(k) / 128.0);
    const auto p = psd(x, 16);
    CHECK(std::max_element(p.begin(), p.end()) - p.begin() == 10);
}
