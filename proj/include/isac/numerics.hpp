// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace isac {

using cdouble = std::complex<double>;

// Baseband sample buffer. Non-empty and finite wherever it crosses a module
// boundary; see require_finite().
using ComplexBuffer = std::vector<cdouble>;

// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_power_of_two(std::size_t n);

// Throws SizeError on an empty buffer and NumericError on NaN/Inf.
void require_finite(std::span<const cdouble> x, const char *what);

double energy(std::span<const cdouble> x);
double mean_power(std::span<const cdouble> x);

// ---------------------------------------------------------------------------
// Transforms. Both directions are scaled by 1/sqrt(L) so every transform is
// unitary:  X[k] = L^{-1/2} sum_n x[n] exp(-+j 2 pi k n / L).
// ---------------------------------------------------------------------------

// Radix-2 FFT. Throws SizeError unless x.size() is a power of two.
ComplexBuffer fft(std::span<const cdouble> x, bool inverse = false);
void fft_inplace(std::span<cdouble> x, bool inverse = false);

// Unitary DFT of any length. Powers of two go straight to the radix-2
// kernel, other lengths use Bluestein's chirp-z algorithm on top of it.
ComplexBuffer dft(std::span<const cdouble> x, bool inverse = false);

// Signed frequency index of DFT bin k for a length-L transform:
// k for k < ceil(L/2), k - L otherwise (for even L the Nyquist bin maps to
// -L/2).
inline long signed_bin(std::size_t k, std::size_t length)
{
    return k < (length + 1) / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(length);
}

// ---------------------------------------------------------------------------
// Random numbers
// ---------------------------------------------------------------------------

/**
 * Counter-based generator: output i is the SplitMix64 finalizer applied to
 * key + (i + 1) * 0x9E3779B97F4A7C15, with key = mix64(seed ^ mix64(stream)).
 * Identical (seed, stream) pairs give identical sequences on every platform.
 * Gaussian draws use Box-Muller with the generator's own uniforms.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    static std::uint64_t mix64(std::uint64_t z);
    // Per-trial seed: mix64(seed ^ mix64(index)).
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64();
    double uniform();           // [0, 1)
    double normal();            // N(0, 1)
    cdouble complex_normal(double variance); // CN(0, variance)
    Bits bits(std::size_t count);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// ---------------------------------------------------------------------------
// Constellations and sequences
// ---------------------------------------------------------------------------

/**
 * Gray-mapped square QAM with unit average energy.
 *
 * 4-QAM, bits (b0 b1):   I = b0 ? -1 : +1,  Q = b1 ? -1 : +1,  scaled 1/sqrt(2)
 *   00 -> (+1+1j)/sqrt2   01 -> (+1-1j)/sqrt2   10 -> (-1+1j)/sqrt2   11 -> (-1-1j)/sqrt2
 *
 * 16-QAM, bits (b0 b1 b2 b3): (b0 b1) select I and (b2 b3) select Q from the
 * Gray-ordered level table  00 -> +3, 01 -> +1, 11 -> -1, 10 -> -3,
 * scaled 1/sqrt(10).
 */
ComplexBuffer qam_map(std::span<const std::uint8_t> bits, int order);

// Hard minimum-distance decision (per-axis slicing, which is exact for
// square Gray QAM).
Bits qam_demap(std::span<const cdouble> symbols, int order);

int bits_per_symbol(int order);

// x[n] = exp(-j pi root n (n + 1) / length), odd length, gcd(root, length) = 1.
ComplexBuffer zadoff_chu(std::size_t length, long root);

} // namespace isac
