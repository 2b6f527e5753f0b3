// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "isac/errors.hpp"
#include "isac/numerics.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

namespace isac {

namespace {

// exp(-j 2 pi k / L) for k < L/2, cached per thread.
const std::vector<cdouble> &twiddles(std::size_t length)
{
    thread_local std::unordered_map<std::size_t, std::vector<cdouble>> cache;
    auto it = cache.find(length);
    if (it != cache.end())
        return it->second;
    std::vector<cdouble> w(length / 2);
    for (std::size_t k = 0; k < w.size(); ++k)
        w[k] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(length));
    return cache.emplace(length, std::move(w)).first->second;
}

// Unnormalized radix-2 decimation-in-time transform.
void radix2(std::span<cdouble> x, bool inverse)
{
    const std::size_t n = x.size();
    if (n < 2)
        return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(x[i], x[j]);
    }

    const auto &w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < half; ++j) {
                const cdouble tw = inverse ? std::conj(w[j * stride]) : w[j * stride];
                const cdouble u = x[i + j];
                const cdouble v = x[i + j + half] * tw;
                x[i + j] = u + v;
                x[i + j + half] = u - v;
            }
        }
    }
}

struct BluesteinPlan {
    std::size_t padded = 0;
    std::vector<cdouble> chirp;        // exp(-j pi n^2 / L), n < L
    std::vector<cdouble> kernel_freq;  // unnormalized FFT of the conjugate chirp, circularly extended
};

const BluesteinPlan &bluestein_plan(std::size_t length)
{
    thread_local std::unordered_map<std::size_t, BluesteinPlan> cache;
    auto it = cache.find(length);
    if (it != cache.end())
        return it->second;

    BluesteinPlan plan;
    plan.padded = 1;
    while (plan.padded < 2 * length - 1)
        plan.padded <<= 1;

    plan.chirp.resize(length);
    const std::uint64_t period = 2 * static_cast<std::uint64_t>(length);
    for (std::size_t n = 0; n < length; ++n) {
        const std::uint64_t sq = (static_cast<std::uint64_t>(n) * n) % period;
        plan.chirp[n] = std::polar(1.0, -kPi * static_cast<double>(sq) / static_cast<double>(length));
    }

    plan.kernel_freq.assign(plan.padded, cdouble{});
    plan.kernel_freq[0] = std::conj(plan.chirp[0]);
    for (std::size_t n = 1; n < length; ++n) {
        plan.kernel_freq[n] = std::conj(plan.chirp[n]);
        plan.kernel_freq[plan.padded - n] = std::conj(plan.chirp[n]);
    }
    radix2(plan.kernel_freq, false);
    return cache.emplace(length, std::move(plan)).first->second;
}

// Unnormalized forward DFT of arbitrary length.
ComplexBuffer bluestein_forward(std::span<const cdouble> x)
{
    const std::size_t length = x.size();
    const BluesteinPlan &plan = bluestein_plan(length);

    std::vector<cdouble> a(plan.padded);
    for (std::size_t n = 0; n < length; ++n)
        a[n] = x[n] * plan.chirp[n];
    radix2(a, false);
    for (std::size_t k = 0; k < plan.padded; ++k)
        a[k] *= plan.kernel_freq[k];
    radix2(a, true);

    const double scale = 1.0 / static_cast<double>(plan.padded);
    ComplexBuffer out(length);
    for (std::size_t k = 0; k < length; ++k)
        out[k] = a[k] * plan.chirp[k] * scale;
    return out;
}

} // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_inplace(std::span<cdouble> x, bool inverse)
{
    if (!is_power_of_two(x.size()))
        throw SizeError("fft: length " + std::to_string(x.size()) + " is not a power of two");
    radix2(x, inverse);
    const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto &v : x)
        v *= scale;
}

ComplexBuffer fft(std::span<const cdouble> x, bool inverse)
{
    ComplexBuffer out(x.begin(), x.end());
    fft_inplace(out, inverse);
    return out;
}

ComplexBuffer dft(std::span<const cdouble> x, bool inverse)
{
    if (x.empty())
        throw SizeError("dft: empty buffer");
    if (is_power_of_two(x.size()))
        return fft(x, inverse);

    ComplexBuffer out;
    if (inverse) {
        ComplexBuffer conj_in(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            conj_in[i] = std::conj(x[i]);
        out = bluestein_forward(conj_in);
        for (auto &v : out)
            v = std::conj(v);
    } else {
        out = bluestein_forward(x);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto &v : out)
        v *= scale;
    return out;
}

void require_finite(std::span<const cdouble> x, const char *what)
{
    if (x.empty())
        throw SizeError(std::string(what) + ": empty buffer");
    for (const auto &v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericError(std::string(what) + ": non-finite sample");
}

double energy(std::span<const cdouble> x)
{
    double e = 0.0;
    for (const auto &v : x)
        e += std::norm(v);
    return e;
}

double mean_power(std::span<const cdouble> x)
{
    return x.empty() ? 0.0 : energy(x) / static_cast<double>(x.size());
}

} // namespace isac
