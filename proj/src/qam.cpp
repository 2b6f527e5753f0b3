// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "isac/errors.hpp"
#include "isac/numerics.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace isac {

namespace {

// Gray level table for one 16-QAM axis, indexed by (msb << 1) | lsb.
constexpr std::array<double, 4> kLevels16 = {3.0, 1.0, -3.0, -1.0};

double scale_for(int order) { return order == 4 ? 1.0 / std::sqrt(2.0) : 1.0 / std::sqrt(10.0); }

void slice_axis16(double v, std::uint8_t &msb, std::uint8_t &lsb)
{
    msb = v < 0.0 ? 1 : 0;
    lsb = std::abs(v) < 2.0 ? 1 : 0;
}

} // namespace

int bits_per_symbol(int order)
{
    switch (order) {
    case 4: return 2;
    case 16: return 4;
    default: throw ParameterError("unsupported QAM order " + std::to_string(order));
    }
}

ComplexBuffer qam_map(std::span<const std::uint8_t> bits, int order)
{
    const int k = bits_per_symbol(order);
    if (bits.size() % static_cast<std::size_t>(k) != 0)
        throw SizeError("qam_map: " + std::to_string(bits.size()) + " bits not divisible by " +
                        std::to_string(k));

    const double s = scale_for(order);
    ComplexBuffer out(bits.size() / static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto *b = bits.data() + i * static_cast<std::size_t>(k);
        if (order == 4) {
            out[i] = {b[0] ? -s : s, b[1] ? -s : s};
        } else {
            const double re = kLevels16[static_cast<std::size_t>((b[0] << 1) | b[1])];
            const double im = kLevels16[static_cast<std::size_t>((b[2] << 1) | b[3])];
            out[i] = {re * s, im * s};
        }
    }
    return out;
}

Bits qam_demap(std::span<const cdouble> symbols, int order)
{
    const int k = bits_per_symbol(order);
    Bits out(symbols.size() * static_cast<std::size_t>(k));
    const double inv = 1.0 / scale_for(order);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        auto *b = out.data() + i * static_cast<std::size_t>(k);
        if (order == 4) {
            b[0] = symbols[i].real() < 0.0 ? 1 : 0;
            b[1] = symbols[i].imag() < 0.0 ? 1 : 0;
        } else {
            slice_axis16(symbols[i].real() * inv, b[0], b[1]);
            slice_axis16(symbols[i].imag() * inv, b[2], b[3]);
        }
    }
    return out;
}

ComplexBuffer zadoff_chu(std::size_t length, long root)
{
    if (length == 0 || length % 2 == 0)
        throw ParameterError("zadoff_chu: length must be odd and positive");
    const long len = static_cast<long>(length);
    if (std::gcd(root, len) != 1)
        throw ParameterError("zadoff_chu: root " + std::to_string(root) + " not coprime to " +
                             std::to_string(length));

    // n (n + 1) is even, so the phase index can be reduced modulo 2 L exactly.
    const long r = ((root % len) + len) % len;
    const auto period = static_cast<std::uint64_t>(2 * len);
    ComplexBuffer out(length);
    for (std::size_t n = 0; n < length; ++n) {
        const std::uint64_t q = (static_cast<std::uint64_t>(n) * (n + 1)) % period;
        const std::uint64_t idx = (q * static_cast<std::uint64_t>(r)) % period;
        out[n] = std::polar(1.0, -kPi * static_cast<double>(idx) / static_cast<double>(len));
    }
    return out;
}

} // namespace isac
