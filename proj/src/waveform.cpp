// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "isac/waveform.hpp"

#include "isac/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

namespace isac {

std::string_view to_string(WaveformKind kind)
{
    switch (kind) {
    case WaveformKind::Ofdm: return "OFDM";
    case WaveformKind::DftSOfdm: return "DFT-s-OFDM";
    case WaveformKind::Otfs: return "OTFS";
    case WaveformKind::DftSOtfs: return "DFT-s-OTFS";
    }
    return "?";
}

WaveformKind parse_waveform(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (WaveformKind k : kAllWaveforms) {
        std::string candidate(to_string(k));
        std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (candidate == lower)
            return k;
    }
    throw ParameterError("unknown waveform '" + std::string(name) + "'");
}

bool is_delay_doppler(WaveformKind kind) { return kind == WaveformKind::Otfs || kind == WaveformKind::DftSOtfs; }

WaveformConfig WaveformConfig::make(WaveformKind kind, std::size_t subcarriers, std::size_t symbols)
{
    WaveformConfig cfg;
    cfg.kind = kind;
    cfg.subcarriers = subcarriers;
    cfg.symbols = symbols;
    cfg.cp_len = subcarriers / 4;
    return cfg;
}

void WaveformConfig::validate() const
{
    if (!is_power_of_two(subcarriers) || subcarriers < 8)
        throw ParameterError("subcarrier count must be a power of two >= 8, got " + std::to_string(subcarriers));
    if (!is_power_of_two(symbols) || symbols < 2)
        throw ParameterError("symbol count must be a power of two >= 2, got " + std::to_string(symbols));
    if (cp_len >= subcarriers)
        throw ParameterError("cyclic prefix must be shorter than the symbol");
    if (!(subcarrier_spacing_hz > 0.0) || !std::isfinite(subcarrier_spacing_hz))
        throw ParameterError("subcarrier spacing must be positive");
    if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
        throw ParameterError("carrier frequency must be positive");
    bits_per_symbol(mod_order);
}

Grid::Grid(std::size_t rows, std::size_t cols, cdouble fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill)
{
}

// ---------------------------------------------------------------------------
// Pilots
// ---------------------------------------------------------------------------

std::string_view to_string(PilotScheme scheme)
{
    switch (scheme) {
    case PilotScheme::None: return "none";
    case PilotScheme::Scattered: return "scattered";
    case PilotScheme::DedicatedSymbol: return "dedicated-symbol";
    }
    return "?";
}

PilotMask::PilotMask(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), flags_(rows * cols, 0) {}

std::size_t PilotMask::count() const
{
    return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

double PilotMask::overhead() const
{
    return flags_.empty() ? 0.0 : static_cast<double>(count()) / static_cast<double>(flags_.size());
}

bool PilotMask::column_is_pilot(std::size_t col) const
{
    for (std::size_t r = 0; r < rows_; ++r)
        if (!(*this)(r, col))
            return false;
    return rows_ > 0;
}

bool PilotMask::column_has_pilot(std::size_t col) const
{
    for (std::size_t r = 0; r < rows_; ++r)
        if ((*this)(r, col))
            return true;
    return false;
}

PilotMask resource_map(const WaveformConfig &cfg, PilotScheme scheme, std::size_t freq_spacing,
                       std::size_t time_spacing)
{
    PilotMask mask(cfg.subcarriers, cfg.symbols);
    switch (scheme) {
    case PilotScheme::None:
        break;
    case PilotScheme::Scattered:
        if (cfg.kind == WaveformKind::DftSOfdm || cfg.kind == WaveformKind::DftSOtfs)
            throw ParameterError("scattered pilots would break the DFT spread of " +
                                 std::string(to_string(cfg.kind)));
        if (freq_spacing == 0 || time_spacing == 0)
            throw ParameterError("pilot spacing must be positive");
        for (std::size_t n = 0; n < cfg.symbols; n += time_spacing)
            for (std::size_t m = 0; m < cfg.subcarriers; m += freq_spacing)
                mask.set(m, n);
        break;
    case PilotScheme::DedicatedSymbol:
        if (is_delay_doppler(cfg.kind))
            throw ParameterError("dedicated pilot symbols need a time-frequency waveform, not " +
                                 std::string(to_string(cfg.kind)));
        for (std::size_t m = 0; m < cfg.subcarriers; ++m)
            mask.set(m, 0);
        break;
    }
    return mask;
}

ComplexBuffer pilot_sequence(std::size_t count)
{
    if (count == 0)
        return {};
    const std::size_t base_len = count % 2 == 1 ? count : count - 1;
    if (base_len == 0)
        return ComplexBuffer(count, cdouble{1.0, 0.0});
    // Root 25 is coprime to the lengths this toolkit uses (63, 127, ...);
    // fall back to root 1 otherwise.
    const long root = std::gcd(25L, static_cast<long>(base_len)) == 1 ? 25L : 1L;
    const ComplexBuffer zc = zadoff_chu(base_len, root);
    ComplexBuffer out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = zc[i % base_len];
    return out;
}

Pilots make_pilots(const WaveformConfig &cfg, PilotScheme scheme)
{
    Pilots p;
    p.mask = resource_map(cfg, scheme);
    p.values = pilot_sequence(p.mask.count());
    return p;
}

std::size_t data_bit_capacity(const WaveformConfig &cfg, const PilotMask &mask)
{
    const std::size_t pilots = mask.rows() == 0 ? 0 : mask.count();
    return (cfg.resource_elements() - pilots) * static_cast<std::size_t>(bits_per_symbol(cfg.mod_order));
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

namespace {

PilotMask effective_mask(const PilotMask &mask, const WaveformConfig &cfg)
{
    if (mask.rows() == 0 && mask.cols() == 0)
        return PilotMask(cfg.subcarriers, cfg.symbols);
    if (mask.rows() != cfg.subcarriers || mask.cols() != cfg.symbols)
        throw SizeError("pilot mask shape does not match the frame");
    return mask;
}

void require_shape(const Grid &g, const WaveformConfig &cfg, const char *what)
{
    if (g.rows() != cfg.subcarriers || g.cols() != cfg.symbols)
        throw SizeError(std::string(what) + ": grid is " + std::to_string(g.rows()) + "x" +
                        std::to_string(g.cols()) + ", expected " + std::to_string(cfg.subcarriers) + "x" +
                        std::to_string(cfg.symbols));
}

// Transform every row of g along the column axis.
void transform_rows(Grid &g, bool inverse)
{
    std::vector<cdouble> row(g.cols());
    for (std::size_t r = 0; r < g.rows(); ++r) {
        for (std::size_t c = 0; c < g.cols(); ++c)
            row[c] = g(r, c);
        fft_inplace(row, inverse);
        for (std::size_t c = 0; c < g.cols(); ++c)
            g(r, c) = row[c];
    }
}

void transform_columns(Grid &g, bool inverse)
{
    for (std::size_t c = 0; c < g.cols(); ++c)
        fft_inplace(g.column(c), inverse);
}

// DFT-s-OFDM spreads whole data columns; pilot columns pass through.
void spread_columns(Grid &g, const PilotMask &mask, bool inverse)
{
    for (std::size_t c = 0; c < g.cols(); ++c) {
        if (mask.column_is_pilot(c))
            continue;
        if (mask.column_has_pilot(c))
            throw ParameterError("DFT-s-OFDM columns must be all data or all pilot");
        fft_inplace(g.column(c), inverse);
    }
}

} // namespace

TFGrid isfft(const DDGrid &dd)
{
    Grid g = dd;
    transform_rows(g, true);      // Doppler -> time
    transform_columns(g, false);  // delay -> frequency
    return TFGrid(std::move(g));
}

DDGrid sfft(const TFGrid &tf)
{
    Grid g = tf;
    transform_columns(g, true);
    transform_rows(g, false);
    return DDGrid(std::move(g));
}

ComplexBuffer ofdm_modulate(const TFGrid &grid, std::size_t cp_len)
{
    const std::size_t m = grid.rows();
    if (cp_len >= m)
        throw SizeError("cyclic prefix must be shorter than the symbol");
    ComplexBuffer out(grid.cols() * (m + cp_len));
    std::vector<cdouble> body(m);
    for (std::size_t n = 0; n < grid.cols(); ++n) {
        auto col = grid.column(n);
        std::copy(col.begin(), col.end(), body.begin());
        fft_inplace(body, true);
        auto *dst = out.data() + n * (m + cp_len);
        std::copy(body.end() - static_cast<long>(cp_len), body.end(), dst);
        std::copy(body.begin(), body.end(), dst + cp_len);
    }
    return out;
}

TFGrid ofdm_demodulate(std::span<const cdouble> samples, std::size_t subcarriers, std::size_t symbols,
                       std::size_t cp_len)
{
    if (samples.size() != symbols * (subcarriers + cp_len))
        throw SizeError("ofdm_demodulate: got " + std::to_string(samples.size()) + " samples, expected " +
                        std::to_string(symbols * (subcarriers + cp_len)));
    TFGrid grid(subcarriers, symbols);
    for (std::size_t n = 0; n < symbols; ++n) {
        auto src = samples.subspan(n * (subcarriers + cp_len) + cp_len, subcarriers);
        auto col = grid.column(n);
        std::copy(src.begin(), src.end(), col.begin());
        fft_inplace(col, false);
    }
    return grid;
}

ComplexBuffer strip_cyclic_prefix(std::span<const cdouble> samples, std::size_t subcarriers, std::size_t cp_len)
{
    const std::size_t sym = subcarriers + cp_len;
    if (samples.size() % sym != 0)
        throw SizeError("strip_cyclic_prefix: length is not a whole number of symbols");
    ComplexBuffer out;
    out.reserve(samples.size() / sym * subcarriers);
    for (std::size_t start = 0; start < samples.size(); start += sym)
        out.insert(out.end(), samples.begin() + static_cast<long>(start + cp_len),
                   samples.begin() + static_cast<long>(start + sym));
    return out;
}

Grid precode(const Grid &symbols, const WaveformConfig &cfg, const PilotMask &mask)
{
    require_shape(symbols, cfg, "precode");
    const PilotMask m = effective_mask(mask, cfg);
    Grid out = symbols;
    switch (cfg.kind) {
    case WaveformKind::Ofdm:
    case WaveformKind::Otfs:
        break;
    case WaveformKind::DftSOfdm:
        spread_columns(out, m, false);
        break;
    case WaveformKind::DftSOtfs:
        if (m.count() != 0)
            throw ParameterError("DFT-s-OTFS frames carry no pilots");
        transform_rows(out, false);
        break;
    }
    return out;
}

Grid deprecode(const Grid &placement, const WaveformConfig &cfg, const PilotMask &mask)
{
    require_shape(placement, cfg, "deprecode");
    const PilotMask m = effective_mask(mask, cfg);
    Grid out = placement;
    switch (cfg.kind) {
    case WaveformKind::Ofdm:
    case WaveformKind::Otfs:
        break;
    case WaveformKind::DftSOfdm:
        spread_columns(out, m, true);
        break;
    case WaveformKind::DftSOtfs:
        if (m.count() != 0)
            throw ParameterError("DFT-s-OTFS frames carry no pilots");
        transform_rows(out, true);
        break;
    }
    return out;
}

ComplexBuffer synthesize(const Grid &placement, const WaveformConfig &cfg)
{
    require_shape(placement, cfg, "synthesize");
    if (is_delay_doppler(cfg.kind))
        return ofdm_modulate(isfft(DDGrid(placement)), cfg.cp_len);
    return ofdm_modulate(TFGrid(placement), cfg.cp_len);
}

Grid analyze(std::span<const cdouble> samples, const WaveformConfig &cfg)
{
    TFGrid tf = ofdm_demodulate(samples, cfg.subcarriers, cfg.symbols, cfg.cp_len);
    if (is_delay_doppler(cfg.kind))
        return sfft(tf);
    return tf;
}

Frame modulate(std::span<const std::uint8_t> bits, const Pilots &pilots, const WaveformConfig &cfg)
{
    cfg.validate();
    const PilotMask mask = effective_mask(pilots.mask, cfg);
    if (pilots.values.size() != mask.count())
        throw SizeError("pilot value count does not match the pilot mask");
    const std::size_t capacity = data_bit_capacity(cfg, mask);
    if (bits.size() != capacity)
        throw SizeError("modulate: " + std::to_string(bits.size()) + " bits for " + std::to_string(capacity) +
                        " data bits of capacity");

    const ComplexBuffer data = qam_map(bits, cfg.mod_order);
    Grid symbols(cfg.subcarriers, cfg.symbols);
    std::size_t next_data = 0;
    std::size_t next_pilot = 0;
    for (std::size_t n = 0; n < cfg.symbols; ++n)
        for (std::size_t m = 0; m < cfg.subcarriers; ++m)
            symbols(m, n) = mask(m, n) ? pilots.values[next_pilot++] : data[next_data++];

    Frame frame;
    frame.config = cfg;
    frame.payload_bits.assign(bits.begin(), bits.end());
    frame.pilot_mask = mask;
    const Grid placement = precode(symbols, cfg, mask);
    frame.tf_grid = is_delay_doppler(cfg.kind) ? isfft(DDGrid(placement)) : TFGrid(placement);
    frame.samples = ofdm_modulate(frame.tf_grid, cfg.cp_len);
    frame.symbols = std::move(symbols);
    return frame;
}

SymbolGrid demodulate(std::span<const cdouble> samples, const WaveformConfig &cfg, const PilotMask &mask)
{
    cfg.validate();
    if (samples.size() != cfg.frame_length())
        throw SizeError("demodulate: got " + std::to_string(samples.size()) + " samples, expected " +
                        std::to_string(cfg.frame_length()));
    Grid symbols = deprecode(analyze(samples, cfg), cfg, mask);
    if (is_delay_doppler(cfg.kind))
        return DDGrid(std::move(symbols));
    return TFGrid(std::move(symbols));
}

} // namespace isac
