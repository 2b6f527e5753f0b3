// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#pragma once

#include "isac/numerics.hpp"

#include <array>
#include <string_view>
#include <variant>

namespace isac {

enum class WaveformKind { Ofdm, DftSOfdm, Otfs, DftSOtfs };

inline constexpr std::array<WaveformKind, 4> kAllWaveforms = {
    WaveformKind::Ofdm, WaveformKind::DftSOfdm, WaveformKind::Otfs, WaveformKind::DftSOtfs};

std::string_view to_string(WaveformKind kind);
// Accepts "OFDM", "DFT-s-OFDM", "OTFS", "DFT-s-OTFS" (case-insensitive).
WaveformKind parse_waveform(std::string_view name);

// True for the kinds whose symbols are placed on the delay-Doppler grid.
bool is_delay_doppler(WaveformKind kind);

struct WaveformConfig {
    WaveformKind kind = WaveformKind::Ofdm;
    std::size_t subcarriers = 64;         // M, power of two, >= 8
    std::size_t symbols = 16;             // N, power of two, >= 2
    double subcarrier_spacing_hz = 1.92e6;
    double carrier_hz = 0.3e12;
    std::size_t cp_len = 16;              // samples, < M
    int mod_order = 4;

    // M/4 cyclic prefix, 0.3 THz carrier, 1.92 MHz spacing, 4-QAM.
    static WaveformConfig make(WaveformKind kind, std::size_t subcarriers, std::size_t symbols);

    void validate() const;

    double sample_rate() const { return static_cast<double>(subcarriers) * subcarrier_spacing_hz; }
    std::size_t symbol_length() const { return subcarriers + cp_len; }
    std::size_t frame_length() const { return symbols * symbol_length(); }
    std::size_t resource_elements() const { return subcarriers * symbols; }
    // OFDM symbol period including the cyclic prefix.
    double symbol_period() const { return static_cast<double>(symbol_length()) / sample_rate(); }
};

/**
 * Dense complex matrix stored column by column. Rows are the subcarrier
 * (time-frequency) or delay (delay-Doppler) index, columns the OFDM symbol
 * or Doppler index, so each column is contiguous.
 */
class Grid {
public:
    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, cdouble fill = {});

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return values_.size(); }

    cdouble &operator()(std::size_t row, std::size_t col) { return values_[col * rows_ + row]; }
    const cdouble &operator()(std::size_t row, std::size_t col) const { return values_[col * rows_ + row]; }

    std::span<cdouble> column(std::size_t col) { return {values_.data() + col * rows_, rows_}; }
    std::span<const cdouble> column(std::size_t col) const { return {values_.data() + col * rows_, rows_}; }

    std::span<cdouble> values() { return values_; }
    std::span<const cdouble> values() const { return values_; }

    bool same_shape(const Grid &other) const { return rows_ == other.rows_ && cols_ == other.cols_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cdouble> values_;
};

// Rows: subcarrier m, columns: OFDM symbol n.
struct TFGrid : Grid {
    using Grid::Grid;
    TFGrid() = default;
    explicit TFGrid(Grid g) : Grid(std::move(g)) {}
};

// Rows: delay bin l, columns: Doppler bin k.
struct DDGrid : Grid {
    using Grid::Grid;
    DDGrid() = default;
    explicit DDGrid(Grid g) : Grid(std::move(g)) {}
};

using SymbolGrid = std::variant<TFGrid, DDGrid>;

// ---------------------------------------------------------------------------
// Pilots
// ---------------------------------------------------------------------------

enum class PilotScheme { None, Scattered, DedicatedSymbol };

std::string_view to_string(PilotScheme scheme);

// Resource-element flags in the kind's placement domain (TF for OFDM kinds,
// DD for OTFS kinds). Same shape as the symbol grid.
class PilotMask {
public:
    PilotMask() = default;
    PilotMask(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool operator()(std::size_t row, std::size_t col) const { return flags_[col * rows_ + row] != 0; }
    void set(std::size_t row, std::size_t col, bool pilot = true) { flags_[col * rows_ + row] = pilot ? 1 : 0; }

    std::size_t count() const;
    double overhead() const;
    bool column_is_pilot(std::size_t col) const;   // every RE of the column is a pilot
    bool column_has_pilot(std::size_t col) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> flags_;
};

/**
 * Pilot layout for a waveform:
 *  - None: empty mask.
 *  - Scattered: every `freq_spacing`-th row of every `time_spacing`-th column
 *    (overhead 1/(freq_spacing*time_spacing)). OFDM and OTFS only.
 *  - DedicatedSymbol: column 0 entirely pilots (overhead 1/N). OFDM and
 *    DFT-s-OFDM only; for DFT-s-OFDM the pilot symbol bypasses the DFT spread.
 * Throws ParameterError on a scheme/kind mismatch.
 */
PilotMask resource_map(const WaveformConfig &cfg, PilotScheme scheme, std::size_t freq_spacing = 4,
                       std::size_t time_spacing = 4);

struct Pilots {
    PilotMask mask;
    ComplexBuffer values;   // one per mask RE, column-major order
};

// Constant-envelope pilot values: a Zadoff-Chu sequence of the largest odd
// length <= count, cyclically extended to `count`.
ComplexBuffer pilot_sequence(std::size_t count);
Pilots make_pilots(const WaveformConfig &cfg, PilotScheme scheme);

std::size_t data_bit_capacity(const WaveformConfig &cfg, const PilotMask &mask);

// ---------------------------------------------------------------------------
// Chains
// ---------------------------------------------------------------------------

struct Frame {
    ComplexBuffer samples;    // N * (M + cp_len)
    WaveformConfig config;
    Bits payload_bits;
    PilotMask pilot_mask;
    Grid symbols;             // QAM and pilot symbols before any precoding
    TFGrid tf_grid;           // what the OFDM modulator saw
};

/**
 * Build a frame. Data symbols fill the non-pilot REs in column-major order.
 *  OFDM:       symbols on the TF grid, per-symbol IFFT + CP.
 *  DFT-s-OFDM: each data column DFT-spread across all M subcarriers first.
 *  OTFS:       symbols on the DD grid, ISFFT to TF, then as OFDM.
 *  DFT-s-OTFS: each delay row DFT-precoded along Doppler first, then as OTFS.
 * Throws SizeError if bits do not fill the data REs exactly.
 */
Frame modulate(std::span<const std::uint8_t> bits, const Pilots &pilots, const WaveformConfig &cfg);

// Inverse of modulate: returns the symbol grid (TFGrid for OFDM kinds,
// DDGrid for OTFS kinds) with precoding undone.
SymbolGrid demodulate(std::span<const cdouble> samples, const WaveformConfig &cfg,
                      const PilotMask &mask = {});

// Stages, exposed for receivers and tests.
//   symbols --precode--> placement --synthesize--> samples
//   samples --analyze--> placement --deprecode--> symbols
Grid precode(const Grid &symbols, const WaveformConfig &cfg, const PilotMask &mask);
Grid deprecode(const Grid &placement, const WaveformConfig &cfg, const PilotMask &mask);
ComplexBuffer synthesize(const Grid &placement, const WaveformConfig &cfg);
Grid analyze(std::span<const cdouble> samples, const WaveformConfig &cfg);

// Per-symbol IFFT + cyclic prefix, and its inverse.
ComplexBuffer ofdm_modulate(const TFGrid &grid, std::size_t cp_len);
TFGrid ofdm_demodulate(std::span<const cdouble> samples, std::size_t subcarriers, std::size_t symbols,
                       std::size_t cp_len);

// X[m,n] = (MN)^{-1/2} sum_k sum_l x[l,k] exp(j 2 pi (n k / N - m l / M))
TFGrid isfft(const DDGrid &dd);
DDGrid sfft(const TFGrid &tf);

// Drops the cyclic prefix of every symbol.
ComplexBuffer strip_cyclic_prefix(std::span<const cdouble> samples, std::size_t subcarriers,
                                  std::size_t cp_len);

} // namespace isac
