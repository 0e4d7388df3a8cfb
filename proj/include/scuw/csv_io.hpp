#pragma once

#include <cstddef>
#include <filesystem>
#include <span>

#include "scuw/modem.hpp"
#include "scuw/types.hpp"

namespace scuw {

/// "index,real,imag" rows with full double precision.
void write_complex_csv(const std::filesystem::path& path, std::span<const Complex> values);

/// Reads index,real,imag rows (an optional header line is skipped; blank
/// lines and '#' comments are ignored). Indices must run 0, 1, 2, ...
/// Throws std::runtime_error naming the file and line on malformed input.
ComplexVector read_complex_csv(const std::filesystem::path& path);

ChannelRealization read_channel_csv(const std::filesystem::path& path);
void write_channel_csv(const std::filesystem::path& path, const ChannelRealization& h);

/// Unique word from CSV; the last m_h entries form the head part.
UniqueWord read_unique_word_csv(const std::filesystem::path& path, std::size_t m_h);

/// Interleaved I/Q as little-endian IEEE-754 float64 pairs.
void write_iq_raw(const std::filesystem::path& path, std::span<const Complex> values);
ComplexVector read_iq_raw(const std::filesystem::path& path);

}  // namespace scuw
