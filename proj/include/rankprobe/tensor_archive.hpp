// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rankprobe::io {

enum class Dtype : std::uint8_t { F32 = 0, F64 = 1 };

/// One named tensor. Values are held as doubles in memory; f32 entries are
/// narrowed on write and widened on read, so a read-back entry re-serializes
/// to identical bytes.
struct TensorEntry {
    std::string name;
    Dtype dtype = Dtype::F64;
    std::vector<std::uint32_t> dims;
    std::vector<double> values;

    std::size_t element_count() const {
        std::size_t n = 1;
        for (std::uint32_t d : dims) n *= d;
        return n;
    }
};

/// Ordered, uniquely-named tensor container.
///
/// Binary layout (all integers little-endian): magic "RPTK", u16 version=1,
/// u32 entry count, then per entry u16 name length, name bytes, u8 dtype
/// (0=f32, 1=f64), u8 ndim, u32 dims, raw row-major data; a trailing u32
/// CRC32 covers every preceding byte.
struct TensorArchive {
    std::vector<TensorEntry> entries;

    void add(TensorEntry entry);
    const TensorEntry* find(const std::string& name) const;
};

std::vector<std::uint8_t> serialize_archive(const TensorArchive& archive);
TensorArchive parse_archive(const std::vector<std::uint8_t>& bytes);

/// Atomic write (temp file + rename).
void write_archive(const TensorArchive& archive, const std::filesystem::path& path);

/// Throws ArchiveError on bad magic, truncation, duplicate names, or
/// checksum mismatch.
TensorArchive read_archive(const std::filesystem::path& path);

std::uint32_t crc32(const std::uint8_t* data, std::size_t len);

}  // namespace rankprobe::io
