// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#include "rankprobe/tensor_archive.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include "rankprobe/errors.hpp"

namespace rankprobe::io {

namespace {

constexpr char kMagic[4] = {'R', 'P', 'T', 'K'};
constexpr std::uint16_t kVersion = 1;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

struct Reader {
    const std::vector<std::uint8_t>& bytes;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > bytes.size()) throw ArchiveError("archive: truncated file");
    }
    std::uint8_t u8() {
        need(1);
        return bytes[pos++];
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
        pos += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
};

}  // namespace

std::uint32_t crc32(const std::uint8_t* data, std::size_t len) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1u) ? 0xedb88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t c = 0xffffffffu;
    for (std::size_t i = 0; i < len; ++i) c = table[(c ^ data[i]) & 0xffu] ^ (c >> 8);
    return c ^ 0xffffffffu;
}

void TensorArchive::add(TensorEntry entry) {
    if (entry.name.empty()) throw std::invalid_argument("archive: empty tensor name");
    if (find(entry.name) != nullptr) {
        throw std::invalid_argument("archive: duplicate tensor name " + entry.name);
    }
    if (entry.dims.empty()) throw std::invalid_argument("archive: tensor needs dimensions");
    for (std::uint32_t d : entry.dims) {
        if (d == 0) throw std::invalid_argument("archive: zero dimension in " + entry.name);
    }
    if (entry.values.size() != entry.element_count()) {
        throw std::invalid_argument("archive: data length mismatch in " + entry.name);
    }
    entries.push_back(std::move(entry));
}

const TensorEntry* TensorArchive::find(const std::string& name) const {
    for (const TensorEntry& e : entries) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

std::vector<std::uint8_t> serialize_archive(const TensorArchive& archive) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u16(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(archive.entries.size()));
    for (const TensorEntry& e : archive.entries) {
        put_u16(out, static_cast<std::uint16_t>(e.name.size()));
        out.insert(out.end(), e.name.begin(), e.name.end());
        out.push_back(static_cast<std::uint8_t>(e.dtype));
        out.push_back(static_cast<std::uint8_t>(e.dims.size()));
        for (std::uint32_t d : e.dims) put_u32(out, d);
        if (e.dtype == Dtype::F32) {
            for (double v : e.values) {
                const float f = static_cast<float>(v);
                put_u32(out, std::bit_cast<std::uint32_t>(f));
            }
        } else {
            for (double v : e.values) put_u64(out, std::bit_cast<std::uint64_t>(v));
        }
    }
    put_u32(out, crc32(out.data(), out.size()));
    return out;
}

TensorArchive parse_archive(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 14) throw ArchiveError("archive: file too short");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw ArchiveError("archive: bad magic");

    const std::size_t payload = bytes.size() - 4;
    std::uint32_t stored = 0;
    for (int i = 0; i < 4; ++i) stored |= static_cast<std::uint32_t>(bytes[payload + i]) << (8 * i);
    if (crc32(bytes.data(), payload) != stored) throw ArchiveError("archive: checksum mismatch");

    Reader r{bytes, 4};
    if (r.u16() != kVersion) throw ArchiveError("archive: unsupported version");
    const std::uint32_t count = r.u32();

    TensorArchive out;
    std::unordered_set<std::string> seen;
    for (std::uint32_t i = 0; i < count; ++i) {
        TensorEntry e;
        const std::uint16_t name_len = r.u16();
        r.need(name_len);
        e.name.assign(reinterpret_cast<const char*>(bytes.data() + r.pos), name_len);
        r.pos += name_len;
        if (!seen.insert(e.name).second) {
            throw ArchiveError("archive: duplicate tensor name " + e.name);
        }
        const std::uint8_t dtype = r.u8();
        if (dtype > 1) throw ArchiveError("archive: unknown dtype in " + e.name);
        e.dtype = static_cast<Dtype>(dtype);
        const std::uint8_t ndim = r.u8();
        if (ndim == 0) throw ArchiveError("archive: tensor without dimensions: " + e.name);
        e.dims.resize(ndim);
        for (std::uint8_t d = 0; d < ndim; ++d) {
            e.dims[d] = r.u32();
            if (e.dims[d] == 0) throw ArchiveError("archive: zero dimension in " + e.name);
        }
        const std::size_t n = e.element_count();
        e.values.resize(n);
        if (e.dtype == Dtype::F32) {
            for (std::size_t k = 0; k < n; ++k) {
                e.values[k] = static_cast<double>(std::bit_cast<float>(r.u32()));
            }
        } else {
            for (std::size_t k = 0; k < n; ++k) e.values[k] = std::bit_cast<double>(r.u64());
        }
        out.entries.push_back(std::move(e));
    }
    if (r.pos != payload) throw ArchiveError("archive: trailing bytes after last entry");
    return out;
}

void write_archive(const TensorArchive& archive, const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = serialize_archive(archive);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ArchiveError("archive: cannot open " + tmp.string() + " for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw ArchiveError("archive: short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

TensorArchive read_archive(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArchiveError("archive: cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return parse_archive(bytes);
}

}  // namespace rankprobe::io
