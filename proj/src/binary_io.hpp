#pragma once

// Little-endian primitives for the on-disk index formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "irbench/errors.hpp"

namespace irbench::detail {

class BinaryWriter {
  public:
    explicit BinaryWriter(const std::filesystem::path& path)
        : m_path(path), m_out(path, std::ios::binary | std::ios::trunc) {
        if (!m_out) {
            throw DataError(fmt::format("cannot write {}", path.string()));
        }
    }

    void u32(std::uint32_t v) { put_le(v, 4); }
    void u64(std::uint64_t v) { put_le(v, 8); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void bytes(std::string_view s) { m_out.write(s.data(), static_cast<std::streamsize>(s.size())); }
    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s);
    }

    void close() {
        m_out.close();
        if (!m_out) {
            throw DataError(fmt::format("failed writing {}", m_path.string()));
        }
    }

  private:
    void put_le(std::uint64_t v, int n) {
        char buf[8];
        for (int i = 0; i < n; ++i) {
            buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        }
        m_out.write(buf, n);
    }

    std::filesystem::path m_path;
    std::ofstream m_out;
};

/// Reads a whole file into memory and decodes with bounds checks.
class BinaryReader {
  public:
    explicit BinaryReader(const std::filesystem::path& path) : m_path(path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw DataError(fmt::format("cannot open {}", path.string()));
        }
        m_data.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

    std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
    std::uint64_t u64() { return get_le(8); }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string_view bytes(std::size_t n) {
        need(n);
        std::string_view out(m_data.data() + m_pos, n);
        m_pos += n;
        return out;
    }
    std::string str() { return std::string(bytes(u32())); }

    [[nodiscard]] bool at_end() const { return m_pos == m_data.size(); }
    [[nodiscard]] const std::filesystem::path& path() const { return m_path; }

  private:
    void need(std::size_t n) const {
        if (m_data.size() - m_pos < n) {
            throw DataError(fmt::format("{}: truncated file", m_path.string()));
        }
    }

    std::uint64_t get_le(int n) {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(m_data[m_pos + i])) << (8 * i);
        }
        m_pos += static_cast<std::size_t>(n);
        return v;
    }

    std::filesystem::path m_path;
    std::vector<char> m_data;
    std::size_t m_pos = 0;
};

}  // namespace irbench::detail
