#pragma once

#include "lcc/common.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace lcc::io {

// Little-endian primitive writers/readers shared by the binary formats.

inline void put_u32(std::ostream& os, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                       static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    os.write(b, 4);
}

inline void put_f64(std::ostream& os, double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    os.write(b, 8);
}

/// Cursor over an in-memory byte buffer; every read failure reports its offset.
class ByteReader {
public:
    explicit ByteReader(std::vector<unsigned char> bytes, std::string source)
        : bytes_(std::move(bytes)), source_(std::move(source)) {}

    std::uint64_t offset() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

    void expect_magic(const char (&magic)[5]) {
        need(4, "magic");
        if (std::memcmp(bytes_.data() + pos_, magic, 4) != 0) {
            throw ParseError(source_ + ": bad magic, expected \"" + std::string(magic, 4) + "\"", pos_);
        }
        pos_ += 4;
    }

    std::uint8_t u8(const char* what) {
        need(1, what);
        return bytes_[pos_++];
    }

    std::uint32_t u32_le(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint32_t u32_be(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_ + i];
        pos_ += 4;
        return v;
    }

    double f64_le(const char* what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return std::bit_cast<double>(v);
    }

    const unsigned char* take(std::size_t n, const char* what) {
        need(n, what);
        const unsigned char* p = bytes_.data() + pos_;
        pos_ += n;
        return p;
    }

    void expect_end() const {
        if (pos_ != bytes_.size()) throw ParseError(source_ + ": trailing bytes", pos_);
    }

private:
    void need(std::size_t n, const char* what) const {
        if (bytes_.size() - pos_ < n) {
            throw ParseError(source_ + ": truncated while reading " + what, pos_);
        }
    }

    std::vector<unsigned char> bytes_;
    std::string source_;
    std::uint64_t pos_ = 0;
};

std::vector<unsigned char> read_file(const std::string& path);

}  // namespace lcc::io
