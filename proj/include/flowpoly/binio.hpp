#pragma once
// Little-endian binary serialisation helpers for the disk caches, including
// length-prefixed big integers and rationals.  Writers go through a
// temporary file and rename, so readers never observe partial files.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "types.hpp"

namespace flowpoly {

inline void put_u8(std::ostream& os, uint8_t v) { os.put(static_cast<char>(v)); }
inline void put_u32(std::ostream& os, uint32_t v) {
    char b[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff), char((v >> 24) & 0xff)};
    os.write(b, 4);
}
inline void put_u64(std::ostream& os, uint64_t v) {
    put_u32(os, static_cast<uint32_t>(v & 0xffffffffu));
    put_u32(os, static_cast<uint32_t>(v >> 32));
}

inline uint8_t get_u8(std::istream& is) {
    int c = is.get();
    if (c < 0) throw std::runtime_error("binio: unexpected end of file");
    return static_cast<uint8_t>(c);
}
inline uint32_t get_u32(std::istream& is) {
    uint32_t v = 0;
    for (unsigned i = 0; i < 4; ++i) v |= uint32_t(get_u8(is)) << (8 * i);
    return v;
}
inline uint64_t get_u64(std::istream& is) {
    uint64_t lo = get_u32(is);
    uint64_t hi = get_u32(is);
    return lo | (hi << 32);
}

inline void put_bigint(std::ostream& os, const Int& v) {
    std::vector<uint8_t> bytes;
    Int mag = v < 0 ? Int(-v) : v;
    export_bits(mag, std::back_inserter(bytes), 8);
    put_u8(os, v < 0 ? 1 : 0);
    put_u32(os, static_cast<uint32_t>(bytes.size()));
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline Int get_bigint(std::istream& is) {
    uint8_t neg = get_u8(is);
    uint32_t n = get_u32(is);
    std::vector<uint8_t> bytes(n);
    if (n) {
        is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(n));
        if (!is) throw std::runtime_error("binio: truncated big integer");
    }
    Int mag = 0;
    if (n) import_bits(mag, bytes.begin(), bytes.end(), 8);
    return neg ? Int(-mag) : mag;
}

inline void put_rat(std::ostream& os, const Rat& v) {
    put_bigint(os, num(v));
    put_bigint(os, den(v));
}

inline Rat get_rat(std::istream& is) {
    Int n = get_bigint(is);
    Int d = get_bigint(is);
    if (d == 0) throw std::runtime_error("binio: zero denominator");
    return Rat(n, d);
}

inline void put_string(std::ostream& os, const std::string& s) {
    put_u32(os, static_cast<uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string get_string(std::istream& is) {
    uint32_t n = get_u32(is);
    std::string s(n, '\0');
    if (n) {
        is.read(s.data(), static_cast<std::streamsize>(n));
        if (!is) throw std::runtime_error("binio: truncated string");
    }
    return s;
}

// Atomic-rename writer: fn(stream) writes the payload to <path>.tmp which is
// then renamed over <path>.
template <class Fn>
inline void write_file_atomic(const std::filesystem::path& path, Fn&& fn) {
    std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("binio: cannot open " + tmp.string());
        fn(os);
        if (!os) throw std::runtime_error("binio: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace flowpoly
