#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace relex {

// 64-bit FNV-1a. Used for content checksums, scripted-response keys and run
// fingerprints; chosen over std::hash because its output is fixed across
// platforms and library versions.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string to_hex(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

inline std::string fnv1a64_hex(std::string_view bytes) { return to_hex(fnv1a64(bytes)); }

} // namespace relex
