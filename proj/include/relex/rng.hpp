#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace relex::rng {

// mt19937_64 raw output is pinned by the standard, so seeded draws are
// reproducible across compilers and platforms. std::shuffle and the
// distribution classes are not; everything below avoids them.
using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

// Unbiased draw in [0, n) via rejection sampling.
inline std::uint64_t bounded(Engine& eng, std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t x = eng();
    while (x >= limit) x = eng();
    return x % n;
}

template <typename T>
void shuffle(std::vector<T>& items, Engine& eng) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(bounded(eng, i + 1));
        std::swap(items[i], items[j]);
    }
}

// First k elements of a seeded Fisher-Yates pass; sampling without replacement.
template <typename T>
std::vector<T> sample(std::vector<T> items, std::size_t k, Engine& eng) {
    if (k > items.size()) k = items.size();
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(bounded(eng, items.size() - i));
        std::swap(items[i], items[j]);
    }
    items.resize(k);
    return items;
}

} // namespace relex::rng
