#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sgs {

/// SplitMix64 finaliser; bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based child seed: folds each counter into the master seed in turn.
/// derive_seed(s, {a, b}) depends only on (s, a, b), never on call order.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> counters) noexcept
{
    std::uint64_t h = splitmix64(master);
    for (auto c : counters) h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
    return h;
}

using Engine = std::mt19937_64;

} // namespace sgs
