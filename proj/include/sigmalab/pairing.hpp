#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace sigmalab {

// Cantor pairing with <0,0> = 0: <x,y> = (x+y)(x+y+1)/2 + y.
constexpr std::uint64_t pair(std::uint64_t x, std::uint64_t y) {
    return (x + y) * (x + y + 1) / 2 + y;
}

inline std::pair<std::uint64_t, std::uint64_t> unpair(std::uint64_t z) {
    auto w = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
    // fix floating point drift
    while (w * (w + 1) / 2 > z) --w;
    while ((w + 1) * (w + 2) / 2 <= z) ++w;
    std::uint64_t y = z - w * (w + 1) / 2;
    return {w - y, y};
}

// <x,y,z> = <x,<y,z>>: every position below <s+1,0> has x <= s.
constexpr std::uint64_t triple(std::uint64_t x, std::uint64_t y, std::uint64_t z) {
    return pair(x, pair(y, z));
}

struct Triple {
    std::uint64_t a, b, c;
};

inline Triple untriple(std::uint64_t t) {
    auto [x, yz] = unpair(t);
    auto [y, z] = unpair(yz);
    return {x, y, z};
}

}  // namespace sigmalab
