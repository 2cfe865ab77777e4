#include "blab/rng.hpp"

namespace blab {

std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t hash3(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
    // Two rounds of mixing between absorptions keep nearby counters and
    // nearby streams decorrelated.
    std::uint64_t h = mix64(a ^ 0x243f6a8885a308d3ULL);
    h = mix64(h ^ mix64(b + 0x13198a2e03707344ULL));
    h = mix64(h ^ mix64(c + 0xa4093822299f31d0ULL));
    return h;
}

double to_unit_open(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t site_stream(std::int32_t x1, std::int32_t x2, std::uint64_t salt) noexcept {
    const auto a = static_cast<std::uint64_t>(static_cast<std::uint32_t>(x1));
    const auto b = static_cast<std::uint64_t>(static_cast<std::uint32_t>(x2));
    return mix64((a << 32 | b) ^ mix64(salt));
}

}  // namespace blab
