#pragma once
// Counter-based random numbers: every draw is a pure hash of
// (master_seed, stream_id, counter), so extending a lattice or a window never
// perturbs values that were already drawn.

#include <cstdint>

namespace blab {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

// Hash of three words; the basis of every uniform in the library.
std::uint64_t hash3(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept;

// Maps 64 random bits to the open interval (0,1).
double to_unit_open(std::uint64_t bits) noexcept;

// Stream id for a lattice site, salted so that independent fields built
// from one master seed do not share streams.
std::uint64_t site_stream(std::int32_t x1, std::int32_t x2, std::uint64_t salt) noexcept;

struct Rng {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
    std::uint64_t counter = 0;

    std::uint64_t next_u64() noexcept { return hash3(master_seed, stream_id, counter++); }
    double uniform() noexcept { return to_unit_open(next_u64()); }

    // Independent child stream; the child's counter starts at zero.
    Rng split(std::uint64_t child) const noexcept {
        return Rng{master_seed, mix64(stream_id ^ mix64(child + 0x5851f42d4c957f2dULL)), 0};
    }
};

// One-shot uniform at a fixed counter.
inline double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept {
    return to_unit_open(hash3(seed, stream, counter));
}

}  // namespace blab
