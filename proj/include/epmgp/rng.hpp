#pragma once

#include <cstdint>
#include <initializer_list>

#include "epmgp/linalg.hpp"

namespace epmgp {

// Counter-based deterministic PRNG: the SplitMix64 output function
// (Steele, Lea & Flood 2014; Vigna's public-domain reference constants)
// applied to key + counter * golden-gamma. Streams are split by hashing
// child indices into the key, so (seed, case, shift) style sub-streams
// never overlap and every draw is reproducible across platforms.
// Identified in output metadata as "splitmix64-counter-v1".
inline constexpr const char* kPrngId = "splitmix64-counter-v1";

uint64_t mix64(uint64_t z);

class RngStream {
public:
    explicit RngStream(uint64_t seed) : key_(mix64(seed + 0x9E3779B97F4A7C15ull)) {}

    // Child stream for (this stream, index...) — order sensitive.
    RngStream child(std::initializer_list<uint64_t> indices) const;
    RngStream child(uint64_t a) const { return child({a}); }
    RngStream child(uint64_t a, uint64_t b) const { return child({a, b}); }
    RngStream child(uint64_t a, uint64_t b, uint64_t c) const { return child({a, b, c}); }

    uint64_t next_u64() { return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ull); }

    // Uniform on the open interval (0, 1).
    double uniform();
    // Standard normal by inverse-cdf (AS 241); one uniform per deviate.
    double normal();
    // Exponential with rate 1.
    double exponential();

    Vector normal_vector(std::size_t n);
    // Uniform direction on the unit sphere in R^n.
    Vector unit_vector(std::size_t n);

private:
    RngStream(uint64_t key, int) : key_(key) {}
    uint64_t key_ = 0;
    uint64_t counter_ = 0;
};

}  // namespace epmgp
