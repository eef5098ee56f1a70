#include "epmgp/rng.hpp"

#include <cmath>

#include "epmgp/special.hpp"

namespace epmgp {

uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

RngStream RngStream::child(std::initializer_list<uint64_t> indices) const {
    uint64_t k = key_;
    for (uint64_t idx : indices) k = mix64(k ^ mix64(idx + 0xD1B54A32D192ED03ull));
    return RngStream(k, 0);
}

double RngStream::uniform() {
    // 53 mantissa bits, offset half an ulp so 0 and 1 are never returned.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() { return inverse_normal_cdf(uniform()); }

double RngStream::exponential() { return -std::log(uniform()); }

Vector RngStream::normal_vector(std::size_t n) {
    Vector v(n);
    for (double& x : v) x = normal();
    return v;
}

Vector RngStream::unit_vector(std::size_t n) {
    for (;;) {
        Vector v = normal_vector(n);
        const double r = norm2(v);
        if (r > 1e-8) {
            for (double& x : v) x /= r;
            return v;
        }
    }
}

}  // namespace epmgp
