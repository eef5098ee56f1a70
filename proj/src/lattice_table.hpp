#pragma once

#include <cstdint>

namespace epmgp::detail {

struct LatticeEntry {
    uint64_t n;  // prime point count
    uint64_t a;  // Korobov multiplier; generating vector z_j = a^{j-1} mod n
};

// Generated by tools/lattice_search.cpp: Korobov multipliers chosen by the
// weighted P2 worst-case error criterion (product weights 1/j^2, up to 100
// dimensions) over 96 deterministic candidates per prime.
constexpr LatticeEntry kLatticeTable[] = {
    {1021ull, 793ull},       // P2 = 7.818805e-03
    {2039ull, 1843ull},      // P2 = 3.476395e-03
    {4093ull, 1440ull},      // P2 = 1.478620e-03
    {8191ull, 3761ull},      // P2 = 6.548336e-04
    {16381ull, 16009ull},    // P2 = 2.687294e-04
    {32749ull, 15920ull},    // P2 = 1.211866e-04
    {65521ull, 41471ull},    // P2 = 5.282918e-05
    {131071ull, 28573ull},   // P2 = 2.284319e-05
    {262139ull, 158033ull},  // P2 = 1.071982e-05
    {524287ull, 160490ull},  // P2 = 4.454117e-06
    {1048573ull, 377960ull}, // P2 = 1.662725e-06
};

constexpr int kLatticeTableSize = sizeof(kLatticeTable) / sizeof(kLatticeTable[0]);
constexpr int kLatticeMaxDims = 100;

}  // namespace epmgp::detail
